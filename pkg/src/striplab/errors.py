"""Exception types shared across the library."""


class StripLabError(Exception):
    """Base class for all library errors."""


class ZeroColumn(StripLabError):
    def __init__(self, index):
        super().__init__(f"column {index} has zero norm")
        self.index = index


class EmptySupport(StripLabError):
    pass


class FullSupport(StripLabError):
    pass


class IndexInSupport(StripLabError):
    pass


class NonConvergence(StripLabError):
    def __init__(self, max_iters, msg=None):
        super().__init__(msg or f"power iteration did not converge in {max_iters} iterations")
        self.max_iters = max_iters


class NotPrime(StripLabError):
    def __init__(self, n):
        super().__init__(f"{n} is not prime")
        self.n = n


class InvalidRank(StripLabError):
    pass


class SizeOverBudget(StripLabError):
    pass


class DegreeTooSmall(StripLabError):
    pass


class RangeError(StripLabError):
    pass


class LengthMismatch(StripLabError):
    pass


class DuplicateCodeword(StripLabError):
    pass


class EmptySelection(StripLabError):
    pass


class CollisionWarning(UserWarning):
    """Sub-Fourier row multiset contains repeated residues."""


class BudgetExceeded(StripLabError):
    pass


class InvalidQuery(StripLabError):
    pass


class EpsOutOfRange(StripLabError):
    pass


class AlphaBetaOrder(StripLabError):
    pass


class RankDeficient(StripLabError):
    pass


class MaxItersExceeded(StripLabError):
    def __init__(self, msg, best_x=None, diagnostics=None):
        super().__init__(msg)
        self.best_x = best_x
        self.diagnostics = diagnostics or {}


class SupportMismatch(StripLabError):
    pass


class InvalidMagnitudeRule(StripLabError):
    pass


class BadMagic(StripLabError):
    pass


class TruncatedPayload(StripLabError):
    pass


class DimensionMismatch(StripLabError):
    pass
