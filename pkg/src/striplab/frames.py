"""Dense sensing-matrix representation and coherence/spectral statistics.

A :class:`SensingMatrix` is an immutable m x N dictionary with unit-norm
columns.  All statistics of interest derive from inner products between
columns; complex matrices use the conjugate transpose throughout (inner
products are conjugate-linear in the first argument).
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import EmptySupport, FullSupport, IndexInSupport, NonConvergence, ZeroColumn

NORM_TOL = 1e-10
DEFAULT_REL_TOL = 1e-10
DEFAULT_MAX_ITERS = 10_000

# full-Gram operations refuse above this many columns (dense N x N storage)
PROFILE_COLUMN_LIMIT = 8192


@dataclass(frozen=True)
class SensingMatrix:
    """Dense m x N dictionary with unit-norm columns.

    ``entries`` is stored read-only; ``family`` and ``family_params`` record
    how the matrix was built, ``seed`` the generator seed for randomized
    families (None for deterministic ones).
    """

    entries: np.ndarray
    family: str = "custom"
    family_params: dict = field(default_factory=dict)
    seed: int | None = None

    def __post_init__(self):
        a = np.asarray(self.entries)
        if a.ndim != 2:
            raise ValueError("entries must be a 2-d array")
        if np.iscomplexobj(a):
            a = a.astype(np.complex128, copy=True)
        else:
            a = a.astype(np.float64, copy=True)
        m, n = a.shape
        if not 1 <= m <= n:
            raise ValueError(f"need 1 <= m <= N, got shape {m}x{n}")
        if not np.all(np.isfinite(a)):
            raise ValueError("entries contain NaN or Inf")
        norms = np.linalg.norm(a, axis=0)
        worst = np.abs(norms - 1.0).max()
        if worst > NORM_TOL:
            raise ValueError(f"columns not unit-norm (max deviation {worst:.3e})")
        a.flags.writeable = False
        object.__setattr__(self, "entries", a)
        object.__setattr__(self, "family_params", dict(self.family_params))

    @property
    def m(self):
        return self.entries.shape[0]

    @property
    def N(self):
        return self.entries.shape[1]

    @property
    def scalar_kind(self):
        return "complex" if np.iscomplexobj(self.entries) else "real"

    def column(self, j):
        return self.entries[:, j]


@dataclass(frozen=True)
class CoherenceProfile:
    """Coherence statistics of a dictionary (all magnitudes)."""

    mu: float
    mu_bar_sq_per_column: np.ndarray
    mu_bar_sq: float
    spectral_norm: float
    coherence_invariant: bool
    tight_frame_defect: float


@dataclass(frozen=True)
class SubsetEvaluation:
    """A support set together with its restricted-Gram deviation and SINC statistic."""

    support: tuple
    delta: float
    sinc_stat: float


def _check_support(phi, support):
    idx = np.asarray(sorted(int(i) for i in support), dtype=np.intp)
    if idx.size == 0:
        raise EmptySupport("support set is empty")
    if idx.size != np.unique(idx).size:
        raise ValueError("support contains duplicate indices")
    if idx[0] < 0 or idx[-1] >= phi.N:
        raise ValueError("support index out of range")
    return idx


def hollow_gram(phi):
    """Gram matrix Phi^* Phi with the diagonal zeroed.

    Entry (i, j) is <phi_i, phi_j>, conjugate-linear in the first argument.
    """
    g = phi.entries.conj().T @ phi.entries
    np.fill_diagonal(g, 0.0)
    return g


def spectral_norm(a, rel_tol=DEFAULT_REL_TOL, max_iters=DEFAULT_MAX_ITERS):
    """Largest singular value of a dense matrix by power iteration.

    Iterates on the smaller of A^*A / AA^* with a deterministic start
    vector (normalized all-ones, first coordinate perturbed by 1e-6) and
    stops when successive Rayleigh-quotient estimates of sigma_max agree
    to ``rel_tol`` relative to max(sigma, 1).

    Raises
    ------
    NonConvergence
        if the tolerance is not met within ``max_iters`` iterations.
    """
    if not 0 < rel_tol <= 1e-3:
        raise ValueError("rel_tol must lie in (0, 1e-3]")
    if max_iters < 10:
        raise ValueError("max_iters must be at least 10")
    a = np.asarray(a)
    if a.ndim == 1:
        a = a[None, :]
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix contains NaN or Inf")
    m, n = a.shape
    b = a @ a.conj().T if m <= n else a.conj().T @ a
    dim = b.shape[0]
    v = np.ones(dim, dtype=b.dtype)
    v[0] += 1e-6
    v /= np.linalg.norm(v)
    sigma_prev = None
    for _ in range(max_iters):
        w = b @ v
        rayleigh = float(np.real(np.vdot(v, w)))
        sigma = np.sqrt(max(rayleigh, 0.0))
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        v = w / nw
        if sigma_prev is not None and abs(sigma - sigma_prev) <= rel_tol * max(sigma, 1.0):
            return sigma
        sigma_prev = sigma
    raise NonConvergence(max_iters)


def coherence_profile(phi, inv_tol=1e-9):
    """Full coherence profile of a dictionary.

    Computes the mutual coherence mu = max_{i != j} |<phi_i, phi_j>|, the
    per-column mean square coherence, the spectral norm, the tight-frame
    defect ||Phi Phi^* - (N/m) Id||_2 and a coherence-invariance flag
    (sorted per-column coherence multisets all within ``inv_tol``
    elementwise of column 0's multiset).

    Builds the dense N x N Gram; refuses for N > PROFILE_COLUMN_LIMIT.
    """
    if inv_tol <= 0:
        raise ValueError("inv_tol must be positive")
    n = phi.N
    if n > PROFILE_COLUMN_LIMIT:
        raise ValueError(f"coherence_profile needs the dense Gram; N={n} exceeds "
                         f"{PROFILE_COLUMN_LIMIT} columns")
    g = phi.entries.conj().T @ phi.entries
    diag_sq = np.real(np.diag(g)) ** 2
    mags = np.abs(g)
    per_col = (mags**2).sum(axis=0) - diag_sq
    if n > 1:
        per_col /= n - 1
    np.fill_diagonal(mags, -1.0)  # exclude the diagonal from max and sort
    mu = float(mags.max()) if n > 1 else 0.0
    sorted_off = np.sort(mags, axis=0)[1:, :]  # drop the -1 sentinel row
    invariant = bool(np.abs(sorted_off - sorted_off[:, :1]).max() <= inv_tol) if n > 1 else True
    snorm = spectral_norm(phi.entries)
    defect_mat = phi.entries @ phi.entries.conj().T - (n / phi.m) * np.eye(phi.m)
    defect = spectral_norm(defect_mat)
    return CoherenceProfile(
        mu=mu,
        mu_bar_sq_per_column=per_col,
        mu_bar_sq=float(per_col.max()),
        spectral_norm=snorm,
        coherence_invariant=invariant,
        tight_frame_defect=defect,
    )


def restricted_gram_norm(phi, support):
    """delta_I = ||Phi_I^* Phi_I - Id||_2 for a support set I."""
    idx = _check_support(phi, support)
    sub = phi.entries[:, idx]
    h = sub.conj().T @ sub
    h[np.diag_indices_from(h)] -= 1.0
    return spectral_norm(h)


def sinc_statistic(phi, support):
    """max over i not in I of ||Phi_I^* phi_i||_2^2."""
    idx = _check_support(phi, support)
    if idx.size >= phi.N:
        raise FullSupport("support covers every column")
    cross = phi.entries[:, idx].conj().T @ phi.entries
    sums = (np.abs(cross) ** 2).sum(axis=0)
    sums[idx] = -np.inf
    return float(sums.max())


def column_sum_statistic(phi, support, j):
    """sum over l in I of |<phi_l, phi_j>|^2, for one outside column j."""
    idx = _check_support(phi, support)
    j = int(j)
    if j in set(idx.tolist()):
        raise IndexInSupport(f"column {j} lies in the support")
    if not 0 <= j < phi.N:
        raise ValueError("j out of range")
    cross = phi.entries[:, idx].conj().T @ phi.entries[:, j]
    return float((np.abs(cross) ** 2).sum())


def evaluate_subset(phi, support):
    """Bundle delta_I and the SINC statistic for one support."""
    idx = _check_support(phi, support)
    return SubsetEvaluation(
        support=tuple(int(i) for i in idx),
        delta=restricted_gram_norm(phi, idx),
        sinc_stat=sinc_statistic(phi, idx),
    )


def normalize_columns(raw, family="custom", family_params=None, seed=None):
    """Scale every column of a raw matrix to unit norm.

    Raises ZeroColumn(index) on the first zero column encountered.
    """
    a = np.asarray(raw)
    a = a.astype(np.complex128 if np.iscomplexobj(a) else np.float64)
    norms = np.linalg.norm(a, axis=0)
    zero = np.flatnonzero(norms == 0.0)
    if zero.size:
        raise ZeroColumn(int(zero[0]))
    return SensingMatrix(a / norms, family=family,
                         family_params=family_params or {}, seed=seed)
