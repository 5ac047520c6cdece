"""Executable checkers for the sufficient-condition theorems.

All logarithms are natural.  The main checker searches constants
(a, b, c) in (0,1)^3 for a witness to the three StRIP inequalities:

    (1)  k mu^4   <= min( (1-a)^2 b^2 / (32 ln(2k) ln(e/eps)), c^2 ) / ln^2(1/eps)
    (2)  k mubar2 <= a b / ln(1/eps)
    (3)  sqrt(a) + sqrt(2ab) + sqrt(c) + (2k/N) ||Phi||^2  <=  e^(-1/4) delta / (6 sqrt(2))

subject to eps < min(1/k, e^(1 - 1/ln 2)).  The companion checkers cover
the SINC sufficient condition, its corollary tail bound, the appendix
recovery premise, and the heuristic big-O regime comparisons.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import AlphaBetaOrder, EpsOutOfRange

EPS_CEILING = math.exp(1.0 - 1.0 / math.log(2.0))   # ~0.642223

_GRID_LO = 1e-6
_GRID_HI = 1.0 - 1e-6


@dataclass(frozen=True)
class ConditionInputs:
    """Numeric inputs to the checkers (coherences, dimensions, targets)."""

    mu: float
    mu_bar_sq: float
    spectral_norm_sq: float
    m: int
    N: int
    k: int
    delta: float
    eps: float

    def __post_init__(self):
        vals = (self.mu, self.mu_bar_sq, self.spectral_norm_sq, self.delta, self.eps)
        if not all(math.isfinite(v) and v >= 0 for v in vals):
            raise ValueError("inputs must be finite and nonnegative")
        if not 0 < self.delta < 1:
            raise ValueError("delta must lie in (0, 1)")
        if not 0 < self.eps < 1:
            raise ValueError("eps must lie in (0, 1)")
        if not 1 <= self.k < self.N:
            raise ValueError("need 1 <= k < N")


@dataclass(frozen=True)
class TheoremWitness:
    feasible: bool
    a: float | None
    b: float | None
    c: float | None
    slack: float | None
    binding_constraint: str


_CONSTRAINTS = ("coherence-fourth-power", "mean-square-coherence", "norm-budget")


def _margins(inp, a, b, c):
    """Signed margins (rhs - lhs) of the three inequalities; >= 0 means satisfied."""
    k, eps = inp.k, inp.eps
    l1e = math.log(1.0 / eps)
    m1 = np.minimum((1.0 - a) ** 2 * b**2 / (32.0 * math.log(2.0 * k) * math.log(math.e / eps)),
                    c**2) / l1e**2 - k * inp.mu**4
    m2 = a * b / l1e - k * inp.mu_bar_sq
    budget = math.exp(-0.25) * inp.delta / (6.0 * math.sqrt(2.0))
    m3 = budget - (np.sqrt(a) + np.sqrt(2.0 * a * b) + np.sqrt(c)
                   + 2.0 * inp.k / inp.N * inp.spectral_norm_sq)
    return m1, m2, m3


def _first_feasible(inp, agrid, bgrid, cgrid):
    a = agrid[:, None, None]
    b = bgrid[None, :, None]
    c = cgrid[None, None, :]
    m1, m2, m3 = _margins(inp, a, b, c)
    mask = (m1 >= 0) & (m2 >= 0) & (m3 >= 0)
    hits = np.argwhere(mask)
    if hits.size == 0:
        return None, (m1, m2, m3)
    i, j, l = hits[0]  # argwhere is lexicographic, deterministic reduction
    return (float(agrid[i]), float(bgrid[j]), float(cgrid[l])), (m1, m2, m3)


def check_theorem1(inputs, grid_points=64):
    """Search (a, b, c) for a witness that the matrix parameters are
    sufficient for (k, delta, eps)-StRIP.

    Logarithmic grid with one refinement pass around the first feasible
    point; the returned witness re-satisfies all three inequalities by
    direct evaluation (no interpolation), with ``slack`` the margin of the
    binding constraint.  Raises EpsOutOfRange when eps violates the
    theorem's precondition.
    """
    eps_cap = min(1.0 / inputs.k, EPS_CEILING)
    if not inputs.eps < eps_cap:
        raise EpsOutOfRange(f"need eps < min(1/k, e^(1-1/ln 2)) = {eps_cap:.6g}, "
                            f"got {inputs.eps}")
    grid = np.geomspace(_GRID_LO, _GRID_HI, grid_points)
    point, margins = _first_feasible(inputs, grid, grid, grid)
    if point is None:
        worst = [float(np.max(mm)) for mm in margins]
        everywhere = [name for name, w in zip(_CONSTRAINTS, worst) if w < 0]
        if everywhere:
            label = ",".join(everywhere)
        else:
            label = _CONSTRAINTS[int(np.argmin(worst))]
        return TheoremWitness(False, None, None, None, None, label)
    # refine once inside the coarse cell around the hit
    refined = []
    for x in point:
        pos = int(np.searchsorted(grid, x))
        lo = grid[max(pos - 1, 0)]
        hi = grid[min(pos + 1, grid_points - 1)]
        refined.append(np.geomspace(lo, hi, grid_points))
    fine_point, _ = _first_feasible(inputs, *refined)
    a, b, c = fine_point if fine_point is not None else point
    m1, m2, m3 = _margins(inputs, np.float64(a), np.float64(b), np.float64(c))
    margins_at = {name: float(v) for name, v in zip(_CONSTRAINTS, (m1, m2, m3))}
    binding = min(margins_at, key=margins_at.get)
    return TheoremWitness(True, a, b, c, margins_at[binding], binding)


def check_theorem2(inputs, beta, a):
    """SINC sufficient condition at explicit constants (beta, a).

    holds iff mu^4 <= (1-a)^2 beta^2 / (32 k ln^3(2N/eps)) and
    mubar2 <= a beta / (k ln(2N/eps)); the certified level is
    alpha = beta / ln(2N/eps).
    """
    if beta <= 0 or not 0 < a < 1:
        raise ValueError("need beta > 0 and a in (0, 1)")
    big_l = math.log(2.0 * inputs.N / inputs.eps)
    alpha = beta / big_l
    ok1 = inputs.mu**4 <= (1.0 - a) ** 2 * beta**2 / (32.0 * inputs.k * big_l**3)
    ok2 = inputs.mu_bar_sq <= a * beta / (inputs.k * big_l)
    return {"holds": bool(ok1 and ok2), "alpha": alpha, "beta": beta, "a": a,
            "coherence_ok": bool(ok1), "mean_square_ok": bool(ok2)}


def theorem2_scan(inputs, alpha, grid_points=512):
    """Optimizing variant: fix the target alpha (beta by inversion), scan a.

    Returns the first grid value of a for which both inequalities hold, or
    holds=False when the scan is infeasible.
    """
    big_l = math.log(2.0 * inputs.N / inputs.eps)
    beta = alpha * big_l
    for a in np.geomspace(_GRID_LO, _GRID_HI, grid_points):
        res = check_theorem2(inputs, beta, float(a))
        if res["holds"]:
            return res
    return {"holds": False, "alpha": alpha, "beta": beta, "a": None,
            "coherence_ok": False, "mean_square_ok": False}


def check_corollary1(mu, mu_bar_sq, k, alpha, beta, a):
    """Tail bound over uniform (I, j) pairs: P(sum mu^2 >= alpha) <= 2 e^(-beta/alpha).

    holds iff mu^4 <= (1-a)^2 alpha^3 / (32 beta k) and k mubar2 <= a alpha,
    subject to alpha < beta log2(e).
    """
    if not 0 < a < 1:
        raise ValueError("a must lie in (0, 1)")
    if beta <= 0 or alpha <= 0:
        raise ValueError("alpha and beta must be positive")
    if not alpha < beta / math.log(2.0):
        raise AlphaBetaOrder(f"need alpha < beta*log2(e) = {beta / math.log(2.0):.6g}")
    ok1 = mu**4 <= (1.0 - a) ** 2 * alpha**3 / (32.0 * beta * k)
    ok2 = k * mu_bar_sq <= a * alpha
    return {"holds": bool(ok1 and ok2), "bound": 2.0 * math.exp(-beta / alpha),
            "coherence_ok": bool(ok1), "mean_square_ok": bool(ok2)}


def required_sinc_level(delta, N, eps):
    """SINC level (1-delta)^2 / (8 ln(2N/eps)) demanded by the recovery theorem."""
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    return (1.0 - delta) ** 2 / (8.0 * math.log(2.0 * N / eps))


def regime_report(inputs, constants=None):
    """Heuristic big-O regime classifiers with explicit user constants.

    re1: mu <= c1/ln N           and ||Phi||^2 <= c2 N/(k ln N)
    re2: mu <= c3 (k ln k)^(-1/2) and ||Phi||^2 <= c4 N/k
    new: mu <= c5 (k ln k)^(-1/4) and mubar2 <= c6/k and ||Phi||^2 <= c4 N/k

    The paper states these regions with unspecified constants; every clause
    is reported with its threshold so the constants stay visible.
    """
    c = {f"c{i}": 1.0 for i in range(1, 7)}
    c.update(constants or {})
    mu, nsq = inputs.mu, inputs.spectral_norm_sq
    k, n = inputs.k, inputs.N
    ln_n = math.log(n)
    klnk = k * math.log(k)
    t_re1_mu = c["c1"] / ln_n
    t_re1_norm = c["c2"] * n / (k * ln_n)
    t_re2_mu = c["c3"] * klnk**-0.5 if klnk > 0 else math.inf
    t_norm = c["c4"] * n / k
    t_new_mu = c["c5"] * klnk**-0.25 if klnk > 0 else math.inf
    t_new_msq = c["c6"] / k
    clauses = {
        "re1": {"mu": mu <= t_re1_mu, "norm": nsq <= t_re1_norm},
        "re2": {"mu": mu <= t_re2_mu, "norm": nsq <= t_norm},
        "new": {"mu": mu <= t_new_mu, "mean_square": inputs.mu_bar_sq <= t_new_msq,
                "norm": nsq <= t_norm},
    }
    return {
        "heuristic": True,
        "constants": c,
        "re1": all(clauses["re1"].values()),
        "re2": all(clauses["re2"].values()),
        "new": all(clauses["new"].values()),
        "clauses": {k2: {kk: bool(vv) for kk, vv in v.items()} for k2, v in clauses.items()},
        "thresholds": {"re1_mu": t_re1_mu, "re1_norm": t_re1_norm,
                       "re2_mu": t_re2_mu, "norm": t_norm,
                       "new_mu": t_new_mu, "new_mean_square": t_new_msq},
    }
