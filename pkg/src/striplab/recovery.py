"""Generic-model signals, Basis Pursuit, and recovery error metrics.

Basis Pursuit solves min ||x||_1 s.t. Phi x = y by alternating-direction
splitting between the affine constraint set (exact projection through a
one-time Cholesky factorization of the m x m row Gram) and the l1
proximal map (soft thresholding; modulus shrinkage for complex scalars).
The right-hand side is normalized internally, which makes the solver
exactly equivariant under scaling of y.
"""

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (
    InvalidMagnitudeRule,
    MaxItersExceeded,
    RankDeficient,
    SupportMismatch,
)

EXACT_RECOVERY_TOL = 1e-6


@dataclass(frozen=True)
class SolverConfig:
    feas_tol: float = 1e-9          # relative to ||y||
    stall_tol: float = 1e-10        # objective change over stall_window iterations
    stall_window: int = 50
    max_iters: int = 50_000
    rho: float = 1.0                # initial penalty; self-rescaling keeps it balanced
    adapt_rho: bool = True

    def __post_init__(self):
        if min(self.feas_tol, self.stall_tol, self.rho) <= 0:
            raise ValueError("tolerances and penalty must be positive")
        if self.max_iters < 1 or self.stall_window < 1:
            raise ValueError("max_iters and stall_window must be positive")


@dataclass(frozen=True)
class GenericSignal:
    """Signal from the generic random model: uniform support, +-1 signs."""

    x: np.ndarray
    support: tuple
    signs: np.ndarray
    magnitudes: np.ndarray
    tail: np.ndarray | None = None

    def __post_init__(self):
        k = len(self.support)
        assert len(self.signs) == k and len(self.magnitudes) == k
        assert np.all(np.abs(self.signs) == 1)
        assert np.all(self.magnitudes > 0)
        if self.tail is not None:
            off = np.delete(np.abs(self.tail), list(self.support))
            assert np.all(self.tail[list(self.support)] == 0)
            if off.size:
                assert off.max() < self.magnitudes.min()

    @property
    def k(self):
        return len(self.support)


def assemble_signal(N, support, signs, magnitudes, tail=None):
    """Build the length-N signal from its parts."""
    support = tuple(sorted(int(i) for i in support))
    signs = np.asarray(signs, dtype=np.float64)
    magnitudes = np.asarray(magnitudes, dtype=np.float64)
    x = np.zeros(N) if tail is None else np.asarray(tail, dtype=np.float64).copy()
    x[list(support)] = signs * magnitudes
    return GenericSignal(x=x, support=support, signs=signs,
                         magnitudes=magnitudes, tail=tail)


def _parse_magnitude_rule(rule):
    if rule == "unit":
        return ("unit",)
    if isinstance(rule, (tuple, list)) and len(rule) == 3 and rule[0] == "uniform":
        lo, hi = float(rule[1]), float(rule[2])
    elif isinstance(rule, str) and rule.startswith("uniform:"):
        try:
            lo_s, hi_s = rule[len("uniform:"):].split(",")
            lo, hi = float(lo_s), float(hi_s)
        except ValueError as exc:
            raise InvalidMagnitudeRule(f"cannot parse {rule!r}") from exc
    else:
        raise InvalidMagnitudeRule(f"unknown magnitude rule {rule!r}")
    if not 0 < lo <= hi:
        raise InvalidMagnitudeRule(f"need 0 < lo <= hi, got lo={lo}, hi={hi}")
    return ("uniform", lo, hi)


def _philox(seed):
    key = np.asarray(seed if isinstance(seed, (tuple, list)) else [seed], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def sample_generic_signal(N, k, magnitude_rule="unit", seed=0):
    """Draw a signal from the generic random model.

    Support uniform over k-subsets (partial Fisher-Yates), signs i.i.d.
    uniform +-1, magnitudes per rule ("unit" or "uniform:LO,HI").  ``seed``
    may be an int or a (master, trial) pair; equal seeds reproduce the
    signal bit-for-bit.
    """
    if not 1 <= k <= N:
        raise ValueError("need 1 <= k <= N")
    rule = _parse_magnitude_rule(magnitude_rule)
    rng = _philox(seed)
    idx = np.arange(N)
    for i in range(k):
        j = int(rng.integers(i, N))
        idx[i], idx[j] = idx[j], idx[i]
    support = idx[:k]
    signs = rng.integers(0, 2, size=k) * 2.0 - 1.0
    mags = np.ones(k) if rule[0] == "unit" else rng.uniform(rule[1], rule[2], size=k)
    order = np.argsort(support)
    return assemble_signal(N, support[order], signs[order], mags[order])


def basis_pursuit(phi, y, cfg=None):
    """Solve min ||x||_1 subject to Phi x = y (equality-constrained BP).

    ADMM splitting: the x-update projects exactly onto the affine set
    {x : Phi x = y} using a Cholesky factorization of Phi Phi^*, the
    z-update soft-thresholds, and the scaled dual u accumulates the gap.
    The penalty parameter is rebalanced from the primal/dual residual
    ratio.  Returns the feasible iterate once primal and dual residuals
    pass the tolerance, or once the l1 objective has stalled.

    Raises
    ------
    RankDeficient
        if the row Gram Phi Phi^* has no Cholesky factorization.
    MaxItersExceeded
        with the best iterate attached, if the budget runs out.
    """
    cfg = cfg or SolverConfig()
    a = phi.entries
    m, n = a.shape
    y = np.asarray(y)
    if y.shape != (m,):
        raise ValueError(f"y must have length {m}")
    if not np.all(np.isfinite(y)):
        raise ValueError("y contains NaN or Inf")
    dtype = np.result_type(a.dtype, y.dtype, np.float64)
    try:
        chol = scipy.linalg.cho_factor(a @ a.conj().T)
    except scipy.linalg.LinAlgError as exc:
        raise RankDeficient("row Gram is not positive definite to working precision") from exc
    ynorm = float(np.linalg.norm(y))
    if ynorm == 0.0:
        return np.zeros(n, dtype=dtype)
    yn = (y / ynorm).astype(dtype)
    corr = a.conj().T @ scipy.linalg.cho_solve(chol, yn)

    def project(v):
        return v - a.conj().T @ scipy.linalg.cho_solve(chol, a @ v) + corr

    rho = cfg.rho
    x = np.zeros(n, dtype=dtype)
    z = np.zeros(n, dtype=dtype)
    u = np.zeros(n, dtype=dtype)
    sqrt_n = math.sqrt(n)
    obj_hist = []
    for it in range(cfg.max_iters):
        x = project(z - u)
        v = x + u
        mag = np.abs(v)
        with np.errstate(divide="ignore", invalid="ignore"):
            shrink = np.where(mag > 1.0 / rho, 1.0 - 1.0 / (rho * mag), 0.0)
        z_prev = z
        z = v * shrink
        u = u + x - z
        r_norm = float(np.linalg.norm(x - z))
        s_norm = float(rho * np.linalg.norm(z - z_prev))
        eps_pri = sqrt_n * cfg.feas_tol + cfg.feas_tol * max(np.linalg.norm(x), np.linalg.norm(z))
        eps_dual = sqrt_n * cfg.feas_tol + cfg.feas_tol * rho * float(np.linalg.norm(u))
        obj = float(np.abs(z).sum())
        obj_hist.append(obj)
        if r_norm <= eps_pri and s_norm <= eps_dual:
            return x * ynorm
        if len(obj_hist) > cfg.stall_window:
            drift = abs(obj - obj_hist[-cfg.stall_window - 1])
            if drift <= cfg.stall_tol * max(1.0, obj) and r_norm <= 1e-8 * (1.0 + float(np.linalg.norm(x))):
                return x * ynorm
        if cfg.adapt_rho and (it + 1) % 10 == 0:
            if r_norm > 10.0 * s_norm:
                rho *= 2.0
                u /= 2.0
            elif s_norm > 10.0 * r_norm:
                rho /= 2.0
                u *= 2.0
    raise MaxItersExceeded(
        f"basis pursuit did not converge in {cfg.max_iters} iterations",
        best_x=x * ynorm,
        diagnostics={"primal_residual": r_norm, "dual_residual": s_norm,
                     "objective": obj * ynorm, "rho": rho})


@dataclass(frozen=True)
class RecoveryTrial:
    """One signal/estimate pair with the appendix error metrics."""

    x: np.ndarray
    estimate: np.ndarray
    support: tuple
    eps: float
    delta: float | None
    sigma_k: float
    err_sup: float
    err_off: float
    sup_bound_rhs: float
    off_bound_rhs: float
    bounds_hold_sup: bool
    bounds_hold_off: bool
    residual: float | None = None
    l1_objective: float | None = None


def recovery_metrics(x, x_hat, support, eps, delta=None, solver_tol=EXACT_RECOVERY_TOL,
                     phi=None, y=None):
    """Evaluate the two recovery error bounds for one trial.

    sigma_k is the l1 mass of x outside the support (= the best k-term
    approximation error); the bounds are

        ||(x - x_hat)_I||_2   <=  sigma_k / (2 sqrt(2 ln(2N/eps)))
        ||(x - x_hat)_Ic||_1  <=  4 sigma_k

    each granted an additive solver_tol * max(1, ||x||_2) slack so that an
    exactly k-sparse signal recovered to solver precision passes.  The
    support must consist of k largest-magnitude coordinates of x.
    """
    x = np.asarray(x, dtype=np.float64)
    x_hat = np.asarray(x_hat)
    n = x.size
    support = tuple(sorted(int(i) for i in support))
    k = len(support)
    if not 1 <= k <= n or len(set(support)) != k:
        raise SupportMismatch("support must be a nonempty duplicate-free index set")
    mask = np.zeros(n, dtype=bool)
    mask[list(support)] = True
    mag = np.abs(x)
    on_min = mag[mask].min()
    off_max = mag[~mask].max() if k < n else 0.0
    if on_min < off_max:
        raise SupportMismatch("support is not a set of k largest-magnitude coordinates")
    sigma_k = float(mag[~mask].sum())
    h = x - x_hat
    err_sup = float(np.linalg.norm(h[mask]))
    err_off = float(np.abs(h[~mask]).sum())
    sup_rhs = sigma_k / (2.0 * math.sqrt(2.0 * math.log(2.0 * n / eps)))
    off_rhs = 4.0 * sigma_k
    slack = solver_tol * max(1.0, float(np.linalg.norm(x)))
    residual = None
    l1_objective = float(np.abs(x_hat).sum())
    if phi is not None and y is not None:
        residual = float(np.linalg.norm(phi.entries @ x_hat - y))
    return RecoveryTrial(
        x=x, estimate=x_hat, support=support, eps=eps, delta=delta,
        sigma_k=sigma_k, err_sup=err_sup, err_off=err_off,
        sup_bound_rhs=sup_rhs, off_bound_rhs=off_rhs,
        bounds_hold_sup=bool(err_sup <= sup_rhs + slack),
        bounds_hold_off=bool(err_off <= off_rhs + slack),
        residual=residual, l1_objective=l1_objective)


def recovery_experiment(phi, k, trials, eps, delta, magnitude_rule="unit",
                        seed=0, cfg=None):
    """Run generic-model Basis Pursuit trials and summarize against 3 eps.

    Each trial draws a signal with a per-trial generator keyed by
    (seed, trial), solves BP on y = Phi x, checks the solver contracts
    (feasibility residual; l1 objective no larger than the truth's), and
    evaluates the error bounds.  Reported rates come with Clopper-Pearson
    intervals and the theorem's 3*eps reference level.
    """
    from .verify import clopper_pearson

    cfg = cfg or SolverConfig()
    n = phi.N
    failures = 0
    exact = 0
    max_residual = 0.0
    trial_records = []
    for t in range(trials):
        sig = sample_generic_signal(n, k, magnitude_rule, seed=(seed, t))
        y = phi.entries @ sig.x
        x_hat = basis_pursuit(phi, y, cfg)
        res = float(np.linalg.norm(phi.entries @ x_hat - y))
        if res > cfg.feas_tol * (1.0 + float(np.linalg.norm(y))):
            raise RuntimeError(f"solver feasibility contract violated: residual {res:.3e}")
        if np.abs(x_hat).sum() > np.abs(sig.x).sum() + 1e-6:
            raise RuntimeError("solver optimality contract violated: "
                               "l1 objective exceeds the feasible truth")
        trial = recovery_metrics(sig.x, x_hat, sig.support, eps, delta, phi=phi, y=y)
        max_residual = max(max_residual, res)
        if not (trial.bounds_hold_sup and trial.bounds_hold_off):
            failures += 1
        err = float(np.linalg.norm(x_hat - sig.x))
        if err <= EXACT_RECOVERY_TOL * max(1.0, float(np.linalg.norm(sig.x))):
            exact += 1
        trial_records.append((trial.err_sup, trial.err_off))
    fail_lo, fail_hi = clopper_pearson(failures, trials)
    ex_lo, ex_hi = clopper_pearson(exact, trials)
    return {
        "trials": trials,
        "k": k,
        "eps": eps,
        "delta": delta,
        "failures": failures,
        "failure_rate": failures / trials,
        "failure_ci": (fail_lo, fail_hi),
        "exact_recoveries": exact,
        "exact_recovery_rate": exact / trials,
        "exact_recovery_ci": (ex_lo, ex_hi),
        "three_eps": 3.0 * eps,
        "max_residual": max_residual,
        "seed": seed,
    }
