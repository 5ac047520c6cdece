"""Exhaustive and Monte Carlo tail estimation for StRIP / SINC statistics.

Three statistics over random supports of size k:

* ``strip-delta``  -- delta_I = ||Phi_I^* Phi_I - Id||_2, event delta_I >= threshold
* ``sinc-max``     -- max_{i not in I} ||Phi_I^* phi_i||^2, event stat > threshold
* ``column-sum``   -- sum_{l in I} |<phi_l, phi_j>|^2 over uniform (I, j) pairs,
                      event stat >= threshold

Exhaustive mode enumerates supports in lexicographic order and returns the
exact count.  Monte Carlo mode draws supports by a partial Fisher-Yates
shuffle fed from a counter-based Philox stream keyed by the master seed, so
trial t's support is a pure function of (seed, t) and counts are identical
for any chunking or worker schedule.  Confidence intervals are exact
binomial (Clopper-Pearson); a Hoeffding half-width is reported alongside
for cross-checking.
"""

import math
from dataclasses import dataclass
from itertools import combinations, islice

import numpy as np
from scipy.stats import beta as _beta

from .errors import BudgetExceeded, InvalidQuery

STATISTICS = ("strip-delta", "sinc-max", "column-sum")
GRAM_COLUMN_LIMIT = 8192
_CHUNK = 65536


@dataclass(frozen=True)
class TailQuery:
    """What to estimate: statistic, sparsity, threshold and method."""

    statistic: str
    k: int
    threshold: float
    method: str = "exhaustive"      # "exhaustive" | "monte-carlo"
    trials: int = 0
    seed: int | None = None
    ci_level: float = 0.99
    subset_budget: int = 10**7

    def __post_init__(self):
        if self.statistic not in STATISTICS:
            raise InvalidQuery(f"unknown statistic {self.statistic!r}")
        if self.method not in ("exhaustive", "monte-carlo"):
            raise InvalidQuery(f"unknown method {self.method!r}")
        if self.k < 1:
            raise InvalidQuery("k must be >= 1")
        if self.threshold < 0:
            raise InvalidQuery("threshold must be nonnegative")
        if not 0 < self.ci_level < 1:
            raise InvalidQuery("ci_level must lie in (0, 1)")
        if self.method == "monte-carlo":
            if self.trials < 1:
                raise InvalidQuery("monte-carlo needs trials >= 1")
            if self.seed is None or self.seed < 0:
                raise InvalidQuery("monte-carlo needs an explicit nonnegative seed")


@dataclass(frozen=True)
class TailEstimate:
    """Estimated exceedance probability with exact binomial confidence interval."""

    statistic: str
    k: int
    threshold: float
    exceedances: int
    samples: int
    point_estimate: float
    ci_low: float
    ci_high: float
    ci_level: float
    exact: bool
    seed: int | None = None
    hoeffding_halfwidth: float | None = None

    def __post_init__(self):
        assert 0 <= self.exceedances <= self.samples
        assert self.ci_low - 1e-15 <= self.point_estimate <= self.ci_high + 1e-15


def clopper_pearson(exceedances, samples, level=0.99):
    """Exact two-sided binomial confidence interval at the given level."""
    if samples < 1 or not 0 <= exceedances <= samples:
        raise ValueError("need 0 <= exceedances <= samples, samples >= 1")
    alpha = 1.0 - level
    lo = 0.0 if exceedances == 0 else float(_beta.ppf(alpha / 2, exceedances, samples - exceedances + 1))
    hi = 1.0 if exceedances == samples else float(_beta.ppf(1 - alpha / 2, exceedances + 1, samples - exceedances))
    return lo, hi


def hoeffding_halfwidth(samples, level=0.99):
    """Two-sided Hoeffding deviation bound at the given confidence level."""
    return math.sqrt(math.log(2.0 / (1.0 - level)) / (2.0 * samples))


def sample_supports(N, k, trials, seed, extra_column=False):
    """Uniform k-subsets (optionally plus one outside index) for all trials.

    Partial Fisher-Yates driven by Philox(key=seed); the draw for trial t
    occupies a fixed slice of the counter stream, making each row a pure
    function of (seed, t).  Returns an int array of shape (trials, k) or
    (trials, k+1); the first k entries are the support, the optional last
    entry is a uniform index outside it.
    """
    kk = k + 1 if extra_column else k
    if kk > N:
        raise InvalidQuery(f"cannot draw {kk} distinct indices from {N}")
    rng = np.random.Generator(np.random.Philox(key=int(seed)))
    u = rng.random((trials, kk))
    out = np.empty((trials, kk), dtype=np.int64)
    chunk = max(16, (1 << 22) // max(N, 1))
    base = np.arange(N, dtype=np.int64)
    for lo in range(0, trials, chunk):
        hi = min(lo + chunk, trials)
        b = hi - lo
        idx = np.broadcast_to(base, (b, N)).copy()
        rows = np.arange(b)
        for i in range(kk):
            r = i + (u[lo:hi, i] * (N - i)).astype(np.int64)
            tmp = idx[rows, r].copy()
            idx[rows, r] = idx[rows, i]
            idx[rows, i] = tmp
        out[lo:hi] = idx[:, :kk]
    return out


def _gram(phi):
    if phi.N > GRAM_COLUMN_LIMIT:
        return None
    return phi.entries.conj().T @ phi.entries


def _delta_batch(gram, supports):
    """delta_I for a batch of supports via batched Hermitian eigenvalues."""
    sub = gram[supports[:, :, None], supports[:, None, :]]
    eig = np.linalg.eigvalsh(sub)
    return np.abs(eig - 1.0).max(axis=1)


def _sinc_batch(gram_sq, supports, N):
    s = gram_sq[supports].sum(axis=1)
    np.put_along_axis(s, supports, -np.inf, axis=1)
    return s.max(axis=1)


def _iter_combo_chunks(N, k, chunk=None):
    chunk = chunk or _CHUNK
    it = combinations(range(N), k)
    while True:
        block = list(islice(it, chunk))
        if not block:
            return
        yield np.asarray(block, dtype=np.int64)


def _exhaustive(phi, q):
    N, k = phi.N, q.k
    total = math.comb(N, k)
    if q.statistic == "column-sum":
        total *= N - k
    if total > q.subset_budget:
        raise BudgetExceeded(f"exhaustive enumeration needs {total} evaluations "
                             f"(> budget {q.subset_budget})")
    gram = _gram(phi)
    exceed = 0
    samples = 0
    if gram is None:
        # no dense Gram: fall back to per-support evaluation
        from . import frames
        for supp in combinations(range(N), k):
            if q.statistic == "strip-delta":
                exceed += frames.restricted_gram_norm(phi, supp) >= q.threshold
                samples += 1
            elif q.statistic == "sinc-max":
                exceed += frames.sinc_statistic(phi, supp) > q.threshold
                samples += 1
            else:
                member = set(supp)
                for j in range(N):
                    if j not in member:
                        exceed += frames.column_sum_statistic(phi, supp, j) >= q.threshold
                        samples += 1
        return exceed, samples
    wide_chunk = max(16, (1 << 21) // max(N, 1))  # blocks that materialize (B, N)
    if q.statistic == "strip-delta":
        for block in _iter_combo_chunks(N, k):
            exceed += int((_delta_batch(gram, block) >= q.threshold).sum())
            samples += block.shape[0]
    elif q.statistic == "sinc-max":
        gram_sq = np.abs(gram) ** 2
        for block in _iter_combo_chunks(N, k, chunk=wide_chunk):
            exceed += int((_sinc_batch(gram_sq, block, N) > q.threshold).sum())
            samples += block.shape[0]
    else:
        gram_sq = np.abs(gram) ** 2
        for block in _iter_combo_chunks(N, k, chunk=wide_chunk):
            s = gram_sq[block].sum(axis=1)
            hit = s >= q.threshold
            np.put_along_axis(hit, block, False, axis=1)
            exceed += int(hit.sum())
            samples += block.shape[0] * (N - k)
    return exceed, samples


def _monte_carlo(phi, q):
    N, k = phi.N, q.k
    extra = q.statistic == "column-sum"
    supports = sample_supports(N, k, q.trials, q.seed, extra_column=extra)
    gram = _gram(phi)
    exceed = 0
    if gram is None:
        from . import frames
        for row in supports:
            if q.statistic == "strip-delta":
                exceed += frames.restricted_gram_norm(phi, row[:k]) >= q.threshold
            elif q.statistic == "sinc-max":
                exceed += frames.sinc_statistic(phi, row[:k]) > q.threshold
            else:
                exceed += frames.column_sum_statistic(phi, row[:k], row[k]) >= q.threshold
        return int(exceed), q.trials
    if q.statistic == "strip-delta":
        for lo in range(0, q.trials, _CHUNK):
            block = supports[lo:lo + _CHUNK]
            exceed += int((_delta_batch(gram, block) >= q.threshold).sum())
    elif q.statistic == "sinc-max":
        gram_sq = np.abs(gram) ** 2
        chunk = max(16, (1 << 21) // max(N, 1))
        for lo in range(0, q.trials, chunk):
            block = supports[lo:lo + chunk]
            exceed += int((_sinc_batch(gram_sq, block, N) > q.threshold).sum())
    else:
        gram_sq = np.abs(gram) ** 2
        vals = gram_sq[supports[:, :k], supports[:, k:]].sum(axis=1)
        exceed = int((vals >= q.threshold).sum())
    return int(exceed), q.trials


def estimate_tail(phi, q):
    """Estimate the exceedance probability of a tail query.

    Returns a TailEstimate; exhaustive mode has exact == True and a
    degenerate confidence interval at the exact probability.
    """
    if not 1 <= q.k < phi.N:
        raise InvalidQuery(f"need 1 <= k < N, got k={q.k}, N={phi.N}")
    if q.method == "exhaustive":
        exceed, samples = _exhaustive(phi, q)
        point = exceed / samples
        return TailEstimate(q.statistic, q.k, q.threshold, exceed, samples,
                            point, point, point, q.ci_level, exact=True)
    exceed, samples = _monte_carlo(phi, q)
    point = exceed / samples
    lo, hi = clopper_pearson(exceed, samples, q.ci_level)
    return TailEstimate(q.statistic, q.k, q.threshold, exceed, samples,
                        point, lo, hi, q.ci_level, exact=False, seed=q.seed,
                        hoeffding_halfwidth=hoeffding_halfwidth(samples, q.ci_level))


def strip_profile(phi, k, method="exhaustive", trials=0, seed=None,
                  subset_budget=10**7):
    """Empirical tail of delta_I: sorted distinct values with exceedance mass.

    Returns a list of (delta, P(delta_I >= delta)) pairs over the observed
    atoms (values grouped at 1e-12); the tail is monotone non-increasing by
    construction.
    """
    N = phi.N
    if not 1 <= k < N:
        raise InvalidQuery(f"need 1 <= k < N, got k={k}, N={N}")
    gram = _gram(phi)
    if gram is None:
        raise InvalidQuery("strip_profile needs the dense Gram "
                           f"(N <= {GRAM_COLUMN_LIMIT})")
    if method == "exhaustive":
        total = math.comb(N, k)
        if total > subset_budget:
            raise BudgetExceeded(f"profile needs {total} subsets (> budget {subset_budget})")
        parts = [_delta_batch(gram, block) for block in _iter_combo_chunks(N, k)]
    elif method == "monte-carlo":
        q = TailQuery("strip-delta", k, 0.0, "monte-carlo", trials=trials, seed=seed)
        supports = sample_supports(N, k, q.trials, q.seed)
        parts = [_delta_batch(gram, supports[lo:lo + _CHUNK])
                 for lo in range(0, trials, _CHUNK)]
    else:
        raise InvalidQuery(f"unknown method {method!r}")
    vals = np.round(np.concatenate(parts), 12)
    atoms, counts = np.unique(vals, return_counts=True)
    total = counts.sum()
    tail = np.cumsum(counts[::-1])[::-1] / total
    return [(float(a), float(t)) for a, t in zip(atoms, tail)]


def mc_vs_exhaustive_check(phi, k, statistic, threshold, trials, seed, ci_level=0.99):
    """True iff the exhaustive probability lies inside the Monte Carlo CP interval."""
    exact = estimate_tail(phi, TailQuery(statistic, k, threshold, "exhaustive"))
    mc = estimate_tail(phi, TailQuery(statistic, k, threshold, "monte-carlo",
                                      trials=trials, seed=seed, ci_level=ci_level))
    return mc.ci_low <= exact.point_estimate <= mc.ci_high
