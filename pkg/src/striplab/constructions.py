"""Generators for the sampling-matrix families.

Families: normalized Gaussian, random harmonic, chirp, simplex ETF,
Reed-Muller and Delsarte-Goethals code frames, deterministic sub-Fourier,
plus the generic binary-code-to-bipolar-matrix map and an ETF validator.

Randomized families draw from a Philox generator keyed by the seed, so
equal (family, parameters, seed) reproduce bit-identical matrices.
"""

import warnings
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .errors import (
    CollisionWarning,
    DegreeTooSmall,
    DuplicateCodeword,
    EmptySelection,
    InvalidRank,
    LengthMismatch,
    NotPrime,
    RangeError,
    SizeOverBudget,
)
from .frames import SensingMatrix, normalize_columns
from .galois import BinaryField, GaloisRing

DEFAULT_COLUMN_BUDGET = 2**20

_I4 = np.array([1.0, 1.0j, -1.0, -1.0j])  # i^k lookup, exact entries

FAMILIES = ("gaussian", "random-harmonic", "chirp", "simplex-etf",
            "reed-muller", "delsarte-goethals", "sub-fourier")


@dataclass(frozen=True)
class FamilySpec:
    """Name + parameter map identifying one matrix-family instance."""

    family: str
    parameters: dict = field(default_factory=dict)
    seed: int | None = None

    def __post_init__(self):
        if self.family not in FAMILIES and self.family != "etf-import":
            raise ValueError(f"unknown family {self.family!r}")


def is_prime(n):
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _rng(seed):
    if seed is None:
        raise ValueError("randomized families require an explicit seed")
    if seed < 0:
        raise ValueError("seed must be a nonnegative integer")
    return np.random.Generator(np.random.Philox(key=int(seed)))


def build_gaussian(m, N, seed):
    """Columns of an i.i.d. standard-normal matrix, normalized to unit length."""
    if not 1 <= m <= N:
        raise RangeError(f"need 1 <= m <= N, got m={m}, N={N}")
    raw = _rng(seed).standard_normal((m, N))
    return normalize_columns(raw, family="gaussian",
                             family_params={"m": m, "N": N}, seed=seed)


def build_random_harmonic(m, N, seed):
    """Random harmonic frame: Bernoulli(m/N) row selection from the N x N DFT.

    The selected submatrix is scaled by sqrt(N/|M|); the realized row count
    |M| is recorded in family_params.  An empty selection raises
    EmptySelection rather than resampling, so the row-set distribution stays
    exactly Bernoulli.
    """
    if not 1 <= m <= N:
        raise RangeError(f"need 1 <= m <= N, got m={m}, N={N}")
    keep = _rng(seed).random(N) < m / N
    rows = np.flatnonzero(keep)
    if rows.size == 0:
        raise EmptySelection("Bernoulli row selection came back empty; retry with a new seed")
    k = np.arange(N)
    phase = (rows[:, None] * k[None, :]) % N
    entries = np.exp(2j * np.pi * np.arange(N) / N)[phase] / np.sqrt(rows.size)
    return SensingMatrix(entries, family="random-harmonic",
                         family_params={"m": m, "N": N, "rows": rows.size}, seed=seed)


def build_chirp(m):
    """Chirp dictionary: Phi[t, am+b] = exp(2 pi i (b t^2 + a t)/m)/sqrt(m).

    Indices t, a, b run over 1..m with m prime; column j (0-based) carries
    (a, b) = (j // m + 1, j % m + 1), the paper's am+b order.
    """
    if not is_prime(m):
        raise NotPrime(m)
    t = np.arange(1, m + 1)
    a = np.arange(1, m + 1)
    b = np.arange(1, m + 1)
    # phase exponents kept in exact integer arithmetic mod m;
    # axes (t, a, b) so that column am+b flattens a-major
    ph = (b[None, None, :] * t[:, None, None] ** 2
          + a[None, :, None] * t[:, None, None]) % m
    roots = np.exp(2j * np.pi * np.arange(m) / m)
    entries = roots[ph.reshape(m, m * m)] / np.sqrt(m)
    return SensingMatrix(entries, family="chirp", family_params={"m": m})


def build_simplex_etf(m):
    """Regular-simplex ETF: m x (m+1) real frame with all cross products -1/m.

    Standard basis vectors of R^(m+1) projected onto the complement of the
    all-ones vector and expressed in the Helmert orthonormal basis of that
    complement.
    """
    if m < 2:
        raise RangeError("simplex ETF needs m >= 2")
    h = np.zeros((m, m + 1))
    for i in range(1, m + 1):
        s = np.sqrt(i * (i + 1))
        h[i - 1, :i] = 1.0 / s
        h[i - 1, i] = -i / s
    entries = h * np.sqrt((m + 1) / m)
    return SensingMatrix(entries, family="simplex-etf", family_params={"m": m})


def validate_etf(phi, tol=1e-8):
    """Check the two ETF conditions; returns a small report dict.

    True iff every column norm is within tol of 1 and every cross coherence
    is within tol of sqrt((N-m)/(m(N-1))).  N = m is flagged as degenerate
    (the target coherence collapses to 0) and fails validation.
    """
    m, n = phi.m, phi.N
    degenerate = n == m
    target = 0.0 if degenerate else float(np.sqrt((n - m) / (m * (n - 1))))
    norms = np.linalg.norm(phi.entries, axis=0)
    norm_dev = float(np.abs(norms - 1.0).max())
    g = np.abs(phi.entries.conj().T @ phi.entries)
    np.fill_diagonal(g, target)
    coh_dev = float(np.abs(g - target).max())
    ok = (not degenerate) and norm_dev <= tol and coh_dev <= tol
    return {
        "is_etf": bool(ok),
        "degenerate": bool(degenerate),
        "target_coherence": target,
        "max_norm_deviation": norm_dev,
        "max_coherence_deviation": coh_dev,
    }


def code_to_matrix(codewords):
    """Bipolar image of a binary code: bits map 0 -> +1, 1 -> -1, scaled 1/sqrt(m).

    Columns at Hamming distance d have inner product (m - 2d)/m, so the code
    width w and the coherence obey w = mu * m / 2.
    """
    words = [np.asarray([int(c) for c in w] if isinstance(w, str) else w, dtype=np.int64)
             for w in codewords]
    if not words:
        raise LengthMismatch("need at least one codeword")
    m = words[0].size
    for w in words:
        if w.size != m:
            raise LengthMismatch(f"codeword lengths differ ({w.size} vs {m})")
        if np.any((w != 0) & (w != 1)):
            raise ValueError("codewords must be binary")
    seen = set()
    for w in words:
        key = w.tobytes()
        if key in seen:
            raise DuplicateCodeword("codewords must be distinct")
        seen.add(key)
    bits = np.stack(words, axis=1)
    entries = (1.0 - 2.0 * bits) / np.sqrt(m)
    return SensingMatrix(entries, family="code",
                         family_params={"m": m, "N": len(words)})


def _trace_zero_subgroup(fld):
    """Trace-zero elements of GF(2^m), ascending int order (an F2-subspace)."""
    return [e for e in range(fld.order) if fld.trace_of_elem[e] == 0]


def build_delsarte_goethals(s, r, column_budget=DEFAULT_COLUMN_BUDGET):
    """Delsarte-Goethals frame DG(s, r): m = 2^(2s+2), N = 2^(-r) m^(r+2).

    Quaternary Galois-ring construction over GR(4, 2s+2): columns are
    indexed by (w, nu_1..nu_r) with w ranging over the ring and each nu_j
    over the trace-zero subgroup of GF(2^(2s+2)); the entry at Teichmuller
    position x is

        i^( T(w x) + 2 tr(sum_j nu_j xbar^(2^j + 1)) ) / sqrt(m),

    with T the Z4-valued ring trace and tr the binary field trace.  Same-w
    blocks are orthonormal bases; cross-block Weil sums give coherence
    exactly 2^r m^(-1/2), mean square coherence (N-m)/(m(N-1)), pairwise
    orthogonal rows, and exact coherence invariance (column indices form a
    group, and inner products depend only on index differences).
    """
    if s < 1:
        raise InvalidRank("need s >= 1")
    if not 0 <= r <= s - 1:
        raise InvalidRank(f"r must lie in 0..s-1, got r={r} for s={s}")
    me = 2 * s + 2
    m = 1 << me
    n_cols = 1 << ((r + 2) * me - r)
    if n_cols > column_budget:
        raise SizeOverBudget(f"DG({s},{r}) has N={n_cols} > budget {column_budget}")
    gr = GaloisRing(me)
    fld = gr.field
    n1 = m - 1
    jx = np.arange(n1)
    # additive parts of the phase, position index 0 = ring zero
    lam_part = np.zeros((m, m), dtype=np.int64)   # [lam_idx, position]
    b_part = np.zeros((m, m), dtype=np.int64)
    for li in range(1, m):
        lam_part[li, 1:] = gr.t4[(li - 1 + jx) % n1]
        b_part[li, 1:] = 2 * fld.trace_of_power[(li - 1 + jx) % n1]
    subgroup = _trace_zero_subgroup(fld)
    exponents = [(1 << j) + 1 for j in range(1, r + 1)]
    blocks = []
    for nus in product(subgroup, repeat=r):
        qv = np.zeros(m, dtype=np.int64)
        for e, nu in zip(exponents, nus):
            if nu:
                qv[1:] += 2 * fld.trace_of_power[(fld.log[nu] + jx * e) % n1]
        ph = (lam_part[:, None, :] + b_part[None, :, :] + qv[None, None, :]) % 4
        blocks.append(_I4[ph.reshape(m * m, m).T])
    entries = np.concatenate(blocks, axis=1) / np.sqrt(m)
    return SensingMatrix(entries, family="delsarte-goethals",
                         family_params={"s": s, "r": r, "m": m, "N": n_cols})


def build_reed_muller(s, t, column_budget=DEFAULT_COLUMN_BUDGET):
    """Second-order Reed-Muller subcode frame: 2^s x 2^(t(1+s)) bipolar matrix.

    Columns are (-1)^(Q(x) + tr(b x))/sqrt(2^s) over x in GF(2^s), with
    Q(x) = tr(sum_{j=1}^t nu_j x^(2^j + 1)); nu_1..nu_(t-1) range over the
    whole field and nu_t over the 2^t-element subspace {0..2^t-1}, which
    pins the column count to 2^(t(1+s)).  The subcode choice is
    deterministic and meets the published bounds mu <= 2^(-(s-2t-1)/2) and
    mean square coherence <= 2^(-s); t >= s/4 only warns.
    """
    if s < 1 or t < 1:
        raise RangeError("need s >= 1 and t >= 1")
    if t >= s / 4:
        warnings.warn(f"t={t} >= s/4={s/4:.2f}: outside the published coherence regime",
                      UserWarning, stacklevel=2)
    m = 1 << s
    n_cols = 1 << (t * (1 + s))
    if n_cols > column_budget:
        raise SizeOverBudget(f"RM({s},{t}) has N={n_cols} > budget {column_budget}")
    if t > s:
        raise RangeError("t may not exceed s (subspace restriction undefined)")
    fld = BinaryField(s)
    n1 = m - 1
    jx = np.arange(n1)
    lin_part = np.zeros((m, m), dtype=np.int64)   # [b_idx, position]
    for bi in range(1, m):
        lin_part[bi, 1:] = fld.trace_of_power[(bi - 1 + jx) % n1]
    free = [list(range(m))] * (t - 1)
    restricted = list(range(1 << t))
    exponents = [(1 << j) + 1 for j in range(1, t + 1)]
    blocks = []
    for nus in product(*free, restricted):
        qv = np.zeros(m, dtype=np.int64)
        for e, nu in zip(exponents, nus):
            if nu:
                qv[1:] += fld.trace_of_power[(fld.log[nu] + jx * e) % n1]
        ph = (qv[None, :] + lin_part) % 2
        blocks.append((1.0 - 2.0 * ph).T)
    entries = np.concatenate(blocks, axis=1) / np.sqrt(m)
    assert entries.shape == (m, n_cols)
    return SensingMatrix(entries, family="reed-muller",
                         family_params={"s": s, "t": t, "m": m, "N": n_cols})


def _horner_mod(coeffs, x, p):
    acc = 0
    for c in coeffs:
        acc = (acc * x + c) % p
    return acc


def build_sub_fourier(p, d, coeffs, m):
    """Deterministic sub-Fourier frame: rows f(1)..f(m) mod p of the p x p DFT.

    ``coeffs`` lists the polynomial coefficients from highest degree down to
    the constant term; deg f must equal d > 2 and p^(1/(d-1)) <= m <= p.
    Columns are normalized to unit length.  If the m residues collide a
    CollisionWarning is emitted and the row multiset is kept (the published
    coherence bound is then not asserted).
    """
    if not is_prime(p) or p <= 2:
        raise NotPrime(p)
    if d <= 2:
        raise DegreeTooSmall(f"polynomial degree {d} <= 2")
    coeffs = [int(c) for c in coeffs]
    if len(coeffs) != d + 1 or coeffs[0] % p == 0:
        raise ValueError(f"need {d + 1} coefficients with nonzero leading term mod p")
    if not p ** (1.0 / (d - 1)) <= m <= p:
        raise RangeError(f"m={m} outside [p^(1/(d-1)), p] = [{p ** (1.0 / (d - 1)):.3f}, {p}]")
    rows = np.array([_horner_mod(coeffs, n, p) for n in range(1, m + 1)], dtype=np.int64)
    if np.unique(rows).size != m:
        warnings.warn("polynomial residues collide; keeping the row multiset",
                      CollisionWarning, stacklevel=2)
    k = np.arange(p)
    phase = (rows[:, None] * k[None, :]) % p
    raw = np.exp(2j * np.pi * np.arange(p) / p)[phase] / np.sqrt(p)
    out = normalize_columns(raw, family="sub-fourier",
                            family_params={"p": p, "d": d, "m": m})
    return SensingMatrix(out.entries, family="sub-fourier",
                         family_params={"p": p, "d": d, "m": m,
                                        "rows": [int(x) for x in rows]})


def build(spec, column_budget=DEFAULT_COLUMN_BUDGET):
    """Dispatch a FamilySpec to its builder."""
    p = spec.parameters
    fam = spec.family
    if fam == "gaussian":
        return build_gaussian(p["m"], p["N"], spec.seed)
    if fam == "random-harmonic":
        return build_random_harmonic(p["m"], p["N"], spec.seed)
    if fam == "chirp":
        return build_chirp(p["m"])
    if fam == "simplex-etf":
        return build_simplex_etf(p["m"])
    if fam == "reed-muller":
        return build_reed_muller(p["s"], p["t"], column_budget)
    if fam == "delsarte-goethals":
        return build_delsarte_goethals(p["s"], p["r"], column_budget)
    if fam == "sub-fourier":
        return build_sub_fourier(p["p"], p["d"], p["coeffs"], p["m"])
    raise ValueError(f"cannot build family {fam!r}")
