"""Binary field GF(2^m) and Galois ring GR(4,m) arithmetic.

Only the small amount of structure needed by the code-based frame
constructions lives here: discrete-log tables for GF(2^m), the Hensel lift
of a primitive polynomial to Z4, and trace tables over the Teichmuller
set of GR(4,m).  Field elements are ints (bit i = coefficient of x^i);
ring elements are length-m coefficient vectors over Z4.
"""

import numpy as np

# Primitive polynomials over GF(2), degree -> bitmask (bit i = coeff of x^i).
PRIMITIVE_POLY = {
    1: 0b11,
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10000011,
    8: 0b100011101,
    9: 0b1000010001,
    10: 0b10000001001,
    11: 0b100000000101,
    12: 0b1000001010011,
    13: 0b10000000011011,
    14: 0b100010001000011,
    15: 0b1000000000000011,
    16: 0b10001000000001011,
}


class BinaryField:
    """GF(2^m) with exp/log tables and the absolute trace."""

    def __init__(self, m):
        if m not in PRIMITIVE_POLY:
            raise ValueError(f"no primitive polynomial stored for degree {m}")
        self.m = m
        self.order = 1 << m
        self.poly = PRIMITIVE_POLY[m]
        n1 = self.order - 1
        exp = np.zeros(n1, dtype=np.int64)
        log = np.zeros(self.order, dtype=np.int64)
        a = 1
        for i in range(n1):
            exp[i] = a
            log[a] = i
            a <<= 1
            if a & self.order:
                a ^= self.poly
        if a != 1:
            raise ValueError(f"polynomial {self.poly:#b} is not primitive")
        self.exp = exp          # exp[i] = alpha^i
        self.log = log          # log[alpha^i] = i (log[0] unused)
        # trace_of_power[n] = Tr(alpha^n); trace_of_elem indexed by int rep
        tre = np.zeros(self.order, dtype=np.int64)
        for e in range(1, self.order):
            t = 0
            z = e
            for _ in range(m):
                t ^= z
                z = self.mul(z, z)
            if t not in (0, 1):
                raise AssertionError("trace left the prime field")
            tre[e] = t
        self.trace_of_elem = tre
        self.trace_of_power = tre[exp]

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        n1 = self.order - 1
        return int(self.exp[(self.log[a] + self.log[b]) % n1])


class GaloisRing:
    """GR(4,m) = Z4[x]/(h) with h the Hensel lift of a primitive binary poly.

    Exposes the tables used by the Delsarte-Goethals builder:

    * ``t4[n]`` -- Z4-valued trace of xi^n, xi the Teichmuller generator,
    * ``field.trace_of_power[n]`` -- binary trace of the reduction alpha^n.
    """

    def __init__(self, m):
        self.m = m
        self.field = BinaryField(m)
        self.order = 1 << m
        self.h = self._hensel_lift(PRIMITIVE_POLY[m], m)
        n1 = self.order - 1
        # powers xi^0 .. xi^(n1-1) as Z4 coefficient rows
        pows = np.zeros((n1, m), dtype=np.int64)
        cur = np.zeros(m, dtype=np.int64)
        cur[0] = 1
        for i in range(n1):
            pows[i] = cur
            cur = self._mul_by_x(cur)
        if not np.array_equal(cur, pows[0]):
            raise AssertionError("xi does not have order 2^m - 1 (bad Hensel lift)")
        self.pow = pows
        # t4[n] = T(xi^n) = sum_i frobenius^i(xi^n) = sum_i xi^(n*2^i)
        t4 = np.zeros(n1, dtype=np.int64)
        for n in range(n1):
            acc = np.zeros(m, dtype=np.int64)
            for i in range(m):
                acc = (acc + pows[(n << i) % n1]) % 4
            if np.any(acc[1:]):
                raise AssertionError("ring trace did not land in Z4")
            t4[n] = acc[0]
        self.t4 = t4

    @staticmethod
    def _hensel_lift(poly_bits, m):
        """Graeffe-style lift: h(x^2) = +/- hbar(x) hbar(-x) over Z4."""
        coeffs = [(poly_bits >> i) & 1 for i in range(m + 1)]
        prod = [0] * (2 * m + 1)
        for i, ci in enumerate(coeffs):
            if ci == 0:
                continue
            for j, cj in enumerate(coeffs):
                if cj == 0:
                    continue
                sign = -1 if j % 2 else 1
                prod[i + j] += sign * ci * cj
        lifted = [prod[2 * i] % 4 for i in range(m + 1)]
        if lifted[m] != 1:  # normalize leading coefficient to 1
            lifted = [(-c) % 4 for c in lifted]
        assert lifted[m] == 1
        assert all((c - ((poly_bits >> i) & 1)) % 2 == 0 for i, c in enumerate(lifted))
        return np.array(lifted[:m], dtype=np.int64)  # x^m = -(low part)

    def _mul_by_x(self, v):
        out = np.empty_like(v)
        out[1:] = v[:-1]
        out[0] = 0
        if v[-1]:
            out = (out - v[-1] * self.h) % 4
        return out % 4
