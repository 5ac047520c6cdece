import numpy as np
import pytest

from striplab.galois import PRIMITIVE_POLY, BinaryField, GaloisRing


@pytest.mark.parametrize("m", range(1, 14))
def test_primitive_polynomials(m):
    # BinaryField raises unless alpha has full multiplicative order
    fld = BinaryField(m)
    assert fld.exp.size == 2**m - 1
    assert sorted(fld.exp.tolist()) == list(range(1, 2**m))


def test_trace_is_f2_linear():
    fld = BinaryField(6)
    tre = fld.trace_of_elem
    for a in range(64):
        for b in range(0, 64, 7):
            assert tre[a ^ b] == tre[a] ^ tre[b]
    # trace is balanced: half the elements have trace 1
    assert tre.sum() == 32


def test_hensel_lift_octacode():
    # known lift of x^3 + x + 1 over Z4: x^3 + 2x^2 + x - 1
    gr = GaloisRing(3)
    assert gr.h.tolist() == [3, 1, 2]  # low coefficients of the monic lift


@pytest.mark.parametrize("m", [3, 4, 6])
def test_ring_trace_tables(m):
    gr = GaloisRing(m)
    n1 = 2**m - 1
    # ring trace reduces mod 2 to the field trace
    assert np.array_equal(gr.t4 % 2, gr.field.trace_of_power[:n1])
    # trace is Frobenius-invariant: T(xi^(2n)) = T(xi^n)
    for n in range(n1):
        assert gr.t4[(2 * n) % n1] == gr.t4[n]


def test_teichmuller_gauss_sums():
    # |sum over Teichmuller set of i^T(u x)| = 2^(m/2) for every unit u;
    # this is the unbiasedness behind the Delsarte-Goethals block coherence
    m = 4
    gr = GaloisRing(m)
    n1 = 2**m - 1
    i4 = np.array([1, 1j, -1, -1j])
    # units u = xi^a + 2 xi^b (and + 0): reduction mod 2 nonzero
    for a in range(n1):
        for b in [-1, 0, 3, 7]:  # -1 stands for the zero 2-adic digit
            total = 1.0 + 0j  # position x = 0 contributes i^0
            for j in range(n1):
                ph = gr.t4[(a + j) % n1]
                if b >= 0:
                    ph = (ph + 2 * gr.field.trace_of_power[(b + j) % n1]) % 4
                total += i4[ph]
            assert abs(abs(total) - 2 ** (m / 2)) < 1e-9
