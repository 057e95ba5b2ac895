import cmath
import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mirrorext.affine_data import AffineSpec, conformal_weight, sl2_fusion_oracle, sl2_modular, sln_modular
from mirrorext.errors import InvalidLevel, InvalidRank
from mirrorext.modular_data import validate_modular, verlinde_fusion


def perm_sign(p):
    sign = 1
    p = list(p)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


def weyl_sum_oracle(n, k):
    """Kac-Peterson S by brute-force summation over S_n, in orthonormal epsilon coordinates."""
    m = k + n
    weights = AffineSpec(n, k).weights()

    def eps(dynkin):
        v = [sum(dynkin[a:]) for a in range(n - 1)] + [0]
        v = [x + (n - 1 - a) for a, x in enumerate(v)]
        mean = sum(v) / n
        return [x - mean for x in v]

    vecs = [eps(w) for w in weights]
    perms = [(p, perm_sign(p)) for p in itertools.permutations(range(n))]
    R = np.zeros((len(vecs), len(vecs)), dtype=complex)
    for a, x in enumerate(vecs):
        for b, y in enumerate(vecs):
            R[a, b] = sum(s * cmath.exp(-2j * math.pi * sum(x[p[i]] * y[i] for i in range(n)) / m)
                          for p, s in perms)
    S = R * (abs(R[0, 0]) / R[0, 0]) / np.linalg.norm(R[0])
    return S


@pytest.mark.parametrize("n,k", [(2, 1), (2, 5), (3, 1), (3, 2), (3, 3), (4, 1), (4, 2)])
def test_determinant_form_matches_permutation_sum(n, k):
    assert np.allclose(sln_modular(n, k).S, weyl_sum_oracle(n, k), atol=1e-12)


@pytest.mark.parametrize("k", range(1, 9))
def test_sl2_two_routes_agree(k):
    a, b = sl2_modular(k), sln_modular(2, k)
    assert np.allclose(a.S, b.S, atol=1e-12)
    assert a.h == b.h and a.c == b.c


@pytest.mark.parametrize("n,k", [(3, 1), (3, 2), (4, 1), (4, 2), (5, 1), (8, 1)])
def test_sln_validates(n, k):
    md = sln_modular(n, k)
    rep = validate_modular(md)
    assert rep.overall, rep.render()


def test_known_weights():
    # fundamental weights at level 1: h(omega_r) = r (n - r) / (2 n)
    for n in (3, 4, 8):
        for r in range(1, n):
            dyn = tuple(int(a == r - 1) for a in range(n - 1))
            assert conformal_weight(dyn, 1) == Fraction(r * (n - r), 2 * n)
    assert sln_modular(8, 1).c == 7
    assert sln_modular(4, 2).c == Fraction(5)
    assert sl2_modular(4).c == 2


def test_level_one_is_pointed():
    ring = verlinde_fusion(sln_modular(5, 1))
    assert ring.size == 5
    assert np.allclose(ring.fpdims, 1.0)


@given(st.integers(2, 5), st.integers(1, 4))
def test_weights_enumeration(n, k):
    ws = AffineSpec(n, k).weights()
    assert ws[0] == (0,) * (n - 1)
    assert len(ws) == math.comb(n - 1 + k, k)
    assert all(sum(w) <= k and min(w) >= 0 for w in ws)


@given(st.integers(1, 12))
def test_oracle_is_a_fusion_ring(k):
    assert sl2_fusion_oracle(k).size == k + 1


@pytest.mark.parametrize("n,k,exc", [(1, 1, InvalidRank), (3, 0, InvalidLevel), (2, -1, InvalidLevel)])
def test_bad_parameters(n, k, exc):
    with pytest.raises(exc):
        sln_modular(n, k)
    if n == 2:
        with pytest.raises(exc):
            sl2_modular(k)
