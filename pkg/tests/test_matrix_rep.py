"""Matrix representation construction and the linear-algebra oracle."""

from __future__ import annotations

import math
from fractions import Fraction

from gadet import (
    ComplexMatrix,
    ComplexRational,
    Multivector,
    Signature,
    build_representation,
    charpoly_matrix,
    det_fl,
    det_matrix,
    eigenvalues,
    fl_coefficients,
    represent,
)
from helpers import SIGNATURES, random_mvs


def test_complex_rational_arithmetic():
    a = ComplexRational(1, 2)
    b = ComplexRational(3, -1)
    assert a + b == ComplexRational(4, 1)
    assert a * b == ComplexRational(5, 5)
    assert (a * b) / b == a
    assert -a == ComplexRational(-1, -2)
    assert complex(a) == 1 + 2j
    assert a != b and a == ComplexRational(1, 2)
    assert ComplexRational(Fraction(4, 2)) == 2


def test_construction_self_checks_pass_everywhere():
    for sig in SIGNATURES:
        build_representation(sig)  # raises on any relation failure


def test_g10_generator_blocks():
    rep = build_representation(Signature(1, 0))
    g = rep.generators[0]
    assert g.rows[0][0] == 1 and g.rows[1][1] == -1
    assert g.rows[0][1] == 0 and g.rows[1][0] == 0


def test_g01_generator_squares_to_minus_identity():
    rep = build_representation(Signature(0, 1))
    g = rep.generators[0]
    sq = g * g
    assert sq.rows[0][0] == -1 and sq.rows[1][1] == -1


def test_g20_generator_relations():
    rep = build_representation(Signature(2, 0))
    g1, g2 = rep.generators
    identity = ComplexMatrix.identity(2)
    assert (g1 * g1).rows == identity.rows
    assert (g2 * g2).rows == identity.rows
    anti = g1 * g2 + g2 * g1
    assert all(not e for row in anti.rows for e in row)


def test_identity_represents_as_identity_matrix():
    for sig in SIGNATURES:
        assert represent(sig.identity).rows == ComplexMatrix.identity(sig.N).rows


def test_representation_is_linear_and_multiplicative():
    for sig in SIGNATURES:
        u, v = random_mvs(sig, 2, 60)
        mu, mv = represent(u), represent(v)
        assert represent(u + v).rows == (mu + mv).rows
        assert represent(u * v).rows == (mu * mv).rows


def test_trace_identity():
    for sig in SIGNATURES:
        u = random_mvs(sig, 1, 61)[0]
        t = represent(u).trace()
        assert t.im == 0
        assert t.re == sig.N * u.scalar_part()


def test_det_examples():
    for sig in [Signature(2, 0), Signature(3, 2)]:
        assert det_matrix(sig.identity) == 1
        assert det_matrix(sig.zero) == 0


def test_det_matrix_agrees_with_fl():
    for sig in SIGNATURES:
        for u in random_mvs(sig, 2, 62):
            assert det_matrix(u) == det_fl(u)


def test_det_matrix_homogeneity():
    s = Signature(2, 1)
    u = random_mvs(s, 1, 63)[0]
    assert det_matrix(u * 3) == 3 ** s.N * det_matrix(u)


def test_det_matrix_float_backend():
    for sig in [Signature(2, 0), Signature(3, 1), Signature(0, 5)]:
        u = random_mvs(sig, 1, 64)[0]
        exact = det_fl(u)
        approx = det_matrix(u.to_float())
        assert abs(approx - exact) <= 1e-8 * max(1.0, abs(exact))


def test_charpoly_matrix_agrees_with_fl():
    for sig in SIGNATURES:
        u = random_mvs(sig, 1, 65)[0]
        assert charpoly_matrix(u) == fl_coefficients(u)


def test_charpoly_matrix_float_backend():
    s = Signature(2, 2)
    u = random_mvs(s, 1, 66)[0]
    exact = fl_coefficients(u)
    approx = charpoly_matrix(u.to_float())
    for a, b in zip(approx.coeffs, exact.coeffs):
        assert math.isclose(a, float(b), rel_tol=1e-9, abs_tol=1e-9)


def test_eigenvalues_identity():
    # A multiplicity-N root spreads as eps**(1/N) under the iteration, but
    # its mean stays at machine precision.
    for sig in [Signature(1, 0), Signature(3, 0), Signature(0, 6)]:
        eig = eigenvalues(sig.identity)
        assert len(eig) == sig.N
        assert all(abs(z - 1) < 0.05 for z in eig)
        assert abs(sum(eig) / sig.N - 1) < 1e-10


def test_eigenvalues_worked_example():
    s = Signature(2, 0)
    u = Multivector.from_terms(s, {0: 5, 2: Fraction(1, 2), 3: Fraction(1, 2)})
    eig = eigenvalues(u)
    assert all(abs(z - 5) < 1e-10 for z in eig)


def test_eigenvalues_sorted_and_reconstruct_coefficients():
    for sig in SIGNATURES:
        u = random_mvs(sig, 1, 67, float_backend=True)[0]
        eig = eigenvalues(u)
        assert list(eig) == sorted(eig, key=lambda z: (z.real, z.imag))
        cp = charpoly_matrix(u)
        # elementary symmetric polynomial signs: C(k) = (-1)**(k+1) e_k
        prod = 1
        for z in eig:
            prod *= z
        det = cp.det
        assert abs(prod - det) <= 1e-8 * max(1.0, abs(det))
        s = sum(eig)
        assert abs(s - cp.coeffs[0]) <= 1e-8 * max(1.0, abs(cp.coeffs[0]))
