"""Exact linear algebra over F_p and monomial quotient algebras.

The rank oracle used here is an independent pure-Python Gaussian
elimination over F_p, so numpy-path regressions cannot hide.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from repcalc.errors import CapExceededError
from repcalc.modp import (
    DenseMatrixModP,
    MonomialQuotientAlgebra,
    PrimeModulus,
    SparsePolynomial,
    corank_powers,
    linear_sum_poly,
    linear_sum_rank,
    matrix_rank,
    mult_operator,
    poly_mul,
    poly_pow,
    quotient_dim,
)


def rank_oracle(rows: list[list[int]], p: int) -> int:
    """Reference rank over F_p, no numpy."""
    m = [[x % p for x in row] for row in rows]
    if not m or not m[0]:
        return 0
    nrows, ncols = len(m), len(m[0])
    rank = 0
    for c in range(ncols):
        piv = next((i for i in range(rank, nrows) if m[i][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][c], p - 2, p)
        m[rank] = [x * inv % p for x in m[rank]]
        for i in range(nrows):
            if i != rank and m[i][c]:
                f = m[i][c]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[rank])]
        rank += 1
        if rank == nrows:
            break
    return rank


class TestPrimeModulus:
    def test_accepts_primes(self):
        for p in (2, 3, 5, 7, 97):
            assert PrimeModulus(p).p == p

    def test_rejects_composites_and_units(self):
        for n in (-3, 0, 1, 4, 9, 91):
            with pytest.raises(ValueError):
                PrimeModulus(n)


class TestSparsePolynomial:
    def test_parse_linear_sum(self):
        assert SparsePolynomial.parse("T1+T2", 2) == linear_sum_poly(2)

    def test_parse_coefficients_and_powers(self):
        q = SparsePolynomial.parse("2*T1+T2^2", 2)
        assert dict(q.terms) == {(1, 0): 2, (0, 2): 1}

    def test_parse_products(self):
        q = SparsePolynomial.parse("T1*T2+T1+T2", 2)
        assert dict(q.terms) == {(1, 1): 1, (1, 0): 1, (0, 1): 1}

    def test_parse_merges_repeated_terms(self):
        assert SparsePolynomial.parse("T1+T1", 1) == SparsePolynomial.parse("2*T1", 1)

    def test_parse_rejects_garbage(self):
        with pytest.raises(ValueError):
            SparsePolynomial.parse("T1+%", 2)
        with pytest.raises(ValueError):
            SparsePolynomial.parse("T3", 2)

    def test_constant_term_detection(self):
        assert SparsePolynomial.parse("1+T1", 1).has_constant_term()
        assert not SparsePolynomial.parse("T1", 1).has_constant_term()

    def test_unit_linear_sum_detection(self):
        assert linear_sum_poly(3).is_unit_linear_sum(5, 3)
        # 3*T1 + T2 == 0*T1 + T2 mod 3: not a unit linear sum
        assert not SparsePolynomial.parse("3*T1+T2", 2).is_unit_linear_sum(3, 2)
        assert not SparsePolynomial.parse("T1*T2+T1+T2", 2).is_unit_linear_sum(2, 2)

    def test_poly_arithmetic(self):
        p = 3
        f = SparsePolynomial.parse("T1+T2", 2)
        # Frobenius: (T1+T2)^3 = T1^3 + T2^3 mod 3
        assert poly_pow(f, 3, p) == SparsePolynomial.parse("T1^3+T2^3", 2)
        g = poly_mul(f, f, p)
        assert g == SparsePolynomial.parse("T1^2+2*T1*T2+T2^2", 2)


class TestRank:
    @settings(max_examples=60, deadline=None)
    @given(
        st.integers(min_value=1, max_value=6),
        st.integers(min_value=1, max_value=6),
        st.sampled_from([2, 3, 5]),
        st.integers(min_value=0, max_value=2**31),
    )
    def test_matches_reference_elimination(self, nrows, ncols, p, seed):
        rng = np.random.default_rng(seed)
        a = rng.integers(0, p, size=(nrows, ncols))
        m = DenseMatrixModP(nrows, ncols, np.array(a, dtype=np.int64), p)
        assert matrix_rank(m) == rank_oracle(a.tolist(), p)

    def test_identity_and_zero(self):
        eye = DenseMatrixModP(4, 4, np.eye(4, dtype=np.int64), 5)
        assert matrix_rank(eye) == 4
        z = DenseMatrixModP(3, 5, np.zeros((3, 5), dtype=np.int64), 2)
        assert matrix_rank(z) == 0

    def test_rank_uses_modular_reduction(self):
        # invertible over Q but rank 1 mod 2
        m = DenseMatrixModP(2, 2, np.array([[1, 1], [1, 3]], dtype=np.int64), 2)
        assert matrix_rank(m) == 1


class TestAlgebra:
    def test_dimension_is_product_of_caps(self):
        A = MonomialQuotientAlgebra(PrimeModulus(3), (3, 3))
        assert A.dim == 9
        assert len(A.basis()) == 9

    def test_rejects_nonpositive_caps(self):
        with pytest.raises(ValueError):
            MonomialQuotientAlgebra(PrimeModulus(2), (2, 0))

    def test_mult_operator_nilpotent(self):
        A = MonomialQuotientAlgebra(PrimeModulus(2), (2, 2))
        G = mult_operator(A, linear_sum_poly(2)).entries
        # (T1+T2) raises total degree, caps force nilpotency
        M = G
        for _ in range(A.dim):
            M = M @ G % 2
        assert not M.any()

    def test_mult_operator_matches_poly_multiplication(self):
        A = MonomialQuotientAlgebra(PrimeModulus(3), (3, 2))
        g = SparsePolynomial.parse("T1+2*T2+T1*T2", 2)
        G = mult_operator(A, g).entries
        basis, index = A.basis(), A.index_of()
        for col, mono in enumerate(basis):
            prod = poly_mul(g, SparsePolynomial.from_dict({mono: 1}), 3)
            expect = np.zeros(A.dim, dtype=np.int64)
            for exp, c in prod.terms:
                if all(e < cap for e, cap in zip(exp, A.caps)):
                    expect[index[exp]] = c % 3
            assert (G[:, col] == expect).all()

    def test_cap_exceeded(self):
        A = MonomialQuotientAlgebra(PrimeModulus(2), (10, 10))
        with pytest.raises(CapExceededError):
            mult_operator(A, linear_sum_poly(2), dim_cap=50)

    def test_cap_env_override(self, monkeypatch):
        A = MonomialQuotientAlgebra(PrimeModulus(2), (10, 10))
        monkeypatch.setenv("REPCALC_DIM_CAP", "50")
        with pytest.raises(CapExceededError):
            mult_operator(A, linear_sum_poly(2))
        monkeypatch.setenv("REPCALC_DIM_CAP", "200")
        mult_operator(A, linear_sum_poly(2))


class TestQuotientDim:
    def test_no_generators(self):
        A = MonomialQuotientAlgebra(PrimeModulus(2), (2, 3))
        assert quotient_dim(A, []) == 6

    def test_principal_variable_ideal(self):
        # k[x,y]/(x^3, y^3, x) has basis 1, y, y^2
        A = MonomialQuotientAlgebra(PrimeModulus(3), (3, 3))
        assert quotient_dim(A, [SparsePolynomial.parse("T1", 2)]) == 3

    def test_against_corank_of_power(self):
        A = MonomialQuotientAlgebra(PrimeModulus(3), (3, 3))
        g = linear_sum_poly(2)
        for r in range(1, 5):
            assert quotient_dim(A, [poly_pow(g, r, 3)]) == corank_powers(A, g, r)[r]


class TestCorankPowers:
    def test_fast_path_matches_dense_path(self):
        # graded shortcut vs explicit matrix powers of the operator
        for p, caps in [(2, (2, 2)), (3, (3, 3)), (2, (4, 2)), (5, (5, 3)), (3, (3, 3, 3))]:
            A = MonomialQuotientAlgebra(PrimeModulus(p), caps)
            g = linear_sum_poly(len(caps))
            fast = corank_powers(A, g, A.dim)
            G = mult_operator(A, g).entries
            M = np.eye(A.dim, dtype=np.int64)
            dense = []
            for _ in range(A.dim + 1):
                dense.append(A.dim - rank_oracle(M.tolist(), p))
                M = M @ G % p
            assert fast == dense

    def test_frobenius_collapse_p3(self):
        # (x+y)^3 = x^3 + y^3 = 0 in k[x,y]/(x^3,y^3) at p=3, so the
        # corank sequence is 3, 6, 9 and stays 9: delta_3 x delta_3 = 3 delta_3
        A = MonomialQuotientAlgebra(PrimeModulus(3), (3, 3))
        assert corank_powers(A, linear_sum_poly(2), 5) == [0, 3, 6, 9, 9, 9]

    def test_p2_square_free(self):
        # k[x,y]/(x^2,y^2), g = x+y: g^2 = 2xy = 0 mod 2
        A = MonomialQuotientAlgebra(PrimeModulus(2), (2, 2))
        assert corank_powers(A, linear_sum_poly(2), 3) == [0, 2, 4, 4]

    def test_rejects_constant_term(self):
        A = MonomialQuotientAlgebra(PrimeModulus(2), (2, 2))
        with pytest.raises(ValueError):
            corank_powers(A, SparsePolynomial.parse("1+T1", 2), 2)

    def test_linear_sum_rank_against_dense(self):
        for p, caps in [(2, (3, 3)), (3, (2, 4)), (2, (2, 2, 2)), (5, (3, 3))]:
            A = MonomialQuotientAlgebra(PrimeModulus(p), caps)
            G = mult_operator(A, linear_sum_poly(len(caps))).entries
            M = np.eye(A.dim, dtype=np.int64)
            for c in range(0, A.dim + 1):
                assert linear_sum_rank(caps, c, p) == rank_oracle(M.tolist(), p)
                M = M @ G % p
