"""Heller-shift dimension calculus and tensor-power core sequences."""

import math
from fractions import Fraction

import pytest

from repcalc.errors import UnsupportedCaseError
from repcalc.syzygies import (
    AsymptoticProfile,
    GroupShape,
    ModuleSpec,
    StableClass,
    abs_moment_normal,
    asymptotic_profile,
    betti,
    class_product,
    convergence_report,
    core_dims,
    gamma_trunc,
    moments,
    power_coefficients,
    projective_excess,
    recurrence_order,
    socle_core_dims,
    socle_dim,
    syzygy_dim,
)

V4 = GroupShape(2, (1, 1))
C4 = GroupShape(2, (2,))
E8 = GroupShape(2, (1, 1, 1))


class TestGroupShape:
    def test_basic_invariants(self):
        assert V4.r == 2
        assert V4.order == 4
        assert E8.order == 8
        assert GroupShape(3, (2, 1)).order == 27

    def test_parse(self):
        assert GroupShape.parse("2:1,1") == V4
        assert GroupShape.parse("3:2") == GroupShape(3, (2,))

    def test_rejects_bad_shapes(self):
        with pytest.raises(ValueError):
            GroupShape(4, (1,))
        with pytest.raises(ValueError):
            GroupShape(2, ())
        with pytest.raises(ValueError):
            GroupShape(2, (0,))
        with pytest.raises(ValueError):
            GroupShape.parse("2;1,1")


class TestDimensionFormulas:
    def test_betti_is_binomial(self):
        # minimal resolution of k over a complete intersection of r quadrics
        assert [betti(V4, i) for i in range(5)] == [1, 2, 3, 4, 5]
        assert [betti(E8, i) for i in range(4)] == [1, 3, 6, 10]
        with pytest.raises(ValueError):
            betti(V4, -1)

    def test_gamma_trunc_alternating_sums(self):
        # r = 1: betti is 1, 1, 1, ... so the alternating sum flips 1, 0
        assert [gamma_trunc(C4, i) for i in range(4)] == [1, 0, 1, 0]
        assert [gamma_trunc(V4, i) for i in range(5)] == [1, 1, 2, 2, 3]

    def test_syzygy_dims_v4(self):
        # dim of the n-th shift over V4 is 2|n| + 1
        for n in range(-6, 7):
            assert syzygy_dim(V4, n) == 2 * abs(n) + 1

    def test_syzygy_dim_sign_parity(self):
        # dimension is gamma * |G| plus or minus 1 according to parity
        for n in range(-5, 6):
            if n != 0:
                assert (syzygy_dim(E8, n) - (-1) ** n) % E8.order == 0

    def test_socle_dims(self):
        assert socle_dim(V4, 0) == 1
        # positive shifts: socle is the previous Betti number
        assert [socle_dim(V4, n) for n in (1, 2, 3)] == [1, 2, 3]
        # negative shifts: socle is dual to the top of the positive shift
        assert [socle_dim(V4, n) for n in (-1, -2, -3)] == [2, 3, 4]


class TestStableClasses:
    def test_product_convolves_shifts(self):
        x = StableClass.make({1: 1})
        y = StableClass.make({-1: 1, 2: 2})
        z = class_product(x, y, V4)
        assert z.shift_dict == {0: 1, 3: 2}

    def test_dimension_multiplicative(self):
        x = StableClass.make({1: 2, -2: 1}, Fraction(1, 2))
        y = StableClass.make({0: 1, 3: 1})
        assert class_product(x, y, V4).dim(V4) == x.dim(V4) * y.dim(V4)

    def test_projective_excess_balances_dimension(self):
        for m in range(-4, 5):
            for n in range(-4, 5):
                if m == 0 or n == 0 or m + n == 0:
                    continue
                lhs = syzygy_dim(V4, m) * syzygy_dim(V4, n)
                rhs = syzygy_dim(V4, m + n) + projective_excess(m, n, V4) * V4.order
                assert lhs == rhs

    def test_projective_excess_nonnegative(self):
        for m in range(1, 6):
            for n in range(1, 6):
                assert projective_excess(m, n, E8) >= 0


class TestModuleSpec:
    def test_parse(self):
        M = ModuleSpec.parse("1:1,-1:1")
        assert M.as_dict() == {1: 1, -1: 1}
        assert M.gamma == 2

    def test_merges_duplicates(self):
        assert ModuleSpec.parse("1:1,1:2").as_dict() == {1: 3}

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            ModuleSpec.parse("1:-1")
        with pytest.raises(ValueError):
            ModuleSpec.parse("0:0")
        with pytest.raises(ValueError):
            ModuleSpec.parse("nonsense")


def closed_form_omega_pm(n: int) -> int:
    # core dims over V4 for the shift-by-plus-and-minus-one module
    if n % 2 == 0:
        return 2**n + 2 * n * math.comb(n, n // 2)
    return 2**n + 4 * n * math.comb(n - 1, (n - 1) // 2)


class TestCoreDims:
    def test_shifted_trivial_module(self):
        # M = Omega^1(k): powers are single shifts, core dim 2n + 1
        M = ModuleSpec.parse("1:1")
        assert core_dims(M, 6, V4) == [2 * n + 1 for n in range(1, 7)]

    def test_constant_case(self):
        M = ModuleSpec.parse("0:3")
        assert core_dims(M, 8, V4) == [3**n for n in range(1, 9)]

    def test_closed_form_mixed_shifts(self):
        M = ModuleSpec.parse("1:1,-1:1")
        assert core_dims(M, 12, V4) == [closed_form_omega_pm(n) for n in range(1, 13)]

    def test_closed_form_k_plus_shift(self):
        M = ModuleSpec.parse("0:1,1:1")
        assert core_dims(M, 12, V4) == [(n + 1) * 2**n for n in range(1, 13)]

    def test_socle_core_small_values(self):
        # soc core of the n-th power: weights are socle dims of the shifts
        M = ModuleSpec.parse("1:1,-1:1")
        # n = 1: soc(Omega^1) + soc(Omega^-1) = 1 + 2
        # n = 2: shifts 2, 0, -2 with multiplicities 1, 2, 1 -> 2 + 2*1 + 3 = 7
        assert socle_core_dims(M, 2, V4) == [3, 7]

    def test_socle_bounded_by_core(self):
        for text in ("1:1,-1:1", "0:1,1:1", "0:2,2:1"):
            M = ModuleSpec.parse(text)
            c = core_dims(M, 30, V4)
            d = socle_core_dims(M, 30, V4)
            assert all(dn <= cn for dn, cn in zip(d, c))

    def test_power_coefficients_normalized(self):
        M = ModuleSpec.parse("1:2,-2:1,0:1")
        g = M.gamma
        for n in (1, 3, 10, 25, 50):
            coeffs = power_coefficients(M, n)
            assert sum(coeffs.values()) == g**n


class TestMoments:
    def test_symmetric_two_point(self):
        g, mu, s2 = moments(ModuleSpec.parse("1:1,-1:1"))
        assert (g, mu, s2) == (2, 0, 1)

    def test_bernoulli(self):
        g, mu, s2 = moments(ModuleSpec.parse("0:1,1:1"))
        assert (g, mu, s2) == (2, Fraction(1, 2), Fraction(1, 4))

    def test_constant(self):
        g, mu, s2 = moments(ModuleSpec.parse("0:5"))
        assert (g, mu, s2) == (5, 0, 0)

    def test_abs_moment_normal(self):
        assert abs_moment_normal(0) == 1.0
        assert abs(abs_moment_normal(1) - math.sqrt(2 / math.pi)) < 1e-12
        assert abs_moment_normal(2) == 1.0
        assert abs(abs_moment_normal(3) - 2 * math.sqrt(2 / math.pi)) < 1e-12
        assert abs_moment_normal(4) == 3.0


class TestProfiles:
    def test_mean_zero_case(self):
        prof = asymptotic_profile(ModuleSpec.parse("1:1,-1:1"), V4)
        assert prof.case == "mean_zero_var_nonzero"
        assert prof.base == 2
        assert prof.exponent == Fraction(1, 2)
        # C = sqrt(8/pi): D/2 * E|Z| = 2 * sqrt(2/pi)
        assert abs(prof.constant - math.sqrt(8 / math.pi)) < 1e-12

    def test_mean_nonzero_case(self):
        prof = asymptotic_profile(ModuleSpec.parse("0:1,1:1"), V4)
        assert prof.case == "mean_nonzero"
        assert (prof.base, prof.exponent, prof.constant) == (2, 1, 1.0)

    def test_constant_case(self):
        prof = asymptotic_profile(ModuleSpec.parse("0:4"), V4)
        assert prof.case == "constant"
        assert prof.constant == 1.0

    def test_socle_profile(self):
        prof = asymptotic_profile(ModuleSpec.parse("1:1,-1:1"), V4, "socle")
        # leading factor 1 instead of D/2: C = sqrt(2/pi)
        assert abs(prof.constant - math.sqrt(2 / math.pi)) < 1e-12

    def test_rank_one_rejected(self):
        with pytest.raises(UnsupportedCaseError):
            asymptotic_profile(ModuleSpec.parse("1:1,-1:1"), C4)

    def test_rank_one_constant_allowed(self):
        prof = asymptotic_profile(ModuleSpec.parse("0:2"), C4)
        assert prof.case == "constant"

    def test_bad_target(self):
        with pytest.raises(ValueError):
            asymptotic_profile(ModuleSpec.parse("1:1"), V4, "everything")


class TestConvergence:
    def test_exact_ratio_for_polynomial_times_power(self):
        M = ModuleSpec.parse("0:1,1:1")
        prof = asymptotic_profile(M, V4)
        seq = core_dims(M, 100, V4)
        for n, ratio in convergence_report(seq, prof, [10, 50, 100]):
            assert abs(ratio - (1 + 1 / n)) < 1e-12

    def test_constant_case_ratio_is_one(self):
        M = ModuleSpec.parse("0:3")
        prof = asymptotic_profile(M, V4)
        seq = core_dims(M, 20, V4)
        for _, ratio in convergence_report(seq, prof, [5, 20]):
            assert ratio == 1.0


class TestRecurrence:
    def test_geometric_sequence_order_one(self):
        seq = [3**n for n in range(1, 40)]
        assert recurrence_order(seq, 3, (5, 30)) == (1, [Fraction(3)])

    def test_polynomial_times_power_order_two(self):
        seq = [(n + 1) * 2**n for n in range(1, 90)]
        d, coeffs = recurrence_order(seq, 6, (10, 80))
        assert d == 2
        assert coeffs == [Fraction(4), Fraction(-4)]

    def test_central_binomial_sequence_has_none(self):
        M = ModuleSpec.parse("1:1,-1:1")
        seq = core_dims(M, 85, V4)
        assert recurrence_order(seq, 6, (10, 80)) is None

    def test_window_too_short(self):
        with pytest.raises(ValueError):
            recurrence_order([1, 2, 4, 8], 3, (1, 4))

    def test_fibonacci(self):
        seq = [1, 1]
        for _ in range(40):
            seq.append(seq[-1] + seq[-2])
        assert recurrence_order(seq, 4, (5, 35)) == (2, [Fraction(1), Fraction(1)])
