import pytest
from hypothesis import given, strategies as st

from smale_lab.cstar import (
    CStarElement,
    CStarPoly,
    check_smale,
    check_strong_forms,
    cstar_derivative_eval,
    cstar_dynamics_check,
    cstar_eval,
    degree2_higher_order,
    degree2_identity_residual,
    enumerate_critical_set,
    is_cstar_normalized,
)
from smale_lab.errors import CapacityError, DomainError, PreconditionError
from smale_lab.polycore import evaluate, from_roots
from smale_lab.rng import Stream
from smale_lab.smale import ds_at, s_at

coords_strategy = st.lists(
    st.builds(
        complex,
        st.floats(-4, 4, allow_nan=False, allow_infinity=False),
        st.floats(-4, 4, allow_nan=False, allow_infinity=False),
    ),
    min_size=1,
    max_size=8,
)


def rand_element(st_: Stream, k: int, radius: float = 4.0) -> CStarElement:
    return CStarElement(tuple(st_.complex_in_disk(radius) for _ in range(k)))


class TestAlgebra:
    @given(coords_strategy)
    def test_cstar_identity(self, coords):
        x = CStarElement(tuple(coords))
        lhs = (x * x.star()).norm()
        rhs = x.norm() ** 2
        assert lhs == pytest.approx(rhs, rel=1e-13, abs=1e-13)

    def test_cstar_identity_seeded_bulk(self):
        stream = Stream(1234)
        for trial in range(10_000):
            k = (trial % 8) + 1
            x = rand_element(stream, k)
            lhs = (x * x.star()).norm()
            rhs = x.norm() ** 2
            assert abs(lhs - rhs) <= 1e-13 * max(1.0, rhs)

    def test_dimension_mismatch(self):
        with pytest.raises(DomainError):
            CStarElement((1j,)) + CStarElement((1j, 2j))

    def test_sup_norm(self):
        assert CStarElement((3 + 4j, 1 + 0j)).norm() == 5.0


class TestEvaluation:
    def test_square_pointwise(self):
        P = CStarPoly((CStarElement((0j, 0j)), CStarElement((0j, 0j))))
        z = CStarElement((1 + 0j, 2 + 0j))
        assert cstar_eval(P, z).coords == ((1 + 0j), (4 + 0j))
        assert cstar_derivative_eval(P, z).coords == ((2 + 0j), (4 + 0j))

    def test_hand_expansion(self):
        P = CStarPoly((CStarElement((1 + 0j, 0j)), CStarElement((0j, 1 + 0j))))
        z = CStarElement((2 + 0j, 2 + 0j))
        assert cstar_eval(P, z).coords == ((2 + 0j), (2 + 0j))

    def test_k1_reduction(self):
        stream = Stream(88)
        roots = [stream.complex_in_disk(2.0) for _ in range(4)]
        P = CStarPoly(tuple(CStarElement((r,)) for r in roots))
        p = from_roots(roots)
        for _ in range(50):
            z = stream.complex_in_disk(3.0)
            ze = CStarElement((z,))
            assert abs(cstar_eval(P, ze).coords[0] - evaluate(p, z)) <= 1e-12 * (
                1 + abs(evaluate(p, z))
            )

    def test_degree2_derivative_is_2z_minus_sum(self):
        stream = Stream(89)
        for _ in range(30):
            a, b, z = (rand_element(stream, 3) for _ in range(3))
            got = cstar_derivative_eval(CStarPoly((a, b)), z)
            for t in range(3):
                want = 2 * z.coords[t] - (a.coords[t] + b.coords[t])
                assert abs(got.coords[t] - want) <= 1e-12 * (1 + abs(want))

    def test_derivative_cross_check_coordinate_poly(self):
        stream = Stream(90)
        roots = tuple(rand_element(stream, 2, 2.0) for _ in range(5))
        P = CStarPoly(roots)
        z = rand_element(stream, 2, 3.0)
        got = cstar_derivative_eval(P, z)
        for t in range(2):
            p = P.coordinate_poly(t)
            from smale_lab.polycore import derivative

            want = evaluate(derivative(p), z.coords[t])
            assert abs(got.coords[t] - want) <= 1e-10 * (1 + abs(want))

    def test_dim_mismatch(self):
        P = CStarPoly((CStarElement((0j,)), CStarElement((1 + 0j,))))
        with pytest.raises(DomainError):
            cstar_eval(P, CStarElement((0j, 0j)))


class TestCriticalSet:
    def test_degree2_single_element(self):
        stream = Stream(91)
        a, b = rand_element(stream, 4, 2.0), rand_element(stream, 4, 2.0)
        crit = enumerate_critical_set(CStarPoly((a, b)))
        assert crit.product_size == 1
        (w,) = list(crit.elements())
        for t in range(4):
            assert abs(w.coords[t] - (a.coords[t] + b.coords[t]) / 2) <= 1e-10

    def test_degree3_dim2_product(self):
        stream = Stream(92)
        roots = tuple(rand_element(stream, 2, 2.0) for _ in range(3))
        crit = enumerate_critical_set(CStarPoly(roots))
        assert crit.product_size == 4
        assert sum(1 for _ in crit.elements()) == 4

    def test_k1_classical_count(self):
        stream = Stream(93)
        roots = tuple(CStarElement((stream.complex_in_disk(2.0),)) for _ in range(5))
        crit = enumerate_critical_set(CStarPoly(roots))
        assert sum(crit.per_coordinate[0].multiplicities) == 4

    def test_capacity_error(self):
        stream = Stream(94)
        roots = tuple(rand_element(stream, 3, 2.0) for _ in range(4))
        with pytest.raises(CapacityError):
            enumerate_critical_set(CStarPoly(roots), cap=10)


class TestCheckSmale:
    def test_degree2_equalities(self):
        stream = Stream(95)
        for trial in range(50):
            st_ = stream.derive(trial)
            k = (trial % 4) + 1
            a, b, z = (rand_element(st_, k) for _ in range(3))
            try:
                v = check_smale(CStarPoly((a, b)), z)
            except PreconditionError:
                continue
            assert v.min_ratio == pytest.approx(0.5, abs=1e-9)
            assert v.max_ratio == pytest.approx(0.5, abs=1e-9)
            assert v.sharp_pass and v.dual_pass and v.weak_pass

    def test_k1_reduction_to_scalar(self):
        stream = Stream(96)
        roots = [stream.complex_in_disk(2.0) for _ in range(4)]
        P = CStarPoly(tuple(CStarElement((r,)) for r in roots))
        p = from_roots(roots)
        for _ in range(20):
            z = stream.complex_in_disk(4.0)
            try:
                v = check_smale(P, CStarElement((z,)))
                lo = s_at(p, z).ratio
                hi = ds_at(p, z).ratio
            except PreconditionError:
                continue
            assert v.min_ratio == pytest.approx(lo, rel=1e-12, abs=1e-12)
            assert v.max_ratio == pytest.approx(hi, rel=1e-12, abs=1e-12)

    def test_exhaustive_enumeration_is_oracle(self):
        # the min over the full product set equals the min over brute-force
        # coordinate combinations computed independently
        stream = Stream(97)
        roots = tuple(rand_element(stream, 2, 2.0) for _ in range(3))
        P = CStarPoly(roots)
        z = rand_element(stream, 2, 3.0)
        v = check_smale(P, z)
        crit = enumerate_critical_set(P)
        dval = cstar_derivative_eval(P, z).norm()
        ratios = []
        for w in crit.elements():
            pz = cstar_eval(P, z)
            pw = cstar_eval(P, w)
            num = (pz - pw).norm()
            dist = (z - w).norm()
            ratios.append(num / dist / dval)
        assert v.min_ratio == pytest.approx(min(ratios), rel=1e-9)
        assert v.max_ratio == pytest.approx(max(ratios), rel=1e-9)

    def test_min_over_product_le_min_over_subset(self):
        stream = Stream(98)
        roots = tuple(rand_element(stream, 3, 2.0) for _ in range(4))
        P = CStarPoly(roots)
        z = rand_element(stream, 3, 3.0)
        crit = enumerate_critical_set(P)
        dval = cstar_derivative_eval(P, z).norm()

        def ratio(w):
            pzw = (cstar_eval(P, z) - cstar_eval(P, w)).norm()
            return pzw / (z - w).norm() / dval

        full_min = min(ratio(w) for w in crit.elements())
        # coordinate-greedy subset: pick per-coordinate best independently
        greedy = []
        for t in range(3):
            pool = crit.per_coordinate[t].roots
            zt = z.coords[t]
            pt = P.coordinate_poly(t)
            best = min(
                pool,
                key=lambda w: abs(evaluate(pt, zt) - evaluate(pt, w)) / abs(zt - w),
            )
            greedy.append(best)
        subset_min = ratio(CStarElement(tuple(greedy)))
        assert full_min <= subset_min + 1e-12


class TestStrongForms:
    def test_degree2_both_strong_flags(self):
        stream = Stream(99)
        for trial in range(50):
            st_ = stream.derive(trial)
            k = (trial % 4) + 1
            a, b, z = (rand_element(st_, k) for _ in range(3))
            try:
                v = check_strong_forms(CStarPoly((a, b)), z)
            except PreconditionError:
                continue
            assert v.strong_smale_pass
            assert v.strong_dual_pass

    def test_strong_implies_sharp(self):
        stream = Stream(100)
        for trial in range(60):
            st_ = stream.derive(trial)
            roots = tuple(rand_element(st_, 2, 2.0) for _ in range(3))
            z = rand_element(st_, 2, 3.0)
            try:
                v = check_strong_forms(CStarPoly(roots), z)
            except PreconditionError:
                continue
            if v.strong_smale_pass:
                assert v.sharp_pass

    def test_k1_strong_equals_ratio_check(self):
        stream = Stream(101)
        roots = tuple(CStarElement((stream.complex_in_disk(2.0),)) for _ in range(3))
        P = CStarPoly(roots)
        for _ in range(20):
            z = CStarElement((stream.complex_in_disk(3.0),))
            try:
                v = check_strong_forms(P, z)
            except PreconditionError:
                continue
            assert v.strong_smale_pass == v.sharp_pass
            assert v.strong_dual_pass == v.dual_pass


class TestDegree2Identity:
    def test_zero_roots(self):
        a = CStarElement((0j, 0j, 0j))
        z = CStarElement((1 + 0j, 1 + 0j, 1 + 0j))
        assert degree2_identity_residual(a, a, z) <= 1e-15

    def test_hand_arithmetic_k1(self):
        a = CStarElement((0j,))
        b = CStarElement((2 + 0j,))
        z = CStarElement((5 + 0j,))
        # |P(5) - P(1)|^2 = 256 and (1/4)|5-1|^2 |P'(5)|^2 = 256
        assert degree2_identity_residual(a, b, z) <= 1e-12

    def test_seeded_k8(self):
        stream = Stream(200)
        for trial in range(200):
            st_ = stream.derive(trial)
            a, b, z = (rand_element(st_, 8) for _ in range(3))
            assert degree2_identity_residual(a, b, z) <= 1e-10

    def test_higher_order_quarter_k1(self):
        stream = Stream(201)
        for _ in range(50):
            a, b, z = (rand_element(stream, 1) for _ in range(3))
            try:
                val = degree2_higher_order(a, b, z)
            except PreconditionError:
                continue
            assert val == pytest.approx(0.25, abs=1e-9)

    def test_higher_order_hand_value(self):
        zero = CStarElement((0j, 0j))
        z = CStarElement((1 + 0j, 2 + 0j))
        assert degree2_higher_order(zero, zero, z) == pytest.approx(0.25, abs=1e-12)

    def test_higher_order_bound_seeded_k4(self):
        stream = Stream(202)
        for trial in range(200):
            st_ = stream.derive(trial)
            a, b, z = (rand_element(st_, 4) for _ in range(3))
            try:
                val = degree2_higher_order(a, b, z)
            except PreconditionError:
                continue
            assert val <= 0.25 + 1e-9


class TestCStarDynamics:
    def _normalized_quadratic(self, k: int) -> CStarPoly:
        # roots {0, -1} in every coordinate: P(z) = z^2 + z pointwise
        zero = CStarElement((0j,) * k)
        minus1 = CStarElement((-1 + 0j,) * k)
        return CStarPoly((zero, minus1))

    def test_k1_quadratic(self):
        rep = cstar_dynamics_check(self._normalized_quadratic(1))
        assert rep.overall_pass
        assert rep.records[0].ratio == pytest.approx(0.5, rel=1e-12)
        assert rep.records[0].verdict == "converged_to_zero"

    def test_k2_diagonal(self):
        rep = cstar_dynamics_check(self._normalized_quadratic(2))
        assert rep.overall_pass

    def test_seeded_normalized_cubic_k1(self):
        # roots {0, a, 1/a} so that P'(0) = product of nonzero roots = 1
        stream = Stream(300)
        verdicts = []
        for trial in range(10):
            st_ = stream.derive(trial)
            a = st_.complex_in_annulus(0.5, 2.0)
            P = CStarPoly(
                (
                    CStarElement((0j,)),
                    CStarElement((a,)),
                    CStarElement((1 / a,)),
                )
            )
            assert is_cstar_normalized(P)
            rep = cstar_dynamics_check(P)
            verdicts.append(rep.overall_pass)
        # verdicts recorded; the conjectured statement is proved for
        # degree 3 so every trial should find a converging witness
        assert all(verdicts)

    def test_non_normalized_rejected(self):
        stream = Stream(301)
        P = CStarPoly((rand_element(stream, 2), rand_element(stream, 2)))
        if not is_cstar_normalized(P):
            with pytest.raises(PreconditionError):
                cstar_dynamics_check(P)


class TestPolyType:
    def test_degree_bound(self):
        with pytest.raises(DomainError):
            CStarPoly((CStarElement((0j,)),))

    def test_mixed_dims_rejected(self):
        with pytest.raises(DomainError):
            CStarPoly((CStarElement((0j,)), CStarElement((0j, 0j))))

    def test_json_roundtrip(self):
        stream = Stream(302)
        P = CStarPoly(tuple(rand_element(stream, 3, 2.0) for _ in range(3)))
        Q = CStarPoly.from_json(P.to_json())
        assert Q == P
