"""Atlases, structure groupoids, bounded point equality, the circle functor."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quasifolds.atlas import (Atlas, Chart, CircleArrow, Interval,
                              QuasifoldPointHandle, StructureGroupoid,
                              Transition, build_groupoid, circle_arrow_compose,
                              phi_arrow, phi_object)
from quasifolds.catalog import (get_atlas, rational_quotient_atlas,
                                reflection_orbifold_atlas, t_alpha_atlas,
                                t_alpha_duplicated_atlas, z_alpha_lattice)
from quasifolds.errors import (InconsistentTransitionError, NotComposableError,
                               QuasifoldError)
from quasifolds.exact import AffineElement, Trit, qa
from quasifolds.groupoid import Arrow, NebulaPoint, arrow_compose
from quasifolds.groups import FiniteMatrixGroup, TranslationLattice


def pt(x, chart="main"):
    return NebulaPoint(chart, (x,))


class TestAtlasValidation:
    def test_duplicate_chart_ids_rejected(self):
        lat = z_alpha_lattice()
        with pytest.raises(QuasifoldError):
            Atlas((Chart("c", lat, None), Chart("c", lat, None)))

    def test_dense_group_needs_global_domain(self):
        with pytest.raises(QuasifoldError):
            Chart("c", z_alpha_lattice(), (Interval(qa(0), qa(1)),))

    def test_incompatible_transition_rejected(self):
        lat = z_alpha_lattice()
        # Conjugating t_1 by x ↦ x/3 gives t_{1/3}, which escapes Z+αZ.
        bad = AffineElement.linear(((Fraction(1, 3),),))
        atlas = Atlas((Chart("a", lat, None), Chart("b", lat, None)),
                      (Transition("a", "b", bad),))
        with pytest.raises(InconsistentTransitionError):
            build_groupoid(atlas)

    def test_builtin_atlases_build(self):
        for name in ("t-alpha", "t-alpha-duplicated", "reflection-orbifold",
                     "rational-quotient"):
            assert build_groupoid(get_atlas(name)) is not None


class TestWorkedExample:
    """The irrational-torus groupoid at τ = 0 with unit bound."""

    def setup_method(self):
        self.g = build_groupoid(t_alpha_atlas())
        self.zero = pt(qa(0))

    def test_assembly_is_the_nine_by_nine_table(self):
        report = self.g.isotropy_and_assembly(self.zero, 1)
        assert len(report.blocks) == 1
        chart, objects, arrows = report.blocks[0]
        assert chart == "main"
        expected = {qa(n, m) for n in (-1, 0, 1) for m in (-1, 0, 1)}
        assert {o[0] for o in objects} == expected
        assert len(arrows) == 81
        # brute-force cross-check of the arrow set
        got = {(a.src.coords[0], a.map.b[0]) for a in arrows}
        want = {(qa(n, m), qa(n2, m2))
                for n in (-1, 0, 1) for m in (-1, 0, 1)
                for n2 in (-1, 0, 1) for m2 in (-1, 0, 1)}
        assert got == want

    def test_fiber_over_zero(self):
        fiber = self.g.fiber_over(self.zero, 1)
        assert len(fiber) == 9
        assert all(a.trg == self.zero for a in fiber)
        sources = {a.src.coords[0] for a in fiber}
        assert sources == {qa(n, m) for n in (-1, 0, 1) for m in (-1, 0, 1)}

    def test_arrows_between(self):
        arrows = self.g.arrows_between(self.zero, pt(qa(2, 3)), 3)
        assert [a.map.b[0] for a in arrows] == [qa(2, 3)]

    def test_isotropy_is_trivial(self):
        report = self.g.isotropy_and_assembly(self.zero, 1)
        assert len(report.isotropy) == 1
        assert report.isotropy[0].is_unit


class TestBoundedEquality:
    def setup_method(self):
        self.g = build_groupoid(t_alpha_atlas())

    def test_equal_within_bound(self):
        assert self.g.same_point(pt(qa(0)), pt(qa(1, 1)), 1) is Trit.TRUE

    def test_certified_not_equal(self):
        assert self.g.same_point(pt(qa(0)), pt(qa(0, Fraction(1, 2))), 2) \
            is Trit.FALSE

    def test_unknown_beyond_bound(self):
        assert self.g.same_point(pt(qa(0)), pt(qa(30, 30)), 2) is Trit.UNKNOWN

    def test_iff_with_arrows_within_bound(self):
        # zero false positives / negatives within the bound
        cases = [(pt(qa(0)), pt(qa(1, -1)), 2),
                 (pt(qa(0)), pt(qa(0, Fraction(1, 3))), 2),
                 (pt(qa(Fraction(1, 2))), pt(qa(Fraction(5, 2), 1)), 2)]
        for x, y, bound in cases:
            has_arrow = bool(self.g.arrows_between(x, y, bound))
            status = self.g.same_point(x, y, bound)
            assert has_arrow == (status is Trit.TRUE)

    def test_handles(self):
        h0 = QuasifoldPointHandle(self.g, pt(qa(0)))
        h1 = QuasifoldPointHandle(self.g, pt(qa(3, -2)))
        assert h0.same_as(h1, 3) is Trit.TRUE
        h2 = QuasifoldPointHandle(self.g, pt(qa(Fraction(1, 5))))
        assert h0.same_as(h2, 3) is Trit.FALSE


class TestDuplicatedAtlas:
    def test_cross_copy_equality_and_connections(self):
        g = build_groupoid(t_alpha_duplicated_atlas())
        a0 = NebulaPoint("a", (qa(0),))
        b0 = NebulaPoint("b", (qa(0),))
        assert g.same_point(a0, b0, 1) is Trit.TRUE
        report = g.isotropy_and_assembly(a0, 1)
        assert [(cid, len(objs), len(arrows))
                for cid, objs, arrows in report.blocks] == \
            [("a", 9, 81), ("b", 9, 81)]
        assert len(report.connections) == 1

    def test_cross_copy_not_equal_certified(self):
        g = build_groupoid(t_alpha_duplicated_atlas())
        assert g.same_point(NebulaPoint("a", (qa(0),)),
                            NebulaPoint("b", (qa(0, Fraction(1, 2)),)),
                            2) is Trit.FALSE


class TestReflectionOrbifold:
    def setup_method(self):
        self.g = build_groupoid(reflection_orbifold_atlas())

    def test_isotropy_at_fixed_point(self):
        report = self.g.isotropy_and_assembly(NebulaPoint("fold", (qa(0),)), 1)
        assert len(report.isotropy) == 2

    def test_reflection_identifies_mirror_points(self):
        one = NebulaPoint("fold", (qa(1),))
        minus = NebulaPoint("fold", (qa(-1),))
        assert self.g.same_point(one, minus, 1) is Trit.TRUE
        assert self.g.same_point(one, NebulaPoint("fold", (qa(2),)), 2) \
            is Trit.FALSE

    def test_cross_chart_equality(self):
        assert self.g.same_point(NebulaPoint("fold", (qa(1),)),
                                 NebulaPoint("away", (qa(1),)), 2) is Trit.TRUE

    def test_domain_respected(self):
        with pytest.raises(QuasifoldError):
            self.g.require_point(NebulaPoint("away", (qa(0),)))


class TestRationalQuotient:
    def test_dense_orbit_decisions(self):
        g = build_groupoid(rational_quotient_atlas())
        x = NebulaPoint("main", (qa(0),))
        assert g.same_point(x, NebulaPoint("main", (qa(Fraction(1, 2)),)), 2) \
            is Trit.TRUE
        assert g.same_point(x, NebulaPoint("main", (qa(0, 1),)), 3) \
            is Trit.FALSE


coeff = st.integers(min_value=-3, max_value=3)


class TestGroupoidLaws:
    @given(n1=coeff, m1=coeff, n2=coeff, m2=coeff, xn=coeff, xm=coeff)
    @settings(max_examples=60, deadline=None)
    def test_composition_matches_index_addition(self, n1, m1, n2, m2, xn, xm):
        x = qa(xn, xm)
        a = Arrow(pt(x), AffineElement.translation((qa(n1, m1),)), "main")
        b = Arrow(a.trg, AffineElement.translation((qa(n2, m2),)), "main")
        c = arrow_compose(a, b)
        assert c.map.b[0] == qa(n1 + n2, m1 + m2)

    @given(n=coeff, m=coeff)
    @settings(max_examples=40, deadline=None)
    def test_fiber_arrows_compose_into_fiber(self, n, m):
        g = build_groupoid(t_alpha_atlas())
        fiber = g.fiber_over(pt(qa(n, m)), 1)
        for a in fiber[:3]:
            for b in g.fiber_over(a.src, 1)[:3]:
                combined = arrow_compose(b, a)
                assert combined.trg == pt(qa(n, m))


class TestCircleFunctor:
    def test_phi_on_objects_is_mod_one(self):
        assert phi_object(qa(Fraction(5, 2), -3)) == qa(Fraction(1, 2), -3)

    def test_phi_absorbs_integer_translations(self):
        a = Arrow(pt(qa(0)), AffineElement.translation((qa(4, 0),)), "main")
        ca = phi_arrow(a)
        assert ca.rot == qa(0, 0)

    def test_phi_is_functorial(self):
        a = Arrow(pt(qa(0)), AffineElement.translation((qa(1, 2),)), "main")
        b = Arrow(a.trg, AffineElement.translation((qa(-2, 1),)), "main")
        lhs = phi_arrow(arrow_compose(a, b))
        rhs = circle_arrow_compose(phi_arrow(a), phi_arrow(b))
        assert lhs == rhs

    def test_circle_arrows_compose_only_at_matching_points(self):
        u = CircleArrow(qa(0), qa(0, 1))
        v = CircleArrow(qa(Fraction(1, 2)), qa(0, 1))
        with pytest.raises(NotComposableError):
            circle_arrow_compose(u, v)
