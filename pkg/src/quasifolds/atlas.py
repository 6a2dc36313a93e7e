"""Quasifold atlases and their structure groupoids.

A chart is a domain in R^n together with the countable affine group Γ that
identifies points with the same image in the quasifold; a transition is a
declared affine germ between chart domains compatible with the chart maps.
The structure groupoid has the disjoint union of chart domains as objects and
germs of ev-absorbed local diffeomorphisms as arrows, each represented by a
globally affine map.

Point equality on the quasifold is bounded-decidable: arrows found within a
bound certify "equal"; coefficient/lattice obstructions (computed on a
saturated set of reachable affine cosets) certify "not equal"; otherwise the
answer is inconclusive-at-bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import (InconsistentTransitionError, PrecisionInsufficientError,
                     QuasifoldError)
from .exact import (AffineElement, AlphaWitness, QAlpha, Trit, default_witness,
                    vec_eq)
from .groupoid import Arrow, NebulaPoint, arrow_invert
from .groups import (FiniteMatrixGroup, GroupPresentation,
                     RationalTranslations, TranslationLattice)

__all__ = [
    "Interval", "Chart", "Transition", "Atlas", "StructureGroupoid",
    "QuasifoldPointHandle", "AssemblyReport", "build_groupoid",
    "CircleArrow", "circle_arrow_compose", "circle_arrow_invert",
    "phi_object", "phi_arrow",
]


# ---------------------------------------------------------------------------
# charts and atlases
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Interval:
    """Open interval with optional Q+Qα endpoints (None = unbounded)."""

    lo: Optional[QAlpha] = None
    hi: Optional[QAlpha] = None

    def contains(self, x: QAlpha, witness: AlphaWitness) -> bool:
        if self.lo is not None and witness.compare(x, self.lo) <= 0:
            return False
        if self.hi is not None and witness.compare(self.hi, x) <= 0:
            return False
        return True

    def midpoint(self) -> QAlpha:
        if self.lo is not None and self.hi is not None:
            return (self.lo + self.hi).scale(Fraction(1, 2))
        if self.lo is not None:
            return self.lo + QAlpha(1)
        if self.hi is not None:
            return self.hi - QAlpha(1)
        return QAlpha()


@dataclass(frozen=True)
class Chart:
    """Chart domain + identification group; `label` names the chart map."""

    id: str
    group: GroupPresentation
    domain: Optional[tuple] = None  # tuple[Interval, ...] or None = all of R^n
    label: str = ""

    def __post_init__(self):
        if self.domain is not None:
            dom = tuple(self.domain)
            if len(dom) != self.group.dimension:
                raise QuasifoldError("domain/group dimension mismatch")
            object.__setattr__(self, "domain", dom)
        if self.group.is_dense and self.domain is not None:
            raise QuasifoldError(
                f"chart {self.id}: dense identification group needs a global domain")

    @property
    def dimension(self) -> int:
        return self.group.dimension

    def contains(self, coords: Sequence[QAlpha], witness: AlphaWitness) -> bool:
        if self.domain is None:
            return True
        return all(iv.contains(c, witness) for iv, c in zip(self.domain, coords))


@dataclass(frozen=True)
class Transition:
    """Declared affine germ from chart `src` to chart `dst` (on their overlap)."""

    src: str
    dst: str
    map: AffineElement


@dataclass(frozen=True)
class Atlas:
    charts: tuple
    transitions: tuple = ()

    def __post_init__(self):
        charts = tuple(self.charts)
        ids = [c.id for c in charts]
        if len(set(ids)) != len(ids):
            raise QuasifoldError("duplicate chart ids")
        dims = {c.dimension for c in charts}
        if len(dims) != 1:
            raise QuasifoldError("charts of mixed dimension")
        n = dims.pop()
        trans = list(self.transitions)
        for t in trans:
            if t.src not in ids or t.dst not in ids:
                raise QuasifoldError(f"transition references unknown chart: {t}")
            if t.map.n != n:
                raise QuasifoldError("transition dimension mismatch")
        # the transition graph always contains each chart's identity transition
        for c in charts:
            if not any(t.src == c.id and t.dst == c.id and t.map.is_identity
                       for t in trans):
                trans.append(Transition(c.id, c.id, AffineElement.identity(n)))
        object.__setattr__(self, "charts", charts)
        object.__setattr__(self, "transitions", tuple(trans))

    @property
    def dimension(self) -> int:
        return self.charts[0].dimension

    def chart(self, cid: str) -> Chart:
        for c in self.charts:
            if c.id == cid:
                return c
        raise KeyError(cid)


# ---------------------------------------------------------------------------
# reachable affine cosets (for certified not-equal)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _Coset:
    """base + Z-span(gens) (+ all rational translations when rational_full),
    inside one chart: the set of points a group/transition word can reach."""

    chart: str
    base: tuple
    gens: tuple
    rational_full: bool = False

    def same_as(self, other: "_Coset") -> bool:
        if (self.chart != other.chart
                or self.rational_full != other.rational_full
                or len(self.gens) != len(other.gens)):
            return False
        if set(self.gens) != set(other.gens):
            return False
        return self._contains_vec(tuple(b - a for a, b in zip(self.base, other.base)))

    def _contains_vec(self, d) -> Optional[bool]:
        if self.rational_full:
            if self.gens:
                return None  # mixed case: no certificate
            return all(v.q == 0 for v in d)
        if not self.gens:
            return all(v.is_zero for v in d)
        status = TranslationLattice(self.gens).contains_value(d)
        if status is Trit.UNKNOWN:
            return None
        return status is Trit.TRUE

    def contains_point(self, coords) -> Optional[bool]:
        return self._contains_vec(tuple(b - a for a, b in zip(self.base, coords)))


def _saturate(coset: _Coset, group: GroupPresentation):
    """Close a coset under a chart group; returns list of cosets or None if
    the group kind admits no certificate."""
    if isinstance(group, TranslationLattice):
        gens = list(coset.gens)
        for g in group.generators:
            if g not in gens:
                gens.append(g)
        return [_Coset(coset.chart, coset.base, tuple(gens), coset.rational_full)]
    if isinstance(group, RationalTranslations):
        return [_Coset(coset.chart, coset.base, coset.gens, True)]
    if isinstance(group, FiniteMatrixGroup):
        out = []
        for g in group.elements:
            base = g.apply(coset.base)
            gens = tuple(
                tuple(sum((v.scale(g.a[i][j]) for j, v in enumerate(vec)), QAlpha())
                      for i in range(g.n))
                for vec in coset.gens)
            out.append(_Coset(coset.chart, base, gens, coset.rational_full))
        return out
    return None  # GeneratedGroup etc.: absence never certified


# ---------------------------------------------------------------------------
# structure groupoid
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuasifoldPointHandle:
    """Opaque handle for a quasifold point; equality is three-valued."""

    groupoid: "StructureGroupoid"
    point: NebulaPoint
    default_bound: int = 3

    def same_as(self, other: "QuasifoldPointHandle", bound: Optional[int] = None) -> Trit:
        if self.groupoid is not other.groupoid:
            raise QuasifoldError("handles from different groupoids")
        return self.groupoid.same_point(self.point, other.point,
                                        bound or self.default_bound)

    def __str__(self):
        return f"[{self.point}]"


@dataclass(frozen=True)
class AssemblyReport:
    point: NebulaPoint
    bound: int
    blocks: tuple      # (chart_id, objects: tuple[coords], arrows: tuple[Arrow])
    connections: tuple  # Arrow per adjacent chart pair
    isotropy: tuple    # arrows fixing the representative

    def to_json(self):
        return {
            "point": self.point.to_json(),
            "bound": self.bound,
            "blocks": [
                {
                    "chart": cid,
                    "objects": [[str(c) for c in o] for o in objs],
                    "arrows": [a.to_json() for a in arrows],
                }
                for cid, objs, arrows in self.blocks
            ],
            "connections": [a.to_json() for a in self.connections],
            "isotropy": {
                "order": len(self.isotropy),
                "arrows": [a.to_json() for a in self.isotropy],
            },
        }


class StructureGroupoid:
    """Arrow calculus over an atlas: bounded word generation, fibers,
    three-valued point equality, assembly reports."""

    def __init__(self, atlas: Atlas, witness: Optional[AlphaWitness] = None,
                 route_cap: int = 8):
        self.atlas = atlas
        self.witness = witness or default_witness()
        self.route_cap = route_cap
        self._letters = self._transition_letters()

    # -- structural helpers --
    def _transition_letters(self):
        letters = {}
        for t in self.atlas.transitions:
            letters.setdefault(t.src, [])
            letters.setdefault(t.dst, [])
            if (t.dst, t.map) not in [(d, m) for d, m in letters[t.src]]:
                letters[t.src].append((t.dst, t.map))
            inv = t.map.invert()
            if (t.src, inv) not in [(d, m) for d, m in letters[t.dst]]:
                letters[t.dst].append((t.src, inv))
        return letters

    def valid_point(self, point: NebulaPoint) -> bool:
        chart = self.atlas.chart(point.chart)
        return chart.contains(point.coords, self.witness)

    def require_point(self, point: NebulaPoint) -> NebulaPoint:
        if not self.valid_point(point):
            raise QuasifoldError(f"point {point} outside its chart domain")
        return point

    # -- word generation --
    def _states_from(self, v: NebulaPoint, bound: int):
        """Deterministic BFS over (chart, affine word map) pairs starting at v.
        Words alternate a full group layer (elements enumerated within bound)
        with single transition letters, up to `bound` transitions."""
        def group_layer(states):
            out = []
            for chart_id, m in states:
                chart = self.atlas.chart(chart_id)
                pt = m.apply(v.coords)
                for g in chart.group.enumerate(bound):
                    m2 = g.compose(m)
                    if chart.contains(m2.apply(v.coords), self.witness):
                        out.append((chart_id, m2))
            return out

        seen = []
        seen_set = set()

        def add_all(states):
            fresh = []
            for st in states:
                key = (st[0], st[1])
                if key not in seen_set:
                    seen_set.add(key)
                    seen.append(st)
                    fresh.append(st)
            return fresh

        frontier = add_all(group_layer([(v.chart, AffineElement.identity(len(v.coords)))]))
        for _ in range(bound):
            next_states = []
            for chart_id, m in frontier:
                pt = m.apply(v.coords)
                for dst, tmap in self._letters.get(chart_id, ()):
                    if tmap.is_identity and dst == chart_id:
                        continue
                    img = tmap.apply(pt)
                    if not self.atlas.chart(dst).contains(img, self.witness):
                        continue
                    next_states.append((dst, tmap.compose(m)))
            frontier = add_all(group_layer(next_states))
            if not frontier:
                break
        return seen

    def arrows_from(self, v: NebulaPoint, bound: int) -> tuple:
        self.require_point(v)
        return tuple(Arrow(v, m, chart_id)
                     for chart_id, m in self._states_from(v, bound))

    def fiber_over(self, v: NebulaPoint, bound: int) -> tuple:
        """All arrows with target v and word length within bound."""
        return tuple(arrow_invert(a) for a in self.arrows_from(v, bound))

    def arrows_between(self, v: NebulaPoint, w: NebulaPoint, bound: int) -> tuple:
        """Arrows v → w within bound; empty is not a nonexistence certificate."""
        self.require_point(v)
        self.require_point(w)
        out, seen = [], set()
        for chart_id, m in self._states_from(v, bound):
            if chart_id != w.chart:
                continue
            pt = m.apply(v.coords)
            chart = self.atlas.chart(chart_id)
            g, status = chart.group.orbit_status(pt, w.coords, bound)
            if status is Trit.TRUE:
                full = g.compose(m)
                if full not in seen:
                    seen.add(full)
                    out.append(Arrow(v, full, chart_id))
        return tuple(out)

    # -- three-valued point equality --
    def _reachable_cosets(self, v: NebulaPoint):
        chart = self.atlas.chart(v.chart)
        start = _saturate(_Coset(v.chart, tuple(v.coords), ()), chart.group)
        if start is None:
            return None
        cosets = list(start)

        def known(c):
            return any(c.same_as(existing) for existing in cosets)

        frontier = list(cosets)
        for _ in range(self.route_cap):
            new = []
            for c in frontier:
                for dst, tmap in self._letters.get(c.chart, ()):
                    if tmap.is_identity and dst == c.chart:
                        continue
                    base = tmap.apply(c.base)
                    gens = tuple(
                        tuple(sum((x.scale(tmap.a[i][j]) for j, x in enumerate(vec)),
                                  QAlpha()) for i in range(tmap.n))
                        for vec in c.gens)
                    moved = _Coset(dst, base, gens, c.rational_full)
                    sat = _saturate(moved, self.atlas.chart(dst).group)
                    if sat is None:
                        return None
                    for s in sat:
                        if not known(s):
                            cosets.append(s)
                            new.append(s)
            frontier = new
            if not frontier:
                return cosets  # saturated: certificates allowed
        return None  # did not close within cap

    def same_point(self, v: NebulaPoint, w: NebulaPoint, bound: int) -> Trit:
        self.require_point(v)
        self.require_point(w)
        if v.chart == w.chart and vec_eq(v.coords, w.coords):
            return Trit.TRUE
        if self.arrows_between(v, w, bound):
            return Trit.TRUE
        cosets = self._reachable_cosets(v)
        if cosets is None:
            return Trit.UNKNOWN
        verdicts = [c.contains_point(w.coords) for c in cosets if c.chart == w.chart]
        if any(x is None for x in verdicts):
            return Trit.UNKNOWN
        if any(verdicts):
            return Trit.UNKNOWN  # reachable, but not within this bound
        return Trit.FALSE

    def evaluate(self, point: NebulaPoint, default_bound: int = 3) -> QuasifoldPointHandle:
        """Image of a nebula point on the quasifold, as an opaque handle."""
        return QuasifoldPointHandle(self, self.require_point(point), default_bound)

    # -- assembly --
    def _route_maps(self, src_chart: str):
        """Transition-only words from src_chart: {(dst_chart, map)}, saturated."""
        out = [(src_chart, AffineElement.identity(self.atlas.dimension))]
        seen = {(src_chart, out[0][1])}
        frontier = list(out)
        for _ in range(self.route_cap):
            new = []
            for chart_id, m in frontier:
                for dst, tmap in self._letters.get(chart_id, ()):
                    cand = (dst, tmap.compose(m))
                    if cand not in seen:
                        seen.add(cand)
                        out.append(cand)
                        new.append(cand)
            frontier = new
            if not frontier:
                break
        return out

    def isotropy_and_assembly(self, v: NebulaPoint, bound: int) -> AssemblyReport:
        self.require_point(v)
        routes = self._route_maps(v.chart)
        chart_order = [v.chart] + [c.id for c in self.atlas.charts if c.id != v.chart]
        blocks = []
        objects_by_chart = {}
        for cid in chart_order:
            chart = self.atlas.chart(cid)
            bases = []
            for dst, m in routes:
                if dst != cid:
                    continue
                pt = m.apply(v.coords)
                if chart.contains(pt, self.witness) and pt not in bases:
                    bases.append(pt)
            objects = []
            for base in bases:
                for g in chart.group.enumerate(bound):
                    pt = g.apply(base)
                    if chart.contains(pt, self.witness) and pt not in objects:
                        objects.append(pt)
            objects.sort(key=lambda o: tuple(c.sort_key() for c in o))
            if not objects:
                continue
            arrows = []
            for o in objects:
                for g in chart.group.enumerate(bound):
                    if chart.contains(g.apply(o), self.witness):
                        arrows.append(Arrow(NebulaPoint(cid, o), g, cid))
            objects_by_chart[cid] = objects
            blocks.append((cid, tuple(objects), tuple(arrows)))
        connections = []
        done_pairs = set()
        for t in self.atlas.transitions:
            if t.src == t.dst:
                continue
            pair = frozenset((t.src, t.dst))
            if pair in done_pairs or t.src not in objects_by_chart \
                    or t.dst not in objects_by_chart:
                continue
            for o in objects_by_chart[t.src]:
                img = t.map.apply(o)
                if self.atlas.chart(t.dst).contains(img, self.witness):
                    connections.append(Arrow(NebulaPoint(t.src, o), t.map, t.dst))
                    done_pairs.add(pair)
                    break
        isotropy = []
        chart = self.atlas.chart(v.chart)
        for g in chart.group.enumerate(bound):
            if vec_eq(g.apply(v.coords), v.coords):
                isotropy.append(Arrow(v, g, v.chart))
        return AssemblyReport(v, bound, tuple(blocks), tuple(connections),
                              tuple(isotropy))


def build_groupoid(atlas: Atlas, witness: Optional[AlphaWitness] = None,
                   check_bound: int = 1) -> StructureGroupoid:
    """Construct the structure groupoid, spot-checking declared transitions.

    Operational consistency check per transition (src Γ, dst Γ', map m):
    the overlap must be nonempty and conjugation m·γ·m⁻¹ must land in Γ' for
    the enumerated γ — a certified failure raises; inconclusive passes (the
    declaration is the contract).
    """
    from .groups import membership_status

    g = StructureGroupoid(atlas, witness)
    for t in atlas.transitions:
        if t.map.is_identity and t.src == t.dst:
            continue
        src, dst = atlas.chart(t.src), atlas.chart(t.dst)
        sample = _overlap_sample(src, dst, t.map, g.witness)
        if sample is None:
            raise InconsistentTransitionError(
                f"transition {t.src}→{t.dst}: empty overlap sample")
        minv = t.map.invert()
        for gamma in src.group.enumerate(check_bound):
            conj = t.map.compose(gamma).compose(minv)
            if membership_status(dst.group, conj, check_bound * 4) is Trit.FALSE:
                raise InconsistentTransitionError(
                    f"transition {t.src}→{t.dst}: conjugate {conj} escapes Γ'")
    return g


def _overlap_sample(src: Chart, dst: Chart, m: AffineElement,
                    witness: AlphaWitness):
    """A point of dom(src) whose image lies in dom(dst), or None."""
    candidates = []
    if src.domain is None:
        candidates.append(tuple(QAlpha() for _ in range(src.dimension)))
    else:
        candidates.append(tuple(iv.midpoint() for iv in src.domain))
        candidates.append(tuple(
            iv.lo + (iv.hi - iv.lo).scale(Fraction(1, 4))
            if iv.lo is not None and iv.hi is not None else iv.midpoint()
            for iv in src.domain))
        candidates.append(tuple(
            iv.lo + (iv.hi - iv.lo).scale(Fraction(3, 4))
            if iv.lo is not None and iv.hi is not None else iv.midpoint()
            for iv in src.domain))
    for pt in candidates:
        try:
            if src.contains(pt, witness) and dst.contains(m.apply(pt), witness):
                return pt
        except PrecisionInsufficientError:
            continue
    return None


# ---------------------------------------------------------------------------
# circle model on R/Z and the comparison functor
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CircleArrow:
    """Arrow of the rotation groupoid on R/Z: source point and rotation amount,
    both canonical mod-1 Q+Qα values."""

    src: QAlpha
    rot: QAlpha

    def __post_init__(self):
        object.__setattr__(self, "src", self.src.mod1())
        object.__setattr__(self, "rot", self.rot.mod1())

    @property
    def trg(self) -> QAlpha:
        return (self.src + self.rot).mod1()

    def __str__(self):
        return f"({self.src} ⟳{self.rot})"

    __repr__ = __str__


def circle_arrow_compose(a: CircleArrow, b: CircleArrow) -> CircleArrow:
    from .errors import NotComposableError
    if a.trg != b.src:
        raise NotComposableError(f"trg {a.trg} ≠ src {b.src}")
    return CircleArrow(a.src, a.rot + b.rot)


def circle_arrow_invert(a: CircleArrow) -> CircleArrow:
    return CircleArrow(a.trg, -a.rot)


def phi_object(x: QAlpha) -> QAlpha:
    """Object part of the comparison functor to the circle model: x ↦ x mod Z."""
    return x.mod1()


def phi_arrow(a: Arrow) -> CircleArrow:
    """Arrow part: a line-model translation arrow (x, t_{n+αm}) maps to the
    rotation arrow (x mod Z, rotation by αm) — integer translation parts die."""
    if not a.map.is_translation or a.map.n != 1:
        raise QuasifoldError("functor defined on 1-D translation arrows")
    return CircleArrow(a.src.coords[0], a.map.b[0])
