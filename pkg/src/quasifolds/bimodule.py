"""Equivalence bimodules between structure groupoids of two atlases.

A linking germ is an (invertible affine) germ from a point of the left atlas
nebula into a chart of the right atlas, compatible with both evaluation maps.
The left structure groupoid acts by precomposition, the right one by
postcomposition; the set generated from finitely many seeds by bounded words
carries free commuting actions whose class maps are bijections onto objects.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .atlas import Atlas, StructureGroupoid
from .errors import (InconsistentTransitionError, NotComposableError,
                     QuasifoldError)
from .exact import AffineElement, AlphaWitness, QAlpha, Trit, default_witness
from .groupoid import Arrow, NebulaPoint
from .groups import (FiniteMatrixGroup, GeneratedGroup, RationalTranslations,
                     TranslationLattice, membership_status)

__all__ = [
    "LinkingGerm", "BiAtlas", "left_act", "right_act", "class_map",
    "invert_germ", "quotient_witness", "quotient_witness_right",
    "surjectivity_probe", "source_probe", "generate_germs",
]


@dataclass(frozen=True)
class LinkingGerm:
    """Germ of an invertible affine map from the left nebula into a right chart."""

    src: NebulaPoint
    map: AffineElement
    dst_chart: str

    @property
    def trg(self) -> NebulaPoint:
        return NebulaPoint(self.dst_chart, self.map.apply(self.src.coords))

    def to_json(self):
        return {"src": self.src.to_json(), "map": self.map.to_json(),
                "dst_chart": self.dst_chart}

    @staticmethod
    def from_json(obj) -> "LinkingGerm":
        return LinkingGerm(NebulaPoint.from_json(obj["src"]),
                           AffineElement.from_json(obj["map"]),
                           obj["dst_chart"])

    def __str__(self):
        return f"{self.src} ={self.map}=> {self.dst_chart}"


def _compatibility_sample(group) -> tuple:
    """Finite set of group elements whose conjugates must land in the partner
    group for a seed to be compatible (generators, or height-1..3 rationals
    for the dense rational group)."""
    if isinstance(group, TranslationLattice):
        return tuple(AffineElement.translation(g) for g in group.generators)
    if isinstance(group, (FiniteMatrixGroup,)):
        return tuple(group.elements)
    if isinstance(group, GeneratedGroup):
        return tuple(group.generators)
    if isinstance(group, RationalTranslations):
        out = []
        for k in (1, 2, 3):
            for axis in range(group.dimension):
                vec = [QAlpha(0)] * group.dimension
                vec[axis] = QAlpha(Fraction(1, k))
                out.append(AffineElement.translation(tuple(vec)))
        return tuple(out)
    return ()


@dataclass(frozen=True)
class BiAtlas:
    """Two atlases of the same quasifold joined by seed linking germs."""

    left: Atlas
    right: Atlas
    seeds: tuple
    witness: AlphaWitness = field(default_factory=default_witness)
    check_bound: int = 3

    def __post_init__(self):
        object.__setattr__(self, "seeds", tuple(self.seeds))
        if not self.seeds:
            raise QuasifoldError("a bi-atlas needs at least one seed germ")
        left_g = StructureGroupoid(self.left, self.witness)
        right_g = StructureGroupoid(self.right, self.witness)
        for z in self.seeds:
            left_g.require_point(z.src)
            right_g.require_point(z.trg)
            self._check_seed_compatibility(z)
        object.__setattr__(self, "_left_groupoid", left_g)
        object.__setattr__(self, "_right_groupoid", right_g)

    def _check_seed_compatibility(self, z: LinkingGerm):
        """The seed must carry the left structure group into the right one:
        z ∘ γ ∘ z⁻¹ ∈ Γ' for each left generator γ (the computable content of
        compatibility with both evaluation maps)."""
        gamma_left = self.left.chart(z.src.chart).group
        gamma_right = self.right.chart(z.dst_chart).group
        inv = z.map.invert()
        for gamma in _compatibility_sample(gamma_left):
            conj = z.map.compose(gamma).compose(inv)
            if membership_status(gamma_right, conj, self.check_bound) is Trit.FALSE:
                raise InconsistentTransitionError(
                    f"seed {z} does not intertwine the structure groups: "
                    f"{gamma} conjugates outside the right group")

    def left_groupoid(self) -> StructureGroupoid:
        return self._left_groupoid

    def right_groupoid(self) -> StructureGroupoid:
        return self._right_groupoid

    def inverse(self) -> "BiAtlas":
        """Swap the two atlases and invert every seed."""
        return BiAtlas(self.right, self.left,
                       tuple(invert_germ(z) for z in self.seeds),
                       self.witness, self.check_bound)

    def to_json(self):
        from .serialize import biatlas_to_json
        return biatlas_to_json(self)


def left_act(g: Arrow, z: LinkingGerm) -> LinkingGerm:
    """g · z : precompose, moving the source along g (needs trg(g) = src(z))."""
    if g.trg != z.src:
        raise NotComposableError(
            f"left action needs trg(g) = src(z); got {g.trg} vs {z.src}")
    return LinkingGerm(g.src, z.map.compose(g.map), z.dst_chart)


def right_act(z: LinkingGerm, gp: Arrow) -> LinkingGerm:
    """z · g' : postcompose, moving the class along g' (needs src(g') = trg(z))."""
    if gp.src != z.trg:
        raise NotComposableError(
            f"right action needs src(g') = trg(z); got {gp.src} vs {z.trg}")
    return LinkingGerm(z.src, gp.map.compose(z.map), gp.dst_chart)


def class_map(z: LinkingGerm) -> NebulaPoint:
    """The class of z in Z/G is determined by its target object."""
    return z.trg


def invert_germ(z: LinkingGerm) -> LinkingGerm:
    return LinkingGerm(z.trg, z.map.invert(), z.src.chart)


def quotient_witness(bi: BiAtlas, z: LinkingGerm, zp: LinkingGerm,
                     bound: int):
    """Arrow g of the left groupoid with zp = g · z, when the classes agree.

    Returns (arrow or None, certificate) with certificate one of
    "constructed", "classes-differ", "inconclusive-at-bound".
    """
    if class_map(z) != class_map(zp):
        return None, "classes-differ"
    candidate = z.map.invert().compose(zp.map)
    for a in bi.left_groupoid().arrows_between(zp.src, z.src, bound):
        if a.map == candidate:
            return a, "constructed"
    return None, "inconclusive-at-bound"


def quotient_witness_right(bi: BiAtlas, z: LinkingGerm, zp: LinkingGerm,
                           bound: int):
    """Arrow g' of the right groupoid with zp = z · g', when sources agree."""
    if z.src != zp.src:
        return None, "sources-differ"
    candidate = zp.map.compose(z.map.invert())
    for a in bi.right_groupoid().arrows_between(class_map(z), class_map(zp),
                                                bound):
        if a.map == candidate:
            return a, "constructed"
    return None, "inconclusive-at-bound"


def surjectivity_probe(bi: BiAtlas, point_prime: NebulaPoint,
                       bound: int) -> Optional[LinkingGerm]:
    """A germ whose class is the given right-atlas object, via bounded words."""
    bi.right_groupoid().require_point(point_prime)
    for seed in bi.seeds:
        arrows = bi.right_groupoid().arrows_between(class_map(seed),
                                                    point_prime, bound)
        if arrows:
            return right_act(seed, arrows[0])
    return None


def source_probe(bi: BiAtlas, point: NebulaPoint,
                 bound: int) -> Optional[LinkingGerm]:
    """A germ whose source is the given left-atlas object, via bounded words."""
    bi.left_groupoid().require_point(point)
    for seed in bi.seeds:
        for g in bi.left_groupoid().fiber_over(seed.src, bound):
            if g.src == point:
                return left_act(g, seed)
        arrows = bi.left_groupoid().arrows_between(point, seed.src, bound)
        if arrows:
            return left_act(arrows[0], seed)
    return None


def generate_germs(bi: BiAtlas, word_length: int,
                   max_count: int = 5000) -> tuple:
    """All germs {g'-word} ∘ seed ∘ {g-word} with word data within the bound.

    Deterministic order: seeds in declaration order, then left arrows, then
    right arrows, deduplicated on (src, map, dst_chart).
    """
    seen = {}
    for seed in bi.seeds:
        lefts = bi.left_groupoid().fiber_over(seed.src, word_length)
        for g in lefts:
            z1 = left_act(g, seed)
            rights = bi.right_groupoid().arrows_from(class_map(z1), word_length)
            for gp in rights:
                z2 = right_act(z1, gp)
                key = (z2.src, z2.map, z2.dst_chart)
                if key not in seen:
                    seen[key] = z2
                    if len(seen) > max_count:
                        raise QuasifoldError(
                            f"germ generation exceeded {max_count} instances;"
                            " lower the word length")
    return tuple(seen.values())
