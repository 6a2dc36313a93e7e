"""Countable affine group presentations with deterministic bounded enumeration.

Four presentation kinds cover the atlases used here: translation lattices over
Q+Qα, the full rational translations, closure-checked finite matrix groups, and
word-generated groups.  Enumeration is deterministic: shells of increasing
max-index (or word length), lexicographic inside a shell, so reports and
witnesses are reproducible.

Orbit questions are answered with three-valued honesty: a witness within the
bound, a certified "no element of the group works" (available for translation
kinds via coefficient obstructions and for finite groups by completeness), or
inconclusive-at-bound.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import DimensionMismatchError, EnumerationCapError
from .exact import (AffineElement, QAlpha, Trit, mat_identity, solve_linear,
                    vec_eq)

__all__ = [
    "GroupPresentation",
    "TranslationLattice",
    "RationalTranslations",
    "FiniteMatrixGroup",
    "GeneratedGroup",
    "enumerate_group",
    "orbit_witness",
]

SIZE_CAP = 2_000_000  # refuse enumerations estimated beyond this many elements


class GroupPresentation:
    """Base class; subclasses fill in enumeration and orbit decisions."""

    dimension: int
    hard_cap: int = 10_000

    def enumerate(self, bound: int) -> tuple:
        raise NotImplementedError

    def orbit_status(self, x: Sequence[QAlpha], y: Sequence[QAlpha], bound: int):
        """Return (witness γ with γ·x = y and indices within bound, or None;
        Trit certainty). TRUE ⇒ witness returned; FALSE is certified for the
        whole group; UNKNOWN means not found within bound."""
        raise NotImplementedError

    def _check_bound(self, bound: int, estimated: int):
        if bound < 0:
            raise ValueError("bound must be nonnegative")
        if bound > self.hard_cap:
            raise EnumerationCapError(
                f"bound {bound} exceeds hard cap {self.hard_cap}")
        if estimated > SIZE_CAP:
            raise EnumerationCapError(
                f"enumeration would produce ~{estimated} elements")

    @property
    def is_dense(self) -> bool:
        """Heuristic: orbits are dense in R^n (forces global chart domains)."""
        return False


def _shell_tuples(k: int, bound: int):
    """Integer k-tuples ordered by (max|n_i|, tuple)."""
    for shell in range(bound + 1):
        lo, hi = -shell, shell
        for tup in itertools.product(range(lo, hi + 1), repeat=k):
            if shell == 0 or max(abs(t) for t in tup) == shell:
                yield tup


def _z_basis(vectors):
    """Echelon Z-basis of the Z-span of rational vectors (small sizes)."""
    vectors = [v for v in vectors if any(x != 0 for x in v)]
    if not vectors:
        return []
    m = len(vectors[0])
    den = 1
    for v in vectors:
        for x in v:
            den = math.lcm(den, x.denominator)
    rows = [[int(x * den) for x in v] for v in vectors]
    pivot_row = 0
    for col in range(m):
        while True:
            live = [i for i in range(pivot_row, len(rows)) if rows[i][col] != 0]
            if len(live) <= 1:
                break
            live.sort(key=lambda i: abs(rows[i][col]))
            base = live[0]
            for i in live[1:]:
                q = rows[i][col] // rows[base][col]
                rows[i] = [a - q * b for a, b in zip(rows[i], rows[base])]
        live = [i for i in range(pivot_row, len(rows)) if rows[i][col] != 0]
        if not live:
            continue
        rows[pivot_row], rows[live[0]] = rows[live[0]], rows[pivot_row]
        if rows[pivot_row][col] < 0:
            rows[pivot_row] = [-a for a in rows[pivot_row]]
        pivot_row += 1
    return [tuple(Fraction(a, den) for a in r) for r in rows[:pivot_row]]


@dataclass(frozen=True)
class TranslationLattice(GroupPresentation):
    """Z-span of finitely many Q+Qα translation vectors."""

    generators: tuple
    hard_cap: int = 10_000

    def __post_init__(self):
        gens = tuple(tuple(v if isinstance(v, QAlpha) else QAlpha(Fraction(v))
                           for v in g) for g in self.generators)
        if not gens:
            raise ValueError("need at least one generator")
        n = len(gens[0])
        if any(len(g) != n for g in gens):
            raise DimensionMismatchError("generator dimension mismatch")
        object.__setattr__(self, "generators", gens)

    @property
    def dimension(self) -> int:
        return len(self.generators[0])

    def _combination(self, tup) -> tuple:
        n = self.dimension
        out = [QAlpha() for _ in range(n)]
        for c, g in zip(tup, self.generators):
            if c:
                for j in range(n):
                    out[j] = out[j] + g[j].scale(c)
        return tuple(out)

    def enumerate(self, bound: int) -> tuple:
        k = len(self.generators)
        self._check_bound(bound, (2 * bound + 1) ** k)
        seen, out = set(), []
        for tup in _shell_tuples(k, bound):
            vec = self._combination(tup)
            if vec not in seen:
                seen.add(vec)
                out.append(AffineElement.translation(vec))
        return tuple(out)

    def _coordinate_rows(self):
        """Stack p- and q-parts: 2n rows, one column per generator."""
        n, k = self.dimension, len(self.generators)
        rows = []
        for j in range(n):
            rows.append([self.generators[i][j].p for i in range(k)])
        for j in range(n):
            rows.append([self.generators[i][j].q for i in range(k)])
        return rows

    @property
    def is_dense(self) -> bool:
        rows = self._coordinate_rows()
        # dense (in the cases used here) iff Z-rank exceeds the dimension
        rank = 0
        m = [list(r) for r in rows]
        cols = len(m[0])
        r = 0
        for c in range(cols):
            pivot = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
            if pivot is None:
                continue
            m[r], m[pivot] = m[pivot], m[r]
            inv = 1 / m[r][c]
            m[r] = [x * inv for x in m[r]]
            for i in range(len(m)):
                if i != r and m[i][c]:
                    f = m[i][c]
                    m[i] = [x - f * y for x, y in zip(m[i], m[r])]
            r += 1
        rank = r
        return rank > self.dimension

    def _generator_vectors(self):
        """Each generator as its (p-parts, q-parts) vector in Q^{2n}."""
        n = self.dimension
        return [tuple(g[j].p for j in range(n)) + tuple(g[j].q for j in range(n))
                for g in self.generators]

    def contains_value(self, d: Sequence[QAlpha]) -> Trit:
        """Certified membership of d in the lattice, bound-independent."""
        rhs = [v.p for v in d] + [v.q for v in d]
        status, sol = solve_linear(self._coordinate_rows(), rhs)
        if status == "none":
            return Trit.FALSE
        if status == "unique":
            return Trit.TRUE if all(c.denominator == 1 for c in sol) else Trit.FALSE
        # dependent generators: re-solve against an independent Z-basis
        basis = _z_basis(self._generator_vectors())
        rows = [[b[i] for b in basis] for i in range(len(rhs))]
        status, sol = solve_linear(rows, rhs)
        if status == "none":
            return Trit.FALSE
        return Trit.TRUE if all(c.denominator == 1 for c in sol) else Trit.FALSE

    def membership(self, d: Sequence[QAlpha], bound: int):
        """Decide d ∈ lattice with a witness inside the index bound:
        (integer coordinates or None, Trit).  FALSE is certified for the whole
        lattice; UNKNOWN means "in the lattice but not within bound" or
        "not found within bound"."""
        k = len(self.generators)
        rhs = [v.p for v in d] + [v.q for v in d]
        status, sol = solve_linear(self._coordinate_rows(), rhs)
        if status == "none":
            return None, Trit.FALSE
        if status == "unique":
            if any(c.denominator != 1 for c in sol):
                return None, Trit.FALSE
            ints = [int(c) for c in sol]
            if max((abs(c) for c in ints), default=0) <= bound:
                return ints, Trit.TRUE
            return None, Trit.UNKNOWN
        # dependent generators: certified existence first, then bounded witness
        if self.contains_value(tuple(d)) is Trit.FALSE:
            return None, Trit.FALSE
        target = tuple(d)
        for tup in _shell_tuples(k, min(bound, self.hard_cap)):
            if vec_eq(self._combination(tup), target):
                return list(tup), Trit.TRUE
        return None, Trit.UNKNOWN

    def orbit_status(self, x, y, bound: int):
        d = tuple(b - a for a, b in zip(x, y))
        coords, status = self.membership(d, bound)
        if status is Trit.TRUE:
            return AffineElement.translation(self._combination(coords)), Trit.TRUE
        return None, status


@dataclass(frozen=True)
class RationalTranslations(GroupPresentation):
    """All rational translations of R^n, height-ordered enumeration."""

    dimension: int = 1
    hard_cap: int = 10_000

    @staticmethod
    def _line_values(bound: int):
        vals = [Fraction(0)]
        for h in range(1, bound + 1):
            shell = set()
            for q in range(1, h + 1):
                for p in range(-h, h + 1):
                    f = Fraction(p, q)
                    # f == 0 is the seed value; 0/1 would re-enter at h == 1
                    if f != 0 and max(abs(f.numerator), f.denominator) == h:
                        shell.add(f)
            vals.extend(sorted(shell, key=lambda f: (f.denominator, f)))
        return vals

    def enumerate(self, bound: int) -> tuple:
        line = self._line_values(bound)
        self._check_bound(bound, len(line) ** self.dimension)
        if self.dimension == 1:
            return tuple(AffineElement.translation((QAlpha(v),)) for v in line)
        out = []
        for tup in itertools.product(line, repeat=self.dimension):
            out.append(AffineElement.translation(tuple(QAlpha(v) for v in tup)))
        return tuple(out)

    @property
    def is_dense(self) -> bool:
        return True

    def orbit_status(self, x, y, bound: int):
        d = tuple(b - a for a, b in zip(x, y))
        if any(v.q != 0 for v in d):
            return None, Trit.FALSE  # α-coefficient obstruction
        height = max((max(abs(v.p.numerator), v.p.denominator) for v in d),
                     default=0)
        if height <= bound:
            return AffineElement.translation(d), Trit.TRUE
        return None, Trit.UNKNOWN


@dataclass(frozen=True)
class FiniteMatrixGroup(GroupPresentation):
    """Explicit finite affine group; closure is checked at construction."""

    elements: tuple
    hard_cap: int = 10_000

    def __post_init__(self):
        elems = tuple(self.elements)
        if not elems:
            raise ValueError("finite group needs elements")
        n = elems[0].n
        if any(e.n != n for e in elems):
            raise DimensionMismatchError("element dimension mismatch")
        seen = set(elems)
        if len(seen) != len(elems):
            raise ValueError("duplicate elements in finite group")
        if AffineElement.identity(n) not in seen:
            raise ValueError("finite group must contain the identity")
        for g in elems:
            if g.invert() not in seen:
                raise ValueError(f"not closed under inversion: {g}")
            for h in elems:
                if g.compose(h) not in seen:
                    raise ValueError(f"not closed under composition: {g}, {h}")
        object.__setattr__(self, "elements", elems)

    @property
    def dimension(self) -> int:
        return self.elements[0].n

    def enumerate(self, bound: int) -> tuple:
        self._check_bound(bound, len(self.elements))
        return self.elements

    def orbit_status(self, x, y, bound: int):
        for g in self.elements:
            if vec_eq(g.apply(x), y):
                return g, Trit.TRUE
        return None, Trit.FALSE  # complete search: certified


@dataclass(frozen=True)
class GeneratedGroup(GroupPresentation):
    """Group generated by affine elements; bounded word enumeration only, so
    negative orbit answers are never certified."""

    generators: tuple
    hard_cap: int = 10_000

    def __post_init__(self):
        gens = tuple(self.generators)
        if not gens:
            raise ValueError("need at least one generator")
        n = gens[0].n
        if any(g.n != n for g in gens):
            raise DimensionMismatchError("generator dimension mismatch")
        object.__setattr__(self, "generators", gens)

    @property
    def dimension(self) -> int:
        return self.generators[0].n

    def _letters(self):
        letters = []
        for g in self.generators:
            if g not in letters:
                letters.append(g)
            gi = g.invert()
            if gi not in letters:
                letters.append(gi)
        return letters

    def enumerate(self, bound: int) -> tuple:
        self._check_bound(bound, (2 * len(self.generators)) ** max(bound, 1))
        letters = self._letters()
        out = [AffineElement.identity(self.dimension)]
        seen = {out[0]}
        frontier = list(out)
        for _ in range(bound):
            new_frontier = []
            for w in frontier:
                for letter in letters:
                    cand = letter.compose(w)
                    if cand not in seen:
                        seen.add(cand)
                        out.append(cand)
                        new_frontier.append(cand)
            frontier = new_frontier
            if not frontier:
                break
        return tuple(out)

    def orbit_status(self, x, y, bound: int):
        for g in self.enumerate(bound):
            if vec_eq(g.apply(x), y):
                return g, Trit.TRUE
        return None, Trit.UNKNOWN


def membership_status(group: GroupPresentation, g: AffineElement, bound: int) -> Trit:
    """Is the affine element g a member of the group?  Certified where the
    presentation allows (translation kinds, finite groups), bounded otherwise."""
    if isinstance(group, FiniteMatrixGroup):
        return Trit.TRUE if g in group.elements else Trit.FALSE
    if isinstance(group, TranslationLattice):
        if not g.is_translation:
            return Trit.FALSE
        _, status = group.membership(g.b, bound)
        return status
    if isinstance(group, RationalTranslations):
        if not g.is_translation:
            return Trit.FALSE
        return Trit.TRUE if all(v.q == 0 for v in g.b) else Trit.FALSE
    for cand in group.enumerate(bound):
        if cand == g:
            return Trit.TRUE
    return Trit.UNKNOWN


def enumerate_group(group: GroupPresentation, bound: int) -> tuple:
    """Deterministic bounded enumeration (shell order; see module docstring)."""
    return group.enumerate(bound)


def orbit_witness(x, y, group: GroupPresentation, bound: int) -> Optional[AffineElement]:
    """γ with γ·x = y within the enumeration bound, else None.  None means
    "not found within bound" — callers needing certified absence should use
    `orbit_status`."""
    return group.orbit_status(tuple(x), tuple(y), bound)[0]
