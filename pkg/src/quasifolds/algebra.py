"""Convolution *-algebras over structure groupoids with countable fibers.

Elements are finitely supported maps  group translation ↦ coefficient
function; the product is groupoid convolution against counting measure.
Two independent product routes are provided:

* convolve_general  — iterates support pairs and composes the underlying
  affine maps to find the target key (works directly on arrows);
* convolve_closed_form — per-model index arithmetic
  (f·g)_r(x) = Σ_s f_{r−s}(x+s) g_s(x)           on the line,
  (f·g)_τ(z) = Σ_σ f_{τ−σ}(z+σ) g_σ(z)           on the circle.

The involution is (f*)_{−r}(x) = conj(f_r(x − r)).

For the circle over rational translations, ``matrix_representation`` maps an
element supported on (1/p)ℤ/ℤ to a p×p matrix; with M[j][l] = f_{(l−j)/p}(z + j/p)
the map reverses products: M(f·g) = M(g)·M(f).
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .coefficients import PiecewisePoly, TrigPoly
from .errors import (MixedCoefficientKindError, QuasifoldError,
                     SupportEscapesSubgroupError)
from .exact import (AffineElement, AlphaWitness, QAlpha, Trit,
                    default_witness, qa)
from .groups import TranslationLattice

__all__ = [
    "LineModel", "CircleModel", "AlgebraElement", "delta",
    "convolve_general", "convolve_closed_form", "involute",
    "rotation_relation", "matrix_representation", "ComplexMatrix",
    "REPRESENTATION_PRODUCT_ORDER",
    "random_line_element", "random_circle_element",
]

# The matrix representation of the rational-circle algebra reverses the
# convolution order: M(f·g) = M(g)·M(f).
REPRESENTATION_PRODUCT_ORDER = "reversed"


@dataclass(frozen=True)
class LineModel:
    """Algebra of the line with translations drawn from a lattice subgroup.

    Keys are exact translations r ∈ group; coefficients are PiecewisePoly.
    """

    group: TranslationLattice
    witness: AlphaWitness = field(default_factory=default_witness)

    kind = "line"
    coefficient_type = PiecewisePoly

    def canonical_key(self, r: QAlpha) -> QAlpha:
        if self.group.contains_value((r,)) is not Trit.TRUE:
            raise SupportEscapesSubgroupError(
                f"translation {r} is not in the structure group")
        return r

    def zero_coefficient(self):
        return PiecewisePoly.zero()

    def key_shift(self, coeff: PiecewisePoly, s: QAlpha) -> PiecewisePoly:
        return coeff.shift_arg(s)

    def compatible(self, other) -> bool:
        return isinstance(other, LineModel) and other.group == self.group

    def to_json(self):
        from .serialize import group_to_json
        return {"kind": "line", "group": group_to_json(self.group)}


_CIRCLE_KINDS = ("rational", "alpha", "full")


@dataclass(frozen=True)
class CircleModel:
    """Algebra of the circle R/Z with a countable translation subgroup.

    subgroup: "rational" (ℚ/ℤ), "alpha" (αℤ mod 1), or "full" (ℚ + αℤ mod 1).
    Keys are canonical mod-1 values; coefficients are TrigPoly.
    """

    subgroup: str = "full"
    witness: AlphaWitness = field(default_factory=default_witness)

    kind = "circle"
    coefficient_type = TrigPoly

    def __post_init__(self):
        if self.subgroup not in _CIRCLE_KINDS:
            raise QuasifoldError(f"unknown circle subgroup {self.subgroup!r}")

    def canonical_key(self, r: QAlpha) -> QAlpha:
        k = r.mod1()
        if self.subgroup == "rational" and k.q != 0:
            raise SupportEscapesSubgroupError(
                f"rotation {r} has an α component; not in ℚ/ℤ")
        if self.subgroup == "alpha" and k.p != 0:
            raise SupportEscapesSubgroupError(
                f"rotation {r} has a rational component; not in αℤ mod 1")
        return k

    def zero_coefficient(self):
        return TrigPoly()

    def key_shift(self, coeff: TrigPoly, s: QAlpha) -> TrigPoly:
        return coeff.rotate(self.witness.to_float(s))

    def compatible(self, other) -> bool:
        return isinstance(other, CircleModel) and other.subgroup == self.subgroup

    def to_json(self):
        return {"kind": "circle", "subgroup": self.subgroup}


@dataclass(frozen=True)
class AlgebraElement:
    """Finitely supported element Σ_r c_r · δ_r of a convolution algebra."""

    model: object
    support: tuple = ()  # sorted ((QAlpha key, coefficient), ...)

    def __post_init__(self):
        entries = {}
        for r, c in self.support:
            if not isinstance(c, self.model.coefficient_type):
                raise MixedCoefficientKindError(
                    f"{self.model.kind} model needs "
                    f"{self.model.coefficient_type.__name__} coefficients, "
                    f"got {type(c).__name__}")
            key = self.model.canonical_key(r)
            entries[key] = entries[key] + c if key in entries else c
        cleaned = tuple(sorted(((k, c) for k, c in entries.items()
                                if not c.is_zero),
                               key=lambda kc: kc[0].sort_key()))
        object.__setattr__(self, "support", cleaned)

    def keys(self):
        return tuple(k for k, _ in self.support)

    def coeff(self, r: QAlpha):
        key = self.model.canonical_key(r)
        for k, c in self.support:
            if k == key:
                return c
        return self.model.zero_coefficient()

    @property
    def is_zero(self) -> bool:
        return not self.support

    def _require_same_model(self, other: "AlgebraElement"):
        if not self.model.compatible(other.model):
            raise MixedCoefficientKindError(
                "elements live in different algebra models")

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._require_same_model(other)
        return AlgebraElement(self.model, self.support + other.support)

    def scale(self, s) -> "AlgebraElement":
        return AlgebraElement(
            self.model, tuple((k, c.scale(s)) for k, c in self.support))

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + other.scale(-1.0)

    def __mul__(self, other: "AlgebraElement") -> "AlgebraElement":
        return convolve_closed_form(self, other)

    def star(self) -> "AlgebraElement":
        return involute(self)

    def distance(self, other: "AlgebraElement") -> float:
        """Max coefficient distance over the union of supports."""
        self._require_same_model(other)
        keys = {k for k, _ in self.support} | {k for k, _ in other.support}
        worst = 0.0
        for k in keys:
            worst = max(worst, self.coeff(k).distance(other.coeff(k)))
        return worst

    def allclose(self, other: "AlgebraElement", tol: float) -> bool:
        return self.distance(other) <= tol

    def sup_eval_bound(self) -> float:
        total = 0.0
        for _, c in self.support:
            if isinstance(c, TrigPoly):
                total += c.sup_bound()
            else:
                total += max((abs(x) for p in c.pieces for x in p), default=0.0)
        return total

    def to_json(self):
        return {"model": self.model.to_json(),
                "support": [{"translation": str(k), "coefficient": c.to_json()}
                            for k, c in self.support]}


def delta(model, r: QAlpha, coeff) -> AlgebraElement:
    """Single-translation element coeff · δ_r."""
    return AlgebraElement(model, ((r, coeff),))


def convolve_general(f: AlgebraElement, g: AlgebraElement) -> AlgebraElement:
    """Convolution by composing the underlying affine arrows pairwise.

    Each key r names the translation map t_r; the pair (a, s) contributes to
    the key of t_a ∘ t_s, with coefficient f_a(x + s) · g_s(x).
    """
    f._require_same_model(g)
    model = f.model
    out = {}
    for a, ca in f.support:
        ta = AffineElement.translation((a,))
        for s, cs in g.support:
            ts = AffineElement.translation((s,))
            composed = ta.compose(ts)
            key = model.canonical_key(composed.b[0])
            term = model.key_shift(ca, s) * cs
            out[key] = out[key] + term if key in out else term
    return AlgebraElement(model, tuple(out.items()))


def convolve_closed_form(f: AlgebraElement, g: AlgebraElement) -> AlgebraElement:
    """Convolution via index arithmetic: (f·g)_r = Σ_s f_{r−s}(· + s) g_s."""
    f._require_same_model(g)
    model = f.model
    out = {}
    for s, cs in g.support:
        for a, ca in f.support:
            key = model.canonical_key(a + s)
            term = model.key_shift(ca, s) * cs
            out[key] = out[key] + term if key in out else term
    return AlgebraElement(model, tuple(out.items()))


def involute(f: AlgebraElement) -> AlgebraElement:
    """Adjoint for counting-measure convolution: (f*)_{−r}(x) = conj(f_r(x−r))."""
    model = f.model
    entries = []
    for r, c in f.support:
        entries.append((-r, model.key_shift(c, -r).conjugate()))
    return AlgebraElement(model, tuple(entries))


# ---------------------------------------------------------------------------
# rotation relation on the circle over αℤ
# ---------------------------------------------------------------------------

def rotation_relation(witness: Optional[AlphaWitness] = None,
                      max_power: int = 3) -> dict:
    """Check V·U = λ·U·V for U = e^{2πiz}δ_0, V = δ_α on the circle.

    Returns the empirical λ, its distance to e^{−2πiα}, and the worst
    deviation of the power relations V^n·U^m = λ^{mn}·U^m·V^n for
    1 ≤ m, n ≤ max_power.
    """
    w = witness or default_witness()
    model = CircleModel("alpha", w)
    U = delta(model, qa(0, 0), TrigPoly.mode(1))
    V = delta(model, qa(0, 1), TrigPoly.one())

    VU = convolve_closed_form(V, U)
    UV = convolve_closed_form(U, V)
    # both are single-key elements supported on α with a single mode
    ((_, c_vu),) = VU.support
    ((_, c_uv),) = UV.support
    ((_, top),) = c_vu.modes
    ((_, bot),) = c_uv.modes
    lam = top / bot
    reference = cmath.exp(-2j * cmath.pi * w.to_float(qa(0, 1)))

    residual = VU.distance(UV.scale(lam))

    def power(x: AlgebraElement, n: int) -> AlgebraElement:
        acc = x
        for _ in range(n - 1):
            acc = convolve_closed_form(acc, x)
        return acc

    worst_power = 0.0
    for m in range(1, max_power + 1):
        Um = power(U, m)
        for n in range(1, max_power + 1):
            Vn = power(V, n)
            lhs = convolve_closed_form(Vn, Um)
            rhs = convolve_closed_form(Um, Vn).scale(lam ** (m * n))
            worst_power = max(worst_power, lhs.distance(rhs))

    return {
        "lambda": lam,
        "reference": reference,
        "lambda_error": abs(lam - reference),
        "relation_residual": residual,
        "power_residual": worst_power,
        "max_power": max_power,
    }


# ---------------------------------------------------------------------------
# matrix representation of the rational-circle algebra
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ComplexMatrix:
    """Dense complex matrix with a fixed-order product (deterministic)."""

    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(complex(x) for x in r) for r in self.rows)
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise QuasifoldError("ragged matrix")
        object.__setattr__(self, "rows", rows)

    @staticmethod
    def identity(n: int) -> "ComplexMatrix":
        return ComplexMatrix(tuple(tuple(1.0 + 0j if i == j else 0j
                                         for j in range(n)) for i in range(n)))

    @property
    def shape(self):
        return (len(self.rows), len(self.rows[0]) if self.rows else 0)

    def __matmul__(self, other: "ComplexMatrix") -> "ComplexMatrix":
        n, k = self.shape
        k2, m = other.shape
        if k != k2:
            raise QuasifoldError("matrix shapes do not compose")
        out = []
        for i in range(n):
            row = []
            for j in range(m):
                acc = 0j
                for t in range(k):
                    acc += self.rows[i][t] * other.rows[t][j]
                row.append(acc)
            out.append(tuple(row))
        return ComplexMatrix(tuple(out))

    def __sub__(self, other: "ComplexMatrix") -> "ComplexMatrix":
        if self.shape != other.shape:
            raise QuasifoldError("matrix shapes differ")
        return ComplexMatrix(tuple(
            tuple(a - b for a, b in zip(ra, rb))
            for ra, rb in zip(self.rows, other.rows)))

    def sup_norm(self) -> float:
        return max((abs(x) for r in self.rows for x in r), default=0.0)

    def conjugate_transpose(self) -> "ComplexMatrix":
        n, m = self.shape
        return ComplexMatrix(tuple(
            tuple(self.rows[i][j].conjugate() for i in range(n))
            for j in range(m)))

    def to_json(self):
        return [[[x.real, x.imag] for x in r] for r in self.rows]


def matrix_representation(f: AlgebraElement, p: int,
                          z: float = 0.0) -> ComplexMatrix:
    """p×p matrix of a rational-circle element supported on (1/p)ℤ/ℤ.

    M[j][l] = f_{(l−j)/p mod 1}(z + j/p).  Product order is reversed:
    M(f·g) = M(g)·M(f).
    """
    if not isinstance(f.model, CircleModel) or f.model.subgroup != "rational":
        raise QuasifoldError("matrix representation needs the rational circle")
    if p < 1:
        raise QuasifoldError("p must be a positive integer")
    for k, _ in f.support:
        if (k.p * p).denominator != 1:
            raise SupportEscapesSubgroupError(
                f"support key {k} is not a multiple of 1/{p}")
    rows = []
    for j in range(p):
        row = []
        for l in range(p):
            key = qa(Fraction(l - j, p), 0).mod1()
            c = f.coeff(key)
            row.append(c.eval(z + j / p))
        rows.append(tuple(row))
    return ComplexMatrix(tuple(rows))


# ---------------------------------------------------------------------------
# random corpora (shared by tests and the command line self-checks)
# ---------------------------------------------------------------------------

def random_line_element(rng, model: LineModel, n_keys: int = 3,
                        degree: int = 2, span: int = 2) -> AlgebraElement:
    """Random element with small-integer lattice keys and polynomial pieces.

    Pieces have unit width and geometrically damped coefficients so that raw
    local coefficients stay O(1) through products and grid rebasing; the
    1e-12 route-comparison margin is meaningful only on such a corpus.
    """
    entries = []
    gens = model.group.generators
    for _ in range(n_keys):
        coeffs = [0] * len(gens)
        for i in range(len(gens)):
            coeffs[i] = rng.randint(-span, span)
        key = qa(0, 0)
        for c, g in zip(coeffs, gens):
            key = key + g[0].scale(Fraction(c))
        lo = rng.randint(-3, 1)
        bps = tuple(qa(lo + k, 0) for k in range(3))
        pieces = tuple(
            tuple(complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) * 0.5 ** d
                  for d in range(degree + 1))
            for _ in range(len(bps) - 1))
        entries.append((key, PiecewisePoly(bps, pieces)))
    return AlgebraElement(model, tuple(entries))


def random_circle_element(rng, model: CircleModel, n_keys: int = 3,
                          n_modes: int = 2, denominator: int = 6,
                          alpha_span: int = 2) -> AlgebraElement:
    """Random element with subgroup-appropriate keys and short mode lists."""
    entries = []
    for _ in range(n_keys):
        if model.subgroup == "rational":
            key = qa(Fraction(rng.randrange(denominator), denominator), 0)
        elif model.subgroup == "alpha":
            key = qa(0, rng.randint(-alpha_span, alpha_span))
        else:
            key = qa(Fraction(rng.randrange(denominator), denominator),
                     rng.randint(-alpha_span, alpha_span))
        modes = tuple((k, complex(rng.uniform(-1, 1), rng.uniform(-1, 1)))
                      for k in range(-n_modes, n_modes + 1))
        entries.append((key, TrigPoly(modes)))
    return AlgebraElement(model, tuple(entries))
