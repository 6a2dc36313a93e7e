"""Exact arithmetic for the ring Q + Q·α and for affine maps over it.

α is a formal irrational: elements are pairs of rationals (p, q) standing for
p + q·α, compared coefficientwise for equality.  Order comparisons go through
an AlphaWitness — a high-precision decimal value for α used *only* to decide
signs, never equality; a comparison that lands inside the witness safety
margin raises instead of guessing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from enum import Enum
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import DimensionMismatchError, PrecisionInsufficientError

__all__ = [
    "QAlpha",
    "AlphaWitness",
    "AffineElement",
    "Trit",
    "qa",
    "parse_rational",
    "rational_str",
    "compare",
    "default_witness",
    "set_default_witness",
    "mat_identity",
    "mat_mul",
    "mat_det",
    "mat_inv",
    "solve_linear",
    "affine_from_point_images",
]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def parse_rational(text: str) -> Fraction:
    """Parse "3", "-3/2" → Fraction. Whitespace tolerated."""
    return Fraction(text.strip().replace(" ", ""))


def rational_str(f: Fraction) -> str:
    return str(f)


# ---------------------------------------------------------------------------
# Q + Q·α
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QAlpha:
    """p + q·α with p, q rational; equality and hash are coefficientwise."""

    p: Fraction = _ZERO
    q: Fraction = _ZERO

    def __post_init__(self):
        if not isinstance(self.p, Fraction):
            object.__setattr__(self, "p", Fraction(self.p))
        if not isinstance(self.q, Fraction):
            object.__setattr__(self, "q", Fraction(self.q))

    # -- ring operations (never multiplies two α-terms) --
    def __add__(self, other: "QAlpha") -> "QAlpha":
        other = _as_qalpha(other)
        return QAlpha(self.p + other.p, self.q + other.q)

    __radd__ = __add__

    def __sub__(self, other: "QAlpha") -> "QAlpha":
        other = _as_qalpha(other)
        return QAlpha(self.p - other.p, self.q - other.q)

    def __rsub__(self, other) -> "QAlpha":
        return _as_qalpha(other) - self

    def __neg__(self) -> "QAlpha":
        return QAlpha(-self.p, -self.q)

    def __mul__(self, r) -> "QAlpha":
        if isinstance(r, QAlpha):
            if r.q == 0:
                r = r.p
            elif self.q == 0:
                return QAlpha(self.p * r.p, self.p * r.q)
            else:
                return NotImplemented  # α² never formed
        return QAlpha(self.p * r, self.q * r)

    __rmul__ = __mul__

    def scale(self, r) -> "QAlpha":
        r = Fraction(r)
        return QAlpha(self.p * r, self.q * r)

    # -- predicates --
    @property
    def is_rational(self) -> bool:
        return self.q == 0

    @property
    def is_zero(self) -> bool:
        return self.p == 0 and self.q == 0

    def mod1(self) -> "QAlpha":
        """Canonical representative of p + qα modulo Z: reduce p to [0, 1).

        Unique because α is irrational: p + qα ≡ p' + q'α (mod Z) iff q = q'
        and p − p' ∈ Z.
        """
        return QAlpha(self.p - math.floor(self.p), self.q)

    # -- serialization: "p" or "p+α*q" --
    def __str__(self) -> str:
        if self.q == 0:
            return rational_str(self.p)
        if self.p == 0:
            return f"α*{rational_str(self.q)}"
        return f"{rational_str(self.p)}+α*{rational_str(self.q)}"

    __repr__ = __str__

    @staticmethod
    def parse(text: str) -> "QAlpha":
        s = text.strip().replace(" ", "").replace("alpha", "α")
        if not s:
            raise ValueError("empty QAlpha literal")
        if "α" not in s:
            return QAlpha(parse_rational(s))
        head, _, tail = s.partition("α")
        sign = 1
        if head.endswith("+"):
            head = head[:-1]
        elif head.endswith("-"):
            head = head[:-1]
            sign = -1
        if tail.startswith("*"):
            tail = tail[1:]
        q = parse_rational(tail) if tail else _ONE
        p = parse_rational(head) if head else _ZERO
        return QAlpha(p, sign * q)

    def sort_key(self):
        """Deterministic order for reports; not the numeric order."""
        return (self.p, self.q)


def _as_qalpha(x) -> QAlpha:
    if isinstance(x, QAlpha):
        return x
    if isinstance(x, (int, Fraction)):
        return QAlpha(Fraction(x))
    raise TypeError(f"cannot interpret {x!r} as QAlpha")


def qa(p=0, q=0) -> QAlpha:
    """Convenience constructor: qa(1,2) = 1 + 2α."""
    return QAlpha(Fraction(p), Fraction(q))


# ---------------------------------------------------------------------------
# witness
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AlphaWitness:
    """Numeric stand-in for α, used only for order decisions and evaluation.

    `margin`: |p + q·α̂| below this raises PrecisionInsufficientError when the
    coefficients differ, instead of returning an unreliable sign.
    """

    value: Decimal
    digits: int
    margin: Decimal

    @staticmethod
    def golden(digits: int = 50, margin_digits: int = 10) -> "AlphaWitness":
        """Golden-ratio conjugate (√5 − 1)/2 ≈ 0.6180339887…"""
        with localcontext() as ctx:
            ctx.prec = digits + 10
            value = (Decimal(5).sqrt() - 1) / 2
        return AlphaWitness(value, digits, Decimal(10) ** -(digits - margin_digits))

    @staticmethod
    def from_decimal_string(s: str, digits: Optional[int] = None,
                            margin_digits: int = 10) -> "AlphaWitness":
        value = Decimal(s)
        if digits is None:
            digits = max(len(value.as_tuple().digits), 15)
        return AlphaWitness(value, digits, Decimal(10) ** -(digits - margin_digits))

    @staticmethod
    def from_fraction(f, digits: int = 50, margin_digits: int = 10) -> "AlphaWitness":
        f = Fraction(f)
        with localcontext() as ctx:
            ctx.prec = digits + 10
            value = Decimal(f.numerator) / Decimal(f.denominator)
        return AlphaWitness(value, digits, Decimal(10) ** -(digits - margin_digits))

    def negated(self) -> "AlphaWitness":
        return AlphaWitness(-self.value, self.digits, self.margin)

    def evaluate(self, x: QAlpha) -> Decimal:
        with localcontext() as ctx:
            ctx.prec = self.digits + 10
            return (Decimal(x.p.numerator) / Decimal(x.p.denominator)
                    + (Decimal(x.q.numerator) / Decimal(x.q.denominator)) * self.value)

    def to_float(self, x: QAlpha) -> float:
        return float(self.evaluate(x))

    def compare(self, x: QAlpha, y=None) -> int:
        """Sign of x − y (−1, 0, +1); exact 0 only from equal coefficients."""
        y = _as_qalpha(y) if y is not None else QAlpha()
        d = _as_qalpha(x) - y
        if d.is_zero:
            return 0
        v = self.evaluate(d)
        if abs(v) < self.margin:
            raise PrecisionInsufficientError(
                f"|{d}| < margin {self.margin} at {self.digits} digits")
        return 1 if v > 0 else -1


_DEFAULT_WITNESS: Optional[AlphaWitness] = None


def default_witness() -> AlphaWitness:
    global _DEFAULT_WITNESS
    if _DEFAULT_WITNESS is None:
        _DEFAULT_WITNESS = AlphaWitness.golden()
    return _DEFAULT_WITNESS


def set_default_witness(w: AlphaWitness) -> None:
    global _DEFAULT_WITNESS
    _DEFAULT_WITNESS = w


def compare(x: QAlpha, y=None, witness: Optional[AlphaWitness] = None) -> int:
    return (witness or default_witness()).compare(x, y)


class Trit(Enum):
    """Three-valued answer for bounded-decidable questions."""

    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"

    def __bool__(self):
        raise TypeError("Trit is three-valued; test against Trit members")


# ---------------------------------------------------------------------------
# exact linear algebra over Q (tiny dimensions)
# ---------------------------------------------------------------------------

Matrix = tuple  # tuple[tuple[Fraction, ...], ...]


def _freeze_matrix(rows: Iterable[Iterable]) -> Matrix:
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


def mat_identity(n: int) -> Matrix:
    return tuple(tuple(_ONE if i == j else _ZERO for j in range(n)) for i in range(n))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n, k, m = len(a), len(b), len(b[0])
    if len(a[0]) != k:
        raise DimensionMismatchError("matrix product shape mismatch")
    return tuple(
        tuple(sum((a[i][t] * b[t][j] for t in range(k)), _ZERO) for j in range(m))
        for i in range(n)
    )


def mat_det(a: Matrix) -> Fraction:
    n = len(a)
    m = [list(row) for row in a]
    det = _ONE
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return _ZERO
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            factor = m[r][col] * inv
            if factor:
                for c in range(col, n):
                    m[r][c] -= factor * m[col][c]
    return det


def mat_inv(a: Matrix) -> Matrix:
    n = len(a)
    m = [list(row) + [(_ONE if i == j else _ZERO) for j in range(n)]
         for i, row in enumerate(a)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            raise ZeroDivisionError("singular matrix")
        m[col], m[pivot] = m[pivot], m[col]
        inv = 1 / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                factor = m[r][col]
                m[r] = [x - factor * y for x, y in zip(m[r], m[col])]
    return tuple(tuple(row[n:]) for row in m)


def solve_linear(a: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]):
    """Solve a·x = rhs exactly. Returns ("unique", x), ("none", None) or
    ("many", particular_solution)."""
    rows, cols = len(a), len(a[0]) if a else 0
    m = [[Fraction(x) for x in row] + [Fraction(rhs[i])] for i, row in enumerate(a)]
    pivots = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                factor = m[i][c]
                m[i] = [x - factor * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    for i in range(r, rows):
        if m[i][cols] != 0:
            return "none", None
    x = [_ZERO] * cols
    for row_idx, c in enumerate(pivots):
        x[c] = m[row_idx][cols]
    return ("unique" if len(pivots) == cols else "many"), x


# ---------------------------------------------------------------------------
# affine maps x ↦ A·x + b with A rational invertible, b over Q + Qα
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AffineElement:
    """Affine map on R^n: rational invertible linear part, Q+Qα translation."""

    a: Matrix
    b: tuple

    def __post_init__(self):
        a = _freeze_matrix(self.a)
        b = tuple(_as_qalpha(x) for x in self.b)
        if len(a) != len(b) or any(len(row) != len(a) for row in a):
            raise DimensionMismatchError("affine element shape mismatch")
        if mat_det(a) == 0:
            raise ValueError("linear part must be invertible")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def n(self) -> int:
        return len(self.b)

    @staticmethod
    def identity(n: int) -> "AffineElement":
        return AffineElement(mat_identity(n), tuple(QAlpha() for _ in range(n)))

    @staticmethod
    def translation(vec: Sequence) -> "AffineElement":
        vec = tuple(_as_qalpha(v) for v in vec)
        return AffineElement(mat_identity(len(vec)), vec)

    @staticmethod
    def linear(rows) -> "AffineElement":
        rows = _freeze_matrix(rows)
        return AffineElement(rows, tuple(QAlpha() for _ in rows))

    # -- group operations --
    def compose(self, other: "AffineElement") -> "AffineElement":
        """self ∘ other (apply `other` first): (A, b)∘(A', b') = (AA', Ab'+b)."""
        if self.n != other.n:
            raise DimensionMismatchError("composing maps of different dimension")
        a = mat_mul(self.a, other.a)
        b = tuple(self._apply_linear(other.b, i) + self.b[i] for i in range(self.n))
        return AffineElement(a, b)

    def invert(self) -> "AffineElement":
        inv = mat_inv(self.a)
        neg = tuple(-x for x in self.b)
        b = tuple(
            sum((neg[j].scale(inv[i][j]) for j in range(self.n)), QAlpha())
            for i in range(self.n)
        )
        return AffineElement(inv, b)

    def apply(self, x: Sequence) -> tuple:
        x = tuple(_as_qalpha(v) for v in x)
        if len(x) != self.n:
            raise DimensionMismatchError("point dimension mismatch")
        return tuple(self._apply_linear(x, i) + self.b[i] for i in range(self.n))

    def _apply_linear(self, vec, i) -> QAlpha:
        return sum((vec[j].scale(self.a[i][j]) for j in range(self.n)), QAlpha())

    @property
    def is_identity(self) -> bool:
        return self.a == mat_identity(self.n) and all(x.is_zero for x in self.b)

    @property
    def is_translation(self) -> bool:
        return self.a == mat_identity(self.n)

    # -- serialization --
    def to_json(self) -> dict:
        return {
            "A": [[rational_str(x) for x in row] for row in self.a],
            "b": [str(x) for x in self.b],
        }

    @staticmethod
    def from_json(obj: dict) -> "AffineElement":
        a = [[parse_rational(x) for x in row] for row in obj["A"]]
        b = [QAlpha.parse(x) for x in obj["b"]]
        return AffineElement(_freeze_matrix(a), tuple(b))

    def __str__(self) -> str:
        if self.is_translation:
            return "t[" + ", ".join(str(x) for x in self.b) + "]"
        rows = "; ".join(" ".join(rational_str(x) for x in row) for row in self.a)
        return f"aff[{rows} | " + ", ".join(str(x) for x in self.b) + "]"

    __repr__ = __str__


def vec_eq(x: Sequence[QAlpha], y: Sequence[QAlpha]) -> bool:
    return len(x) == len(y) and all(a == b for a, b in zip(x, y))


def affine_from_point_images(points: Sequence[Sequence], images: Sequence[Sequence]) -> AffineElement:
    """Recover the unique affine map sending the given n+1 affinely independent
    *rational* points to the given images (affine rigidity).

    Differences of images determine the rational linear part exactly; the
    translation part may carry α.
    """
    pts = [tuple(_as_qalpha(v) for v in p) for p in points]
    ims = [tuple(_as_qalpha(v) for v in p) for p in images]
    n = len(pts[0])
    if len(pts) != n + 1 or len(ims) != n + 1:
        raise DimensionMismatchError(f"need exactly {n + 1} point/image pairs")
    if any(not v.is_rational for p in pts for v in p):
        raise ValueError("anchor points must be rational for exact recovery")
    d = [[(pts[k + 1][j] - pts[0][j]).p for k in range(n)] for j in range(n)]
    if mat_det(_freeze_matrix(d)) == 0:
        raise ValueError("points are affinely dependent")
    d_inv = mat_inv(_freeze_matrix(d))
    e = [tuple(ims[k + 1][j] - ims[0][j] for j in range(n)) for k in range(n)]
    if any(not v.is_rational for col in e for v in col):
        raise ValueError("image differences must be rational (rational linear part)")
    # A·D = E with D columns = point differences: A = E·D⁻¹
    e_mat = _freeze_matrix([[e[k][j].p for k in range(n)] for j in range(n)])
    a = mat_mul(e_mat, d_inv)
    ax0 = tuple(
        sum((pts[0][j].scale(a[i][j]) for j in range(n)), QAlpha()) for i in range(n)
    )
    b = tuple(ims[0][i] - ax0[i] for i in range(n))
    return AffineElement(a, b)
