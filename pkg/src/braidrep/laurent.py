"""Exact arithmetic in the Laurent ring Z[t^+-1, s^+-1, r^+-1] and matrices over it.

Polynomials are dicts keyed by exponent triples (e_t, e_s, e_r) with nonzero
integer coefficients; the canonical form never stores a zero coefficient and
all iteration is in sorted exponent order, so equal elements compare and hash
equal and serialize identically.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from .errors import DimMismatch, ZeroAssignment

Exponents = tuple[int, int, int]

_VARS = ("t", "s", "r")


class LaurentPoly:
    """Immutable Laurent polynomial in t, s, r over Z."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Exponents, int] | None = None):
        clean: dict[Exponents, int] = {}
        if terms:
            for exp, coeff in terms.items():
                if coeff:
                    e = (int(exp[0]), int(exp[1]), int(exp[2]))
                    clean[e] = clean.get(e, 0) + int(coeff)
                    if not clean[e]:
                        del clean[e]
        self._terms = clean
        self._hash: int | None = None

    # construction ------------------------------------------------------

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return _ZERO

    @classmethod
    def one(cls) -> "LaurentPoly":
        return _ONE

    @classmethod
    def const(cls, c: int) -> "LaurentPoly":
        return cls({(0, 0, 0): c})

    @classmethod
    def monomial(cls, c: int = 1, et: int = 0, es: int = 0, er: int = 0) -> "LaurentPoly":
        return cls({(et, es, er): c})

    # views ---------------------------------------------------------------

    def items(self) -> Iterator[tuple[Exponents, int]]:
        return iter(sorted(self._terms.items()))

    def __len__(self) -> int:
        return len(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def is_one(self) -> bool:
        return self._terms == {(0, 0, 0): 1}

    # ring ops ------------------------------------------------------------

    def __add__(self, other: "LaurentPoly | int") -> "LaurentPoly":
        other = _coerce(other)
        if not self._terms:
            return other
        if not other._terms:
            return self
        out = dict(self._terms)
        for exp, c in other._terms.items():
            v = out.get(exp, 0) + c
            if v:
                out[exp] = v
            else:
                out.pop(exp, None)
        return _wrap(out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return _wrap({e: -c for e, c in self._terms.items()})

    def __sub__(self, other: "LaurentPoly | int") -> "LaurentPoly":
        return self + (-_coerce(other))

    def __rsub__(self, other: int) -> "LaurentPoly":
        return _coerce(other) + (-self)

    def __mul__(self, other: "LaurentPoly | int") -> "LaurentPoly":
        other = _coerce(other)
        a, b = self._terms, other._terms
        if not a or not b:
            return _ZERO
        if len(a) > len(b):
            a, b = b, a
        out: dict[Exponents, int] = {}
        for (x1, y1, z1), c1 in a.items():
            for (x2, y2, z2), c2 in b.items():
                exp = (x1 + x2, y1 + y2, z1 + z2)
                v = out.get(exp, 0) + c1 * c2
                if v:
                    out[exp] = v
                else:
                    del out[exp]
        return _wrap(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LaurentPoly":
        if k < 0:
            return self.inverse_unit() ** (-k)
        acc = _ONE
        base = self
        while k:
            if k & 1:
                acc = acc * base
            base = base * base if k > 1 else base
            k >>= 1
        return acc

    def inverse_unit(self) -> "LaurentPoly":
        """Inverse of a +-monomial; raises ValueError otherwise."""
        if len(self._terms) != 1:
            raise ValueError("not a unit: " + format_poly(self))
        (exp, c), = self._terms.items()
        if c not in (1, -1):
            raise ValueError("not a unit: " + format_poly(self))
        return LaurentPoly({(-exp[0], -exp[1], -exp[2]): c})

    # comparison -----------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = _coerce(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(sorted(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"LaurentPoly({format_poly(self)!r})"


def _wrap(terms: dict[Exponents, int]) -> LaurentPoly:
    p = LaurentPoly.__new__(LaurentPoly)
    p._terms = terms
    p._hash = None
    return p


def _coerce(x: "LaurentPoly | int") -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, int):
        return LaurentPoly({(0, 0, 0): x})
    raise TypeError(f"cannot coerce {type(x).__name__} into the Laurent ring")


_ZERO = LaurentPoly()
_ONE = LaurentPoly({(0, 0, 0): 1})

T = LaurentPoly.monomial(1, 1, 0, 0)
S = LaurentPoly.monomial(1, 0, 1, 0)
R = LaurentPoly.monomial(1, 0, 0, 1)
T_INV = LaurentPoly.monomial(1, -1, 0, 0)
S_INV = LaurentPoly.monomial(1, 0, -1, 0)
R_INV = LaurentPoly.monomial(1, 0, 0, -1)


def lp_add(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    return a + b


def lp_mul(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    return a * b


# -- evaluation --------------------------------------------------------------


@dataclass(frozen=True)
class Assignment:
    """Rational evaluation point; every coordinate must be nonzero.

    r defaults to 1 so two-variable images evaluate without mentioning it.
    """

    t: Fraction
    s: Fraction
    r: Fraction = Fraction(1)

    def __post_init__(self):
        for name in ("t", "s", "r"):
            v = Fraction(getattr(self, name))
            if v == 0:
                raise ZeroAssignment(f"assignment sets {name}=0")
            object.__setattr__(self, name, v)


def lp_eval(p: LaurentPoly, a: Assignment) -> Fraction:
    total = Fraction(0)
    for (et, es, er), c in p.items():
        total += c * a.t**et * a.s**es * a.r**er
    return total


# -- text and JSON forms ------------------------------------------------------


def _format_term(exp: Exponents, coeff: int) -> str:
    parts = []
    for name, e in zip(_VARS, exp):
        if e == 0:
            continue
        parts.append(name if e == 1 else f"{name}^{e}")
    mag = abs(coeff)
    if not parts:
        return str(mag)
    if mag != 1:
        parts.insert(0, str(mag))
    return "*".join(parts)


def format_poly(p: LaurentPoly) -> str:
    if p.is_zero:
        return "0"
    out = []
    for i, (exp, coeff) in enumerate(p.items()):
        body = _format_term(exp, coeff)
        if i == 0:
            out.append("-" + body if coeff < 0 else body)
        else:
            out.append(("- " if coeff < 0 else "+ ") + body)
    return " ".join(out)


def poly_to_json(p: LaurentPoly) -> list[dict]:
    return [{"e": list(exp), "c": str(coeff)} for exp, coeff in p.items()]


def poly_from_json(data: Iterable[Mapping]) -> LaurentPoly:
    terms: dict[Exponents, int] = {}
    for item in data:
        e = item["e"]
        terms[(int(e[0]), int(e[1]), int(e[2]))] = int(item["c"])
    return LaurentPoly(terms)


# -- matrices ------------------------------------------------------------------


@dataclass(frozen=True)
class Matrix:
    """Square matrix over the Laurent ring, rows of equal length."""

    dim: int
    rows: tuple[tuple[LaurentPoly, ...], ...]

    def __post_init__(self):
        if len(self.rows) != self.dim or any(len(r) != self.dim for r in self.rows):
            raise DimMismatch(f"ragged rows for dim {self.dim}")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[LaurentPoly | int]]) -> "Matrix":
        frozen = tuple(tuple(_coerce(x) for x in row) for row in rows)
        return cls(len(frozen), frozen)

    @classmethod
    def identity(cls, dim: int) -> "Matrix":
        return cls(dim, tuple(
            tuple(_ONE if i == j else _ZERO for j in range(dim))
            for i in range(dim)))

    def __getitem__(self, ij: tuple[int, int]) -> LaurentPoly:
        return self.rows[ij[0]][ij[1]]

    @property
    def is_identity(self) -> bool:
        return self == Matrix.identity(self.dim)

    def __mul__(self, other: "Matrix") -> "Matrix":
        return mat_mul(self, other)

    def det(self) -> LaurentPoly:
        """Exact determinant by expansion along rows, memoized on column sets."""
        n = self.dim
        memo: dict[int, LaurentPoly] = {0: _ONE}

        def rec(mask: int) -> LaurentPoly:
            if mask in memo:
                return memo[mask]
            row = n - bin(mask).count("1")
            total = _ZERO
            sign = 1
            for col in range(n):
                bit = 1 << col
                if not mask & bit:
                    continue
                entry = self.rows[row][col]
                if not entry.is_zero:
                    sub = rec(mask & ~bit)
                    total = total + (entry * sub if sign > 0 else -(entry * sub))
                sign = -sign  # rank parity within the mask, not absolute column
            memo[mask] = total
            return total

        return rec((1 << n) - 1)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if a.dim != b.dim:
        raise DimMismatch(f"{a.dim} x {a.dim} times {b.dim} x {b.dim}")
    n = a.dim
    cols = list(zip(*b.rows))
    out = []
    for row in a.rows:
        new_row = []
        for col in cols:
            acc = _ZERO
            for x, y in zip(row, col):
                if x._terms and y._terms:
                    acc = acc + x * y
            new_row.append(acc)
        out.append(tuple(new_row))
    return Matrix(n, tuple(out))


def mat_eval(m: Matrix, a: Assignment) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(lp_eval(x, a) for x in row) for row in m.rows)


def mat_to_text(m: Matrix) -> str:
    return "\n".join(",".join(format_poly(x) for x in row) for row in m.rows)


def mat_to_json(m: Matrix) -> dict:
    return {"dim": m.dim,
            "rows": [[poly_to_json(x) for x in row] for row in m.rows]}


def mat_from_json(data: Mapping) -> Matrix:
    rows = tuple(tuple(poly_from_json(x) for x in row) for row in data["rows"])
    return Matrix(int(data["dim"]), rows)


# -- exact rational linear algebra (used by invariant checks) ------------------


def rational_det(rows: Iterable[Iterable[Fraction]]) -> Fraction:
    m = [list(map(Fraction, r)) for r in rows]
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col]), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            if m[r][col]:
                f = m[r][col] * inv
                for c in range(col, n):
                    m[r][c] -= f * m[col][c]
    return det


def rational_rank(rows: Iterable[Iterable[Fraction]]) -> int:
    m = [list(map(Fraction, r)) for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    row = 0
    for col in range(ncols):
        pivot = next((r for r in range(row, len(m)) if m[r][col]), None)
        if pivot is None:
            continue
        m[row], m[pivot] = m[pivot], m[row]
        inv = 1 / m[row][col]
        for r in range(len(m)):
            if r != row and m[r][col]:
                f = m[r][col] * inv
                for c in range(col, ncols):
                    m[r][c] -= f * m[row][c]
        rank += 1
        row += 1
        if row == len(m):
            break
    return rank
