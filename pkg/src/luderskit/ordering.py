"""Exact normal/anti-normal ordering of ladder-operator polynomials.

Coefficients live in the complex rationals, so every ordering identity,
the Lüders rewrite a†^m a^n -> a^n a†^m, and the fixed-space kernel are
computed without rounding.  Position and momentum enter through
q = (a + a†)/2 and p = (a - a†)/2i.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .expr import (
    Add,
    ComplexRational,
    ExprNode,
    Literal,
    Mul,
    Neg,
    ONE,
    Pow,
    Sub,
    Symbol,
    ZERO,
    I_UNIT,
    parse_expression,
)

# degree cap for exact fixed-space enumeration
MAX_FIXED_SPACE_DEGREE = 12

_HALF = ComplexRational.real(Fraction(1, 2))
_NEG_HALF_I = ComplexRational(Fraction(0), Fraction(-1, 2))  # 1/(2i)


@functools.lru_cache(maxsize=None)
def _normal_word(n: int, m: int):
    """Normal-ordered form of the word a^n a†^m as {(ad_pow, a_pow): int}.

    Built from the single commutation a a† = a†a + 1, applied through the
    recurrence a^n a† = a† a^n + n a^(n-1).
    """
    if n == 0:
        return ((m, 0), 1),
    if m == 0:
        return ((0, n), 1),
    acc: dict[tuple[int, int], int] = {}
    for (mm, nn), c in _normal_word(n, m - 1):
        key = (mm + 1, nn)
        acc[key] = acc.get(key, 0) + c
    for key, c in _normal_word(n - 1, m - 1):
        acc[key] = acc.get(key, 0) + n * c
    return tuple(sorted(acc.items()))


@functools.lru_cache(maxsize=None)
def _anti_word(m: int, n: int):
    """Anti-normal form of the word a†^m a^n as {(a_pow, ad_pow): int}.

    Mirror recurrence of _normal_word, using a† a^n = a^n a† - n a^(n-1).
    """
    if m == 0:
        return ((n, 0), 1),
    if n == 0:
        return ((0, m), 1),
    acc: dict[tuple[int, int], int] = {}
    for (aa, dd), c in _anti_word(m - 1, n):
        key = (aa, dd + 1)
        acc[key] = acc.get(key, 0) + c
    for key, c in _anti_word(m - 1, n - 1):
        acc[key] = acc.get(key, 0) - n * c
    return tuple(sorted(acc.items()))


def reordering_coefficients(m: int, n: int) -> dict[tuple[int, int], int]:
    """Closed-form normal ordering of a^m a†^n.

    Returns {(n-s, m-s): s! C(m,s) C(n,s)} keyed by (ad_pow, a_pow); kept
    independent of the commutation recurrence so the two can cross-check.
    """
    return {
        (n - s, m - s): factorial(s) * comb(m, s) * comb(n, s)
        for s in range(min(m, n) + 1)
    }


class NormalPolynomial:
    """Sparse exact polynomial sum beta[(m, n)] a†^m a^n, zero terms dropped."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[tuple[int, int], ComplexRational] | None = None):
        self.terms = {k: v for k, v in (terms or {}).items() if not v.is_zero()}

    @classmethod
    def zero(cls) -> "NormalPolynomial":
        return cls()

    @classmethod
    def identity(cls) -> "NormalPolynomial":
        return cls({(0, 0): ONE})

    @classmethod
    def monomial(cls, m: int, n: int, coeff: ComplexRational = ONE) -> "NormalPolynomial":
        if m < 0 or n < 0:
            raise ValueError("ladder powers must be nonnegative")
        return cls({(m, n): coeff})

    def coefficient(self, m: int, n: int) -> ComplexRational:
        return self.terms.get((m, n), ZERO)

    def __add__(self, other: "NormalPolynomial") -> "NormalPolynomial":
        out = dict(self.terms)
        for key, val in other.terms.items():
            out[key] = out.get(key, ZERO) + val
        return NormalPolynomial(out)

    def __sub__(self, other: "NormalPolynomial") -> "NormalPolynomial":
        out = dict(self.terms)
        for key, val in other.terms.items():
            out[key] = out.get(key, ZERO) - val
        return NormalPolynomial(out)

    def scaled(self, coeff: ComplexRational) -> "NormalPolynomial":
        return NormalPolynomial({k: v * coeff for k, v in self.terms.items()})

    def __mul__(self, other: "NormalPolynomial") -> "NormalPolynomial":
        out: dict[tuple[int, int], ComplexRational] = {}
        for (m1, n1), c1 in self.terms.items():
            for (m2, n2), c2 in other.terms.items():
                c = c1 * c2
                # (a†^m1 a^n1)(a†^m2 a^n2): reorder the middle word a^n1 a†^m2
                for (mm, nn), w in _normal_word(n1, m2):
                    key = (m1 + mm, nn + n2)
                    out[key] = out.get(key, ZERO) + c * ComplexRational.real(w)
        return NormalPolynomial(out)

    def __eq__(self, other) -> bool:
        return isinstance(other, NormalPolynomial) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def degree(self) -> int:
        return max((m + n for m, n in self.terms), default=0)

    def adjoint(self) -> "NormalPolynomial":
        return NormalPolynomial(
            {(n, m): c.conjugate() for (m, n), c in self.terms.items()}
        )

    def is_hermitian(self) -> bool:
        return self == self.adjoint()

    def sorted_terms(self):
        """Terms in canonical print order: total degree desc, then a†-power desc."""
        return sorted(
            self.terms.items(), key=lambda kv: (-(kv[0][0] + kv[0][1]), -kv[0][0])
        )

    def to_source(self) -> str:
        return _poly_source(self.sorted_terms(), creation_first=True)

    def __repr__(self):
        return f"NormalPolynomial({self.to_source()})"


class AntiNormalPolynomial:
    """Sparse exact polynomial sum beta[(m, n)] a^m a†^n."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[tuple[int, int], ComplexRational] | None = None):
        self.terms = {k: v for k, v in (terms or {}).items() if not v.is_zero()}

    def coefficient(self, m: int, n: int) -> ComplexRational:
        return self.terms.get((m, n), ZERO)

    def __eq__(self, other) -> bool:
        return isinstance(other, AntiNormalPolynomial) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def sorted_terms(self):
        return sorted(
            self.terms.items(), key=lambda kv: (-(kv[0][0] + kv[0][1]), -kv[0][1])
        )

    def to_source(self) -> str:
        return _poly_source(self.sorted_terms(), creation_first=False)

    def to_normal(self) -> NormalPolynomial:
        out: dict[tuple[int, int], ComplexRational] = {}
        for (m, n), c in self.terms.items():
            for (mm, nn), w in _normal_word(m, n):
                key = (mm, nn)
                out[key] = out.get(key, ZERO) + c * ComplexRational.real(w)
        return NormalPolynomial(out)

    def __repr__(self):
        return f"AntiNormalPolynomial({self.to_source()})"


def _poly_source(sorted_terms, creation_first: bool) -> str:
    if not sorted_terms:
        return "0"
    pieces = []
    for (m, n), coeff in sorted_terms:
        if creation_first:
            ops = _word_source("ad", m) + _word_source("a", n)
        else:
            ops = _word_source("a", m) + _word_source("ad", n)
        coeff_str = str(coeff)
        if not ops:
            body = coeff_str
        elif coeff == ONE:
            body = "*".join(ops)
        elif coeff == -ONE:
            body = "-" + "*".join(ops)
        else:
            body = "*".join([coeff_str] + ops)
        pieces.append(body)
    text = pieces[0]
    for body in pieces[1:]:
        if body.startswith("-"):
            text += " - " + body[1:]
        else:
            text += " + " + body
    return text


def _word_source(sym: str, power: int) -> list[str]:
    if power == 0:
        return []
    return [sym if power == 1 else f"{sym}^{power}"]


# --- expression evaluation ---------------------------------------------------

_SYMBOL_POLYS = {
    "a": NormalPolynomial({(0, 1): ONE}),
    "ad": NormalPolynomial({(1, 0): ONE}),
    "id": NormalPolynomial.identity(),
    "q": NormalPolynomial({(1, 0): _HALF, (0, 1): _HALF}),
    "p": NormalPolynomial({(1, 0): -_NEG_HALF_I, (0, 1): _NEG_HALF_I}),
}


def normal_order(expression: ExprNode | str) -> NormalPolynomial:
    """Normal-order an expression (or its source text) exactly."""
    if isinstance(expression, str):
        expression = parse_expression(expression)
    return _eval_node(expression)


def _eval_node(node: ExprNode) -> NormalPolynomial:
    if isinstance(node, Literal):
        return NormalPolynomial({(0, 0): node.value})
    if isinstance(node, Symbol):
        return _SYMBOL_POLYS[node.name]
    if isinstance(node, Neg):
        return _eval_node(node.operand).scaled(-ONE)
    if isinstance(node, Add):
        return _eval_node(node.lhs) + _eval_node(node.rhs)
    if isinstance(node, Sub):
        return _eval_node(node.lhs) - _eval_node(node.rhs)
    if isinstance(node, Mul):
        return _eval_node(node.lhs) * _eval_node(node.rhs)
    if isinstance(node, Pow):
        base = _eval_node(node.base)
        out = NormalPolynomial.identity()
        for _ in range(node.exponent):
            out = out * base
        return out
    raise TypeError(f"not an expression node: {node!r}")


def anti_normal_order(poly: NormalPolynomial) -> AntiNormalPolynomial:
    """Rewrite a normal-ordered polynomial with all a† pushed to the right."""
    out: dict[tuple[int, int], ComplexRational] = {}
    for (m, n), c in poly.terms.items():
        for (aa, dd), w in _anti_word(m, n):
            key = (aa, dd)
            out[key] = out.get(key, ZERO) + c * ComplexRational.real(w)
    return AntiNormalPolynomial(out)


def luders_symbolic(poly: NormalPolynomial) -> NormalPolynomial:
    """Image under the coherent-state Lüders map: a†^m a^n -> a^n a†^m."""
    out: dict[tuple[int, int], ComplexRational] = {}
    for (m, n), c in poly.terms.items():
        for (mm, nn), w in _normal_word(n, m):
            key = (mm, nn)
            out[key] = out.get(key, ZERO) + c * ComplexRational.real(w)
    return NormalPolynomial(out)


def is_well_ordered(poly: NormalPolynomial) -> bool:
    """True iff the normal and anti-normal coefficient families coincide.

    Families are matched through the symbol substitution a -> z, a† -> z*:
    the normal term a†^m a^n and the anti-normal term a^n a†^m both read as
    z*^m z^n, so the anti-normal key order is reversed before comparing.
    This is equivalent to invariance under the Lüders map.
    """
    anti = anti_normal_order(poly)
    return poly.terms == {(n, m): c for (m, n), c in anti.terms.items()}


# --- invariant family and fixed-space enumeration ----------------------------

def family_q(n: int) -> NormalPolynomial:
    """(a^n + a†^n)/2."""
    return NormalPolynomial({(n, 0): _HALF, (0, n): _HALF})


def family_p(n: int) -> NormalPolynomial:
    """(a^n - a†^n)/2i."""
    return NormalPolynomial({(n, 0): -_NEG_HALF_I, (0, n): _NEG_HALF_I})


@dataclass(frozen=True)
class LuedersFamilyCoefficients:
    """Coordinates b0, bq[n], bp[n] of a polynomial in the invariant family."""

    max_degree: int
    b0: Fraction
    bq: tuple[Fraction, ...]
    bp: tuple[Fraction, ...]


@dataclass(frozen=True)
class FixedSpaceResult:
    max_degree: int
    dimension: int
    basis: tuple[NormalPolynomial, ...]
    family_coordinates: tuple[LuedersFamilyCoefficients, ...]


def _hermitian_basis(max_degree: int):
    """Real basis of the Hermitian polynomials of total degree <= max_degree."""
    basis = []
    for m in range(max_degree + 1):
        for n in range(m + 1):
            if m + n > max_degree:
                continue
            if m == n:
                basis.append(("diag", m, n))
            else:
                basis.append(("re", m, n))
                basis.append(("im", m, n))
    return basis


def _basis_polynomial(tag) -> NormalPolynomial:
    kind, m, n = tag
    if kind == "diag":
        return NormalPolynomial({(m, m): ONE})
    if kind == "re":
        return NormalPolynomial({(m, n): ONE, (n, m): ONE})
    return NormalPolynomial({(m, n): I_UNIT, (n, m): -I_UNIT})


def _coordinates(poly: NormalPolynomial, basis) -> list[Fraction]:
    coords = []
    for kind, m, n in basis:
        c = poly.coefficient(m, n)
        if kind == "diag":
            coords.append(c.re)
        elif kind == "re":
            coords.append(c.re)
        else:
            coords.append(c.im)
    return coords


def _rational_kernel(columns: list[list[Fraction]], size: int) -> list[list[Fraction]]:
    """Exact kernel basis of the matrix whose j-th column is columns[j]."""
    ncols = len(columns)
    rows = [[columns[j][i] for j in range(ncols)] for i in range(size)]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, size) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(size):
            if i != r and rows[i][c] != 0:
                factor = rows[i][c]
                rows[i] = [x - factor * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == size:
            break
    free = [c for c in range(ncols) if c not in pivots]
    kernel = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for ri, pc in enumerate(pivots):
            vec[pc] = -rows[ri][fc]
        kernel.append(vec)
    return kernel


def decompose_in_family(poly: NormalPolynomial, max_degree: int) -> LuedersFamilyCoefficients:
    """Express a polynomial as b0 I + sum_n (bq_n Bq_n + bp_n Bp_n), exactly.

    Raises ValueError if the polynomial has any mixed a†^m a^n term with
    m, n >= 1, i.e. falls outside the invariant family.
    """
    if any(m >= 1 and n >= 1 for m, n in poly.terms):
        raise ValueError("polynomial is not in the well-ordered invariant family")
    if not poly.is_hermitian():
        raise ValueError("polynomial is not Hermitian")
    c00 = poly.coefficient(0, 0)
    bq = []
    bp = []
    for n in range(1, max_degree + 1):
        cn = poly.coefficient(n, 0)  # coefficient of a†^n = (bq + i bp)/2
        bq.append(2 * cn.re)
        bp.append(2 * cn.im)
    return LuedersFamilyCoefficients(max_degree, c00.re, tuple(bq), tuple(bp))


def luders_fixed_space(max_degree: int) -> FixedSpaceResult:
    """Exact kernel of (Lüders map - id) on Hermitian polynomials.

    The kernel has dimension 2*max_degree + 1 and is spanned by the identity
    together with (a^n ± a†^n) combinations; the returned family coordinates
    certify that every kernel element lies in that span.
    """
    if max_degree < 0 or max_degree > MAX_FIXED_SPACE_DEGREE:
        raise ValueError(
            f"max_degree must be in 0..{MAX_FIXED_SPACE_DEGREE}, got {max_degree}"
        )
    basis = _hermitian_basis(max_degree)
    size = len(basis)
    columns = []
    for tag in basis:
        poly = _basis_polynomial(tag)
        image = luders_symbolic(poly) - poly
        columns.append(_coordinates(image, basis))
    kernel = _rational_kernel(columns, size)
    polys = []
    coords = []
    for vec in kernel:
        poly = NormalPolynomial.zero()
        for x, tag in zip(vec, basis):
            if x != 0:
                poly = poly + _basis_polynomial(tag).scaled(ComplexRational.real(x))
        polys.append(poly)
        coords.append(decompose_in_family(poly, max_degree))
    return FixedSpaceResult(max_degree, len(polys), tuple(polys), tuple(coords))


def to_matrix(poly: NormalPolynomial, space):
    """Realize a polynomial on a truncated Fock space as a dense matrix.

    The polynomial degree may not exceed the space's guard margin
    (dim - guard_dim), so that matrix elements inside the guard block are
    unaffected by truncation.
    """
    import numpy as np

    margin = space.dim - space.guard_dim
    if poly.degree() > margin:
        raise ValueError(
            f"polynomial degree {poly.degree()} exceeds guard margin {margin}"
        )
    out = np.zeros((space.dim, space.dim), dtype=complex)
    ad_pows = {0: np.eye(space.dim, dtype=complex)}
    a_pows = {0: np.eye(space.dim, dtype=complex)}
    for (m, n), c in poly.terms.items():
        if m not in ad_pows:
            ad_pows[m] = np.linalg.matrix_power(space.adag, m)
        if n not in a_pows:
            a_pows[n] = np.linalg.matrix_power(space.a, n)
        out += complex(c) * (ad_pows[m] @ a_pows[n])
    return out
