"""Exact sparse multivariate polynomial arithmetic over the rationals.

A polynomial in n variables is a mapping from exponent tuples to nonzero
rational coefficients.  The exponent tuple (a_0, ..., a_{n-1}) stands for
the monomial x_0^a_0 * ... * x_{n-1}^a_{n-1}; a zero polynomial has an
empty mapping.  All arithmetic is exact: coefficients are rationals in
lowest terms with positive denominator, and no operation in this module
ever touches floating point.

The canonical term order is graded lexicographic, descending: higher
total degree first, ties broken by the lexicographically larger exponent
tuple.  ``poly_to_text`` and ``poly_from_text`` implement the line-based
wire format used by the command line tools (one term per line: n exponent
integers followed by the coefficient as ``p`` or ``p/q``).

When gmpy2 is installed its ``mpq`` type is used as the scalar backend;
it has the same exact semantics and string form as ``fractions.Fraction``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import comb
from typing import Iterable, Iterator, Mapping, Sequence

try:
    from gmpy2 import mpq as _Q  # exact rational, drop-in fast path
except ImportError:  # pragma: no cover
    _Q = Fraction

Monomial = tuple[int, ...]

_RATIONAL_TYPES = (int, Fraction, type(_Q(0)))


def rational(value: int | str | Fraction = 0, denominator: int | None = None):
    """Coerce ``value`` to the exact rational scalar type.

    Accepts integers, strings like ``"3"`` or ``"-3/4"``, Fractions, and
    values already of the backend type.  Floats are rejected: silent
    binary-float contamination is the main way exactness dies, so the
    conversion must be asked for by name (``rational_from_float``).
    """
    if isinstance(value, float):
        raise TypeError("float coefficient; use rational_from_float for exact conversion")
    if denominator is not None:
        return _Q(value) / _Q(denominator)
    if isinstance(value, str):
        return _Q(Fraction(value))
    return _Q(value)


def rational_from_float(value: float):
    """Exact rational value of a binary float (no rounding)."""
    return _Q(Fraction(value).numerator, Fraction(value).denominator)


def grlex_key(monomial: Monomial) -> tuple[int, Monomial]:
    """Sort key for graded lexicographic order (use with reverse=True)."""
    return (sum(monomial), monomial)


class Polynomial:
    """Immutable sparse polynomial with exact rational coefficients.

    ``terms`` maps exponent tuples to nonzero coefficients.  Instances are
    treated as immutable; the term mapping must not be mutated by callers.
    """

    __slots__ = ("dimension", "terms")

    def __init__(self, dimension: int, terms: Mapping[Monomial, object] | None = None):
        if dimension < 0:
            raise ValueError("dimension must be nonnegative")
        object.__setattr__(self, "dimension", dimension)
        clean: dict[Monomial, object] = {}
        if terms:
            for mono, coeff in terms.items():
                mono = tuple(mono)
                if len(mono) != dimension:
                    raise ValueError(f"exponent tuple {mono} does not have length {dimension}")
                if any((not isinstance(e, int)) or e < 0 for e in mono):
                    raise ValueError(f"exponents must be nonnegative integers: {mono}")
                c = coeff if isinstance(coeff, _RATIONAL_TYPES) else rational(coeff)
                if c != 0:
                    c = _Q(c)
                    if mono in clean:
                        c = clean[mono] + c
                        if c == 0:
                            del clean[mono]
                            continue
                    clean[mono] = c
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # -- construction helpers -------------------------------------------------

    @classmethod
    def zero(cls, dimension: int) -> "Polynomial":
        return cls(dimension)

    @classmethod
    def constant(cls, dimension: int, value) -> "Polynomial":
        return cls(dimension, {(0,) * dimension: rational(value)})

    @classmethod
    def variable(cls, dimension: int, index: int) -> "Polynomial":
        """The polynomial x_index (0-based)."""
        if not 0 <= index < dimension:
            raise ValueError(f"variable index {index} out of range for dimension {dimension}")
        mono = tuple(1 if j == index else 0 for j in range(dimension))
        return cls(dimension, {mono: 1})

    @classmethod
    def monomial(cls, dimension: int, exponents: Sequence[int], coefficient=1) -> "Polynomial":
        return cls(dimension, {tuple(exponents): coefficient})

    # -- structure ------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int | None:
        """Total degree, or None for the zero polynomial."""
        if not self.terms:
            return None
        return max(sum(m) for m in self.terms)

    def is_homogeneous(self, degree: int | None = None) -> bool:
        """True when every term has the same total degree (any degree if unset).

        The zero polynomial is homogeneous of every degree.
        """
        if not self.terms:
            return True
        degrees = {sum(m) for m in self.terms}
        if len(degrees) > 1:
            return False
        return degree is None or degrees == {degree}

    def coefficient(self, monomial: Sequence[int]):
        return self.terms.get(tuple(monomial), _Q(0))

    def sorted_terms(self) -> list[tuple[Monomial, object]]:
        """Terms in canonical graded-lex descending order."""
        return sorted(self.terms.items(), key=lambda item: grlex_key(item[0]), reverse=True)

    def max_abs_coefficient(self):
        """Largest coefficient magnitude as an exact rational (0 for zero)."""
        if not self.terms:
            return _Q(0)
        return max(abs(c) for c in self.terms.values())

    # -- arithmetic -----------------------------------------------------------

    def _require_same_ring(self, other: "Polynomial") -> None:
        if self.dimension != other.dimension:
            raise ValueError(
                f"dimension mismatch: {self.dimension} vs {other.dimension}"
            )

    def __add__(self, other):
        if isinstance(other, Polynomial):
            self._require_same_ring(other)
            out = dict(self.terms)
            for mono, coeff in other.terms.items():
                acc = out.get(mono)
                if acc is None:
                    out[mono] = coeff
                else:
                    acc = acc + coeff
                    if acc == 0:
                        del out[mono]
                    else:
                        out[mono] = acc
            return _raw(self.dimension, out)
        return self + Polynomial.constant(self.dimension, other)

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        return _raw(self.dimension, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, Polynomial):
            return self + (-other)
        return self + Polynomial.constant(self.dimension, -rational(other))

    def __rsub__(self, other):
        return (-self) + Polynomial.constant(self.dimension, other)

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            return poly_mul(self, other)
        c = rational(other)
        if c == 0:
            return Polynomial.zero(self.dimension)
        return _raw(self.dimension, {m: v * c for m, v in self.terms.items()})

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = Polynomial.constant(self.dimension, 1)
        base = self
        e = exponent
        while e:  # binary powering
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.dimension == other.dimension and self.terms == other.terms
        if isinstance(other, _RATIONAL_TYPES):
            return self == Polynomial.constant(self.dimension, other)
        return NotImplemented

    __hash__ = None

    def evaluate(self, point: Sequence):
        return evaluate(self, point)

    def __repr__(self):
        if len(self.terms) <= 4:
            body = " + ".join(
                f"{c}*x^{list(m)}" for m, c in self.sorted_terms()
            ) or "0"
            return f"Polynomial(n={self.dimension}: {body})"
        return f"Polynomial(n={self.dimension}, terms={len(self.terms)})"


def _raw(dimension: int, terms: dict) -> Polynomial:
    """Internal constructor bypassing validation; terms must be clean."""
    poly = Polynomial.__new__(Polynomial)
    object.__setattr__(poly, "dimension", dimension)
    object.__setattr__(poly, "terms", terms)
    return poly


# -- ring operations ----------------------------------------------------------


def poly_mul(a: Polynomial, b: Polynomial) -> Polynomial:
    """Exact product of two polynomials in the same ring."""
    a._require_same_ring(b)
    if a.is_zero or b.is_zero:
        return Polynomial.zero(a.dimension)
    if len(a.terms) > len(b.terms):
        a, b = b, a
    out: dict[Monomial, object] = {}
    b_items = list(b.terms.items())
    for m1, c1 in a.terms.items():
        for m2, c2 in b_items:
            mono = tuple(x + y for x, y in zip(m1, m2))
            acc = out.get(mono)
            if acc is None:
                out[mono] = c1 * c2
            else:
                acc = acc + c1 * c2
                if acc == 0:
                    del out[mono]
                else:
                    out[mono] = acc
    return _raw(a.dimension, out)


def poly_square(a: Polynomial) -> Polynomial:
    """a*a, using symmetry to halve the multiplication count."""
    items = list(a.terms.items())
    out: dict[Monomial, object] = {}

    def accumulate(mono, value):
        acc = out.get(mono)
        if acc is None:
            out[mono] = value
        else:
            acc = acc + value
            if acc == 0:
                del out[mono]
            else:
                out[mono] = acc

    for i, (m1, c1) in enumerate(items):
        accumulate(tuple(2 * x for x in m1), c1 * c1)
        for m2, c2 in items[i + 1:]:
            accumulate(tuple(x + y for x, y in zip(m1, m2)), 2 * c1 * c2)
    return _raw(a.dimension, out)


def partial_derivative(f: Polynomial, index: int) -> Polynomial:
    """Exact partial derivative with respect to x_index (0-based)."""
    if not 0 <= index < f.dimension:
        raise ValueError(f"variable index {index} out of range for dimension {f.dimension}")
    out: dict[Monomial, object] = {}
    for mono, coeff in f.terms.items():
        e = mono[index]
        if e:
            # lowering a fixed index is injective, so no accumulation needed
            out[mono[:index] + (e - 1,) + mono[index + 1:]] = coeff * e
    return _raw(f.dimension, out)


def gradient(f: Polynomial) -> tuple[Polynomial, ...]:
    return tuple(partial_derivative(f, i) for i in range(f.dimension))


def gradient_norm_sq(f: Polynomial) -> Polynomial:
    """|grad f|^2 as an exact polynomial."""
    out = Polynomial.zero(f.dimension)
    for i in range(f.dimension):
        out = out + poly_square(partial_derivative(f, i))
    return out


def gradient_inner(a: Polynomial, b: Polynomial, indices: Iterable[int] | None = None) -> Polynomial:
    """<grad a, grad b>, optionally restricted to a subset of variables."""
    a._require_same_ring(b)
    out = Polynomial.zero(a.dimension)
    for i in indices if indices is not None else range(a.dimension):
        out = out + poly_mul(partial_derivative(a, i), partial_derivative(b, i))
    return out


def extend_dimension(f: Polynomial, new_dimension: int) -> Polynomial:
    """Embed f into a larger ring by appending trailing variables."""
    if new_dimension < f.dimension:
        raise ValueError("new dimension is smaller than the current one")
    pad = (0,) * (new_dimension - f.dimension)
    return _raw(new_dimension, {mono + pad: c for mono, c in f.terms.items()})


def laplacian(f: Polynomial) -> Polynomial:
    """Sum of second partials, exactly."""
    out: dict[Monomial, object] = {}
    for mono, coeff in f.terms.items():
        for i, e in enumerate(mono):
            if e >= 2:
                lowered = mono[:i] + (e - 2,) + mono[i + 1:]
                value = coeff * (e * (e - 1))
                acc = out.get(lowered)
                if acc is None:
                    out[lowered] = value
                else:
                    acc = acc + value
                    if acc == 0:
                        del out[lowered]
                    else:
                        out[lowered] = acc
    return _raw(f.dimension, out)


def evaluate(f: Polynomial, point: Sequence):
    """Exact value of f at a rational point."""
    if len(point) != f.dimension:
        raise ValueError(f"point has length {len(point)}, expected {f.dimension}")
    values = [rational(v) for v in point]
    total = _Q(0)
    for mono, coeff in f.terms.items():
        term = coeff
        for v, e in zip(values, mono):
            if e:
                term = term * v**e
        total += term
    return total


def substitute_linear(f: Polynomial, matrix) -> Polynomial:
    """f(Mx): replace variable x_i by the linear form sum_j M[i][j] x_j.

    The matrix must be square of size n = f.dimension, with exact rational
    entries (a RationalMatrix or any nested sequence of rationals).
    """
    rows = matrix.entries if hasattr(matrix, "entries") else tuple(tuple(r) for r in matrix)
    n = f.dimension
    if len(rows) != n or any(len(r) != n for r in rows):
        raise ValueError(f"matrix must be {n}x{n}")
    forms = []
    for row in rows:
        terms = {}
        for j, value in enumerate(row):
            c = rational(value)
            if c != 0:
                terms[tuple(1 if k == j else 0 for k in range(n))] = c
        forms.append(_raw(n, terms))

    power_cache: dict[tuple[int, int], Polynomial] = {}

    def form_power(i: int, e: int) -> Polynomial:
        key = (i, e)
        cached = power_cache.get(key)
        if cached is None:
            cached = forms[i] ** e
            power_cache[key] = cached
        return cached

    out: dict[Monomial, object] = {}
    for mono, coeff in f.terms.items():
        piece = Polynomial.constant(n, coeff)
        for i, e in enumerate(mono):
            if e:
                piece = piece * form_power(i, e)
        for m, c in piece.terms.items():
            acc = out.get(m)
            if acc is None:
                out[m] = c
            else:
                acc = acc + c
                if acc == 0:
                    del out[m]
                else:
                    out[m] = acc
    return _raw(n, out)


def homogeneous_split(
    f: Polynomial, blocks: Sequence[Iterable[int]]
) -> dict[tuple[int, ...], Polynomial]:
    """Split f by multi-degree across disjoint variable blocks.

    ``blocks`` lists disjoint sets of variable indices; variables not
    covered form one implicit trailing block.  Returns a map from the
    multi-degree tuple to the polynomial part carrying it.
    """
    block_sets = [frozenset(b) for b in blocks]
    seen: set[int] = set()
    for b in block_sets:
        if not all(0 <= i < f.dimension for i in b):
            raise ValueError("block index out of range")
        if b & seen:
            raise ValueError("blocks overlap")
        seen |= b
    rest = frozenset(range(f.dimension)) - seen
    if rest:
        block_sets.append(rest)

    pieces: dict[tuple[int, ...], dict[Monomial, object]] = {}
    for mono, coeff in f.terms.items():
        key = tuple(sum(mono[i] for i in b) for b in block_sets)
        pieces.setdefault(key, {})[mono] = coeff
    return {key: _raw(f.dimension, terms) for key, terms in pieces.items()}


def radial_power(dimension: int, exponent: int) -> Polynomial:
    """(x_0^2 + ... + x_{n-1}^2)^exponent, expanded multinomially."""
    if exponent < 0:
        raise ValueError("exponent must be nonnegative")
    base = _raw(
        dimension,
        {
            tuple(2 if j == i else 0 for j in range(dimension)): _Q(1)
            for i in range(dimension)
        },
    )
    return base**exponent


def binomial(n: int, k: int) -> int:
    return comb(n, k)


# -- poly-text wire format ----------------------------------------------------


_COEFF_RE = re.compile(r"[+-]?\d+(?:/\d+)?")


class PolyTextError(ValueError):
    """Malformed poly-text input; carries the 1-based offending line number."""

    def __init__(self, message: str, line_number: int | None = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


def _meaningful_lines(text: str) -> Iterator[tuple[int, str]]:
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield number, line


def poly_from_text(text: str) -> Polynomial:
    """Parse the poly-text format.

    Line 1 (ignoring comments and blanks) is ``n <dimension>``; every
    following line is n exponent integers and one rational coefficient.
    Term order is free and duplicate monomials are merged.
    """
    lines = _meaningful_lines(text)
    try:
        number, header = next(lines)
    except StopIteration:
        raise PolyTextError("empty input, expected 'n <dimension>' header") from None
    fields = header.split()
    if len(fields) != 2 or fields[0] != "n":
        raise PolyTextError("expected header 'n <dimension>'", number)
    try:
        dimension = int(fields[1])
    except ValueError:
        raise PolyTextError(f"dimension is not an integer: {fields[1]!r}", number) from None
    if dimension < 0:
        raise PolyTextError("dimension must be nonnegative", number)

    terms: dict[Monomial, object] = {}
    for number, line in lines:
        fields = line.split()
        if len(fields) != dimension + 1:
            raise PolyTextError(
                f"expected {dimension} exponents and a coefficient, got {len(fields)} fields",
                number,
            )
        try:
            mono = tuple(int(tok) for tok in fields[:dimension])
        except ValueError:
            raise PolyTextError(f"bad exponent in {fields[:dimension]}", number) from None
        if any(e < 0 for e in mono):
            raise PolyTextError("exponents must be nonnegative", number)
        token = fields[dimension]
        if not _COEFF_RE.fullmatch(token):
            raise PolyTextError(f"bad coefficient {token!r}, expected p or p/q", number)
        try:
            coeff = rational(token)
        except ZeroDivisionError:
            raise PolyTextError(f"bad coefficient {token!r}, zero denominator", number) from None
        acc = terms.get(mono)
        acc = coeff if acc is None else acc + coeff
        if acc == 0:
            terms.pop(mono, None)
        else:
            terms[mono] = acc
    return _raw(dimension, terms)


def poly_to_text(f: Polynomial, header_comment: str | None = None) -> str:
    """Serialize in canonical form: graded-lex descending, lowest terms."""
    out = []
    if header_comment:
        for line in header_comment.splitlines():
            out.append(f"# {line}".rstrip())
    out.append(f"n {f.dimension}")
    for mono, coeff in f.sorted_terms():
        out.append(" ".join(str(e) for e in mono) + f" {coeff}")
    return "\n".join(out) + "\n"
