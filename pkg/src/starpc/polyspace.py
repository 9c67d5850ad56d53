"""Query spaces: polynomials without constant term, and spans of user functions.

A query space is an F-linear space of functions ``K^M -> K`` with a fixed
ordered basis.  Schemes only need four things from it: its dimension, the
basis elements, F-linear combination, and evaluation at a point of ``K^M``.
:class:`PolynomialSpace` (degree-bounded polynomials with no constant term)
is the space used throughout; :class:`SpanSpace` wraps arbitrary basis
functions for callers with other needs.
"""

from __future__ import annotations

import itertools
from math import comb
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .algebra import FieldElement, FieldSpec
from .exceptions import EnumerationLimitError, FieldMismatchError

__all__ = [
    "Monomial",
    "Polynomial",
    "PolynomialSpace",
    "QuerySpace",
    "SpanSpace",
    "SpanElement",
    "basis",
    "evaluate",
    "linear_combine",
    "sample_uniform",
]

Monomial = tuple  # exponent vector (a_1, ..., a_M)


def _grlex_key(exps: tuple) -> tuple:
    return (sum(exps), tuple(-a for a in exps))


def basis(M: int, G: int) -> list[tuple[int, ...]]:
    """Monomials of total degree 1..G in M variables, graded-lex order.

    >>> basis(2, 2)
    [(1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]
    """
    if M < 1 or G < 1:
        raise ValueError(f"need M >= 1 and G >= 1, got M={M}, G={G}")
    out = []
    for d in range(1, G + 1):
        for combo in itertools.combinations_with_replacement(range(M), d):
            e = [0] * M
            for v in combo:
                e[v] += 1
            out.append(tuple(e))
    return out


def _eval_monomials(field: FieldSpec, monos: Iterable[tuple], x: Sequence[int]) -> dict:
    """Values of each monomial at raw point ``x`` (powers cached per variable)."""
    cache: dict = {}
    out = {}
    for e in monos:
        acc = 1
        for i, a in enumerate(e):
            if a:
                key = (i, a)
                if key not in cache:
                    cache[key] = field.pow(x[i], a)
                acc = field.mul(acc, cache[key])
                if acc == 0:
                    break
        out[e] = acc
    return out


class Polynomial:
    """Sparse multivariate polynomial with coefficients in the base field.

    Zero coefficients are never stored.  Instances are immutable and
    hashable; arithmetic returns new polynomials.
    """

    __slots__ = ("M", "field", "_terms", "_hash")

    def __copy__(self):
        return self

    def __deepcopy__(self, memo):
        return self

    def __init__(self, M: int, field: FieldSpec, terms: Mapping | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean = {}
        for exps, c in items:
            exps = tuple(int(a) for a in exps)
            if len(exps) != M or any(a < 0 for a in exps):
                raise ValueError(f"exponent vector {exps} does not fit {M} variables")
            v = _coerce(field, c)
            if v:
                clean[exps] = field.add(clean.get(exps, 0), v)
                if not clean[exps]:
                    del clean[exps]
        self.M = M
        self.field = field
        self._terms = dict(sorted(clean.items(), key=lambda kv: _grlex_key(kv[0])))
        self._hash = None

    @classmethod
    def zero(cls, M: int, field: FieldSpec) -> "Polynomial":
        return cls(M, field)

    @classmethod
    def monomial(cls, exps: Sequence[int], field: FieldSpec, coeff=1) -> "Polynomial":
        return cls(len(exps), field, {tuple(exps): coeff})

    @classmethod
    def variable(cls, i: int, M: int, field: FieldSpec) -> "Polynomial":
        """The coordinate function ``X_{i+1}`` (0-indexed ``i``)."""
        e = [0] * M
        e[i] = 1
        return cls(M, field, {tuple(e): 1})

    @property
    def terms(self) -> dict:
        """Mapping exponent tuple -> coefficient (as FieldElement)."""
        return {e: FieldElement(self.field, c) for e, c in self._terms.items()}

    @property
    def raw_terms(self) -> dict:
        return dict(self._terms)

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def has_constant_term(self) -> bool:
        return (0,) * self.M in self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def _compat(self, other: "Polynomial") -> None:
        if not isinstance(other, Polynomial):
            raise TypeError(f"expected Polynomial, got {type(other).__name__}")
        if other.M != self.M:
            raise ValueError(f"variable count mismatch: {self.M} vs {other.M}")
        if other.field != self.field:
            raise FieldMismatchError(f"{self.field!r} vs {other.field!r}")

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._compat(other)
        out = dict(self._terms)
        f = self.field
        for e, c in other._terms.items():
            out[e] = f.add(out.get(e, 0), c)
        return Polynomial(self.M, f, out)

    def __neg__(self):
        f = self.field
        return Polynomial(self.M, f, {e: f.neg(c) for e, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> "Polynomial":
        f = self.field
        c = f.from_int(c) if isinstance(c, int) else _coerce(f, c)
        return Polynomial(self.M, f, {e: f.mul(c, v) for e, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            self._compat(other)
            f = self.field
            out: dict = {}
            for e1, c1 in self._terms.items():
                for e2, c2 in other._terms.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    out[e] = f.add(out.get(e, 0), f.mul(c1, c2))
            return Polynomial(self.M, f, out)
        if isinstance(other, (int, FieldElement)):
            return self.scale(other)
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not polynomials")
        out = Polynomial(self.M, self.field, {(0,) * self.M: 1})
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.M == other.M and self.field == other.field and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.M, self.field, tuple(self._terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    def evaluate_raw(self, x: Sequence[int], kfield: FieldSpec) -> int:
        if len(x) != self.M:
            raise ValueError(f"point has {len(x)} coordinates, polynomial has {self.M} variables")
        vals = _eval_monomials(kfield, self._terms, x)
        acc = 0
        for e, c in self._terms.items():
            v = vals[e]
            if v:
                acc = kfield.add(acc, kfield.mul(kfield.embed_raw(c, self.field), v))
        return acc

    def __call__(self, x: Sequence) -> FieldElement:
        return evaluate(self, x)

    def to_wire(self) -> list[dict]:
        return [{"exponents": list(e), "coeff": self.field.to_str(c)} for e, c in self._terms.items()]

    @classmethod
    def from_wire(cls, data: Sequence[Mapping], M: int, field: FieldSpec) -> "Polynomial":
        return cls(M, field, [(t["exponents"], field.from_str(t["coeff"])) for t in data])

    def __repr__(self):
        if not self._terms:
            return "0"
        parts = []
        for e, c in self._terms.items():
            mono = "*".join(f"X{i + 1}" + (f"^{a}" if a > 1 else "") for i, a in enumerate(e) if a)
            cs = self.field.to_str(c)
            if not mono:
                parts.append(cs)
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts)


def _coerce(field: FieldSpec, c) -> int:
    if isinstance(c, FieldElement):
        if c.field != field:
            raise FieldMismatchError(f"coefficient from {c.field!r} is not in {field!r}")
        return c.value
    return field.check(c)


def _point(x: Sequence) -> tuple[list[int], FieldSpec | None]:
    if x and isinstance(x[0], FieldElement):
        kf = x[0].field
        return [kf.check(v) for v in x], kf
    return list(x), None


def evaluate(f: Polynomial, x: Sequence[FieldElement], kfield: FieldSpec | None = None) -> FieldElement:
    """Value of ``f`` at the column ``x``; coefficients are embedded into x's field."""
    raw, kf = _point(x)
    kf = kf or kfield or f.field
    if kf.p != f.field.p:
        raise FieldMismatchError(f"cannot evaluate a {f.field!r} polynomial on {kf!r} data")
    return FieldElement(kf, f.evaluate_raw(raw, kf))


def linear_combine(scalars: Sequence, polys: Sequence[Polynomial]) -> Polynomial:
    """``sum(s_i * f_i)`` with base-field scalars."""
    if len(scalars) != len(polys):
        raise ValueError(f"{len(scalars)} scalars for {len(polys)} polynomials")
    if not polys:
        raise ValueError("cannot combine an empty sequence")
    M, field = polys[0].M, polys[0].field
    out: dict = {}
    for s, p in zip(scalars, polys):
        if p.M != M:
            raise ValueError("polynomials have different variable counts")
        s = field.from_int(s) if isinstance(s, int) else _coerce(field, s)
        if not s:
            continue
        for e, c in p._terms.items():
            out[e] = field.add(out.get(e, 0), field.mul(s, c))
    return Polynomial(M, field, out)


class QuerySpace:
    """Interface shared by query spaces; concrete spaces fill in the hooks."""

    field: FieldSpec
    n_vars: int
    dim: int

    def __copy__(self):
        return self

    def __deepcopy__(self, memo):
        return self

    def basis_elements(self) -> list:
        raise NotImplementedError

    def from_coordinates(self, coords: Sequence[int]):
        raise NotImplementedError

    def coordinates(self, elem) -> list[int]:
        raise NotImplementedError

    def evaluate_raw(self, elem, x: Sequence[int], kfield: FieldSpec) -> int:
        raise NotImplementedError

    def to_wire(self, elem):
        raise NotImplementedError

    def from_wire(self, data):
        raise NotImplementedError

    def zero(self):
        return self.from_coordinates([0] * self.dim)

    def combine(self, scalars: Sequence[int], elems: Sequence):
        """F-linear combination computed in coordinates."""
        f = self.field
        acc = [0] * self.dim
        for s, e in zip(scalars, elems):
            if s:
                acc = f.axpy(s, self.coordinates(e), acc)
        return self.from_coordinates(acc)

    def contains(self, elem) -> bool:
        try:
            self.coordinates(elem)
        except (ValueError, TypeError, FieldMismatchError):
            return False
        return True

    def sample(self, rng):
        return self.from_coordinates(self.field.random(rng, self.dim))

    def elements(self, limit: int = 2**20) -> Iterator:
        """Every element of the space (guarded: ``|F|**dim <= limit``)."""
        size = self.field.order**self.dim
        if size > limit:
            raise EnumerationLimitError(size, limit, "query-space enumeration")
        for coords in itertools.product(range(self.field.order), repeat=self.dim):
            yield self.from_coordinates(list(coords))

    def describe(self) -> dict:
        raise NotImplementedError


class PolynomialSpace(QuerySpace):
    """Polynomials in M variables over F with total degree <= G and no constant term.

    Parameters
    ----------
    M : int
        Number of variables (height of a data column).
    G : int
        Total-degree bound.
    field : FieldSpec
        Coefficient field F.
    """

    def __init__(self, M: int, G: int, field: FieldSpec):
        self.M = M
        self.G = G
        self.field = field
        self.monomials = tuple(basis(M, G))
        self._index = {e: i for i, e in enumerate(self.monomials)}
        self.dim = len(self.monomials)
        self.n_vars = M
        assert self.dim == comb(M + G, M) - 1

    @property
    def Q(self) -> int:
        return self.dim

    def __repr__(self):
        return f"PolynomialSpace(M={self.M}, G={self.G}, field={self.field!r})"

    def __eq__(self, other):
        return isinstance(other, PolynomialSpace) and (self.M, self.G, self.field) == (other.M, other.G, other.field)

    def __hash__(self):
        return hash((self.M, self.G, self.field))

    def basis_elements(self) -> list[Polynomial]:
        return [Polynomial(self.M, self.field, {e: 1}) for e in self.monomials]

    def from_coordinates(self, coords: Sequence[int]) -> Polynomial:
        if len(coords) != self.dim:
            raise ValueError(f"expected {self.dim} coordinates, got {len(coords)}")
        return Polynomial(self.M, self.field, {e: c for e, c in zip(self.monomials, coords) if c})

    def coordinates(self, elem: Polynomial) -> list[int]:
        if not isinstance(elem, Polynomial):
            raise TypeError(f"expected Polynomial, got {type(elem).__name__}")
        if elem.M != self.M:
            raise ValueError(f"polynomial has {elem.M} variables, space has {self.M}")
        if elem.field != self.field:
            raise FieldMismatchError(f"{elem.field!r} vs {self.field!r}")
        out = [0] * self.dim
        for e, c in elem._terms.items():
            i = self._index.get(e)
            if i is None:
                raise ValueError(f"monomial {e} is outside the space (degree bound {self.G}, no constant term)")
            out[i] = c
        return out

    def combine(self, scalars, elems):
        return linear_combine(list(scalars), list(elems))

    def evaluate_raw(self, elem: Polynomial, x, kfield):
        return elem.evaluate_raw(x, kfield)

    def to_wire(self, elem: Polynomial):
        return elem.to_wire()

    def from_wire(self, data) -> Polynomial:
        p = Polynomial.from_wire(data, self.M, self.field)
        self.coordinates(p)
        return p

    def describe(self) -> dict:
        return {"kind": "polynomial", "M": self.M, "G": self.G, "Q": self.dim}


class SpanElement:
    """Element of a :class:`SpanSpace`, held as basis coordinates."""

    __slots__ = ("space", "coords")

    def __init__(self, space: "SpanSpace", coords: Sequence[int]):
        self.space = space
        self.coords = tuple(coords)

    def __add__(self, other):
        if not isinstance(other, SpanElement) or other.space is not self.space:
            return NotImplemented
        return SpanElement(self.space, self.space.field.vadd(self.coords, other.coords))

    def __eq__(self, other):
        return isinstance(other, SpanElement) and other.space is self.space and other.coords == self.coords

    def __hash__(self):
        return hash(self.coords)

    def __call__(self, x: Sequence[FieldElement]) -> FieldElement:
        raw, kf = _point(x)
        return FieldElement(kf, self.space.evaluate_raw(self, raw, kf))

    def __repr__(self):
        return f"SpanElement({list(self.coords)})"


class SpanSpace(QuerySpace):
    """F-span of caller-supplied basis functions ``K^M -> K``.

    Each basis function receives a list of ``FieldElement`` (the data column)
    and must return a ``FieldElement`` of the same field.  The caller is
    responsible for the functions being F-linearly independent.
    """

    def __init__(self, field: FieldSpec, n_vars: int, functions: Sequence[Callable], name: str = "span"):
        if not functions:
            raise ValueError("a span space needs at least one basis function")
        self.field = field
        self.n_vars = n_vars
        self.functions = tuple(functions)
        self.dim = len(self.functions)
        self.name = name

    def basis_elements(self) -> list[SpanElement]:
        return [SpanElement(self, [int(i == j) for j in range(self.dim)]) for i in range(self.dim)]

    def from_coordinates(self, coords):
        if len(coords) != self.dim:
            raise ValueError(f"expected {self.dim} coordinates, got {len(coords)}")
        return SpanElement(self, [self.field.check(c) for c in coords])

    def coordinates(self, elem: SpanElement) -> list[int]:
        if not isinstance(elem, SpanElement) or elem.space is not self:
            raise TypeError("element does not belong to this span space")
        return list(elem.coords)

    def evaluate_raw(self, elem: SpanElement, x, kfield):
        pt = [FieldElement(kfield, v) for v in x]
        acc = 0
        for c, fn in zip(elem.coords, self.functions):
            if c:
                val = kfield.check(fn(pt))
                acc = kfield.add(acc, kfield.mul(kfield.embed_raw(c, self.field), val))
        return acc

    def to_wire(self, elem):
        return {"coords": [self.field.to_str(c) for c in elem.coords]}

    def from_wire(self, data):
        return self.from_coordinates([self.field.from_str(s) for s in data["coords"]])

    def describe(self) -> dict:
        return {"kind": "span", "name": self.name, "Q": self.dim}


def sample_uniform(space: QuerySpace, rng):
    """Element with i.i.d. uniform base-field coordinates (numpy ``Generator``)."""
    return space.sample(rng)
