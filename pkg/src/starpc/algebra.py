"""Exact arithmetic in GF(p) and GF(p^m), plus linear algebra over those fields.

Elements are stored as integers ``v = c_0 + c_1 p + ... + c_{m-1} p^{m-1}``
where ``c_0 + c_1 x + ... + c_{m-1} x^{m-1}`` is the polynomial representative
modulo the field's monic irreducible modulus.  Hot loops work on these raw
integers; :class:`FieldElement` wraps one for the public API.
"""

from __future__ import annotations

import itertools
import string
from typing import Iterable, Iterator, Sequence

from .exceptions import (
    AmbiguousSolutionError,
    FieldMismatchError,
    InconsistentSystemError,
)

__all__ = [
    "FieldSpec",
    "FieldElement",
    "Matrix",
    "GF",
    "fe_mul",
    "fe_inv",
    "embed",
    "rref",
    "null_space",
    "solve_linear",
    "inverse",
    "is_irreducible",
]

# little-endian coefficients, leading 1 included
DEFAULT_MODULI = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (3, 2): (1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
}

MAX_ORDER = 2**20
_TABLE_ORDER = 256
_DIGITS = string.digits + string.ascii_lowercase


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    """Remainder of ``a`` modulo ``b`` over Z_p (both little-endian)."""
    a = _poly_trim([x % p for x in a])
    b = _poly_trim([x % p for x in b])
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = pow(b[-1], p - 2, p)
    db = len(b) - 1
    while len(a) - 1 >= db and a:
        coef = a[-1] * inv_lead % p
        shift = len(a) - 1 - db
        for i, bc in enumerate(b):
            a[shift + i] = (a[shift + i] - coef * bc) % p
        _poly_trim(a)
    return a


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Brute-force irreducibility test: no monic factor of degree <= m/2."""
    m = len(modulus) - 1
    if m < 1:
        return False
    if m == 1:
        return True
    if modulus[0] % p == 0:
        return False
    for d in range(1, m // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not _poly_mod(modulus, list(low) + [1], p):
                return False
    return True


def _smallest_irreducible(p: int, m: int) -> tuple[int, ...]:
    for low in itertools.product(range(p), repeat=m):
        cand = tuple(low[::-1]) + (1,)
        if is_irreducible(cand, p):
            return cand
    raise ValueError(f"no irreducible polynomial of degree {m} over GF({p})")  # pragma: no cover


class FieldSpec:
    """The finite field GF(p^m) with its prime subfield GF(p) embedded.

    Parameters
    ----------
    p : int
        Characteristic; must be prime.
    m : int
        Extension degree.
    modulus : sequence of int, optional
        Monic irreducible polynomial of degree ``m``, little-endian
        (``modulus[m] == 1``).  Defaults are shipped for GF(4), GF(8), GF(9)
        and GF(16); other extensions use the lexicographically smallest
        irreducible polynomial.  Ignored (must be absent) when ``m == 1``.
    """

    def __copy__(self):
        return self

    def __deepcopy__(self, memo):
        return self

    def __init__(self, p: int, m: int = 1, modulus: Sequence[int] | None = None):
        p, m = int(p), int(m)
        if not _is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if m < 1:
            raise ValueError(f"extension degree must be >= 1, got {m}")
        if p**m > MAX_ORDER:
            raise ValueError(f"field order {p}^{m} exceeds supported maximum {MAX_ORDER}")
        if m == 1:
            if modulus is not None and len(modulus) not in (0, 2):
                raise ValueError("prime fields take no modulus")
            modulus = None
        elif modulus is None:
            modulus = DEFAULT_MODULI.get((p, m)) or _smallest_irreducible(p, m)
        else:
            modulus = tuple(int(c) % p for c in modulus)
            if len(modulus) != m + 1 or modulus[-1] != 1:
                raise ValueError(f"modulus must be monic of degree {m}")
            if not is_irreducible(modulus, p):
                raise ValueError(f"modulus {modulus} is reducible over GF({p})")
        self.p = p
        self.m = m
        self.modulus = None if modulus is None else tuple(modulus)
        self.order = p**m
        self._key = (p, m, self.modulus)
        if m > 1:
            self._build_tables()

    # -- identity ---------------------------------------------------------
    def __eq__(self, other):
        return isinstance(other, FieldSpec) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        if self.m == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.m}, modulus={list(self.modulus)})"

    @property
    def is_prime_field(self) -> bool:
        return self.m == 1

    def prime_subfield(self) -> "FieldSpec":
        return self if self.m == 1 else FieldSpec(self.p)

    def to_dict(self) -> dict:
        return {"p": self.p, "m": self.m, "modulus": None if self.modulus is None else list(self.modulus)}

    @classmethod
    def from_dict(cls, d: dict) -> "FieldSpec":
        return cls(d["p"], d.get("m", 1), d.get("modulus"))

    # -- coefficient representation --------------------------------------
    def coeffs(self, v: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.m):
            v, c = divmod(v, self.p)
            out.append(c)
        return tuple(out)

    def from_coeffs(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) > self.m:
            if self.m == 1:
                raise ValueError("prime-field elements have a single coefficient")
            coeffs = _poly_mod(coeffs, self.modulus, self.p)
        v = 0
        for c in reversed(list(coeffs)):
            v = v * self.p + int(c) % self.p
        return v

    def to_str(self, v: int) -> str:
        """Canonical text form: base-p digits, little-endian, no separators.

        Characteristics above 36 have no single-character digit, so their
        digits are written in decimal and joined with ``.``.
        """
        cs = self.coeffs(v)
        if self.p <= len(_DIGITS):
            return "".join(_DIGITS[c] for c in cs)
        return ".".join(str(c) for c in cs)

    def from_str(self, s: str) -> int:
        s = s.strip()
        if self.p <= len(_DIGITS):
            digits = [_DIGITS.index(ch) for ch in s.lower()]
        else:
            digits = [int(t) for t in s.split(".")]
        if len(digits) != self.m or any(d >= self.p for d in digits):
            raise ValueError(f"{s!r} is not a canonical element string of {self!r}")
        return self.from_coeffs(digits)

    def check(self, v) -> int:
        """Coerce an int / FieldElement / canonical string to a raw value."""
        if isinstance(v, FieldElement):
            if v.field != self:
                return self.embed_raw(v.value, v.field)
            return v.value
        if isinstance(v, str):
            return self.from_str(v)
        v = int(v)
        if self.m == 1:
            return v % self.p
        if not 0 <= v < self.order:
            raise ValueError(f"raw value {v} outside [0, {self.order}) for {self!r}")
        return v

    def embed_raw(self, v: int, source: "FieldSpec") -> int:
        if source == self:
            return v
        if source.p != self.p:
            raise FieldMismatchError(f"cannot embed {source!r} into {self!r}: characteristic differs")
        if not source.is_prime_field:
            raise FieldMismatchError(f"only the prime field embeds into {self!r}, got {source!r}")
        return v

    # -- scalar arithmetic on raw values ----------------------------------
    def _poly_mulmod(self, a: int, b: int) -> int:
        ca, cb = self.coeffs(a), self.coeffs(b)
        prod = [0] * (2 * self.m - 1)
        for i, x in enumerate(ca):
            if x:
                for j, y in enumerate(cb):
                    prod[i + j] += x * y
        return self.from_coeffs(_poly_mod(prod, self.modulus, self.p))

    def _digit_add(self, a: int, b: int, sign: int = 1) -> int:
        p = self.p
        out, scale = 0, 1
        for _ in range(self.m):
            a, x = divmod(a, p)
            b, y = divmod(b, p)
            out += ((x + sign * y) % p) * scale
            scale *= p
        return out

    def _build_tables(self) -> None:
        q = self.order
        # exp/log over a primitive element
        for g in range(2, q):
            exp = [1]
            x = g
            while x != 1:
                exp.append(x)
                x = self._poly_mulmod(x, g)
            if len(exp) == q - 1:
                break
        else:  # pragma: no cover - GF(p^m)* is cyclic
            raise RuntimeError("no primitive element found")
        self._exp = exp + exp
        self._log = [0] * q
        for i, x in enumerate(exp):
            self._log[x] = i
        self._add_table = None
        self._mul_table = None
        if q <= _TABLE_ORDER:
            self._add_table = [[self._digit_add(a, b) for b in range(q)] for a in range(q)]
            self._neg = [self._digit_add(0, a, -1) for a in range(q)]
            self._mul_table = [[self._mul_log(a, b) for b in range(q)] for a in range(q)]

    def _mul_log(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def add(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a + b) % self.p
        if self._add_table is not None:
            return self._add_table[a][b]
        if self.p == 2:
            return a ^ b
        return self._digit_add(a, b)

    def neg(self, a: int) -> int:
        if self.m == 1:
            return -a % self.p
        if self._add_table is not None:
            return self._neg[a]
        if self.p == 2:
            return a
        return self._digit_add(0, a, -1)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.m == 1:
            return a * b % self.p
        if self._mul_table is not None:
            return self._mul_table[a][b]
        return self._mul_log(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError(f"0 has no inverse in {self!r}")
        if self.m == 1:
            return pow(a, self.p - 2, self.p)
        return self._exp[(self.order - 1 - self._log[a]) % (self.order - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if e == 0:
            return 1
        if a == 0:
            return 0
        if self.m == 1:
            return pow(a, e, self.p)
        return self._exp[(self._log[a] * e) % (self.order - 1)]

    def from_int(self, n: int) -> int:
        """Image of the integer ``n`` under Z -> GF(p) -> this field."""
        return n % self.p

    # -- vector helpers (raw) ---------------------------------------------
    def vadd(self, u: Sequence[int], v: Sequence[int]) -> list[int]:
        if self.m == 1:
            p = self.p
            return [(a + b) % p for a, b in zip(u, v)]
        return [self.add(a, b) for a, b in zip(u, v)]

    def vsub(self, u: Sequence[int], v: Sequence[int]) -> list[int]:
        if self.m == 1:
            p = self.p
            return [(a - b) % p for a, b in zip(u, v)]
        return [self.sub(a, b) for a, b in zip(u, v)]

    def scale(self, c: int, u: Sequence[int]) -> list[int]:
        if self.m == 1:
            p = self.p
            return [c * a % p for a in u]
        if self._mul_table is not None:
            row = self._mul_table[c]
            return [row[a] for a in u]
        return [self.mul(c, a) for a in u]

    def axpy(self, c: int, x: Sequence[int], y: Sequence[int]) -> list[int]:
        """``y + c*x``."""
        if self.m == 1:
            p = self.p
            return [(b + c * a) % p for a, b in zip(x, y)]
        if self._mul_table is not None:
            row, add = self._mul_table[c], self._add_table
            return [add[b][row[a]] for a, b in zip(x, y)]
        return [self.add(b, self.mul(c, a)) for a, b in zip(x, y)]

    def dot(self, u: Sequence[int], v: Sequence[int]) -> int:
        if self.m == 1:
            return sum(a * b for a, b in zip(u, v)) % self.p
        acc = 0
        for a, b in zip(u, v):
            if a and b:
                acc = self.add(acc, self.mul(a, b))
        return acc

    def vecmat(self, v: Sequence[int], rows: Sequence[Sequence[int]]) -> list[int]:
        """Row vector times matrix (given as rows)."""
        ncols = len(rows[0]) if rows else 0
        acc = [0] * ncols
        for c, row in zip(v, rows):
            if c:
                acc = self.axpy(c, row, acc)
        return acc

    # -- elements ---------------------------------------------------------
    def __call__(self, v) -> "FieldElement":
        return FieldElement(self, self.check(v))

    element = __call__

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    def elements(self) -> Iterator["FieldElement"]:
        for v in range(self.order):
            yield FieldElement(self, v)

    def generator_element(self) -> "FieldElement":
        """The polynomial variable ``x`` (``p`` in raw form); 1 for prime fields."""
        return FieldElement(self, self.p if self.m > 1 else 1)

    def primitive_element(self) -> "FieldElement":
        """The least raw value generating the multiplicative group."""
        if self.m > 1:
            return FieldElement(self, self._exp[1])
        if self.p == 2:
            return self.one
        for g in range(2, self.p):
            x, k = g, 1
            while x != 1:
                x, k = x * g % self.p, k + 1
            if k == self.p - 1:
                return FieldElement(self, g)
        raise RuntimeError("no primitive element found")  # pragma: no cover

    def random(self, rng, size: int | None = None):
        """Uniform raw value(s) drawn from a numpy ``Generator``."""
        if size is None:
            return int(rng.integers(0, self.order))
        return [int(x) for x in rng.integers(0, self.order, size=size)]


def GF(order: int, modulus: Sequence[int] | None = None) -> FieldSpec:
    """Convenience constructor from the field order ``p^m``."""
    for p in range(2, order + 1):
        if order % p == 0:
            break
    m, n = 0, order
    while n % p == 0:
        n //= p
        m += 1
    if n != 1 or not _is_prime(p):
        raise ValueError(f"{order} is not a prime power")
    return FieldSpec(p, m, modulus)


class FieldElement:
    """Immutable element of a :class:`FieldSpec`."""

    __slots__ = ("field", "value")

    def __copy__(self):
        return self

    def __deepcopy__(self, memo):
        return self

    def __init__(self, field: FieldSpec, value: int):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "value", value)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.coeffs(self.value)

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatchError(f"{self.field!r} vs {other.field!r}")
            return other.value
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.add(self.value, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.sub(self.value, o))

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.sub(o, self.value))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.mul(self.value, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.div(self.value, o))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.value, e))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.value))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        if isinstance(other, int) and other in (0, 1):
            return self.value == other
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.value))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __str__(self):
        return self.field.to_str(self.value)

    def __repr__(self):
        return f"{self.field!r}({str(self)!r})"


def fe_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    if a.field != b.field:
        raise FieldMismatchError(f"{a.field!r} vs {b.field!r}")
    return a * b


def fe_inv(a: FieldElement) -> FieldElement:
    return a.inverse()


def embed(a: FieldElement, target: FieldSpec) -> FieldElement:
    """Image of a prime-field element as a constant polynomial in ``target``."""
    return FieldElement(target, target.embed_raw(a.value, a.field))


# ---------------------------------------------------------------------------
# matrices


class Matrix:
    """Dense immutable matrix over a single field.

    ``data`` holds raw integer values row by row; indexing returns
    :class:`FieldElement`.
    """

    __slots__ = ("field", "data", "n_rows", "n_cols")

    def __copy__(self):
        return self

    def __deepcopy__(self, memo):
        return self

    def __init__(self, field: FieldSpec, rows: Iterable[Iterable], n_cols: int | None = None):
        data = tuple(tuple(field.check(x) for x in row) for row in rows)
        if n_cols is None:
            n_cols = len(data[0]) if data else 0
        if any(len(r) != n_cols for r in data):
            raise ValueError("ragged matrix rows")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "n_rows", len(data))
        object.__setattr__(self, "n_cols", n_cols)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    @classmethod
    def _raw(cls, field: FieldSpec, rows, n_cols: int) -> "Matrix":
        m = object.__new__(cls)
        object.__setattr__(m, "field", field)
        object.__setattr__(m, "data", tuple(tuple(r) for r in rows))
        object.__setattr__(m, "n_rows", len(m.data))
        object.__setattr__(m, "n_cols", n_cols)
        return m

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "Matrix":
        return cls._raw(field, [[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, field: FieldSpec, n_rows: int, n_cols: int) -> "Matrix":
        return cls._raw(field, [[0] * n_cols for _ in range(n_rows)], n_cols)

    @classmethod
    def from_strings(cls, field: FieldSpec, rows) -> "Matrix":
        return cls(field, [[field.from_str(s) for s in row] for row in rows])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_rows, self.n_cols)

    def __getitem__(self, idx):
        i, j = idx
        return FieldElement(self.field, self.data[i][j])

    def row(self, i: int) -> list[FieldElement]:
        return [FieldElement(self.field, v) for v in self.data[i]]

    def column(self, j: int) -> list[FieldElement]:
        return [FieldElement(self.field, r[j]) for r in self.data]

    @property
    def T(self) -> "Matrix":
        if self.n_rows == 0:
            return Matrix._raw(self.field, [[] for _ in range(self.n_cols)], 0)
        return Matrix._raw(self.field, list(zip(*self.data)), self.n_rows)

    def take_columns(self, cols: Sequence[int]) -> "Matrix":
        return Matrix._raw(self.field, [[r[c] for c in cols] for r in self.data], len(cols))

    def take_rows(self, rows: Sequence[int]) -> "Matrix":
        return Matrix._raw(self.field, [self.data[i] for i in rows], self.n_cols)

    def hstack(self, other: "Matrix") -> "Matrix":
        self._same_field(other)
        if self.n_rows != other.n_rows:
            raise ValueError("row count mismatch")
        return Matrix._raw(self.field, [a + b for a, b in zip(self.data, other.data)], self.n_cols + other.n_cols)

    def vstack(self, other: "Matrix") -> "Matrix":
        self._same_field(other)
        if self.n_cols != other.n_cols:
            raise ValueError("column count mismatch")
        return Matrix._raw(self.field, self.data + other.data, self.n_cols)

    def _same_field(self, other: "Matrix") -> None:
        if self.field != other.field:
            raise FieldMismatchError(f"{self.field!r} vs {other.field!r}")

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if not isinstance(other, Matrix):
            return NotImplemented
        self._same_field(other)
        if self.n_cols != other.n_rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        f = self.field
        rows = [f.vecmat(r, other.data) if other.n_rows else [0] * other.n_cols for r in self.data]
        return Matrix._raw(f, rows, other.n_cols)

    def vecmat(self, v: Sequence) -> list[FieldElement]:
        """``v · self`` for a row vector ``v``."""
        raw = [self.field.check(x) for x in v]
        if len(raw) != self.n_rows:
            raise ValueError("vector length does not match row count")
        return [FieldElement(self.field, x) for x in self.field.vecmat(raw, self.data) or [0] * self.n_cols]

    def embed(self, target: FieldSpec) -> "Matrix":
        return Matrix._raw(target, [[target.embed_raw(v, self.field) for v in r] for r in self.data], self.n_cols)

    def is_zero(self) -> bool:
        return all(v == 0 for r in self.data for v in r)

    def rank(self) -> int:
        return _rref_raw(self.field, self.data, self.n_cols)[1]

    def to_strings(self) -> list[list[str]]:
        return [[self.field.to_str(v) for v in r] for r in self.data]

    def to_list(self) -> list[list[int]]:
        return [list(r) for r in self.data]

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and self.data == other.data

    def __hash__(self):
        return hash((self.field, self.shape, self.data))

    def __repr__(self):
        body = "; ".join(" ".join(s) for s in self.to_strings())
        return f"Matrix({self.field!r}, {self.n_rows}x{self.n_cols}, [{body}])"


def _rref_raw(field: FieldSpec, rows, n_cols: int):
    """Gauss-Jordan elimination: leftmost pivot column, topmost candidate row."""
    work = [list(r) for r in rows]
    n_rows = len(work)
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        piv = next((i for i in range(r, n_rows) if work[i][c]), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        lead = work[r][c]
        if lead != 1:
            work[r] = field.scale(field.inv(lead), work[r])
        prow = work[r]
        for i in range(n_rows):
            if i != r and work[i][c]:
                work[i] = field.axpy(field.neg(work[i][c]), prow, work[i])
        pivots.append(c)
        r += 1
    return work, r, pivots


def rref(M: Matrix) -> tuple[Matrix, int, list[int]]:
    """Reduced row-echelon form, rank and pivot columns of ``M``."""
    rows, rank, pivots = _rref_raw(M.field, M.data, M.n_cols)
    return Matrix._raw(M.field, rows, M.n_cols), rank, pivots


def _null_space_raw(field: FieldSpec, rows, n_cols: int) -> list[list[int]]:
    """Basis of the right kernel, one vector per free column."""
    red, rank, pivots = _rref_raw(field, rows, n_cols)
    pivot_set = set(pivots)
    basis = []
    for free in range(n_cols):
        if free in pivot_set:
            continue
        v = [0] * n_cols
        v[free] = 1
        for i, pc in enumerate(pivots):
            v[pc] = field.neg(red[i][free])
        basis.append(v)
    return basis


def null_space(M: Matrix) -> Matrix:
    """Matrix whose columns form a basis of ``{v : M v = 0}``."""
    basis = _null_space_raw(M.field, M.data, M.n_cols)
    if not basis:
        return Matrix._raw(M.field, [[] for _ in range(M.n_cols)], 0)
    return Matrix._raw(M.field, [list(col) for col in zip(*basis)], len(basis))


def _solve_raw(field: FieldSpec, A_rows, s: Sequence[int]) -> list[int]:
    n = len(A_rows)
    n_cols = len(s)
    # e·A = s  <=>  A^T e^T = s^T
    aug = [[A_rows[i][j] for i in range(n)] + [s[j]] for j in range(n_cols)]
    red, rank, pivots = _rref_raw(field, aug, n + 1)
    if pivots and pivots[-1] == n:
        raise InconsistentSystemError("e·A = s has no solution")
    if rank < n:
        raise AmbiguousSolutionError(f"solution not unique: rank {rank} < {n} unknowns")
    e = [0] * n
    for i, pc in enumerate(pivots):
        e[pc] = red[i][n]
    return e


def solve_linear(A: Matrix, s: Sequence) -> list[FieldElement]:
    """The unique row vector ``e`` with ``e · A = s``."""
    f = A.field
    raw = [f.check(x) for x in s]
    if len(raw) != A.n_cols:
        raise ValueError(f"right-hand side has length {len(raw)}, expected {A.n_cols}")
    return [FieldElement(f, v) for v in _solve_raw(f, A.data, raw)]


def inverse(M: Matrix) -> Matrix:
    """Inverse of a square matrix; raises ``AmbiguousSolutionError`` if singular."""
    n = M.n_rows
    if M.n_cols != n:
        raise ValueError("only square matrices are invertible")
    aug = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(M.data)]
    red, rank, pivots = _rref_raw(M.field, aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise AmbiguousSolutionError("matrix is singular")
    return Matrix._raw(M.field, [r[n:] for r in red], n)
