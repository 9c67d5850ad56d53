"""Linear codes, star (Schur) products and Reed-Solomon codes."""

from __future__ import annotations

import itertools
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from .algebra import (
    FieldElement,
    FieldSpec,
    Matrix,
    _rref_raw,
    inverse,
    null_space,
)
from .exceptions import (
    EnumerationLimitError,
    FieldMismatchError,
    InvalidAlphaError,
    NoSystematicFormError,
)

__all__ = [
    "LinearCode",
    "RSCode",
    "rep_code",
    "rs_code",
    "star_product",
    "star_power",
    "min_distance",
    "is_mds",
    "systematic_parity_check",
    "systematic_generator",
    "extend_field",
    "contains_repetition",
    "code_to_dict",
    "code_from_dict",
    "MIN_DISTANCE_GUARD",
]

MIN_DISTANCE_GUARD = 2**24
_HEAD_WORDS = 2**18


class LinearCode:
    """An [N, K] linear code given by a full-row-rank generator matrix.

    Two codes compare equal when their reduced row-echelon generators are
    identical, i.e. when they have the same row space.
    """

    kind = "generic"

    def __copy__(self):
        return self

    def __deepcopy__(self, memo):
        return self

    def __init__(self, generator: Matrix):
        if generator.n_rows and generator.rank() != generator.n_rows:
            raise ValueError("generator matrix must have full row rank")
        self.generator = generator
        self.field: FieldSpec = generator.field
        self.N = generator.n_cols
        self.K = generator.n_rows

    @classmethod
    def from_rows(cls, field: FieldSpec, rows, n: int | None = None) -> "LinearCode":
        """Code spanned by arbitrary (possibly dependent) rows."""
        m = Matrix(field, rows, n)
        red, rank, _ = _rref_raw(field, m.data, m.n_cols)
        return LinearCode(Matrix._raw(field, red[:rank], m.n_cols))

    @cached_property
    def canonical_generator(self) -> Matrix:
        red, rank, _ = _rref_raw(self.field, self.generator.data, self.N)
        return Matrix._raw(self.field, red[:rank], self.N)

    @cached_property
    def parity_check(self) -> Matrix:
        """N x (N-K) matrix ``H`` with ``generator @ H = 0``."""
        return null_space(self.generator)

    @cached_property
    def minimum_distance(self) -> int:
        return min_distance(self)

    @property
    def dimension(self) -> int:
        return self.K

    def __eq__(self, other):
        if not isinstance(other, LinearCode):
            return NotImplemented
        return self.field == other.field and self.N == other.N and self.canonical_generator == other.canonical_generator

    def __hash__(self):
        return hash(self.canonical_generator)

    def __repr__(self):
        return f"{type(self).__name__}([{self.N},{self.K}] over {self.field!r})"

    def __contains__(self, word) -> bool:
        return self.contains(word)

    def contains(self, word: Sequence) -> bool:
        """Row-space membership of ``word`` (entries may lie in an extension field).

        Since the generator has base-field entries, membership in the
        extended code is a rank test over the word's field.
        """
        word = list(word)
        if len(word) != self.N:
            return False
        wf = word[0].field if word and isinstance(word[0], FieldElement) else self.field
        if wf != self.field:
            gen = self.generator.embed(wf)
        else:
            gen = self.generator
        raw = [wf.check(x) for x in word]
        if not any(raw):
            return True
        rows = list(gen.data) + [raw]
        return _rref_raw(wf, rows, self.N)[1] == self.K

    def is_subcode_of(self, other: "LinearCode") -> bool:
        if other.field != self.field or other.N != self.N:
            return False
        rows = list(other.generator.data) + list(self.generator.data)
        return _rref_raw(self.field, rows, self.N)[1] == other.K

    def encode(self, message: Sequence) -> list[FieldElement]:
        if len(message) != self.K:
            raise ValueError(f"message length {len(message)} != K = {self.K}")
        return self.generator.vecmat(message)

    def codewords(self) -> Iterator[tuple[int, ...]]:
        """All codewords as raw tuples (``q**K`` of them)."""
        f, rows = self.field, self.generator.data
        for msg in itertools.product(range(f.order), repeat=self.K):
            yield tuple(f.vecmat(msg, rows)) if rows else tuple([0] * self.N)


class RSCode(LinearCode):
    """Reed-Solomon code RS_K(alpha): evaluations of polynomials of degree < K.

    By default row ``q`` of the generator is ``[alpha_1**q, ..., alpha_N**q]``.
    A different generator of the same code (e.g. a systematic one) may be
    supplied; it is checked to span the same space.
    """

    kind = "rs"

    def __init__(self, alpha: Sequence, K: int, field: FieldSpec | None = None, generator: Matrix | None = None):
        if field is None:
            if not alpha or not isinstance(alpha[0], FieldElement):
                raise ValueError("field is required when alpha is given as raw values")
            field = alpha[0].field
        raw = tuple(field.check(a) for a in alpha)
        if len(set(raw)) != len(raw):
            raise InvalidAlphaError(f"evaluation points must be pairwise distinct, got {list(raw)}")
        N = len(raw)
        if not 1 <= K <= N:
            raise ValueError(f"need 1 <= K <= N, got K={K}, N={N}")
        vander = Matrix._raw(field, [[field.pow(a, q) for a in raw] for q in range(K)], N)
        if generator is None:
            generator = vander
        elif LinearCode(generator) != LinearCode(vander):
            raise ValueError("generator does not span RS_K(alpha)")
        super().__init__(generator)
        self.alpha = raw

    @property
    def alpha_elements(self) -> list[FieldElement]:
        return [FieldElement(self.field, a) for a in self.alpha]

    def __repr__(self):
        return f"RSCode([{self.N},{self.K}] over {self.field!r}, alpha={[self.field.to_str(a) for a in self.alpha]})"


def rep_code(N: int, field: FieldSpec) -> LinearCode:
    """The [N, 1] repetition code."""
    if N < 1:
        raise ValueError("N must be positive")
    return LinearCode(Matrix._raw(field, [[1] * N], N))


def rs_code(alpha: Sequence, K: int, field: FieldSpec | None = None) -> RSCode:
    return RSCode(alpha, K, field)


def _check_compatible(C: LinearCode, D: LinearCode) -> None:
    if C.field != D.field:
        raise FieldMismatchError(f"{C.field!r} vs {D.field!r}")
    if C.N != D.N:
        raise ValueError(f"length mismatch: {C.N} vs {D.N}")


def star_product(C: LinearCode, D: LinearCode) -> LinearCode:
    """Span of all coordinatewise products ``c * d``, canonical generator."""
    _check_compatible(C, D)
    f = C.field
    rows = []
    for c in C.generator.data:
        for d in D.generator.data:
            rows.append([f.mul(a, b) for a, b in zip(c, d)])
    red, rank, _ = _rref_raw(f, rows, C.N)
    return LinearCode(Matrix._raw(f, red[:rank], C.N))


def star_power(C: LinearCode, G: int) -> LinearCode:
    """``C`` star-multiplied with itself ``G`` times."""
    if G < 1:
        raise ValueError(f"star power needs G >= 1, got {G}")
    out = LinearCode(C.canonical_generator)
    for _ in range(G - 1):
        out = star_product(out, C)
    return out


def _numpy_tables(field: FieldSpec):
    q = field.order
    if field.m == 1:
        a = np.arange(q, dtype=np.int64)
        return (a[:, None] + a[None, :]) % q, (a[:, None] * a[None, :]) % q
    if field._mul_table is None:
        return None
    return np.array(field._add_table, dtype=np.int64), np.array(field._mul_table, dtype=np.int64)


def _span_array(field: FieldSpec, rows, N: int, add_t, mul_t) -> np.ndarray:
    words = np.zeros((1, N), dtype=np.int64)
    scalars = np.arange(field.order)
    for g in rows:
        g = np.asarray(g, dtype=np.int64)
        multiples = mul_t[scalars[:, None], g[None, :]]  # q x N
        words = add_t[words[None, :, :], multiples[:, None, :]].reshape(-1, N)
    return words


def _min_distance_enumerate(C: LinearCode, limit: int) -> int:
    f, K, N = C.field, C.K, C.N
    q = f.order
    total = q**K
    if total > limit:
        raise EnumerationLimitError(total, limit, "codeword enumeration")
    if K == 0:
        raise ValueError("the zero code has no minimum distance")
    tables = _numpy_tables(f) if q <= 4096 else None
    rows = C.generator.data
    if tables is None:
        best = N + 1
        for w in C.codewords():
            wt = sum(1 for x in w if x)
            if 0 < wt < best:
                best = wt
        return best
    add_t, mul_t = tables
    head = 0
    while head < K and q ** (head + 1) <= _HEAD_WORDS:
        head += 1
    head_words = _span_array(f, rows[:head], N, add_t, mul_t)
    best = N + 1
    for coeffs in itertools.product(range(q), repeat=K - head):
        offset = np.asarray(f.vecmat(coeffs, rows[head:]) if coeffs else [0] * N, dtype=np.int64)
        words = add_t[head_words, offset[None, :]]
        wts = np.count_nonzero(words, axis=1)
        wts = wts[wts > 0]
        if wts.size:
            best = min(best, int(wts.min()))
    return best


def _min_distance_subsets(C: LinearCode) -> int:
    """D = N - max{|Z| : the columns indexed by Z have rank < K}."""
    f, K, N = C.field, C.K, C.N
    cols = list(zip(*C.generator.data))
    for z in range(N - 1, -1, -1):
        for Z in itertools.combinations(range(N), z):
            sub = [cols[j] for j in Z]
            # rank of the K x z submatrix, computed on its transpose
            if _rref_raw(f, sub, K)[1] < K:
                return N - z
    return N  # pragma: no cover - z = 0 always has rank 0 < K


def min_distance(C: LinearCode, method: str = "auto", limit: int = MIN_DISTANCE_GUARD) -> int:
    """Minimum Hamming weight of a nonzero codeword.

    ``method`` is one of ``"enumerate"`` (all ``q**K`` codewords, guarded by
    ``limit``), ``"subsets"`` (exhaustive over coordinate subsets) or
    ``"auto"``, which uses the MDS closed form ``N - K + 1`` for codes
    constructed as Reed-Solomon codes and enumeration otherwise.
    """
    if method == "auto":
        if isinstance(C, RSCode):
            return C.N - C.K + 1
        method = "enumerate"
    if method == "enumerate":
        return _min_distance_enumerate(C, limit)
    if method == "subsets":
        return _min_distance_subsets(C)
    raise ValueError(f"unknown method {method!r}")


def is_mds(C: LinearCode) -> bool:
    """Every K columns of the generator are linearly independent."""
    cols = list(zip(*C.generator.data))
    for Z in itertools.combinations(range(C.N), C.K):
        if _rref_raw(C.field, [cols[j] for j in Z], C.K)[1] < C.K:
            return False
    return True


def systematic_parity_check(C: LinearCode) -> Matrix:
    """Parity check ``H`` (N x (N-K)) of ``C`` whose top (N-K) block is the identity.

    For ``v = c + [e, 0, ..., 0]`` with ``c`` in ``C`` and ``e`` of length
    ``N - K``, ``v @ H == e``.
    """
    r = C.N - C.K
    H = C.parity_check
    if r == 0:
        return H
    top = H.take_rows(range(r))
    if top.rank() < r:
        raise NoSystematicFormError("top (N-K)x(N-K) block of every parity check of this code is singular")
    return H @ inverse(top)


def systematic_generator(C: LinearCode) -> LinearCode:
    """Equivalent code description whose generator starts with the K x K identity."""
    red, rank, pivots = _rref_raw(C.field, C.generator.data, C.N)
    if pivots != list(range(C.K)):
        raise NoSystematicFormError("the first K columns of the generator are linearly dependent")
    gen = Matrix._raw(C.field, red[:rank], C.N)
    if isinstance(C, RSCode):
        return RSCode(C.alpha, C.K, C.field, generator=gen)
    return LinearCode(gen)


def is_systematic(C: LinearCode) -> bool:
    return C.generator.take_columns(range(C.K)) == Matrix.identity(C.field, C.K)


def extend_field(C: LinearCode, target: FieldSpec) -> LinearCode:
    """The same generator read over ``target``."""
    gen = C.generator.embed(target)
    if isinstance(C, RSCode):
        alpha = [target.embed_raw(a, C.field) for a in C.alpha]
        return RSCode(alpha, C.K, target, generator=gen)
    return LinearCode(gen)


def contains_repetition(C: LinearCode) -> bool:
    return C.contains([C.field.one] * C.N)


def code_to_dict(C: LinearCode) -> dict:
    d = {
        "field": C.field.to_dict(),
        "N": C.N,
        "K": C.K,
        "generator": C.generator.to_strings(),
        "kind": C.kind,
    }
    if isinstance(C, RSCode):
        d["alpha"] = [C.field.to_str(a) for a in C.alpha]
    return d


def code_from_dict(d: dict, field: FieldSpec | None = None) -> LinearCode:
    """Inverse of :func:`code_to_dict`.

    RS descriptors may omit ``generator`` (Vandermonde is used).  Flat
    row-major generator lists are accepted as well as nested rows.
    """
    field = field or FieldSpec.from_dict(d["field"])
    gen = None
    if d.get("generator") is not None:
        g = d["generator"]
        if g and not isinstance(g[0], list):
            n = d["N"]
            g = [g[i : i + n] for i in range(0, len(g), n)]
        gen = Matrix(field, g, d.get("N"))
    if d.get("kind", "generic") == "rs":
        alpha = [field.check(a) for a in d["alpha"]]
        return RSCode(alpha, d["K"], field, generator=gen)
    if gen is None:
        raise ValueError("generic code descriptor needs a generator")
    C = LinearCode(gen)
    if ("K" in d and d["K"] != C.K) or ("N" in d and d["N"] != C.N):
        raise ValueError("descriptor N/K disagree with generator shape")
    return C
