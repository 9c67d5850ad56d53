"""T-private computation of arbitrary query-space functions on replicated data.

Every server holds the full data column ``X``.  Each round, masks drawn
from an [N, T] MDS retrieval code hide ``N - T`` wanted functions; the user
strips the masks with a systematic parity check of the retrieval code.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .algebra import FieldElement, FieldSpec, Matrix
from .codes import (
    LinearCode,
    code_from_dict,
    code_to_dict,
    is_mds,
    rep_code,
    rs_code,
    systematic_parity_check,
)
from .exceptions import ConfigurationError
from .polyspace import PolynomialSpace, QuerySpace
from .simnet import Fleet, SessionTranscript, encode_storage, fresh_seed, iteration_rng
from .validation import check_code, check_data_matrix, check_field, check_functions

__all__ = [
    "MaskSet",
    "make_masks",
    "masks_from_codewords",
    "build_queries",
    "decode_responses",
    "default_retrieval_code",
    "ReplicatedPCScheme",
    "run_replicated",
]


@dataclass(frozen=True)
class MaskSet:
    """Random codewords ``d^1..d^Q`` of the retrieval code and the masks they induce.

    ``masks[n]`` is the query-space element whose basis coordinates are
    ``(d^1(n+1), ..., d^Q(n+1))``.
    """

    codewords: tuple
    masks: tuple
    T: int
    space: QuerySpace

    @property
    def N(self) -> int:
        return len(self.masks)

    def recompute(self) -> list:
        """Masks rebuilt from the codewords as explicit basis combinations."""
        basis = self.space.basis_elements()
        return [self.space.combine([cw[n] for cw in self.codewords], basis) for n in range(self.N)]


def masks_from_codewords(codewords: Sequence[Sequence[int]], space: QuerySpace, T: int) -> MaskSet:
    N = len(codewords[0]) if codewords else 0
    masks = tuple(space.from_coordinates([cw[n] for cw in codewords]) for n in range(N))
    return MaskSet(tuple(tuple(cw) for cw in codewords), masks, T, space)


def make_masks(D: LinearCode, space: QuerySpace, rng) -> MaskSet:
    """Draw ``Q`` independent uniform codewords of ``D`` (uniform message times generator)."""
    if D.field != space.field:
        raise ConfigurationError("retrieval code and query space must share the base field")
    f = D.field
    codewords = []
    for _ in range(space.dim):
        msg = f.random(rng, D.K)
        codewords.append(f.vecmat(msg, D.generator.data))
    return masks_from_codewords(codewords, space, D.K)


def build_queries(masks: MaskSet, batch: Sequence) -> list:
    """``rho_n = psi_n + phi_n`` for the first ``N - T`` servers, ``psi_n`` otherwise."""
    if len(batch) != masks.N - masks.T:
        raise ValueError(f"batch has {len(batch)} functions, expected N - T = {masks.N - masks.T}")
    out = list(masks.masks)
    for n, phi in enumerate(batch):
        out[n] = out[n] + phi
    return out


def decode_responses(responses: Sequence, H_D: Matrix, kfield: FieldSpec | None = None) -> list[FieldElement]:
    """``responses @ H_D``: the masks lie in the (extended) retrieval code and vanish."""
    if len(responses) != H_D.n_rows:
        raise ValueError(f"{len(responses)} responses for a parity check with {H_D.n_rows} rows")
    if kfield is None:
        kfield = responses[0].field if isinstance(responses[0], FieldElement) else H_D.field
    raw = [kfield.check(r) for r in responses]
    H = H_D.embed(kfield) if H_D.field != kfield else H_D
    return [FieldElement(kfield, v) for v in kfield.vecmat(raw, H.data)]


def default_retrieval_code(N: int, T: int, field: FieldSpec) -> LinearCode:
    """An [N, T] MDS code: repetition (T = 1), single parity (T = N-1), else RS."""
    if not 1 <= T < N:
        raise ConfigurationError(f"need 1 <= T < N, got T={T}, N={N}")
    if T == 1:
        return rep_code(N, field)
    if T == N - 1:
        rows = [[int(i == j) for j in range(T)] + [1] for i in range(T)]
        return LinearCode(Matrix(field, rows))
    if N > field.order:
        raise ConfigurationError(
            f"no default [{N},{T}] MDS code over {field!r}; pass retrieval_code explicitly"
        )
    return rs_code(list(range(N)), T, field)


def _validate_retrieval(D: LinearCode, N: int, T: int, field: FieldSpec) -> LinearCode:
    check_code(D, N, field, "retrieval_code")
    if D.K != T:
        raise ConfigurationError(f"retrieval code has dimension {D.K}, expected T = {T}")
    if not is_mds(D):
        raise ConfigurationError("retrieval code must be MDS")
    return D


class ReplicatedPCScheme(BaseEstimator):
    """T-private evaluation of ``B`` query-space functions on a replicated column.

    ``fit(X)`` places a copy of the ``M x 1`` data column on each of ``N``
    servers; ``transform(Phi)`` runs ``B / (N - T)`` rounds and returns
    ``[phi_1(X), ..., phi_B(X)]``.

    Parameters
    ----------
    N, T : int
        Number of servers and collusion threshold, ``1 <= T < N``.
    field : FieldSpec, int or dict
        Base field F of queries and codes.
    ext_field : FieldSpec, int or dict, optional
        Data field K (an extension of the prime field of F, or F itself).
    M, G : int
        Column height and degree bound of the default query space P_G.
    space : QuerySpace, optional
        Overrides the default polynomial space.
    retrieval_code : LinearCode, optional
        [N, T] MDS code generating the masks.
    seed : int, optional
        Session randomness; fresh entropy when omitted.
    """

    def __init__(self, N=3, T=2, field=2, ext_field=None, M=1, G=1, space=None, retrieval_code=None, seed=None):
        self.N = N
        self.T = T
        self.field = field
        self.ext_field = ext_field
        self.M = M
        self.G = G
        self.space = space
        self.retrieval_code = retrieval_code
        self.seed = seed

    def _setup(self) -> None:
        N, T = int(self.N), int(self.T)
        if not 1 <= T < N:
            raise ConfigurationError(f"need 1 <= T < N, got T={T}, N={N}")
        self.field_ = check_field(self.field)
        self.ext_field_ = check_field(self.ext_field, self.field_)
        if self.ext_field_.p != self.field_.p or (self.ext_field_ != self.field_ and not self.field_.is_prime_field):
            raise ConfigurationError(f"{self.ext_field_!r} is not an extension of {self.field_!r}")
        self.space_ = self.space if self.space is not None else PolynomialSpace(self.M, self.G, self.field_)
        if self.space_.field != self.field_:
            raise ConfigurationError("query space must be over the base field")
        if self.retrieval_code is None:
            D = default_retrieval_code(N, T, self.field_)
        else:
            D = _validate_retrieval(self.retrieval_code, N, T, self.field_)
        self.retrieval_code_ = D
        self.parity_check_ = systematic_parity_check(D)
        self.storage_code_ = rep_code(N, self.field_)
        self.seed_ = fresh_seed() if self.seed is None else int(self.seed)
        self.n_sessions_ = 0

    def fit(self, X, y=None):
        self._setup()
        X = check_data_matrix(X, self.ext_field_, n_rows=self.space_.n_vars, n_cols=1)
        self.fleet_ = Fleet(encode_storage(X, self.storage_code_))
        return self

    @property
    def rate(self) -> Fraction:
        return Fraction(int(self.N) - int(self.T), int(self.N))

    def query_plan(self, B: int) -> list[dict]:
        """Per round, the map server -> index of the function it carries (1-based)."""
        step = int(self.N) - int(self.T)
        if B % step:
            raise ConfigurationError(f"N - T = {step} must divide B = {B}")
        return [{n + 1: s * step + n + 1 for n in range(step)} for s in range(B // step)]

    def round_queries(self, masks: MaskSet, assignment: dict, Phi: Sequence) -> list:
        """Queries of one round given its masks and server -> function map."""
        return build_queries(masks, [Phi[assignment[n] - 1] for n in sorted(assignment)])

    def config_dict(self) -> dict:
        return {
            "N": int(self.N),
            "T": int(self.T),
            "field": self.field_.to_dict(),
            "ext_field": self.ext_field_.to_dict(),
            "space": self.space_.describe(),
            "retrieval_code": code_to_dict(self.retrieval_code_),
        }

    def transform(self, Phi) -> list[FieldElement]:
        check_is_fitted(self, "fleet_")
        Phi = check_functions(Phi, self.space_)
        B = len(Phi)
        plan = self.query_plan(B)
        space, kf = self.space_, self.ext_field_
        session = self.n_sessions_
        self.n_sessions_ += 1
        tr = SessionTranscript("replicated", dict(self.config_dict(), B=B), self.seed_, session)
        values: list[FieldElement] = [None] * B  # type: ignore[list-item]
        for s, assignment in enumerate(plan):
            rng = iteration_rng(self.seed_, session, s)
            masks = make_masks(self.retrieval_code_, space, rng)
            queries = self.round_queries(masks, assignment, Phi)
            responses = self.fleet_.round(queries, space)
            tr.accounting.record_round(self.fleet_.N, space.dim)
            decoded = decode_responses(responses, self.parity_check_, kf)
            for b, v in zip(assignment.values(), decoded):
                values[b - 1] = v
            f = self.field_
            tr.iterations.append(
                {
                    "index": s + 1,
                    "assignment": {str(n): b for n, b in assignment.items()},
                    "codewords": [[f.to_str(v) for v in cw] for cw in masks.codewords],
                    "queries": [space.to_wire(q) for q in queries],
                    "responses": [kf.to_str(v) for v in responses],
                    "decoded": [str(v) for v in decoded],
                }
            )
        tr.rate = Fraction(B, self.fleet_.N * tr.S)
        self.transcript_ = tr
        return values

    def fit_transform(self, X, Phi):
        return self.fit(X).transform(Phi)


def run_replicated(scheme: ReplicatedPCScheme, Phi, X, seed: int | None = None):
    """Evaluate ``Phi`` on ``X`` with a fresh copy of ``scheme``; returns ``(values, transcript)``."""
    from .simnet import run_session

    values, transcript, _ = run_session(scheme, Phi, X, seed)
    return values, transcript


def replay_replicated(transcript: dict) -> list[list[str]]:
    cfg = transcript["config"]
    F = FieldSpec.from_dict(cfg["field"])
    K = FieldSpec.from_dict(cfg["ext_field"])
    H = systematic_parity_check(code_from_dict(cfg["retrieval_code"], F))
    out = []
    for it in transcript["iterations"]:
        resp = [K.from_str(r) for r in it["responses"]]
        out.append([str(v) for v in decode_responses(resp, H, K)])
    return out
