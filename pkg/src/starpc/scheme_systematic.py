"""T-private polynomial computation on systematically encoded data.

Data columns ``x_1..x_K`` are stored with a systematic [N, K] storage code,
so server ``k <= K`` holds ``x_k`` itself.  Masked responses lie in the
response code ``E = C^{*G} * D``; each round hides up to ``F = min(D_E - 1, K)``
wanted values on systematic servers, recovered by decoding errors at
known positions of ``E``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .algebra import FieldElement, FieldSpec, Matrix, _solve_raw, null_space
from .codes import (
    LinearCode,
    RSCode,
    code_from_dict,
    code_to_dict,
    contains_repetition,
    is_systematic,
    min_distance,
    rs_code,
    star_power,
    star_product,
    systematic_generator,
)
from .exceptions import (
    AmbiguousSolutionError,
    ConfigurationError,
    CorruptedResponseError,
    InconsistentSystemError,
    InfeasibleConfigurationError,
)
from .polyspace import PolynomialSpace
from .scheme_replicated import (
    MaskSet,
    _validate_retrieval,
    default_retrieval_code,
    make_masks,
)
from .simnet import Fleet, SessionTranscript, encode_storage, fresh_seed, iteration_rng
from .validation import check_code, check_data_matrix, check_field, check_functions

__all__ = [
    "SchedulePlan",
    "response_code",
    "compute_F",
    "build_schedule",
    "build_queries_iter",
    "syndrome",
    "decode_iteration",
    "rs_rate",
    "least_block_length",
    "SystematicPCScheme",
    "run_systematic",
]


def response_code(C: LinearCode, D: LinearCode, G: int) -> LinearCode:
    """``E = C^{*G} * D`` over the base field.

    When ``C`` and ``D`` are Reed-Solomon codes on the same evaluation
    points the result is returned as an :class:`RSCode` (after checking it
    equals the computed star product), so its distance is known in closed form.
    """
    if C.field != D.field or C.N != D.N:
        raise ConfigurationError("storage and retrieval codes must share field and length")
    if not contains_repetition(C):
        raise ConfigurationError("storage code must contain the repetition code (so that C is inside C*C)")
    E = star_product(star_power(C, G), D)
    if isinstance(C, RSCode) and isinstance(D, RSCode) and C.alpha == D.alpha:
        E_rs = RSCode(C.alpha, E.K, C.field)
        if E_rs != E:  # pragma: no cover - would contradict the RS product identity
            raise AssertionError("star product of RS codes is not the expected RS code")
        return E_rs
    return E


def compute_F(E: LinearCode, K: int, method: str = "auto") -> int:
    """Number of values recoverable per round: ``min(D_E - 1, K)``."""
    F = min(min_distance(E, method) - 1, K)
    if F < 1:
        raise InfeasibleConfigurationError(
            f"response code [{E.N},{E.K}] has minimum distance 1; no values can be recovered"
        )
    return F


def least_block_length(K: int, F: int) -> int:
    B = 1
    while (K * B) % F:
        B += 1
    return B


@dataclass(frozen=True)
class SchedulePlan:
    """Which (server k, function b) pairs each round downloads, 1-based.

    Global slot ``t`` in ``[0, K*B)`` maps to ``b = t // K + 1`` and
    ``k = t % K + 1``; round ``s`` takes slots ``[s*F, (s+1)*F)``.
    """

    K: int
    B: int
    F: int
    iterations: tuple

    @property
    def S(self) -> int:
        return len(self.iterations)

    def labels(self) -> list[list[int]]:
        """B x K table: entry (b, k) is the 1-based round that downloads phi_b(x_k)."""
        table = [[0] * self.K for _ in range(self.B)]
        for s, slot in enumerate(self.iterations):
            for k, b in slot:
                table[b - 1][k - 1] = s + 1
        return table

    def to_dict(self) -> dict:
        return {"K": self.K, "B": self.B, "F": self.F, "S": self.S,
                "iterations": [[list(p) for p in slot] for slot in self.iterations]}


def build_schedule(K: int, B: int, F: int) -> SchedulePlan:
    if K < 1 or B < 1 or F < 1:
        raise ValueError(f"K, B, F must be positive, got {K}, {B}, {F}")
    if F > K:
        raise ValueError(f"F = {F} exceeds the number of systematic servers K = {K}")
    if (K * B) % F:
        raise ConfigurationError(f"F = {F} must divide K*B = {K * B}")
    slots = [(t % K + 1, t // K + 1) for t in range(K * B)]
    return SchedulePlan(K, B, F, tuple(tuple(slots[i : i + F]) for i in range(0, K * B, F)))


def build_queries_iter(masks: MaskSet, assignment: Sequence[tuple[int, int]], functions: Sequence, K: int) -> list:
    """``rho_k = psi_k + phi_b`` for each assigned ``(k, b)``; ``psi_n`` elsewhere."""
    out = list(masks.masks)
    seen = set()
    for k, b in assignment:
        if not 1 <= k <= K:
            raise ValueError(f"server {k} is not systematic (K = {K})")
        if k in seen:
            raise ValueError(f"server {k} assigned twice in one round")
        seen.add(k)
        out[k - 1] = out[k - 1] + functions[b - 1]
    return out


def syndrome(responses: Sequence[int], H: Matrix, kfield: FieldSpec) -> list[int]:
    Hk = H.embed(kfield) if H.field != kfield else H
    return kfield.vecmat(list(responses), Hk.data) if Hk.n_rows else []


def decode_iteration(responses: Sequence, E: LinearCode | Matrix, assignment: Sequence[tuple[int, int]],
                     kfield: FieldSpec | None = None) -> list[FieldElement]:
    """Recover the error values at the assigned systematic positions.

    ``E`` may be the response code or a parity-check matrix for it.  Values
    are returned in assignment order.
    """
    H = null_space(E.canonical_generator) if isinstance(E, LinearCode) else E
    if kfield is None:
        kfield = responses[0].field if isinstance(responses[0], FieldElement) else H.field
    raw = [kfield.check(r) for r in responses]
    if len(raw) != H.n_rows:
        raise ValueError(f"{len(raw)} responses for length-{H.n_rows} response code")
    s = syndrome(raw, H, kfield)
    positions = [k - 1 for k, _ in assignment]
    if not positions:
        if any(s):
            raise CorruptedResponseError("nonzero syndrome in a round with no wanted values")
        return []
    Hk = H.embed(kfield) if H.field != kfield else H
    R = [Hk.data[i] for i in positions]
    try:
        e = _solve_raw(kfield, R, s)
    except InconsistentSystemError as exc:
        raise CorruptedResponseError("syndrome is not explained by errors at the assigned positions") from exc
    except AmbiguousSolutionError as exc:  # pragma: no cover - F <= D_E - 1 guarantees independence
        raise RuntimeError("parity-check rows at assigned positions are dependent") from exc
    return [FieldElement(kfield, v) for v in e]


def rs_rate(N: int, K: int, T: int, G: int) -> Fraction:
    """Download rate ``min(N - (G(K-1) + T), K) / N`` for RS storage and retrieval codes."""
    used = G * (K - 1) + T
    if used > N:
        raise InfeasibleConfigurationError(f"G(K-1)+T = {used} exceeds N = {N}")
    return Fraction(min(N - used, K), N)


class SystematicPCScheme(BaseEstimator):
    """T-private evaluation of degree-``G`` polynomials on every stored column.

    ``fit(X)`` encodes the ``M x K`` data matrix with the (systematic)
    storage code; ``transform(Phi)`` returns the ``B x K`` matrix of values
    ``phi_b(x_k)``.

    Parameters
    ----------
    storage_code : LinearCode
        [N, K] code containing the repetition code.  A non-systematic
        generator is replaced by the equivalent systematic one (no column
        permutation); if the first K columns are dependent this fails.
    T : int, optional
        Collusion threshold; inferred from ``retrieval_code`` if given.
    G : int
        Degree bound of the query space.
    M : int
        Height of each data column.
    B : int, optional
        Number of functions.  When omitted, any ``B`` with ``F | K*B`` is
        accepted at transform time; ``B_`` holds the least such value.
    retrieval_code : LinearCode, optional
        [N, T] MDS code.  Defaults to RS on the storage code's evaluation
        points for RS storage codes.
    ext_field : optional
        Data field K; defaults to the storage code's field.
    distance_method : str
        How to obtain ``D_E``; see :func:`~starpc.codes.min_distance`.
    seed : int, optional
    """

    def __init__(self, storage_code=None, T=None, G=1, M=1, B=None, retrieval_code=None, ext_field=None,
                 distance_method="auto", seed=None):
        self.storage_code = storage_code
        self.T = T
        self.G = G
        self.M = M
        self.B = B
        self.retrieval_code = retrieval_code
        self.ext_field = ext_field
        self.distance_method = distance_method
        self.seed = seed

    def _setup(self) -> None:
        if self.storage_code is None:
            raise ConfigurationError("storage_code is required")
        C = check_code(self.storage_code, name="storage_code")
        if not is_systematic(C):
            C = systematic_generator(C)
        F_base = C.field
        N, K = C.N, C.K
        if self.retrieval_code is not None:
            D = self.retrieval_code
            T = D.K if self.T is None else int(self.T)
            D = _validate_retrieval(D, N, T, F_base)
        else:
            if self.T is None:
                raise ConfigurationError("give T or retrieval_code")
            T = int(self.T)
            if isinstance(C, RSCode) and 1 <= T < N:
                D = rs_code(list(C.alpha), T, F_base)
            else:
                D = default_retrieval_code(N, T, F_base)
        if not 1 <= T < N:
            raise ConfigurationError(f"need 1 <= T < N, got T={T}, N={N}")
        G = int(self.G)
        if G < 1:
            raise ConfigurationError("G must be >= 1")
        self.field_ = F_base
        self.ext_field_ = check_field(self.ext_field, F_base)
        if self.ext_field_.p != F_base.p or (self.ext_field_ != F_base and not F_base.is_prime_field):
            raise ConfigurationError(f"{self.ext_field_!r} is not an extension of {F_base!r}")
        self.storage_code_ = C
        self.retrieval_code_ = D
        self.T_ = T
        self.space_ = PolynomialSpace(int(self.M), G, F_base)
        self.response_code_ = response_code(C, D, G)
        self.distance_ = min_distance(self.response_code_, self.distance_method)
        self.F_ = compute_F(self.response_code_, K, self.distance_method)
        self.B_ = least_block_length(K, self.F_) if self.B is None else int(self.B)
        if (K * self.B_) % self.F_:
            raise ConfigurationError(f"F = {self.F_} must divide K*B = {K * self.B_}")
        self.parity_check_ = null_space(self.response_code_.canonical_generator)
        self.seed_ = fresh_seed() if self.seed is None else int(self.seed)
        self.n_sessions_ = 0

    def fit(self, X, y=None):
        self._setup()
        X = check_data_matrix(X, self.ext_field_, n_rows=int(self.M), n_cols=self.storage_code_.K)
        self.fleet_ = Fleet(encode_storage(X, self.storage_code_))
        return self

    @property
    def rate(self) -> Fraction:
        check_is_fitted(self, "F_")
        return Fraction(self.F_, self.storage_code_.N)

    def schedule(self, B: int | None = None) -> SchedulePlan:
        return build_schedule(self.storage_code_.K, self.B_ if B is None else B, self.F_)

    def query_plan(self, B: int) -> list[dict]:
        return [{k: b for k, b in slot} for slot in self.schedule(B).iterations]

    def round_queries(self, masks: MaskSet, assignment: dict, Phi: Sequence) -> list:
        return build_queries_iter(masks, list(assignment.items()), Phi, self.storage_code_.K)

    def config_dict(self) -> dict:
        return {
            "N": self.storage_code_.N,
            "K": self.storage_code_.K,
            "T": self.T_,
            "G": int(self.G),
            "field": self.field_.to_dict(),
            "ext_field": self.ext_field_.to_dict(),
            "space": self.space_.describe(),
            "storage_code": code_to_dict(self.storage_code_),
            "retrieval_code": code_to_dict(self.retrieval_code_),
        }

    def transform(self, Phi) -> Matrix:
        check_is_fitted(self, "fleet_")
        Phi = check_functions(Phi, self.space_)
        B = len(Phi)
        if self.B is not None and B != self.B_:
            raise ConfigurationError(f"expected B = {self.B_} functions, got {B}")
        K = self.storage_code_.K
        if (K * B) % self.F_:
            raise ConfigurationError(f"F = {self.F_} must divide K*B = {K * B}; least valid B is {self.B_}")
        plan = self.schedule(B)
        space, kf, f = self.space_, self.ext_field_, self.field_
        session = self.n_sessions_
        self.n_sessions_ += 1
        tr = SessionTranscript(
            "systematic", dict(self.config_dict(), B=B), self.seed_, session,
            extra={
                "response_code": code_to_dict(self.response_code_),
                "D_E": self.distance_,
                "F": self.F_,
                "schedule": plan.to_dict(),
            },
        )
        out = [[0] * K for _ in range(B)]
        for s, assignment in enumerate(plan.iterations):
            rng = iteration_rng(self.seed_, session, s)
            masks = make_masks(self.retrieval_code_, space, rng)
            queries = build_queries_iter(masks, assignment, Phi, K)
            responses = self.fleet_.round(queries, space)
            tr.accounting.record_round(self.fleet_.N, space.dim)
            synd = syndrome(responses, self.parity_check_, kf)
            decoded = decode_iteration(responses, self.parity_check_, assignment, kf)
            for (k, b), v in zip(assignment, decoded):
                out[b - 1][k - 1] = v.value
            tr.iterations.append(
                {
                    "index": s + 1,
                    "assignment": [[k, b] for k, b in assignment],
                    "codewords": [[f.to_str(v) for v in cw] for cw in masks.codewords],
                    "queries": [space.to_wire(q) for q in queries],
                    "responses": [kf.to_str(v) for v in responses],
                    "syndrome": [kf.to_str(v) for v in synd],
                    "decoded": [str(v) for v in decoded],
                }
            )
        tr.rate = Fraction(K * B, self.fleet_.N * tr.S)
        self.transcript_ = tr
        return Matrix._raw(kf, out, K)

    def fit_transform(self, X, Phi):
        return self.fit(X).transform(Phi)


def run_systematic(scheme: SystematicPCScheme, Phi, X, seed: int | None = None):
    """Evaluate ``Phi`` on every column of ``X`` with a fresh copy of ``scheme``."""
    from .simnet import run_session

    values, transcript, _ = run_session(scheme, Phi, X, seed)
    return values, transcript


def replay_systematic(transcript: dict) -> list[list[str]]:
    F = FieldSpec.from_dict(transcript["config"]["field"])
    K = FieldSpec.from_dict(transcript["config"]["ext_field"])
    E = code_from_dict(transcript["response_code"], F)
    H = null_space(E.canonical_generator)
    out = []
    for it in transcript["iterations"]:
        resp = [K.from_str(r) for r in it["responses"]]
        assignment = [tuple(p) for p in it["assignment"]]
        out.append([str(v) for v in decode_iteration(resp, H, assignment, K)])
    return out
