"""In-process server fleet, session transcripts and download/upload accounting."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from . import __version__
from .algebra import FieldElement, FieldSpec, Matrix
from .codes import LinearCode
from .polyspace import QuerySpace

__all__ = [
    "ServerState",
    "Fleet",
    "Accounting",
    "SessionTranscript",
    "encode_storage",
    "serve_query",
    "run_session",
    "replay_transcript",
    "iteration_rng",
    "config_hash",
]


@dataclass(frozen=True)
class ServerState:
    """Server ``index`` (1-based) holding column ``index`` of ``Y = X @ G_C``."""

    index: int
    share: tuple
    field: FieldSpec

    @property
    def share_elements(self) -> list[FieldElement]:
        return [FieldElement(self.field, v) for v in self.share]

    def respond(self, query, space: QuerySpace) -> int:
        return space.evaluate_raw(query, self.share, self.field)

    def handle(self, message: dict, space: QuerySpace) -> dict:
        """Message interface: ``{server, query}`` in, ``{server, value}`` out."""
        if message["server"] != self.index:
            raise ValueError(f"message for server {message['server']} delivered to server {self.index}")
        query = space.from_wire(message["query"])
        return {"server": self.index, "value": self.field.to_str(self.respond(query, space))}


def encode_storage(X: Matrix, C: LinearCode) -> list[ServerState]:
    """Store ``Y = X @ G_C`` (generator embedded into X's field); server n gets column n."""
    kf = X.field
    if X.n_cols != C.K:
        raise ValueError(f"data has {X.n_cols} columns but the storage code has dimension {C.K}")
    G = C.generator.embed(kf) if C.field != kf else C.generator
    Y = X @ G
    return [ServerState(n + 1, tuple(r[n] for r in Y.data), kf) for n in range(C.N)]


def serve_query(server: ServerState, rho, space: QuerySpace | None = None) -> FieldElement:
    if space is None:
        if getattr(rho, "M", None) != len(server.share):
            raise ValueError(f"query arity {getattr(rho, 'M', '?')} does not match share height {len(server.share)}")
        return FieldElement(server.field, rho.evaluate_raw(server.share, server.field))
    return FieldElement(server.field, server.respond(rho, space))


class Fleet:
    """Stateless servers answering one query each per round."""

    def __init__(self, servers: Sequence[ServerState]):
        self.servers = list(servers)

    @property
    def N(self) -> int:
        return len(self.servers)

    def round(self, queries: Sequence, space: QuerySpace) -> list[int]:
        if len(queries) != self.N:
            raise ValueError(f"{len(queries)} queries for {self.N} servers")
        return [s.respond(q, space) for s, q in zip(self.servers, queries)]


@dataclass
class Accounting:
    """Symbols moved during a session.

    ``uploaded`` counts base-field symbols (each query is ``Q`` of them),
    ``downloaded`` counts extension-field symbols (one per response).
    """

    uploaded: int = 0
    downloaded: int = 0
    iterations: int = 0

    def record_round(self, n_servers: int, query_dim: int) -> None:
        self.uploaded += n_servers * query_dim
        self.downloaded += n_servers
        self.iterations += 1

    def check(self, N: int, Q: int) -> bool:
        S = self.iterations
        return self.uploaded == S * N * Q and self.downloaded == S * N

    def to_dict(self) -> dict:
        return {"uploaded_base_symbols": self.uploaded, "downloaded_ext_symbols": self.downloaded, "iterations": self.iterations}


def _canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def config_hash(config: dict) -> str:
    return hashlib.sha256(_canonical_json(config).encode()).hexdigest()[:16]


@dataclass
class SessionTranscript:
    """What the user sent and received in one session, plus derived accounting."""

    scheme: str
    config: dict
    seed: int
    session: int
    iterations: list = dc_field(default_factory=list)
    accounting: Accounting = dc_field(default_factory=Accounting)
    rate: Fraction = Fraction(0)
    extra: dict = dc_field(default_factory=dict)

    @property
    def S(self) -> int:
        return len(self.iterations)

    def to_dict(self) -> dict[str, Any]:
        return {
            "tool": {"name": "starpc", "version": __version__},
            "scheme": self.scheme,
            "seed": self.seed,
            "session": self.session,
            "config": self.config,
            "config_hash": config_hash(self.config),
            **self.extra,
            "iterations": self.iterations,
            "accounting": self.accounting.to_dict(),
            "rate": f"{self.rate.numerator}/{self.rate.denominator}",
            "rate_decimal": float(self.rate),
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, sort_keys=True)


def iteration_rng(seed: int, session: int, iteration: int) -> np.random.Generator:
    """Independent stream per (seed, session, iteration)."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(session, iteration)))


def fresh_seed() -> int:
    return int(np.random.SeedSequence().entropy)


def run_session(scheme, Phi, X, seed: int | None = None):
    """Fit a fresh copy of ``scheme`` on ``X`` and evaluate ``Phi`` privately.

    Returns ``(values, transcript, accounting)``.
    """
    from sklearn.base import clone

    est = clone(scheme)
    if seed is not None:
        est.set_params(seed=seed)
    values = est.fit(X).transform(Phi)
    return values, est.transcript_, est.transcript_.accounting


def replay_transcript(transcript: dict):
    """Re-decode the recorded responses of a transcript dict.

    Returns the decoded values in the same string form the transcript
    records them, so ``replay_transcript(t) == [it["decoded"] for it in t["iterations"]]``
    holds for an untampered transcript.
    """
    from .scheme_replicated import replay_replicated
    from .scheme_systematic import replay_systematic

    if transcript["scheme"] == "replicated":
        return replay_replicated(transcript)
    if transcript["scheme"] == "systematic":
        return replay_systematic(transcript)
    raise ValueError(f"unknown scheme {transcript['scheme']!r}")
