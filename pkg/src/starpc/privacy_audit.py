"""Exact privacy audits by exhaustive enumeration.

All probabilities are :class:`fractions.Fraction`.  Independence between the
requested functions and what a colluding subset observes is decided by the
total-variation distance between their joint law and the product of the
marginals: it is zero exactly when the mutual information is zero, and it
needs no logarithms.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
from sklearn.base import clone

from .algebra import FieldSpec
from .codes import LinearCode
from .exceptions import EnumerationLimitError
from .scheme_replicated import masks_from_codewords

__all__ = [
    "PrivacyReport",
    "mask_tuple_distribution",
    "mutual_information",
    "audit_all_subsets",
    "otp_check",
    "total_variation",
    "AUDIT_GUARD",
]

AUDIT_GUARD = 2**20


def _fmt(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _view_key(view) -> str:
    return "|".join(",".join(map(str, part)) for part in view)


@dataclass
class PrivacyReport:
    """Outcome of auditing one colluding subset (1-based server indices)."""

    subset: tuple
    divergence: Fraction
    view_pmf: dict
    joint_pmf: dict
    support_size: int
    sampled_support: bool
    audited_S: int
    mode: str
    mask_uniform: bool | None = None
    notes: list = dc_field(default_factory=list)

    @property
    def private(self) -> bool:
        return self.divergence == 0

    @property
    def verdict(self) -> str:
        return "private" if self.private else "leaking"

    def to_dict(self, max_entries: int = 4096) -> dict:
        d = {
            "subset": list(self.subset),
            "verdict": self.verdict,
            "mutual_information_zero": self.private,
            "divergence_tv": _fmt(self.divergence),
            "divergence_tv_decimal": float(self.divergence),
            "support_size": self.support_size,
            "sampled_support": self.sampled_support,
            "audited_S": self.audited_S,
            "mode": self.mode,
            "mask_uniform": self.mask_uniform,
            "notes": list(self.notes),
        }
        if len(self.joint_pmf) <= max_entries:
            d["view_pmf"] = {_view_key(k): _fmt(v) for k, v in sorted(self.view_pmf.items())}
            d["joint_pmf"] = {f"{_view_key(phi)}:{_view_key(v)}": _fmt(p) for (phi, v), p in sorted(self.joint_pmf.items())}
        else:
            d["view_pmf_entries"] = len(self.view_pmf)
            d["joint_pmf_entries"] = len(self.joint_pmf)
        return d


def _all_codewords(D: LinearCode) -> list[tuple[int, ...]]:
    return list(D.codewords())


def mask_tuple_distribution(D: LinearCode, Q: int, subset: Sequence[int], limit: int = AUDIT_GUARD) -> dict:
    """Exact pmf of the mask coordinates seen by ``subset`` (1-based).

    Enumerates all ``|F|**(T*Q)`` message draws.  Keys are tuples, one
    entry per server in ``subset``, each the ``Q`` basis coordinates of that
    server's mask.
    """
    q = D.field.order
    total = q ** (D.K * Q)
    if total > limit:
        raise EnumerationLimitError(total, limit, "mask enumeration")
    words = _all_codewords(D)
    idx = [n - 1 for n in subset]
    counts: Counter = Counter()
    for draw in itertools.product(words, repeat=Q):
        counts[tuple(tuple(cw[n] for cw in draw) for n in idx)] += 1
    return {k: Fraction(c, total) for k, c in counts.items()}


def is_uniform(pmf: dict, size: int) -> bool:
    return len(pmf) == size and all(p == Fraction(1, size) for p in pmf.values())


def total_variation(joint: dict, phi_pmf: dict, view_pmf: dict) -> Fraction:
    """TV distance between ``P(phi, view)`` and ``P(phi) P(view)`` (full product support)."""
    tv = Fraction(0)
    for phi, pp in phi_pmf.items():
        for v, pv in view_pmf.items():
            tv += abs(joint.get((phi, v), Fraction(0)) - pp * pv)
    return tv / 2


def _prepare(scheme):
    """A fitted-parameter copy of ``scheme`` (no data needed)."""
    est = clone(scheme)
    est._setup()
    return est


def _default_support(space, B: int, limit: int, sample: int, rng) -> tuple[list, bool]:
    size = space.field.order ** (space.dim * B)
    if size <= limit:
        elems = list(space.elements(limit=limit))
        return [tuple(c) for c in itertools.product(elems, repeat=B)], False
    support = set()
    while len(support) < min(sample, size):
        support.add(tuple(space.sample(rng) for _ in range(B)))
    return sorted(support, key=lambda t: [space.coordinates(e) for e in t]), True


def mutual_information(
    scheme,
    subset: Sequence[int],
    B: int | None = None,
    support: Iterable | None = None,
    mode: str = "auto",
    limit: int = AUDIT_GUARD,
    support_limit: int = 4096,
    sample_size: int = 64,
    seed: int = 0,
) -> PrivacyReport:
    """Decide ``I(Phi; view of subset) = 0`` exactly for a scheme configuration.

    ``Phi`` is uniform on ``support`` (default: all of ``Q**B`` when that
    has at most ``support_limit`` elements, otherwise ``sample_size``
    uniformly chosen tuples, flagged as a sampled support).  The view is
    every query the subset receives over all rounds.

    ``mode="full"`` enumerates every mask draw of every round jointly and
    runs the scheme's own query construction.  ``mode="composed"`` builds the
    per-round conditional law from the exact mask distribution and
    multiplies rounds, which is valid because rounds use independent
    randomness.  ``"auto"`` picks ``full`` when it fits under ``limit``.
    """
    est = _prepare(scheme)
    space = est.space_
    D = est.retrieval_code_
    subset = tuple(sorted(int(n) for n in subset))
    if not subset or subset[0] < 1 or subset[-1] > D.N:
        raise ValueError(f"subset {subset} is not a set of servers in 1..{D.N}")
    if B is None:
        B = getattr(est, "B_", None) or (int(est.N) - int(est.T))
    plan = est.query_plan(B)
    S = len(plan)
    rng = np.random.default_rng(seed)
    if support is None:
        support, sampled = _default_support(space, B, support_limit, sample_size, rng)
    else:
        support, sampled = [tuple(s) for s in support], False
    if not support:
        raise ValueError("empty function support")
    q = D.field.order
    per_round = q ** (D.K * space.dim)
    full_size = len(support) * per_round**S
    if mode == "auto":
        mode = "full" if full_size <= limit else "composed"
    p_phi = Fraction(1, len(support))
    phi_keys = [tuple(tuple(space.coordinates(e)) for e in phis) for phis in support]
    joint: Counter = Counter()
    idx = [n - 1 for n in subset]
    f = space.field

    if mode == "full":
        if full_size > limit:
            raise EnumerationLimitError(full_size, limit, "joint enumeration")
        words = _all_codewords(D)
        round_draws = list(itertools.product(words, repeat=space.dim))
        total = len(round_draws) ** S
        for key, phis in zip(phi_keys, support):
            for draws in itertools.product(round_draws, repeat=S):
                view = []
                for assignment, draw in zip(plan, draws):
                    masks = masks_from_codewords(draw, space, D.K)
                    queries = est.round_queries(masks, assignment, list(phis))
                    view.extend(tuple(space.coordinates(queries[i])) for i in idx)
                joint[(key, tuple(view))] += Fraction(1, total) * p_phi
        mask_uniform = None
    elif mode == "composed":
        mask_pmf = mask_tuple_distribution(D, space.dim, subset, limit)
        mask_uniform = is_uniform(mask_pmf, q ** (space.dim * len(subset)))
        size = len(support) * len(mask_pmf) ** S
        if size > limit:
            raise EnumerationLimitError(size, limit, "composed enumeration")
        for key, phis in zip(phi_keys, support):
            coords = [space.coordinates(e) for e in phis]
            rounds = []
            for assignment in plan:
                shifted = {}
                for m, p in mask_pmf.items():
                    view = []
                    for n, part in zip(subset, m):
                        b = assignment.get(n)
                        view.append(tuple(f.vadd(part, coords[b - 1])) if b else part)
                    shifted[tuple(view)] = p
                rounds.append(list(shifted.items()))
            for combo in itertools.product(*rounds):
                prob = p_phi
                view = []
                for v, p in combo:
                    prob *= p
                    view.extend(v)
                joint[(key, tuple(view))] += prob
    else:
        raise ValueError(f"unknown mode {mode!r}")

    phi_pmf = {k: p_phi for k in phi_keys}
    view_pmf: Counter = Counter()
    for (_, v), p in joint.items():
        view_pmf[v] += p
    assert sum(joint.values()) == 1
    tv = total_variation(joint, phi_pmf, view_pmf)
    notes = []
    if sampled:
        notes.append(f"sampled support: {len(support)} of {f.order ** (space.dim * B)} function tuples")
    return PrivacyReport(subset, tv, dict(view_pmf), dict(joint), len(support), sampled, S, mode, mask_uniform, notes)


def audit_all_subsets(scheme, size: int, **kwargs) -> tuple[bool, list[PrivacyReport]]:
    """Audit every subset of ``size`` servers; passes when all are private."""
    est = _prepare(scheme)
    reports = [mutual_information(scheme, sub, **kwargs)
               for sub in itertools.combinations(range(1, est.retrieval_code_.N + 1), size)]
    return all(r.private for r in reports), reports


def _random_pmfs(n: int, count: int, rng) -> list[list[Fraction]]:
    out = []
    for _ in range(count):
        w = [int(x) for x in rng.integers(0, 10, size=n)]
        if sum(w) == 0:
            w[0] = 1
        s = sum(w)
        out.append([Fraction(x, s) for x in w])
    return out


def default_pmf_grid(n: int, count: int = 20, seed: int = 0) -> list[list[Fraction]]:
    """Point masses, uniform, two-point, and seeded random rational pmfs on ``n`` outcomes."""
    grid = [[Fraction(int(i == j)) for j in range(n)] for i in range(min(n, 4))]
    grid.append([Fraction(1, n)] * n)
    if n >= 2:
        grid.append([Fraction(1, 3), Fraction(2, 3)] + [Fraction(0)] * (n - 2))
        grid.append([Fraction(0)] * (n - 2) + [Fraction(5, 7), Fraction(2, 7)])
    rng = np.random.default_rng(seed)
    grid += _random_pmfs(n, max(0, count - len(grid)), rng)
    return grid


def otp_check(dim: int, field: FieldSpec, distributions: Sequence[Sequence[Fraction]] | None = None,
              count: int = 20, seed: int = 0) -> dict:
    """For ``V = F^dim``, check that ``U + Z`` is uniform and independent of ``Z``.

    ``U`` is uniform on ``V`` and independent of ``Z``; each ``Z`` pmf is
    indexed like ``itertools.product(range(q), repeat=dim)``.  The law of
    ``(W, Z)`` is computed by exact convolution.
    """
    vectors = list(itertools.product(range(field.order), repeat=dim))
    n = len(vectors)
    index = {v: i for i, v in enumerate(vectors)}
    if distributions is None:
        distributions = default_pmf_grid(n, count, seed)
    p_u = Fraction(1, n)
    results = []
    for pz in distributions:
        if len(pz) != n or sum(pz) != 1 or any(p < 0 for p in pz):
            raise ValueError("each Z distribution must be a pmf over V")
        joint: dict = {}
        for z, prob_z in zip(vectors, pz):
            if not prob_z:
                continue
            for u in vectors:
                w = index[tuple(field.vadd(u, z))]
                key = (w, index[z])
                joint[key] = joint.get(key, Fraction(0)) + p_u * prob_z
        p_w = [Fraction(0)] * n
        for (w, _), p in joint.items():
            p_w[w] += p
        uniform = all(p == p_u for p in p_w)
        independent = all(
            joint.get((w, zi), Fraction(0)) == p_w[w] * pz[zi] for w in range(n) for zi in range(n)
        )
        results.append(uniform and independent)
    return {"dim": dim, "field": repr(field), "distributions": len(results), "passed": all(results), "results": results}
