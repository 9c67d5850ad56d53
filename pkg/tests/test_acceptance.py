"""Acceptance criteria 1-10.

Each ``criterion_N`` function returns ``(ok, detail)`` and is cached, so the
accounting check can reuse the sessions recorded by criteria 1-4.  Run this
file directly (``python tests/test_acceptance.py``) to get one PASS/FAIL line
per criterion; under pytest the same lines appear in the terminal summary.
"""

from __future__ import annotations

import functools
import itertools
import os
import sys
import time
from fractions import Fraction
from math import gcd

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from oracles import direct_eval  # noqa: E402
from starpc.algebra import GF, Matrix  # noqa: E402
from starpc.codes import min_distance, rep_code, rs_code, star_power, star_product  # noqa: E402
from starpc.exceptions import InfeasibleConfigurationError  # noqa: E402
from starpc.polyspace import PolynomialSpace  # noqa: E402
from starpc.privacy_audit import mutual_information, otp_check  # noqa: E402
from starpc.scheme_replicated import ReplicatedPCScheme, run_replicated  # noqa: E402
from starpc.scheme_systematic import SystematicPCScheme, build_schedule, run_systematic  # noqa: E402

TITLES = {
    1: "N=3 T=2 binary reproduction",
    2: "replicated rate law",
    3: "RS star identities",
    4: "systematic rate law",
    5: "exhaustive privacy",
    6: "RS minimum distance",
    7: "wraparound schedule",
    8: "one-time-pad convolution",
    9: "K=1 reduction",
    10: "accounting",
}

# (criterion, label, N, Q, Accounting) for every session run by criteria 1-4
SESSIONS: list = []
RESULTS: dict = {}


def _record(crit, label, N, Q, acct):
    SESSIONS.append((crit, label, N, Q, acct))


def _cached(fn):
    n = int(fn.__name__.rsplit("_", 1)[1])

    @functools.wraps(fn)
    def wrapper():
        if n not in RESULTS:
            try:
                RESULTS[n] = fn()
            except Exception as exc:  # a crash is a failure, reported as such
                RESULTS[n] = (False, f"raised {type(exc).__name__}: {exc}")
        return RESULTS[n]

    return wrapper


def _rand_ext(K, rows, cols, rng):
    return [[K(int(v)) for v in row] for row in rng.integers(0, K.order, (rows, cols))]


@_cached
def criterion_1():
    F, K = GF(2), GF(4)
    space = PolynomialSpace(2, 2, F)
    rng = np.random.default_rng(101)
    phis = [space.sample(rng) for _ in range(20)]
    scheme = ReplicatedPCScheme(N=3, T=2, field=F, ext_field=K, M=2, G=2, seed=1)
    bad = 0
    rates = set()
    for a, b in itertools.product(range(4), repeat=2):
        X = [[K(a)], [K(b)]]
        for phi in phis:
            values, tr = run_replicated(scheme, [phi], X)
            _record(1, f"X=({a},{b})", 3, space.dim, tr.accounting)
            bad += values != [direct_eval(phi, [K(a), K(b)])]
            rates.add(tr.rate)
    ok = bad == 0 and rates == {Fraction(1, 3)}
    return ok, f"320 sessions, {bad} wrong, rates {sorted(map(str, rates))}"


@_cached
def criterion_2():
    F, K = GF(5), GF(25)
    space = PolynomialSpace(2, 2, F)
    rng = np.random.default_rng(202)
    bad = []
    for N, T in [(3, 1), (4, 1), (4, 2), (5, 2), (5, 3)]:
        scheme = ReplicatedPCScheme(N=N, T=T, field=F, ext_field=K, M=2, G=2, seed=N * 10 + T)
        B = N - T
        for _ in range(50):
            X = _rand_ext(K, 2, 1, rng)
            Phi = [space.sample(rng) for _ in range(B)]
            values, tr = run_replicated(scheme, Phi, X)
            _record(2, f"N={N},T={T}", N, space.dim, tr.accounting)
            x = [X[0][0], X[1][0]]
            if values != [direct_eval(p, x) for p in Phi] or tr.rate != Fraction(N - T, N):
                bad.append((N, T))
    return not bad, f"5 configs x 50 sessions, failures {sorted(set(bad))}"


@_cached
def criterion_3():
    checked = 0
    bad = []
    for q in (7, 8):
        f = GF(q)
        for N in range(1, q + 1):
            alpha = list(range(N))
            codes = {k: rs_code(alpha, k, f) for k in range(1, N + 1)}
            for Kd, Ld in itertools.product(range(1, N + 1), repeat=2):
                checked += 1
                if star_product(codes[Kd], codes[Ld]) != codes[min(Kd + Ld - 1, N)]:
                    bad.append(("prod", q, N, Kd, Ld))
            for Kd in range(1, N + 1):
                for G in range(1, 5):
                    checked += 1
                    if star_power(codes[Kd], G) != codes[min(G * (Kd - 1) + 1, N)]:
                        bad.append(("pow", q, N, Kd, G))
    return not bad, f"{checked} identities checked, {len(bad)} failures {bad[:3]}"


@_cached
def criterion_4():
    f = GF(11)
    N = 8
    alpha = list(range(N))
    rng = np.random.default_rng(404)
    runs = boundary = 0
    bad = []
    for K in range(2, N + 1):
        for T in range(1, N):
            for G in range(1, N):
                load = G * (K - 1) + T
                if load > N:
                    continue
                expected = Fraction(min(N - load, K), N)
                scheme = SystematicPCScheme(storage_code=rs_code(alpha, K, f), T=T, G=G, M=2, seed=K * 100 + T * 10 + G)
                if expected == 0:
                    # zero download slots: no session can run, the scheme must say so
                    try:
                        scheme.fit([[0] * K, [0] * K])
                        bad.append((K, T, G, "boundary accepted"))
                    except InfeasibleConfigurationError:
                        boundary += 1
                    continue
                space = PolynomialSpace(2, G, f)
                for _ in range(20):
                    X = Matrix(f, rng.integers(0, 11, (2, K)).tolist())
                    slots = min(N - load, K)
                    # smallest B with slots | K*B
                    Phi = [space.sample(rng) for _ in range(slots // gcd(K, slots))]
                    out, tr = run_systematic(scheme, Phi, X)
                    _record(4, f"K={K},T={T},G={G}", N, space.dim, tr.accounting)
                    runs += 1
                    ok = tr.rate == expected
                    for b, phi in enumerate(Phi):
                        for k in range(K):
                            ok &= out[b, k] == direct_eval(phi, X.column(k))
                    if not ok:
                        bad.append((K, T, G))
    return not bad, f"{runs} sessions, {boundary} zero-rate boundary configs rejected as infeasible, failures {sorted(set(bad))[:5]}"


@_cached
def criterion_5():
    F, K = GF(2), GF(4)
    scheme = ReplicatedPCScheme(N=3, T=2, field=F, ext_field=K, M=1, G=2, seed=0)
    t0 = time.perf_counter()
    pairs = [mutual_information(scheme, sub, B=1, mode="full") for sub in itertools.combinations([1, 2, 3], 2)]
    triple = mutual_information(scheme, [1, 2, 3], B=1, mode="full")
    dt = time.perf_counter() - t0
    # 4 functions x 16 mask draws per subset
    sizes_ok = all(r.support_size == 4 for r in pairs + [triple])
    ok = all(r.divergence == 0 for r in pairs) and triple.divergence > 0 and dt < 5 and sizes_ok
    return ok, f"pairs {[str(r.divergence) for r in pairs]}, triple {triple.divergence}, {dt:.2f}s"


def _brute_distance(C):
    """Minimum weight over every nonzero codeword.

    Codewords are built one message symbol at a time: the words for the
    first k rows, each combined with every multiple of row k+1.
    """
    f = C.field
    q, K, N = f.order, C.K, C.N
    add = np.array([[f.add(a, b) for b in range(q)] for a in range(q)], dtype=np.uint8)
    words = np.zeros((1, N), dtype=np.uint8)
    for row in C.generator.data:
        multiples = np.array([[f.mul(c, g) for g in row] for c in range(q)], dtype=np.uint8)
        words = add[words[:, None, :], multiples[None, :, :]].reshape(-1, N)
    return int((words[1:] != 0).sum(axis=1).min())


@_cached
def criterion_6():
    bad = []
    count = 0
    for q in (5, 7, 8):
        f = GF(q)
        for N in range(1, q + 1):
            for K in range(1, N + 1):
                C = rs_code(list(range(N)), K, f)
                count += 1
                d = _brute_distance(C)
                if d != N - K + 1 or min_distance(C, "enumerate") != d:
                    bad.append((q, N, K, d))
    return not bad, f"{count} codes, failures {bad[:5]}"


@_cached
def criterion_7():
    plan = build_schedule(8, 3, 6)
    expected = [
        [1, 1, 1, 1, 1, 1, 2, 2],
        [2, 2, 2, 2, 3, 3, 3, 3],
        [3, 3, 4, 4, 4, 4, 4, 4],
    ]
    ok = plan.S == 4 and plan.labels() == expected
    return ok, f"S={plan.S}, labels {plan.labels()}"


@_cached
def criterion_8():
    cases = [(k, 2) for k in range(0, 4)] + [(1, 3)]
    out = []
    for k, q in cases:
        res = otp_check(k, GF(q), count=20)
        enough = res["distributions"] >= 20 or q**k == 1
        out.append((k, q, res["passed"] and enough, res["distributions"]))
    ok = all(o[2] for o in out)
    return ok, ", ".join(f"GF({q})^{k}: {n} pmfs {'ok' if p else 'FAIL'}" for k, q, p, n in out)


@_cached
def criterion_9():
    F, K = GF(2), GF(4)
    space = PolynomialSpace(1, 2, F)
    rng = np.random.default_rng(909)
    sysm = SystematicPCScheme(storage_code=rep_code(3, F), T=2, G=2, M=1, ext_field=K)
    rep = ReplicatedPCScheme(N=3, T=2, field=F, ext_field=K, M=1, G=2)
    bad = 0
    for seed in range(20):
        phi = space.sample(rng)
        x = K(int(rng.integers(4)))
        out, t1 = run_systematic(sysm, [phi], [[x]], seed=seed)
        vals, t2 = run_replicated(rep, [phi], [[x]], seed=seed)
        same = out[0, 0] == vals[0] == direct_eval(phi, [x])
        same &= t1.rate == t2.rate == Fraction(1, 3)
        bad += not same
    return bad == 0, f"20 seeded sessions, {bad} disagreements"


@_cached
def criterion_10():
    for n in (1, 2, 3, 4):
        globals()[f"criterion_{n}"]()
    bad = []
    for crit, label, N, Q, a in SESSIONS:
        S = a.iterations
        if a.uploaded != S * N * Q or a.downloaded != S * N:
            bad.append((crit, label))
    return not bad and bool(SESSIONS), f"{len(SESSIONS)} sessions checked, failures {bad[:5]}"


CRITERIA = {n: globals()[f"criterion_{n}"] for n in TITLES}


def status_line(n: int) -> str:
    ok, detail = CRITERIA[n]()
    return f"{'PASS' if ok else 'FAIL'} criterion {n} ({TITLES[n]}): {detail}"


@pytest.mark.parametrize("n", list(TITLES))
def test_criterion(n):
    line = status_line(n)
    print(line)
    assert line.startswith("PASS"), line


if __name__ == "__main__":
    lines = [status_line(n) for n in TITLES]
    print("\n".join(lines))
    sys.exit(0 if all(line.startswith("PASS") for line in lines) else 1)
