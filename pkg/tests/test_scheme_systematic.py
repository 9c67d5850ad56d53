import itertools
from fractions import Fraction

import numpy as np
import pytest

from oracles import direct_eval
from starpc.algebra import GF, Matrix, null_space, rref
from starpc.codes import LinearCode, RSCode, min_distance, rep_code, rs_code, star_power, star_product
from starpc.exceptions import ConfigurationError, CorruptedResponseError, InfeasibleConfigurationError
from starpc.polyspace import PolynomialSpace
from starpc.scheme_replicated import make_masks
from starpc.scheme_systematic import (
    SystematicPCScheme,
    build_queries_iter,
    build_schedule,
    compute_F,
    decode_iteration,
    least_block_length,
    response_code,
    rs_rate,
    run_systematic,
    syndrome,
)

F11 = GF(11)
A8 = list(range(8))


def rs_e(K, T, G, N=8, f=F11):
    return response_code(rs_code(range(N), K, f), rs_code(range(N), T, f), G)


def test_response_code_g1_is_star_product():
    f = GF(7)
    C, D = rs_code(range(6), 2, f), rs_code(range(6), 2, f)
    assert response_code(C, D, 1) == star_product(C, D)


def test_response_code_rs_identity():
    for K, T, G in [(3, 2, 1), (3, 2, 2), (2, 1, 4), (4, 3, 1), (2, 2, 3)]:
        E = rs_e(K, T, G)
        assert isinstance(E, RSCode)
        assert E == rs_code(A8, min(G * (K - 1) + T, 8), F11)
        assert E == star_product(star_power(rs_code(A8, K, F11), G), rs_code(A8, T, F11))


def test_response_code_requires_repetition():
    f = GF(2)
    C = LinearCode(Matrix(f, [[1, 0, 0], [0, 1, 0]]))
    with pytest.raises(ConfigurationError):
        response_code(C, rep_code(3, f), 1)


def test_compute_F_examples():
    E1 = rs_e(3, 2, 1)
    assert min_distance(E1) == 5 and compute_F(E1, 3) == 3
    E2 = rs_e(3, 2, 2)
    assert min_distance(E2) == 3 and compute_F(E2, 3) == 2
    f17 = GF(17)
    E = response_code(rs_code(range(14), 8, f17), rs_code(range(14), 1, f17), 1)
    assert compute_F(E, 8) == 6


def test_compute_F_closed_form_matches_enumeration():
    for K, T, G in [(3, 2, 1), (2, 2, 2), (2, 3, 2)]:
        E = rs_e(K, T, G)
        assert compute_F(E, K, "auto") == compute_F(E, K, "subsets")


def test_compute_F_zero_raises():
    E = rs_e(3, 4, 2)  # G(K-1)+T = 8 = N: E is everything
    with pytest.raises(InfeasibleConfigurationError):
        compute_F(E, 3)


def test_wraparound_schedule_k8_b3_f6():
    plan = build_schedule(8, 3, 6)
    assert plan.S == 4
    assert plan.labels() == [
        [1, 1, 1, 1, 1, 1, 2, 2],
        [2, 2, 2, 2, 3, 3, 3, 3],
        [3, 3, 4, 4, 4, 4, 4, 4],
    ]
    assert plan.iterations[1] == ((7, 1), (8, 1), (1, 2), (2, 2), (3, 2), (4, 2))


def test_schedule_full_rounds_when_F_equals_K():
    plan = build_schedule(5, 4, 5)
    assert plan.S == 4
    for s, slot in enumerate(plan.iterations):
        assert slot == tuple((k, s + 1) for k in range(1, 6))


def test_schedule_bijective_exhaustive():
    for K in range(1, 13):
        for F in range(1, K + 1):
            for B in range(1, 13):
                if (K * B) % F:
                    with pytest.raises(ConfigurationError):
                        build_schedule(K, B, F)
                    continue
                plan = build_schedule(K, B, F)
                assert plan.S == K * B // F
                pairs = [p for slot in plan.iterations for p in slot]
                assert sorted(pairs) == sorted(itertools.product(range(1, K + 1), range(1, B + 1)))
                for slot in plan.iterations:
                    assert len(slot) == F
                    ks = [k for k, _ in slot]
                    assert len(set(ks)) == F and max(ks) <= K


def test_least_block_length():
    assert least_block_length(8, 6) == 3
    assert least_block_length(3, 2) == 2
    assert least_block_length(5, 5) == 1
    for K in range(1, 10):
        for F in range(1, K + 1):
            B = least_block_length(K, F)
            assert (K * B) % F == 0 and all((K * b) % F for b in range(1, B))


def test_build_queries_iter():
    space = PolynomialSpace(1, 2, F11)
    D = rs_code(A8, 2, F11)
    m = make_masks(D, space, np.random.default_rng(0))
    phis = [space.sample(np.random.default_rng(i)) for i in range(3)]
    rho = build_queries_iter(m, [(7, 1), (8, 1), (1, 2)], phis, 8)
    assert rho[6] == m.masks[6] + phis[0] and rho[7] == m.masks[7] + phis[0] and rho[0] == m.masks[0] + phis[1]
    assert all(rho[i] == m.masks[i] for i in range(1, 6))
    assert build_queries_iter(m, [], phis, 8) == list(m.masks)
    with pytest.raises(ValueError):
        build_queries_iter(m, [(4, 1)], phis, 3)


def test_mask_responses_lie_in_E():
    K, T, G, M = 3, 2, 2, 2
    C = SystematicPCScheme(storage_code=rs_code(A8, K, F11), T=T, G=G, M=M, seed=0)
    rng = np.random.default_rng(1)
    X = Matrix(F11, [F11.random(rng, K) for _ in range(M)])
    est = C.fit(X)
    H = est.parity_check_
    for _ in range(30):
        m = make_masks(est.retrieval_code_, est.space_, rng)
        resp = est.fleet_.round(list(m.masks), est.space_)
        assert syndrome(resp, H, F11) == [0] * H.n_cols
        assert decode_iteration(resp, H, [], F11) == []
        assert est.response_code_.contains(resp)


def test_decode_zero_functions():
    est = SystematicPCScheme(storage_code=rs_code(A8, 3, F11), T=2, G=2, M=1, seed=0).fit([[1, 2, 3]])
    space = est.space_
    m = make_masks(est.retrieval_code_, space, np.random.default_rng(2))
    zero = [space.zero()] * 2
    rho = build_queries_iter(m, [(1, 1), (2, 1)], zero, 3)
    resp = est.fleet_.round(rho, space)
    assert [v.value for v in decode_iteration(resp, est.response_code_, [(1, 1), (2, 1)], F11)] == [0, 0]


def test_corrupted_response_detected():
    est = SystematicPCScheme(storage_code=rs_code(A8, 3, F11), T=2, G=1, M=1, seed=0).fit([[1, 2, 3]])
    m = make_masks(est.retrieval_code_, est.space_, np.random.default_rng(2))
    resp = est.fleet_.round(list(m.masks), est.space_)
    resp[6] = F11.add(resp[6], 1)  # server 7 is never assigned
    with pytest.raises(CorruptedResponseError):
        decode_iteration(resp, est.parity_check_, [(1, 1), (2, 1)], F11)


@pytest.mark.parametrize("K,T,G", [(3, 2, 2), (3, 2, 1), (2, 1, 3), (4, 1, 1)])
def test_session_matches_direct_evaluation(K, T, G):
    F, Kf = F11, GF(121)
    M = 2
    scheme = SystematicPCScheme(storage_code=rs_code(A8, K, F), T=T, G=G, M=M, ext_field=Kf, seed=3)
    rng = np.random.default_rng(K * 100 + T * 10 + G)
    space = PolynomialSpace(M, G, F)
    est = scheme.fit(Matrix(Kf, [[0] * K] * M))
    B = est.B_
    for _ in range(5):
        X = Matrix(Kf, [Kf.random(rng, K) for _ in range(M)])
        Phi = [space.sample(rng) for _ in range(B)]
        out, tr = run_systematic(scheme, Phi, X)
        for b in range(B):
            for k in range(K):
                assert out[b, k] == direct_eval(Phi[b], X.column(k))
        assert tr.rate == rs_rate(8, K, T, G)
        assert tr.rate == Fraction(est.F_, 8)
        assert tr.S == K * B // est.F_


def test_rate_examples():
    assert rs_rate(8, 3, 2, 1) == Fraction(3, 8)
    assert rs_rate(8, 3, 2, 2) == Fraction(1, 4)
    for G in range(1, 6):
        assert rs_rate(3, 1, 2, G) == Fraction(1, 3)
    with pytest.raises(InfeasibleConfigurationError):
        rs_rate(8, 3, 2, 4)


def test_rate_3_8_single_block():
    scheme = SystematicPCScheme(storage_code=rs_code(A8, 3, F11), T=2, G=1, M=1, B=1, seed=0)
    phi = PolynomialSpace(1, 1, F11).basis_elements()[0]
    out, tr = run_systematic(scheme, [phi], [[4, 5, 6]])
    assert tr.S == 1 and tr.rate == Fraction(3, 8)
    assert [v.value for v in out.row(0)] == [4, 5, 6]


def test_rs14_8_session_shape():
    f = GF(17)
    scheme = SystematicPCScheme(storage_code=rs_code(range(14), 8, f), T=1, G=1, M=1, B=3, seed=0)
    rng = np.random.default_rng(0)
    space = PolynomialSpace(1, 1, f)
    X = Matrix(f, [f.random(rng, 8)])
    Phi = [space.sample(rng) for _ in range(3)]
    out, tr = run_systematic(scheme, Phi, X)
    assert tr.S == 4 and tr.accounting.downloaded == 4 * 14
    assert tr.rate == Fraction(3, 7) == rs_rate(14, 8, 1, 1)
    for b in range(3):
        for k in range(8):
            assert out[b, k] == direct_eval(Phi[b], X.column(k))


def test_k1_reduction_to_replicated():
    from starpc.scheme_replicated import ReplicatedPCScheme, run_replicated

    F, Kf = GF(2), GF(4)
    rng = np.random.default_rng(0)
    space = PolynomialSpace(1, 2, F)
    sysm = SystematicPCScheme(storage_code=rep_code(3, F), T=2, G=2, M=1, ext_field=Kf)
    rep = ReplicatedPCScheme(N=3, T=2, field=F, ext_field=Kf, M=1, G=2)
    for seed in range(20):
        phi = space.sample(rng)
        x = Kf(int(rng.integers(4)))
        out, t1 = run_systematic(sysm, [phi], [[x]], seed=seed)
        vals, t2 = run_replicated(rep, [phi], [[x]], seed=seed)
        assert out[0, 0] == vals[0]
        assert t1.rate == t2.rate == Fraction(1, 3)
        assert t1.iterations[0]["codewords"] == t2.iterations[0]["codewords"]
        assert t1.iterations[0]["responses"] == t2.iterations[0]["responses"]


def test_boundary_config_is_infeasible():
    with pytest.raises(InfeasibleConfigurationError):
        SystematicPCScheme(storage_code=rs_code(A8, 3, F11), T=4, G=2).fit([[1, 2, 3]])
    assert rs_rate(8, 3, 4, 2) == 0


def test_nonsystematic_storage_code_is_systematized():
    f = GF(7)
    C = rs_code([1, 2, 3, 4, 5], 2, f)
    est = SystematicPCScheme(storage_code=C, T=1, G=1, M=1, seed=0).fit([[3, 6]])
    assert est.storage_code_ == C
    assert est.storage_code_.generator.take_columns([0, 1]) == Matrix.identity(f, 2)
    assert [s.share for s in est.fleet_.servers[:2]] == [(3,), (6,)]


def test_B_must_be_compatible():
    scheme = SystematicPCScheme(storage_code=rs_code(A8, 3, F11), T=2, G=2, seed=0)
    est = scheme.fit([[1, 2, 3]])
    assert est.F_ == 2 and est.B_ == 2
    phi = est.space_.basis_elements()[0]
    with pytest.raises(ConfigurationError):
        est.transform([phi])
    with pytest.raises(ConfigurationError):
        SystematicPCScheme(storage_code=rs_code(A8, 3, F11), T=2, G=2, B=3).fit([[1, 2, 3]])


def test_monomial_responses_span_star_power():
    """Span of [psi(y_1), ..., psi(y_N)] over all X and monomials psi equals C^{*G}."""
    for q, N, K, G, M in [(5, 4, 2, 2, 1), (5, 5, 2, 3, 1), (3, 3, 2, 2, 1), (7, 5, 2, 2, 1), (3, 3, 1, 2, 2)]:
        f = GF(q)
        C = rs_code(range(N), K, f)
        space = PolynomialSpace(M, G, f)
        vectors = []
        for flat in itertools.product(range(q), repeat=M * K):
            X = Matrix(f, [flat[i * K:(i + 1) * K] for i in range(M)])
            Y = X @ C.generator
            cols = [[Y.data[i][n] for i in range(M)] for n in range(N)]
            for mono in space.basis_elements():
                vectors.append([mono.evaluate_raw(c, f) for c in cols])
        span = Matrix(f, vectors)
        R = LinearCode(Matrix(f, [r for r in rref(span)[0].data if any(r)]))
        assert R == star_power(C, G)


def test_transcript_contents():
    scheme = SystematicPCScheme(storage_code=rs_code(A8, 3, F11), T=2, G=2, M=1, seed=4)
    phis = [PolynomialSpace(1, 2, F11).basis_elements()[i] for i in (0, 1)]
    _, tr = run_systematic(scheme, phis, [[1, 2, 3]])
    d = tr.to_dict()
    assert d["F"] == 2 and d["D_E"] == 3
    assert d["schedule"]["S"] == 3
    assert d["response_code"]["kind"] == "rs"
    # dim E = G(K-1)+T = 6, so each syndrome has 8 - 6 entries
    assert all(len(it["syndrome"]) == 2 for it in d["iterations"])
    assert null_space(rs_e(3, 2, 2).canonical_generator).n_cols == 2
