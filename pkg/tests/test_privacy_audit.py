import itertools
from fractions import Fraction

import pytest

from starpc.algebra import GF, Matrix
from starpc.codes import LinearCode, rep_code, rs_code
from starpc.exceptions import EnumerationLimitError
from starpc.polyspace import PolynomialSpace
from starpc.privacy_audit import (
    audit_all_subsets,
    default_pmf_grid,
    is_uniform,
    mask_tuple_distribution,
    mutual_information,
    otp_check,
    total_variation,
)
from starpc.scheme_replicated import ReplicatedPCScheme
from starpc.scheme_systematic import SystematicPCScheme

F2, F4 = GF(2), GF(4)
D_BIN = LinearCode(Matrix(F2, [[1, 0, 1], [0, 1, 1]]))


def binary_scheme(M=1):
    return ReplicatedPCScheme(N=3, T=2, field=F2, ext_field=F4, M=M, G=2, retrieval_code=D_BIN, seed=0)


def test_mask_distribution_uniform_on_t_subsets():
    # Q = 2 with M = 1, G = 2 over GF(2): 2 servers * 2 coordinates = 16 outcomes
    for sub in itertools.combinations([1, 2, 3], 2):
        pmf = mask_tuple_distribution(D_BIN, 2, sub)
        assert len(pmf) == 16
        assert all(p == Fraction(1, 16) for p in pmf.values())
        assert is_uniform(pmf, 16)


def test_mask_distribution_support_matches_rank():
    # the support of the mask tuple is the row space of D restricted to the subset, Q times over
    F = GF(5)
    D = rs_code(range(5), 2, F)
    for size in (1, 2, 3):
        for sub in itertools.combinations(range(1, 6), size):
            pmf = mask_tuple_distribution(D, 1, sub)
            r = D.generator.take_columns([n - 1 for n in sub]).rank()
            assert len(pmf) == 5**r
            assert set(pmf.values()) == {Fraction(1, 5**r)}
            assert is_uniform(pmf, 5**size) == (size <= 2)


def test_mask_distribution_guard():
    with pytest.raises(EnumerationLimitError):
        mask_tuple_distribution(rs_code(range(7), 3, GF(7)), 3, [1], limit=1000)


def test_total_variation_oracle():
    h = Fraction(1, 2)
    independent = {(a, b): h * h for a in (0, 1) for b in (0, 1)}
    assert total_variation(independent, {0: h, 1: h}, {0: h, 1: h}) == 0
    copy = {(0, 0): h, (1, 1): h}
    assert total_variation(copy, {0: h, 1: h}, {0: h, 1: h}) == h


def test_binary_pairs_private_full_view_leaks():
    est = binary_scheme()
    for sub in itertools.combinations([1, 2, 3], 2):
        r = mutual_information(est, sub, mode="full")
        assert r.private and r.divergence == 0 and r.verdict == "private"
        assert r.support_size == 4 and not r.sampled_support
    r = mutual_information(est, [1, 2, 3], mode="full")
    # the three queries sum to phi, so phi is a function of the view: TV = 1 - 1/|support|
    assert r.divergence == Fraction(3, 4) and not r.private


def test_singletons_private():
    est = binary_scheme()
    for n in (1, 2, 3):
        assert mutual_information(est, [n]).private


def test_composed_matches_full():
    est = binary_scheme()
    for size in (1, 2, 3):
        for sub in itertools.combinations([1, 2, 3], size):
            a = mutual_information(est, sub, mode="full")
            b = mutual_information(est, sub, mode="composed")
            assert a.divergence == b.divergence
            assert a.joint_pmf == b.joint_pmf
    assert mutual_information(est, [1, 2], mode="composed").mask_uniform is True


def test_composed_matches_full_two_rounds():
    est = ReplicatedPCScheme(N=3, T=2, field=F2, ext_field=F4, M=1, G=1, retrieval_code=D_BIN, seed=0)
    for sub in ([1, 2], [1, 3], [1, 2, 3]):
        a = mutual_information(est, sub, B=2, mode="full")
        b = mutual_information(est, sub, B=2, mode="composed")
        assert a.audited_S == 2
        assert a.divergence == b.divergence


def test_audit_all_subsets_replicated():
    ok, reports = audit_all_subsets(binary_scheme(), 2)
    assert ok and len(reports) == 3
    ok, reports = audit_all_subsets(binary_scheme(), 3)
    assert not ok and len(reports) == 1


def test_systematic_rep_storage():
    est = SystematicPCScheme(storage_code=rep_code(3, F2), T=2, G=2, M=1, ext_field=F4, seed=0)
    ok, _ = audit_all_subsets(est, 2)
    assert ok
    assert mutual_information(est, [1, 2, 3]).divergence == Fraction(3, 4)


def test_systematic_rs_threshold():
    F = GF(5)
    est = SystematicPCScheme(storage_code=rs_code(range(5), 2, F), T=1, G=1, M=1, seed=0)
    ok, _ = audit_all_subsets(est, 1)
    assert ok
    ok, reports = audit_all_subsets(est, 2)
    assert not ok
    # T = 1 masks are repetition codewords, so all servers share one mask;
    # functions ride on the systematic servers 1 and 2 only.  A pair leaks
    # exactly when it mixes a function-carrying server with a mask-only one.
    for r in reports:
        mixed = len(set(r.subset) & {1, 2}) == 1
        assert (r.divergence > 0) == mixed


def test_sampled_support_flag():
    est = ReplicatedPCScheme(N=3, T=2, field=F2, ext_field=F4, M=2, G=2, retrieval_code=D_BIN, seed=0)
    r = mutual_information(est, [1, 2], support_limit=8, sample_size=6, mode="composed")
    assert r.sampled_support and r.support_size == 6 and r.notes
    assert r.private


def test_explicit_support():
    elems = list(PolynomialSpace(1, 2, F2).elements())
    r = mutual_information(binary_scheme(), [1, 2, 3], support=[(e,) for e in elems[:2]])
    assert r.support_size == 2 and r.divergence == Fraction(1, 2)


def test_guard_and_bad_inputs():
    est = binary_scheme(M=2)
    with pytest.raises(EnumerationLimitError):
        mutual_information(est, [1, 2], mode="full", limit=100)
    with pytest.raises(ValueError):
        mutual_information(binary_scheme(), [0, 1])
    with pytest.raises(ValueError):
        mutual_information(binary_scheme(), [1], mode="bogus")


def test_report_to_dict():
    r = mutual_information(binary_scheme(), [1, 2])
    d = r.to_dict()
    assert d["verdict"] == "private" and d["divergence_tv"] == "0/1"
    assert all("/" in v for v in d["view_pmf"].values())
    assert all(":" in k for k in d["joint_pmf"])


@pytest.mark.parametrize("dim,q", [(0, 2), (1, 2), (2, 2), (3, 2), (1, 3), (2, 3)])
def test_otp_check(dim, q):
    res = otp_check(dim, GF(q), count=20)
    assert res["passed"] and res["distributions"] >= (1 if dim == 0 else 20)


def test_otp_check_detects_non_uniform_mask():
    # sanity of the oracle: with U fixed at 0, W = Z is not independent of Z
    pz = [Fraction(1, 2), Fraction(1, 2)]
    joint = {(0, 0): Fraction(1, 2), (1, 1): Fraction(1, 2)}
    assert total_variation(joint, dict(enumerate(pz)), dict(enumerate(pz))) > 0
    with pytest.raises(ValueError):
        otp_check(1, GF(2), distributions=[[Fraction(1, 3), Fraction(1, 3)]])


def test_pmf_grid():
    for n in (1, 2, 4, 8, 9):
        grid = default_pmf_grid(n, 20)
        assert len(grid) >= 20 or n == 1
        for p in grid:
            assert len(p) == n and sum(p) == 1 and all(x >= 0 for x in p)
