"""Smoke tests for the klsum extension module."""

import cmath
import math

import pytest

import klsum


def test_arith_basics():
    assert klsum.mod_inverse(3, 7) == 5
    assert klsum.mod_inverse(10, 17) == 12
    assert klsum.mod_inverse(5, 1) == 0
    assert klsum.batch_mod_inverse([2, 3, 4], 7) == [4, 5, 2]
    assert klsum.batch_mod_inverse([5, 7, 11], 6) == [5, 1, 5]
    tau, phi, mu = klsum.arithmetic_functions(12)
    assert (tau, phi, mu) == (6, 4, 0)
    assert klsum.primes_in_range(10, 30) == [11, 13, 17, 19, 23, 29]
    assert len(klsum.primes_in_range(2, 100)) == 25


def test_arith_errors():
    with pytest.raises(klsum.DomainError):
        klsum.mod_inverse(6, 9)
    with pytest.raises(klsum.ConfigError):
        klsum.MultiplicativeFunction.from_spec("nope")


def test_e_frac():
    assert klsum.e_frac(0, 7) == 1 + 0j
    z = klsum.e_frac(1, 4)
    assert abs(z - 1j) < 1e-15
    for j in range(11):
        direct = cmath.exp(2j * cmath.pi * j / 11)
        assert abs(klsum.e_frac(j, 11) - direct) < 1e-12


def test_multiplicative_functions():
    t = klsum.build_spf_table(10000)
    mob = klsum.MultiplicativeFunction.mobius()
    vals = klsum.sieve_values(mob, 10, t)
    assert [v.real for v in vals[1:]] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]
    assert abs(klsum.eval_at(mob, 30) - (-1)) < 1e-12
    rnd = klsum.MultiplicativeFunction.from_spec("rand:42")
    v = klsum.eval_at(rnd, 6)
    assert abs(abs(v) - 1.0) < 1e-12


def test_twisted_sum():
    t = klsum.build_spf_table(1000)
    one = klsum.MultiplicativeFunction.one()
    s = klsum.twisted_sum(one, 0, 1, 7, t)
    assert abs(s.value - 7) < 1e-12
    assert s.terms == 7

    mob = klsum.MultiplicativeFunction.mobius()
    s5 = klsum.twisted_sum(mob, 1, 5, 3, t)
    expect = (
        cmath.exp(2j * cmath.pi * 1 / 5)
        - cmath.exp(2j * cmath.pi * 3 / 5)
        - cmath.exp(2j * cmath.pi * 2 / 5)
    )
    assert abs(s5.value - expect) < 1e-12

    with pytest.raises(klsum.DomainError):
        klsum.twisted_sum(one, 2, 4, 10, t)


def test_incomplete_sum_and_lemma2():
    s = klsum.incomplete_inverse_sum(0, 6, 0, 6)
    assert abs(s.value - 2) < 1e-12  # phi(6)
    s7 = klsum.incomplete_inverse_sum(1, 7, 0, 7)
    assert abs(s7.value - (-1)) < 1e-12  # Ramanujan sum mu(7)
    rhs = klsum.lemma2_rhs(0, 6, 0, 6, 0.01, 1.0)
    assert abs(rhs - (2 * 6 + 6**0.51)) < 1e-9
    r = klsum.phi_ratio(4, 12)
    assert (r.num, r.den, r.bound) == (2, 1, 4)
    assert r.holds()


def test_complete_kloosterman_weil():
    for p in [101, 499, 997]:
        s = klsum.complete_kloosterman(1, 1, p)
        assert abs(s.value) <= 2 * math.sqrt(p) + 1e-9


def test_bands_and_classification():
    t = klsum.build_spf_table(10000)
    p = klsum.paper_params(1e6)
    assert p.empty()
    assert abs(p.d0 - 1.6577) < 1e-3
    b = klsum.make_bands_custom([8, 21, 55])
    assert b.band_count() == 2
    c = klsum.classify(46, b, t)
    assert c.verdict == klsum.Verdict.Clean
    assert c.band_prime == 23
    assert klsum.split(46, b, t) == (23, 2)
    assert klsum.classify(143, b, t).verdict == klsum.Verdict.Discard
    rc = klsum.rough_count(100, klsum.make_bands_custom([2, 10]))
    assert rc.count == 22


def test_identity_chain():
    t = klsum.build_spf_table(5000)
    f = klsum.MultiplicativeFunction.from_spec("rand:7")
    b = klsum.make_bands_custom([8, 21, 55])
    whole = klsum.twisted_sum(f, 3, 13, 5000, t)
    d = klsum.decomposed_sum(f, 3, 13, 5000, b, t)
    three_way = d.clean.value + d.rough.value + d.discard.value
    assert abs(three_way - whole.value) < 1e-9
    assert abs(d.rearranged_clean.value - d.clean.value) < 1e-9
    for r in range(b.band_count()):
        s2 = klsum.sigma2(f, 3, 13, r, 5000, b, t)
        assert abs(s2.direct - s2.pair_expanded) < 1e-9 * max(1.0, s2.direct)
        rep = klsum.cauchy_check(f, 3, 13, r, 5000, b, t)
        assert rep.ratio <= 1 + 1e-9


def test_sweeps_and_reports():
    reports = klsum.lemma2_sweep([7, 30], [0, 1], [klsum.RangeSpec(0.0, 1.0)], 0.01, 1.0)
    assert len(reports) == 4
    est = klsum.estimate_constant(reports)
    assert est.c_obs <= 3.0
    csv = klsum.format_csv(reports)
    assert csv.splitlines()[0] == "kind,f,N,q,a,eps,C,bands,lhs,rhs_1,rhs_2,rhs_3,rhs_total,ratio,flags"
    assert klsum.format_csv(reports) == csv  # deterministic
    js = klsum.format_json(reports)
    assert '"kind": "lemma2"' in js


def test_gcd_pairs():
    g = klsum.gcd_pair_sum(7, [2, 3, 5], 7)
    assert g.sum == 6
    g6 = klsum.gcd_pair_sum(6, [5, 7, 11], 12)
    assert g6.sum == 20
    assert g6.sum_le_truncated
    assert g6.inverse_invariant
