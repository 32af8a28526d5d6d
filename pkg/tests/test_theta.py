import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from densitylab import CapacityError, ConstructionError
from densitylab.constructions import ThetaRule, delta_series, greedy_decompose, theta_sequence
from oracles import subset_sums_naive


def test_theta_presets():
    assert ThetaRule("zero")(10**6) == 0
    assert ThetaRule("constant_c", 3)(100) == 3
    r = ThetaRule("k_over_log2")
    assert r(1) == 0 and r(100) == math.floor(100 / math.log(100) ** 2)
    with pytest.raises(ValueError):
        ThetaRule("nope")
    with pytest.raises(ValueError):
        ThetaRule("constant_c", 1.5)


def test_doubling_sequence_and_full_subset_sums():
    seq = theta_sequence("zero", seed=(1, 2), count=7)
    assert seq.terms == [1, 2, 3, 6, 12, 24, 48]
    assert subset_sums_naive(seq.terms[:6], 48) == set(range(49))
    ds = delta_series(seq)
    assert all(d == 1 for d in ds.delta)


def test_seed_one_with_zero_theta_fails_loudly():
    with pytest.raises(ConstructionError, match="step 2"):
        theta_sequence("zero", seed=(1,), count=5)


def test_theta_too_large_names_step():
    with pytest.raises(ConstructionError, match="step 3"):
        theta_sequence(("constant_c", 3), "plus", seed=(2, 3), count=5)


@pytest.mark.parametrize("seed", [(), (3, 2), (0, 1), (2, 2)])
def test_bad_seed(seed):
    with pytest.raises(ValueError):
        theta_sequence("zero", seed=seed)


def test_k_over_log2_identity_and_growth():
    seq = theta_sequence("k_over_log2", "minus", (2, 3), count=40)
    assert len(seq) == 40
    for n in range(3, 41):
        prev = seq.s(n - 1)
        assert abs(seq.a(n) - prev) == seq.theta(prev)
        assert seq.s(n) >= 2 * prev - seq.theta(prev)
    assert min(seq.growth_constants()) > 0.8


@pytest.mark.parametrize("sign", ["plus", "alternate", lambda n: 1 if n % 3 else -1])
def test_sign_policies(sign):
    seq = theta_sequence(("constant_c", 1), sign, (2, 3), count=15)
    assert all(abs(seq.a(n) - seq.s(n - 1)) == 1 for n in range(3, 16))


def test_cap_stops_generation():
    seq = theta_sequence("k_over_log2", "minus", (2, 3), count=100, cap=10**7)
    assert seq.stopped_by == "cap"
    assert seq.s(len(seq)) <= 10**7 < seq.s(len(seq)) + seq.peek_next()


def test_delta_small_example():
    seq = theta_sequence("zero", seed=(3, 5), count=2)
    # the next prescribed term (8) does not exceed s_2 = 8, so only delta_1 is determined
    ds = delta_series(seq)
    assert ds.n == [1] and ds.delta == [1 / 3]
    seq = theta_sequence(("constant_c", 1), "plus", (3, 5), count=2)
    ds = delta_series(seq)
    assert ds.pairs()[-1] == (2, 3 / 8)


@settings(max_examples=25, deadline=None)
@given(c=st.integers(min_value=0, max_value=2), sign=st.sampled_from(["minus", "plus", "alternate"]),
       seed=st.sampled_from([(2, 3), (1, 2), (3, 4), (1, 3)]), count=st.integers(min_value=3, max_value=13))
def test_delta_matches_enumeration(c, sign, seed, count):
    try:
        seq = theta_sequence(("constant_c", c), sign, seed, count=count)
    except ConstructionError:
        return
    ds = delta_series(seq)
    sums = subset_sums_naive(seq.terms, seq.s(len(seq)))
    for n, s_n, cnt in zip(ds.n, ds.s, ds.counts):
        assert cnt == sum(1 for v in sums if 1 <= v <= s_n), n


def test_delta_bounds_k_over_log2():
    seq = theta_sequence("k_over_log2", "minus", (2, 3), count=30, cap=10**7)
    ds = delta_series(seq)
    assert all(row[-1] for row in ds.sandwich)
    assert ds.fitted_C <= 5
    assert max(ds.delta[-10:]) - min(ds.delta[-10:]) <= 1e-2


def test_delta_capacity_guard():
    seq = theta_sequence("k_over_log2", "minus", (2, 3), count=30)
    with pytest.raises(CapacityError):
        delta_series(seq, max_bits=10**6)


@pytest.mark.slow
def test_delta_thirty_terms_uncapped():
    seq = theta_sequence("k_over_log2", "minus", (2, 3), count=31)
    ds = delta_series(seq)
    assert ds.n[-1] >= 30
    assert all(row[-1] for row in ds.sandwich)
    assert ds.fitted_C <= 5 and ds.spread(5) <= 0.02
    assert min(seq.growth_constants()) > 0.8


def test_greedy_example():
    seq = theta_sequence("zero", seed=(1, 2), count=7)
    d = greedy_decompose(17, seq, 1)
    assert [seq.terms[i] for i in d.indices] == [12, 3]
    assert d.remainder == 2 and 12 + 3 + 2 == 17
    assert d.within_weak_bound
    # the sharper remainder bound theta(s_(n1+1)) + s_k = 0 + 1 fails here; it is reported, not enforced
    assert d.stated_bound == 1 and d.within_stated_bound is False


def test_greedy_exact_term():
    seq = theta_sequence("zero", seed=(1, 2), count=7)
    d = greedy_decompose(24, seq, 1)
    assert len(d.indices) == 1 and d.remainder == 0


def test_greedy_range_errors():
    seq = theta_sequence("zero", seed=(1, 2), count=7)
    with pytest.raises(ValueError):
        greedy_decompose(48, seq, 1)
    with pytest.raises(ValueError):
        greedy_decompose(0, seq, 1)
    with pytest.raises(ValueError):
        greedy_decompose(5, seq, 6)


@pytest.mark.parametrize("spec,sign", [("zero", "minus"), ("k_over_log2", "minus"), (("constant_c", 1), "plus")])
def test_greedy_weak_bound_exhaustive(spec, sign):
    seq = theta_sequence(spec, sign, (2, 3) if spec != "zero" else (1, 2), count=16)
    for k in (0, 1, 3):
        for x in range(1, seq.terms[-1]):
            d = greedy_decompose(x, seq, k)
            assert sum(seq.terms[i] for i in d.indices) + d.remainder == x
            assert list(d.indices) == sorted(d.indices, reverse=True) and all(i > k for i in d.indices)
            assert d.within_weak_bound, (k, x)
