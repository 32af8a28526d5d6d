"""Acceptance criteria, one test per criterion.

Each criterion prints a single PASS/FAIL line (also collected into the
pytest terminal summary). Run directly with ``python3 tests/test_acceptance.py``
to get just those lines.
"""

from __future__ import annotations

import itertools
import math
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))

from densitylab import build_arith_tables, density_report, from_elements, product_set, subset_sums, sumset  # noqa: E402
from densitylab.constructions import (  # noqa: E402
    beta_gamma_closed_form,
    classical_set,
    delta_series,
    geometric_prop3_schedule,
    prop1_set,
    prop3_edge_counts,
    prop3_set,
    prop3_window_checks,
    theta_sequence,
)
from densitylab.harness import ExperimentConfig, run_experiment  # noqa: E402
from densitylab.numtheory import euler_phi  # noqa: E402
from corpus import engine_corpus  # noqa: E402

RESULTS: dict[int, str] = {}
_TABLES = {}


def _tables():
    if "t" not in _TABLES:
        _TABLES["t"] = build_arith_tables(10**6)
    return _TABLES["t"]


class Criterion:
    def __init__(self, number: int, title: str, seconds: float):
        self.number, self.title, self.seconds = number, title, seconds
        self.checks: list[tuple[str, bool, str]] = []

    def check(self, name: str, ok, detail: str = ""):
        self.checks.append((name, bool(ok), detail))

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        elapsed = time.perf_counter() - self.t0
        if exc[0] is None:
            self.check("runtime", elapsed < self.seconds, f"{elapsed:.1f}s < {self.seconds}s")
        failed = [c for c in self.checks if not c[1]]
        status = "FAIL" if failed or exc[0] is not None else "PASS"
        line = f"[{status}] criterion {self.number:2d}: {self.title} ({elapsed:.1f}s)"
        if failed:
            line += " | failed: " + "; ".join(f"{n} ({d})" if d else n for n, _, d in failed)
        RESULTS[self.number] = line
        print(line)
        return False

    def verdict(self):
        failed = [c for c in self.checks if not c[1]]
        assert not failed, "\n".join(f"{n}: {d}" for n, _, d in failed)


# --- 1 -----------------------------------------------------------------------

def _sum_oracle(a, b, limit):
    out = np.zeros(limit + 1, dtype=bool)
    s = np.add.outer(a, b).ravel()
    out[s[s <= limit]] = True
    return out


def _prod_oracle(a, b, limit):
    out = np.zeros(limit + 1, dtype=bool)
    p = np.multiply.outer(a, b).ravel()
    out[p[p <= limit]] = True
    return out


def _subset_oracle(seq, limit):
    out = np.zeros(limit + 1, dtype=bool)
    for r in range(len(seq) + 1):
        for combo in itertools.combinations(seq, r):
            if sum(combo) <= limit:
                out[sum(combo)] = True
    return out


def criterion_1():
    limit = 2000
    with Criterion(1, "engines equal naive enumeration on a 20-set corpus", 10) as c:
        corpus = engine_corpus(limit)
        els = [A.elements().astype(np.int64) for A in corpus]
        pos = [e[e >= 1] for e in els]
        bad_sum = bad_prod = bad_sub = 0
        pairs = list(itertools.combinations_with_replacement(range(len(corpus)), 2))
        for i, j in pairs:
            want = _sum_oracle(els[i], els[j], limit)
            for method in ("shift", "fft"):
                bad_sum += not np.array_equal(sumset(corpus[i], corpus[j], limit, method=method).bits, want)
            Pi = from_elements(pos[i], limit)
            Pj = from_elements(pos[j], limit)
            bad_prod += not np.array_equal(product_set(Pi, Pj, limit).bits, _prod_oracle(pos[i], pos[j], limit))
        for e in pos:
            seq = e[:12].tolist()
            bad_sub += not np.array_equal(subset_sums(seq, limit).bits, _subset_oracle(seq, limit))
        c.check("sumset", bad_sum == 0, f"{bad_sum} mismatches over {2 * len(pairs)} engine runs")
        c.check("product_set", bad_prod == 0, f"{bad_prod} mismatches over {len(pairs)} pairs")
        c.check("subset_sums", bad_sub == 0, f"{bad_sub} mismatches over {len(pos)} sequences")
    return c


# --- 2 -----------------------------------------------------------------------

def criterion_2():
    limit = 10**5
    with Criterion(2, "thin-basis sets: A+A = [0, N] and tail density within 0.01 of alpha", 5) as c:
        for alpha in (0.1, 0.25, 0.5, 0.9):
            A = prop1_set(alpha, limit)
            c.check(f"alpha={alpha} sumset full", sumset(A, A, limit).bits.all())
            r = density_report(A, tail_fraction=0.25)
            c.check(f"alpha={alpha} tail estimates",
                    abs(r.lower_est - alpha) <= 0.01 and abs(r.upper_est - alpha) <= 0.01,
                    f"[{r.lower_est:.5f}, {r.upper_est:.5f}]")
    return c


# --- 3 -----------------------------------------------------------------------

def criterion_3():
    with Criterion(3, "block set with 4^k schedule: edge ratios near 3/7, exact sumset windows", 30) as c:
        N = geometric_prop3_schedule(4, 8)
        limit = 7 * N[-1]
        A = prop3_set(N, limit)
        S = sumset(A, A, limit)
        edges = prop3_edge_counts(A, N)
        off = [(e, float(r)) for e, _, r in edges if abs(r - Fraction(3, 7)) > Fraction(2, 100)]
        c.check("edge ratios within 0.02 of 3/7", not off,
                "edges " + ", ".join(f"{e}: {r:.4f}" for e, r in off) + f" of {len(edges)}; count(7N) = 3N + 1 exactly")
        c.check("edge counts equal 3N + 1", all(cnt == 3 * (e // 7) + 1 for e, cnt, _ in edges))
        wins = prop3_window_checks(S, N, cover_offset=7)
        lows = [w for w in wins if w.kind == "low"]
        covers = [w for w in wins if w.kind == "cover"]
        c.check("low windows equal {0..5} + 7N", lows and all(w.ok for w in lows), f"{len(lows)} windows")
        c.check("U-block windows covered", covers and all(w.ok for w in covers), f"{len(covers)} windows")
    return c


# --- 4 -----------------------------------------------------------------------

def _theta_checks(c, seq, tag):
    ds = delta_series(seq)
    c.check(f"{tag}: sandwich at every n", all(r[-1] for r in ds.sandwich), f"{len(ds.sandwich)} steps")
    steps_ok = all(abs(ds.delta[i] - ds.delta[i - 1]) <= 5 * ds.theta_s[i] / ds.s[i] for i in range(1, len(ds.n)))
    c.check(f"{tag}: |delta_n - delta_(n-1)| <= 5 theta(s_n)/s_n", steps_ok, f"fitted C = {ds.fitted_C:.3f}")
    c.check(f"{tag}: last-five spread <= 0.02", ds.spread(5) <= 0.02, f"{ds.spread(5):.2e}")
    g = seq.growth_constants()
    c.check(f"{tag}: s_n / 2^n bounded below", min(g) > 0.5, f"min {min(g):.4f}")
    return ds


def criterion_4():
    with Criterion(4, "subset-sum density of the theta = k/(log k)^2 sequence converges", 60) as c:
        seq = theta_sequence("k_over_log2", "minus", (2, 3), count=30, cap=10**7)
        c.check(">= 30 terms within sum cap 10^7", len(seq) >= 30,
                f"only {len(seq)} terms fit: s_{len(seq)} = {seq.s(len(seq))}, s_n ~ 0.83 * 2^n")
        _theta_checks(c, seq, "cap 10^7")
        full = theta_sequence("k_over_log2", "minus", (2, 3), count=31)
        ds = _theta_checks(c, full, f"31 terms (s_31 = {full.s(31)})")
        c.check("uncapped run determines delta through n = 30", ds.n[-1] >= 30, f"last n = {ds.n[-1]}")
    return c


# --- 5 -----------------------------------------------------------------------

def criterion_5():
    L = 10**6
    with Criterion(5, "closed-form densities of classical multiplicative sets at 10^6", 60) as c:
        t = _tables()
        sf = classical_set("squarefree", L, t)
        sq = product_set(sf, sf, L)
        c.check("squarefree ~ 1/zeta(2)", abs(sf.count_prefix(L) / L - 6 / math.pi**2) <= 0.005)
        c.check("squarefree^2 ~ 1/zeta(3)", abs(sq.count_prefix(L) / L - 0.8319073725807075) <= 0.005)
        for k in (6, 12, 30):
            A = classical_set(f"coprime({k})", L, t)
            c.check(f"coprime({k}) density phi(k)/k", abs(A.count_prefix(L) / L - euler_phi(k) / k) <= 0.005)
            c.check(f"coprime({k}) closed under products", product_set(A, A, L).issubset(A))
        for r in range(1, 6):
            B = classical_set(f"prime_union({r})", L, t)
            beta, gamma = beta_gamma_closed_form(r)
            gb = B.count_prefix(L) / L
            bb = product_set(B, B, L).count_prefix(L) / L
            c.check(f"r={r} sieve counts", abs(gb - gamma) <= 0.005 and abs(bb - beta) <= 0.005,
                    f"gamma {gb:.5f}/{float(gamma):.5f}, beta {bb:.5f}/{float(beta):.5f}")
        c.check("(beta_1, gamma_1) = (1/4, 1/2)", beta_gamma_closed_form(1) == (Fraction(1, 4), Fraction(1, 2)))
        c.check("beta_(r+1) < gamma_r for r <= 10",
                all(beta_gamma_closed_form(r + 1)[0] < beta_gamma_closed_form(r)[1] for r in range(1, 11)))
    return c


# --- 6 -----------------------------------------------------------------------

def criterion_6():
    with Criterion(6, "density-alpha selector: dA > alpha > dA^2 with margin 0.01 at 10^6", 60) as c:
        for alpha in (0.05, 0.3, 0.45, 0.6, 0.8):
            res = run_experiment(ExperimentConfig("product-alpha", 10**6, {"alpha": alpha, "margin": 0.01}))
            rA, rS = res.reports["A"], res.reports["square"]
            c.check(f"alpha={alpha}", res.passed,
                    f"{rA.meta['selected']}: dA {rA.final_ratio:.4f}, dA^2 {rS.final_ratio:.4f}")
    return c


# --- 7 -----------------------------------------------------------------------

def criterion_7():
    with Criterion(7, "inclusion-exclusion equals direct cover; uncovered fraction near prod(1-1/p)", 20) as c:
        res = run_experiment(ExperimentConfig("sieve-cover", 10**5, {"r": 5, "x_ie": 10**4, "tuples": 50}))
        for chk in res.checks:
            c.check(chk.name, chk.ok, chk.detail)
        meta = res.reports["cover"].meta
        c.check("at least 50 tuples", len(res.reports["cover"].rows) >= 50)
        c.check("product is (1/2)(2/3)(4/5)(6/7)(10/11)", math.isclose(meta["product"], 16 / 77))
    return c


# --- 8 -----------------------------------------------------------------------

def criterion_8():
    with Criterion(8, "Omega-splitting valid for every composite <= 10^5", 30) as c:
        res = run_experiment(ExperimentConfig("omega-split", 10**5))
        for chk in res.checks:
            c.check(chk.name, chk.ok, chk.detail)
        table = res.reports["rates"]
        c.check("log-log pass rates reported", len(table.rows) == 4 and "asymptotic" in table.meta["note"])
    return c


# --- 9 -----------------------------------------------------------------------

def criterion_9():
    with Criterion(9, "product-set cascade (alpha, beta) = (0.1, 0.5) replays cleanly", 120) as c:
        res = run_experiment(ExperimentConfig("cascade", 10**5, {"alpha": 0.1, "beta": 0.5, "stages": 6}))
        for chk in res.checks:
            c.check(chk.name, chk.ok, chk.detail)
        c.check("P0 = {2}", res.reports["trace"].P0 == (2,))
    return c


# --- 10 ----------------------------------------------------------------------

def criterion_10():
    with Criterion(10, "sumset lower bound gap >= -0.01 across the normalized corpus at 10^6", 60) as c:
        res = run_experiment(ExperimentConfig("freiman-scan", 10**6))
        for chk in res.checks:
            c.check(chk.name, chk.ok, chk.detail)
        c.check("corpus nonempty", len(res.reports["scan"].rows) >= 8)
    return c


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


def test_c01_engine_oracles():
    criterion_1().verdict()


def test_c02_thin_basis_sumset():
    criterion_2().verdict()


def test_c03_block_oscillation():
    criterion_3().verdict()


def test_c04_subset_sum_density():
    criterion_4().verdict()


def test_c05_closed_forms():
    criterion_5().verdict()


def test_c06_alpha_selector():
    criterion_6().verdict()


def test_c07_sieve_cover():
    criterion_7().verdict()


def test_c08_omega_split():
    criterion_8().verdict()


def test_c09_cascade():
    criterion_9().verdict()


def test_c10_freiman_gap():
    criterion_10().verdict()


if __name__ == "__main__":
    results = [fn() for fn in CRITERIA]
    failed = sum(any(not ok for _, ok, _ in r.checks) for r in results)
    print(f"{len(results) - failed}/{len(results)} criteria passed")
    sys.exit(1 if failed else 0)
