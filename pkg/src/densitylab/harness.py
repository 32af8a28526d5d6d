"""Named, reproducible experiments with CSV/JSON output.

Each experiment builds its sets, evaluates the module-level invariants it
exercises as named checks, and returns the reports it produced. The harness
itself makes no mathematical claims beyond those checks.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import os
import platform
import tempfile
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable

import numpy as np

from . import __version__
from ._util import as_fraction
from .constructions import (
    beta_gamma_closed_form,
    build_q,
    classical_set,
    closed_form_density,
    default_prop3_schedule,
    delta_series,
    dyadic_block_set,
    geometric_prop3_schedule,
    inclusion_exclusion_cover,
    is_normalized,
    p0_free_set,
    prime_partition,
    prop1_set,
    prop3_edge_counts,
    prop3_set,
    prop3_window_checks,
    select_product_alpha,
    split_by_omega,
    theorem_cascade,
    theta_sequence,
    verify_cascade,
)
from .constructions.cascade import CascadeTrace
from .density import DensityReport, Schedule, density_report, freiman_gap
from .errors import CapacityError
from .intset import PrefixSet, load_prefix_set, product_set, save_prefix_set, sumset
from .numtheory import ArithTables, build_arith_tables

DEFAULT_BUDGET = 1e10
FORMATS = ("csv", "json")
CACHE_ENV = "DENSITYLAB_CACHE"


@dataclass
class ExperimentConfig:
    experiment: str
    limit: int | None = None
    params: dict = field(default_factory=dict)
    schedule: str | None = None
    output_path: str | None = None
    format: str = "json"
    cache_dir: str | None = None
    budget: float = DEFAULT_BUDGET
    tail_fraction: float | None = None

    def resolved_cache_dir(self) -> Path | None:
        env = os.environ.get(CACHE_ENV)
        d = env or self.cache_dir
        return Path(d) if d else None

    def echo(self) -> dict:
        d = asdict(self)
        d.pop("output_path")
        d.pop("cache_dir")
        return d


@dataclass
class TableReport:
    """Generic tabular report for results that are not density series."""

    label: str
    columns: list[str]
    rows: list[list]
    meta: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"label": self.label, "columns": self.columns, "rows": self.rows, "meta": self.meta}

    def to_json(self, **extra) -> str:
        return json.dumps({**self.to_dict(), **extra}, indent=2, sort_keys=True, default=str)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        w.writerows(self.rows)
        return buf.getvalue()


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class ExperimentResult:
    experiment: str
    limit: int
    checks: list[Check]
    reports: dict
    work_estimate: float
    wall_time: float = 0.0
    files: list[Path] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def failed(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]


class _Context:
    def __init__(self, cfg: ExperimentConfig):
        self.cfg = cfg
        self.cache_dir = cfg.resolved_cache_dir()
        self._tables: ArithTables | None = None

    def tables(self, limit: int) -> ArithTables:
        if self._tables is None or self._tables.limit < limit:
            self._tables = build_arith_tables(max(limit, 2))
        return self._tables

    def cached(self, key: dict, build: Callable[[], PrefixSet]) -> PrefixSet:
        """Build a set, or load it from the cache keyed by a hash of ``key``."""
        if self.cache_dir is None:
            return build()
        blob = json.dumps(key, sort_keys=True, default=str).encode()
        path = self.cache_dir / (hashlib.sha256(blob).hexdigest()[:32] + ".dlps")
        if path.exists():
            return load_prefix_set(path)
        A = build()
        self.cache_dir.mkdir(parents=True, exist_ok=True)
        save_prefix_set(A, path)
        return A

    def tail(self, default: float = 0.5) -> float:
        return default if self.cfg.tail_fraction is None else self.cfg.tail_fraction

    def schedule(self, default=None):
        return self.cfg.schedule if self.cfg.schedule is not None else default


def _p(cfg: ExperimentConfig, key: str, default=None):
    v = cfg.params.get(key)
    return default if v is None else v


def _within(x: float, target: float, tol: float) -> bool:
    return abs(float(x) - float(target)) <= tol


# --- work estimates ----------------------------------------------------------

def _sumset_work(L: int) -> float:
    size = 1 << (2 * L + 1).bit_length()
    return 4 * size * math.log2(size)


def _product_work(L: int) -> float:
    return 2 * L * (math.log(max(L, 2)) + 1)


# --- experiments -------------------------------------------------------------

def _exp_prop1(cfg, ctx, L):
    alpha = _p(cfg, "alpha", 0.5)
    tol = float(_p(cfg, "tol", 0.01))
    A = ctx.cached({"set": "prop1", "alpha": str(alpha), "limit": L}, lambda: prop1_set(alpha, L))
    S = sumset(A, A, L)
    tail = ctx.tail(0.25)
    sched = ctx.schedule()
    rA = density_report(A, sched, tail, label=A.label)
    rS = density_report(S, sched, tail, label="prop1 A+A")
    a = float(as_fraction(alpha))
    checks = [
        Check("normalized", is_normalized(A)),
        Check("sumset_is_full_interval", bool(S.bits.all()), f"{len(S)} of {L + 1} covered"),
        Check("density_tail_near_alpha", _within(rA.lower_est, a, tol) and _within(rA.upper_est, a, tol),
              f"tail [{rA.lower_est:.6f}, {rA.upper_est:.6f}] vs {a} ± {tol}"),
    ]
    return {"A": rA, "sumset": rS}, checks


def _prop3_schedule(cfg, L):
    kind = _p(cfg, "prop3_schedule", "test")
    if kind == "test":
        ratio = int(_p(cfg, "ratio", 4))
        top = int(_p(cfg, "top", 8))
        N = geometric_prop3_schedule(ratio, top)
        if L is None:
            L = 7 * N[-1]
    else:
        L = L or 10**6
        N = default_prop3_schedule(L)
    return N, L


def _exp_prop3(cfg, ctx, L):
    N, L = _prop3_schedule(cfg, L)
    A = prop3_set(N, L)
    S = sumset(A, A, L)
    edges = prop3_edge_counts(A, N)
    wins = prop3_window_checks(S, N)
    edge_pts = [e for e, _, _ in edges]
    sum_pts = sorted({p for k in range(1, len(N)) for p in (7 * N[k], 14 * N[k]) if p <= L})
    tail = ctx.tail(0.5)
    rA = density_report(A, ctx.schedule(Schedule("explicit", points=tuple(edge_pts))), tail, label="prop3 A")
    rS = density_report(S, ctx.schedule(Schedule("explicit", points=tuple(sum_pts))), tail, label="prop3 A+A")
    exact_edges = all(c == 3 * (e // 7) + 1 for e, c, _ in edges)
    checks = [
        Check("edge_counts_3N_plus_1", exact_edges, "count(7N_m) = 3 N_m + 1 at every block edge"),
        Check("low_windows_residues_0_to_5", all(w.ok for w in wins if w.kind == "low"),
              f"{sum(w.kind == 'low' for w in wins)} windows"),
        Check("u_blocks_covered", all(w.ok for w in wins if w.kind == "cover"),
              f"{sum(w.kind == 'cover' for w in wins)} blocks"),
    ]
    edge_table = TableReport("prop3 block edges", ["edge", "count", "ratio", "deviation_from_3_7"],
                             [[e, c, float(r), float(r - Fraction(3, 7))] for e, c, r in edges],
                             {"schedule": N})
    win_table = TableReport("prop3 windows", ["kind", "k", "lo", "hi", "ok"],
                            [[w.kind, w.k, w.lo, w.hi, w.ok] for w in wins])
    return {"A": rA, "sumset": rS, "edges": edge_table, "windows": win_table}, checks


def _theta_args(cfg):
    seed = _p(cfg, "seed", (2, 3))
    if isinstance(seed, str):
        seed = tuple(int(t) for t in seed.split(","))
    return (
        (str(_p(cfg, "theta", "k_over_log2")), float(_p(cfg, "c", 1.0))),
        str(_p(cfg, "sign", "minus")),
        tuple(seed),
        int(_p(cfg, "count", 30)),
    )


def _exp_subset_sums(cfg, ctx, L):
    spec, sign, seed, count = _theta_args(cfg)
    seq = theta_sequence(spec, sign, seed, count=count, cap=L)
    ds = delta_series(seq)
    C = float(_p(cfg, "C", 5.0))
    k0 = len(seed)
    ident = all(abs(seq.a(n) - seq.s(n - 1)) == seq.theta(seq.s(n - 1)) for n in range(k0 + 1, len(seq) + 1))
    growth = all(seq.s(n) >= 2 * seq.s(n - 1) - seq.theta(seq.s(n - 1)) for n in range(k0 + 1, len(seq) + 1))
    diff_ok = all(abs(d) <= C * th / s for (_, d), s, th in zip(ds.diffs(), ds.s[1:], ds.theta_s[1:]))
    checks = [
        Check("theta_identity", ident, f"{len(seq)} terms, stopped by {seq.stopped_by}"),
        Check("growth_recurrence", growth),
        Check("sandwich_bounds", all(r[-1] for r in ds.sandwich), f"{len(ds.sandwich)} steps"),
        Check("delta_step_bound", diff_ok, f"|delta_n - delta_(n-1)| <= {C} theta(s_n)/s_n; fitted C = {ds.fitted_C:.4f}"),
    ]
    if len(ds.delta) >= 5:
        checks.append(Check("delta_tail_spread", ds.spread(5) <= 0.02, f"last-five spread {ds.spread(5):.3g}"))
    report = DensityReport(
        label=f"P(A) theta={seq.theta.describe()} sign={sign} seed={list(seed)}",
        limit=seq.s(len(seq)),
        schedule="explicit:s_n",
        checkpoints=ds.s,
        counts=ds.counts,
        ratios=ds.delta,
        lower_est=min(ds.delta[len(ds.delta) // 2:]),
        upper_est=max(ds.delta[len(ds.delta) // 2:]),
        tail_fraction=0.5,
    )
    table = TableReport("theta sequence", ["n", "a_n", "s_n", "theta_s_prev", "s_n_over_2n"],
                        [[n, seq.a(n), seq.s(n), seq.theta(seq.s(n - 1)), seq.s(n) / 2**n]
                         for n in range(1, len(seq) + 1)],
                        {"fitted_C": ds.fitted_C, "stopped_by": seq.stopped_by})
    return {"delta": report, "sequence": table}, checks


def _classical_reports(A: PrefixSet, ctx, L):
    sq = product_set(A, A, L)
    sched = ctx.schedule()
    tail = ctx.tail(0.5)
    return sq, density_report(A, sched, tail, label=A.label), density_report(sq, sched, tail, label=f"{A.label}^2")


def _exp_classical(cfg, ctx, L):
    kind = str(_p(cfg, "kind", "squarefree"))
    k, r = _p(cfg, "k"), _p(cfg, "r")
    k = None if k is None else int(k)
    r = None if r is None else int(r)
    tol = float(_p(cfg, "tol", 0.005))
    tables = ctx.tables(L)
    A = ctx.cached({"set": kind, "k": k, "r": r, "limit": L}, lambda: classical_set(kind, L, tables, k=k, r=r))
    sq, rA, rS = _classical_reports(A, ctx, L)
    name = A.label.split("(")[0]
    checks = []
    dA = closed_form_density(kind, k, r)
    if dA is not None:
        checks.append(Check("density_closed_form", _within(rA.final_ratio, dA, tol),
                            f"{rA.final_ratio:.6f} vs {float(dA):.6f} ± {tol}"))
    if name == "squarefree":
        cube = classical_set("cubefree", L, tables)
        checks.append(Check("square_is_cubefree", sq == cube.with_label(sq.label)))
        checks.append(Check("square_density_zeta3", _within(rS.final_ratio, closed_form_density("cubefree"), tol),
                            f"{rS.final_ratio:.6f} vs {closed_form_density('cubefree'):.6f} ± {tol}"))
    elif name in ("coprime", "nonsquarefree1"):
        checks.append(Check("product_closed", sq.issubset(A) and A.issubset(sq)))
    elif name == "multiples":
        kk = int(A.label[len("multiples("):-1])
        expect = np.zeros(L + 1, dtype=bool)
        expect[kk * kk :: kk * kk] = True
        checks.append(Check("square_is_k2_multiples", bool(np.array_equal(sq.bits, expect))))
    elif name == "prime_union":
        rr = int(A.label[len("prime_union("):-1])
        b, g = beta_gamma_closed_form(rr)
        checks.append(Check("square_density_beta_r", _within(rS.final_ratio, b, tol),
                            f"{rS.final_ratio:.6f} vs {float(b):.6f} ± {tol}"))
    elif name == "nonsquarefree":
        checks.append(Check("square_sparser_than_set", rS.final_ratio < rA.final_ratio))
    return {"A": rA, "square": rS}, checks


def _exp_product_alpha(cfg, ctx, L):
    alpha = _p(cfg, "alpha", 0.3)
    margin = float(_p(cfg, "margin", 0.01))
    choice = select_product_alpha(alpha, margin)
    A = classical_set(choice.set_kind, L, ctx.tables(L))
    sq, rA, rS = _classical_reports(A, ctx, L)
    a = float(choice.alpha)
    rA.meta = {"selected": choice.set_kind, "canonical": choice.canonical,
               "closed_form_density": float(choice.density), "closed_form_square_density": float(choice.square_density)}
    checks = [
        Check("density_above_alpha", rA.lower_est - a >= margin,
              f"{choice.set_kind}: tail min {rA.lower_est:.6f} vs alpha {a} + {margin}"),
        Check("square_density_below_alpha", a - rS.upper_est >= margin,
              f"tail max {rS.upper_est:.6f} vs alpha {a} - {margin}"),
    ]
    return {"A": rA, "square": rS}, checks


def _exp_omega_split(cfg, ctx, L):
    tables = ctx.tables(L)
    om = tables.omega_array()
    valid = True
    bad = []
    counts = {"member1": 0, "member2": 0, "bound1": 0, "bound2": 0}
    total = 0
    for n in np.flatnonzero(om >= 2).tolist():
        sp = split_by_omega(n, tables)
        u1 = max(sp.u, 1)
        ok = (sp.n1 * sp.n2 == n and om[sp.n1] == u1 and om[sp.n2] == sp.t - u1
              and om[sp.n1] + om[sp.n2] == om[n])
        if not ok:
            valid = False
            bad.append(n)
        total += 1
        for key, v in sp.diagnostics().items():
            counts[key] += v
    rates = {k: v / total for k, v in counts.items()}
    table = TableReport(
        "omega split log-log inequalities",
        ["inequality", "passes", "composites", "rate"],
        [[k, counts[k], total, rates[k]] for k in counts],
        {"note": "inequalities hold only asymptotically; rates are reported, no threshold is asserted"},
    )
    A = classical_set("omega_bounded", L, tables)
    _, rA, rS = _classical_reports(A, ctx, L)
    checks = [Check("valid_split_every_composite", valid,
                    f"{total} composites" + (f"; first failures {bad[:5]}" if bad else ""))]
    return {"rates": table, "A": rA, "square": rS}, checks


def random_coprime_tuples(rng: np.random.Generator, count: int, max_size: int, lo: int, hi: int) -> list[tuple[int, ...]]:
    out = []
    while len(out) < count:
        size = int(rng.integers(1, max_size + 1))
        picked: list[int] = []
        tries = 0
        while len(picked) < size and tries < 200:
            c = int(rng.integers(lo, hi + 1))
            tries += 1
            if all(math.gcd(c, p) == 1 for p in picked):
                picked.append(c)
        out.append(tuple(picked))
    return out


def _exp_sieve_cover(cfg, ctx, L):
    r = int(_p(cfg, "r", 5))
    x_ie = min(int(_p(cfg, "x_ie", 10**4)), L)
    n_tuples = int(_p(cfg, "tuples", 50))
    rng = np.random.default_rng(int(_p(cfg, "rng_seed", 0)))
    full = np.ones(L + 1, dtype=bool)
    full[:2] = False
    A = PrefixSet(full, f"[2, {L}]")
    ps = ctx.tables(max(L, 100)).primes[:r].tolist()
    res = inclusion_exclusion_cover(A, ps, L)
    prod = float(np.prod([1 - 1 / p for p in ps]))
    frac = res.uncovered / L
    sparse = full[: x_ie + 1].copy()
    sparse[rng.choice(np.arange(2, x_ie + 1), size=x_ie // 100, replace=False)] = False
    A_sparse = PrefixSet(sparse, "random dense subset of [2, x]")
    rows, ie_ok = [], True
    for tup in random_coprime_tuples(rng, n_tuples, 4, 2, 200):
        tup = tuple(t for t in tup if A_sparse.bits[t])
        for S in (A.truncate(x_ie), A_sparse):
            cr = inclusion_exclusion_cover(S, tup, x_ie)
            ie_ok &= cr.cover_count == cr.ie_count
            rows.append([S.label, " ".join(map(str, tup)), cr.cover_count, cr.ie_count])
    checks = [
        Check("inclusion_exclusion_exact", ie_ok, f"{len(rows)} (set, tuple) pairs at x = {x_ie}"),
        Check("uncovered_fraction_matches_product", abs(frac - prod) <= 0.02 * prod,
              f"uncovered {frac:.6f} vs prod(1-1/p) = {prod:.6f} (2% relative)"),
    ]
    table = TableReport("inclusion-exclusion checks", ["set", "tuple", "cover", "ie"], rows,
                        {"x": x_ie, "first_primes": ps, "uncovered_fraction": frac, "product": prod,
                         "cover_count": res.cover_count, "ie_count": res.ie_count})
    return {"cover": table}, checks


def _exp_cascade(cfg, ctx, L):
    alpha = _p(cfg, "alpha", 0.1)
    beta = _p(cfg, "beta", 0.5)
    stages = int(_p(cfg, "stages", 6))
    tables = ctx.tables(L)
    part = prime_partition(beta, int(_p(cfg, "prime_bound", 10**4)), _p(cfg, "tol", 0.01))
    A, trace = theorem_cascade(alpha, part, L, stages, tables)
    fails = verify_cascade(A, trace, tables)
    Q, _, _ = build_q(part, L, tables)
    m = min(L, int(_p(cfg, "qq_limit", 10**4)))
    qq = product_set(Q, Q, m)
    free = p0_free_set(part, m, tables)
    sq = product_set(A, A, L)
    pts = sorted({n for n in trace.n_values if 1 <= n <= L} | set(Schedule().checkpoints(L)))
    tail = ctx.tail(0.5)
    checks = [
        Check("replay", not fails, "; ".join(fails[:3])),
        Check("stages_completed", len(trace.milestones) >= stages,
              f"{len(trace.milestones)} of {stages}" + (f"; {trace.notices[0]}" if trace.notices else "")),
        Check("case_I_bound", all(mm.s <= mm.search_bound for mm in trace.milestones if mm.case == "I")),
        Check("QQ_is_P0_free", bool(np.array_equal(qq.bits, free.bits)), f"up to {m}"),
    ]
    reports = {
        "trace": trace,
        "A": density_report(A, Schedule("explicit", points=tuple(pts)), tail, label="cascade A"),
        "square": density_report(sq, Schedule("explicit", points=tuple(pts)), tail, label="cascade A.A"),
    }
    return reports, checks


def normalized_corpus(limit: int, tables: ArithTables | None = None) -> list[PrefixSet]:
    """Normalized sets (0 in A, gcd 1) built from the constructions."""
    if tables is None:
        tables = build_arith_tables(max(limit, 2))
    out = [prop1_set(a, limit) for a in (0.1, 0.25, 0.5, 0.9)]
    out.append(prop3_set(default_prop3_schedule(limit), limit).with_label("prop3(default schedule)"))
    out.append(dyadic_block_set(limit))
    for kind in ("squarefree", "coprime(6)", "nonsquarefree1", "omega_bounded"):
        S = classical_set(kind, limit, tables)
        bits = S.bits.copy()
        bits[0] = True
        out.append(PrefixSet(bits, "{0} ∪ " + S.label))
    return out


def _exp_freiman_scan(cfg, ctx, L):
    tol = float(_p(cfg, "tol", 0.01))
    tail = ctx.tail(0.5)
    rows, ok, bad = [], True, []
    for A in normalized_corpus(L, ctx.tables(L)):
        S = sumset(A, A, L)
        rA = density_report(A, ctx.schedule(), tail)
        rS = density_report(S, ctx.schedule(), tail)
        gap = freiman_gap(rA.lower_est, rS.lower_est)
        norm = is_normalized(A)
        rows.append([A.label, norm, rA.lower_est, rA.upper_est, rS.lower_est, rS.upper_est, gap])
        if not norm or gap < -tol:
            ok = False
            bad.append(A.label)
    table = TableReport("freiman scan",
                        ["set", "normalized", "alpha_lower", "alpha_upper", "gamma_lower", "gamma_upper", "gap"],
                        rows, {"tolerance": -tol, "gap": "gamma_lower - (alpha_lower/2 + min(alpha_lower, 1/2))"})
    return {"scan": table}, [Check("freiman_gap_nonnegative", ok, f"{len(rows)} sets" + (f"; failing {bad}" if bad else ""))]


@dataclass(frozen=True)
class _Experiment:
    run: Callable
    default_limit: int | None
    estimate: Callable[[ExperimentConfig, int], float]


def _est_subset(cfg, L):
    _, _, _, count = _theta_args(cfg)
    return count * (L + 1) / 64


EXPERIMENTS: dict[str, _Experiment] = {
    "prop1": _Experiment(_exp_prop1, 10**5, lambda c, L: _sumset_work(L)),
    "prop3": _Experiment(_exp_prop3, None, lambda c, L: _sumset_work(L)),
    "subset-sums": _Experiment(_exp_subset_sums, 10**7, _est_subset),
    "classical": _Experiment(_exp_classical, 10**6, lambda c, L: L + _product_work(L)),
    "product-alpha": _Experiment(_exp_product_alpha, 10**6, lambda c, L: L + _product_work(L)),
    "omega-split": _Experiment(_exp_omega_split, 10**5, lambda c, L: 50 * L + _product_work(L)),
    "sieve-cover": _Experiment(_exp_sieve_cover, 10**5, lambda c, L: 20 * L),
    "cascade": _Experiment(_exp_cascade, 10**5,
                           lambda c, L: (int(_p(c, "stages", 6)) + 2) * math.log2(max(L, 2)) * _product_work(L)),
    "freiman-scan": _Experiment(_exp_freiman_scan, 10**6, lambda c, L: 10 * (_sumset_work(L) + L)),
}


def validate_config(cfg: ExperimentConfig) -> int:
    """Raise ValueError for a bad config; return the effective limit."""
    if cfg.experiment not in EXPERIMENTS:
        raise ValueError(f"unknown experiment {cfg.experiment!r}; choose from {sorted(EXPERIMENTS)}")
    if cfg.format not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}")
    exp = EXPERIMENTS[cfg.experiment]
    L = cfg.limit if cfg.limit is not None else exp.default_limit
    if cfg.experiment == "prop3" and L is None:
        _, L = _prop3_schedule(cfg, None)
    if L is None or int(L) < 1:
        raise ValueError("limit must be a positive integer")
    if cfg.tail_fraction is not None and not 0 < cfg.tail_fraction <= 1:
        raise ValueError("tail fraction must be in (0, 1]")
    return int(L)


def estimate_work(cfg: ExperimentConfig) -> float:
    L = validate_config(cfg)
    return EXPERIMENTS[cfg.experiment].estimate(cfg, L)


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    """Validate, check the work budget, run, and write reports if an output path is set.

    Raises ValueError for an invalid config and :class:`CapacityError` when the
    work estimate exceeds ``cfg.budget``. Check failures are reported in the
    result, not raised.
    """
    L = validate_config(cfg)
    exp = EXPERIMENTS[cfg.experiment]
    work = exp.estimate(cfg, L)
    if work > cfg.budget:
        raise CapacityError(f"{cfg.experiment}: work estimate {work:.3g} exceeds budget {cfg.budget:.3g}",
                            estimate=work, budget=cfg.budget)
    t0 = time.perf_counter()
    reports, checks = exp.run(cfg, _Context(cfg), L)
    result = ExperimentResult(cfg.experiment, L, checks, reports, work, time.perf_counter() - t0)
    if cfg.output_path:
        result.files = write_outputs(result, cfg)
    return result


# --- output ------------------------------------------------------------------

def _engine_versions() -> dict:
    return {"densitylab": __version__, "numpy": np.__version__, "python": platform.python_version()}


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _trace_csv(trace: CascadeTrace) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["j", "case", "n_j", "n_next", "s", "dropped_lo", "dropped_hi", "witness_n", "witness_count", "search_bound"])
    for m in trace.milestones:
        lo, hi = m.dropped if m.dropped else ("", "")
        w.writerow([m.j, m.case, m.n_j, m.n_next, m.s, lo, hi, m.witness_n, m.witness_count,
                    "" if m.search_bound is None else m.search_bound])
    return buf.getvalue()


def emit_report(report, fmt: str, path, metadata: dict | None = None) -> Path:
    """Write a DensityReport, CascadeTrace or TableReport to ``path`` atomically.

    CSV for density reports is ``checkpoint,count,ratio``; JSON adds a
    ``metadata`` block (config echo, engine versions, wall time).
    """
    if fmt not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}")
    path = Path(path)
    if isinstance(report, DensityReport) and not report.checkpoints:
        raise ValueError(f"{path}: refusing to write a report with no checkpoints")
    meta = {"engine": _engine_versions(), **(metadata or {})}
    if fmt == "csv":
        text = _trace_csv(report) if isinstance(report, CascadeTrace) else report.to_csv()
    else:
        text = report.to_json(metadata=meta) + "\n"
    try:
        _atomic_write(path, text)
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc}") from exc
    return path


def write_outputs(result: ExperimentResult, cfg: ExperimentConfig) -> list[Path]:
    """One file per report plus ``summary.json`` under ``cfg.output_path``."""
    out = Path(cfg.output_path)
    meta = {"config": cfg.echo(), "run": {"wall_time_s": round(result.wall_time, 3),
                                          "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S")}}
    files = [emit_report(rep, cfg.format, out / f"{cfg.experiment}_{name}.{cfg.format}", meta)
             for name, rep in result.reports.items()]
    summary = {
        "experiment": cfg.experiment,
        "limit": result.limit,
        "passed": result.passed,
        "work_estimate": result.work_estimate,
        "checks": [asdict(c) for c in result.checks],
        "files": [p.name for p in files],
        "metadata": {"engine": _engine_versions(), **meta},
    }
    spath = out / f"{cfg.experiment}_summary.json"
    _atomic_write(spath, json.dumps(summary, indent=2, sort_keys=True, default=str) + "\n")
    return files + [spath]
