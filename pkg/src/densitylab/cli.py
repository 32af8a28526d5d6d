"""Command-line entry point: ``densitylab <experiment> [options]``.

Exit codes: 0 all checks passed, 1 a check failed, 2 invalid configuration,
3 the work estimate exceeded the budget.
"""

from __future__ import annotations

import argparse
import sys

from .errors import CapacityError, ConstructionError
from .harness import DEFAULT_BUDGET, EXPERIMENTS, FORMATS, ExperimentConfig, run_experiment

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_RESOURCE = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _int(text: str) -> int:
    # accept 1e6 style limits
    v = float(text) if any(c in text for c in ".eE") else int(text)
    if int(v) != v:
        raise argparse.ArgumentTypeError(f"not an integer: {text}")
    return int(v)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="densitylab", description="Run a named density experiment and write its reports.")
    p.add_argument("experiment", choices=sorted(EXPERIMENTS))
    p.add_argument("--limit", type=_int, help="prefix length N (experiment default if omitted)")
    p.add_argument("--alpha", help="target density (decimal or fraction, e.g. 0.3 or 3/10)")
    p.add_argument("--beta", help="prime-partition target for the cascade")
    p.add_argument("--k", type=int, help="parameter k for coprime/multiples sets")
    p.add_argument("--r", type=int, help="number of primes for prime_union / sieve-cover")
    p.add_argument("--kind", help="classical set kind, e.g. squarefree or coprime(6)")
    p.add_argument("--theta", help="theta preset: zero, k_over_log2, constant_c")
    p.add_argument("--c", type=float, help="constant for the theta preset")
    p.add_argument("--sign", help="sign policy: minus, plus, alternate")
    p.add_argument("--seed", help="comma-separated seed terms for subset-sums")
    p.add_argument("--count", type=int, help="number of sequence terms for subset-sums")
    p.add_argument("--schedule", help="checkpoint schedule, geometric:ETA or explicit:a,b,c")
    p.add_argument("--prop3-schedule", choices=("test", "default"), help="block schedule for prop3")
    p.add_argument("--stages", type=int, help="cascade stages")
    p.add_argument("--tail", type=float, dest="tail_fraction", help="tail fraction for the estimates")
    p.add_argument("--format", choices=FORMATS, default="json")
    p.add_argument("--out", help="output directory for reports")
    p.add_argument("--budget", type=float, default=DEFAULT_BUDGET, help="work-estimate budget")
    p.add_argument("--cache-dir", help="cache directory for built sets (DENSITYLAB_CACHE overrides)")
    return p


_PARAMS = ("alpha", "beta", "k", "r", "kind", "theta", "c", "sign", "seed", "count", "stages", "prop3_schedule")


def config_from_args(ns: argparse.Namespace) -> ExperimentConfig:
    params = {k: getattr(ns, k) for k in _PARAMS if getattr(ns, k) is not None}
    return ExperimentConfig(
        experiment=ns.experiment,
        limit=ns.limit,
        params=params,
        schedule=ns.schedule,
        output_path=ns.out,
        format=ns.format,
        cache_dir=ns.cache_dir,
        budget=ns.budget,
        tail_fraction=ns.tail_fraction,
    )


def main(argv: list[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    cfg = config_from_args(ns)
    try:
        result = run_experiment(cfg)
    except CapacityError as exc:
        print(f"densitylab: resource guard: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (ValueError, ConstructionError) as exc:
        print(f"densitylab: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    print(f"{result.experiment} limit={result.limit} time={result.wall_time:.2f}s")
    for c in result.checks:
        print(f"  [{'PASS' if c.ok else 'FAIL'}] {c.name}" + (f": {c.detail}" if c.detail else ""))
    for f in result.files:
        print(f"  wrote {f}")
    return EXIT_OK if result.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
