"""Command-line front end.

Exit codes: 0 success, 2 usage or configuration error, 3 budget exhausted
(partial output written and flagged).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import criteria
from .config import ConfigError, RunConfig, parse_group_config
from .enumeration import (DEFAULT_BUDGET, BudgetExceeded, ball_growth, conjugacy_class_growth,
                          enumerate_ball, growth_of_subset)
from .reports import CriterionReport
from .schreier import build_schreier, cogrowth_csv
from .specnorm import rho_profile
from .subgroups import parse_subgroup
from .walk import RadiusError, WalkSpec, adaptive_return_profile, mc_return_profile

THREADS_ENV = "GROWTHCRIT_THREADS"
EXIT_USAGE = 2
EXIT_BUDGET = 3


class UsageError(Exception):
    pass


def _default_threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def _window(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo,hi, got {text!r}") from None
    return lo, hi


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="growthcrit", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, fmt="csv"):
        sp.add_argument("--group", required=True, help="group document (JSON)")
        sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="element/vertex budget")
        sp.add_argument("--threads", type=int, default=None,
                        help=f"worker threads (default ${THREADS_ENV} or 1)")
        sp.add_argument("--out", help="output file (default stdout)")
        sp.add_argument("--format", choices=["csv", "report", "text"], default=fmt)

    sp = sub.add_parser("balls", help="ball sizes |B_n|")
    common(sp)
    sp.add_argument("--radius", type=int, required=True)
    sp.add_argument("--generators", help="alternative generating words, separated by ';'")

    sp = sub.add_parser("growth", help="growth of a subgroup's intersection with balls")
    common(sp)
    sp.add_argument("--subset", required=True, help="subgroup spec, e.g. centralizer:a")
    sp.add_argument("--radius", type=int, required=True)

    sp = sub.add_parser("conjclass", help="conjugacy-class growth")
    common(sp)
    sp.add_argument("--word", required=True)
    sp.add_argument("--radius", type=int, required=True)
    sp.add_argument("--conj-budget", type=int, default=None, help="conjugator radius (default radius)")

    sp = sub.add_parser("schreier", help="co-growth of a Schreier graph")
    common(sp)
    sp.add_argument("--subgroup", required=True)
    sp.add_argument("--radius", type=int, required=True)
    sp.add_argument("--dump", help="also write the graph dump to this file")

    sp = sub.add_parser("walk", help="return probabilities on a Schreier graph")
    common(sp)
    sp.add_argument("--subgroup", required=True)
    sp.add_argument("--steps", type=int, required=True)
    sp.add_argument("--mode", choices=["exact", "mc"], default="exact")
    sp.add_argument("--mu", default="uniform", help="uniform or word:weight,...")
    sp.add_argument("--samples", type=int, default=100_000)
    sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("rho", help="bounds on the ball profile rho(n)")
    common(sp)
    sp.add_argument("--radius", type=int, required=True)
    sp.add_argument("--families", default="ball,sphere",
                    help="comma list of ball, sphere, random_signs:COUNT:SEED")
    sp.add_argument("--method", choices=["compression", "moment"], default="compression")
    sp.add_argument("--k", type=int, default=6, help="moment order")
    sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("check", help="evaluate a criterion and emit a report")
    sp.add_argument("criterion", choices=["trace", "freeness", "stationary", "coamen", "pcsec", "injections"])
    common(sp, fmt="report")
    sp.add_argument("--word", help="the element g (or h for injections)")
    sp.add_argument("--n-max", type=int, default=8)
    sp.add_argument("--witnesses", help="witness words separated by ';'")
    sp.add_argument("--window", type=_window, default=(10, 60))
    sp.add_argument("--subgroup", help="coamen: replace C(g) by this subgroup (diagnostic)")
    sp.add_argument("--mu", default="uniform")
    sp.add_argument("--conj-budget", type=int, default=None)
    sp.add_argument("--samples", type=int, default=100_000)
    sp.add_argument("--seed", type=int, default=0)
    return p


# -- commands ------------------------------------------------------------------------

def _cmd_balls(G, a, threads):
    gens = None if not a.generators else [w.strip() for w in a.generators.split(";")]
    try:
        ball = enumerate_ball(G, a.radius, a.budget, gens, threads=threads)
    except BudgetExceeded as exc:
        return ball_growth(exc.partial).to_csv(), exc
    return ball_growth(ball).to_csv(), None


def _cmd_growth(G, a, threads):
    oracle = parse_subgroup(G, a.subset)
    ball = enumerate_ball(G, a.radius, a.budget, threads=threads)
    return growth_of_subset(ball, oracle.contains, a.subset).to_csv(), None


def _cmd_conjclass(G, a, threads):
    g = G.parse_word(a.word)
    return conjugacy_class_growth(G, g, a.radius, a.conj_budget, budget=a.budget).to_csv(), None


def _cmd_schreier(G, a, threads):
    oracle = parse_subgroup(G, a.subgroup)
    try:
        graph = build_schreier(G, oracle, a.radius, a.budget, threads=threads)
    except BudgetExceeded as exc:
        return cogrowth_csv(exc.partial), exc
    if a.dump:
        Path(a.dump).write_text(graph.dump(), newline="\n")
    return cogrowth_csv(graph), None


def _cmd_walk(G, a, threads):
    oracle = parse_subgroup(G, a.subgroup)
    mu = WalkSpec.parse(G, a.mu)
    if a.mode == "mc":
        return mc_return_profile(G, oracle, mu, a.steps, a.samples, a.seed, threads).to_csv(), None
    try:
        prof = adaptive_return_profile(G, oracle, mu, a.steps, a.budget, threads)
    except RadiusError as exc:
        raise BudgetExceeded(f"{exc}; use --mode mc", None, -1) from None
    return prof.to_csv(), None


def _families(text: str) -> list:
    out = []
    for part in text.split(","):
        part = part.strip()
        if part.startswith("random_signs"):
            _, count, seed = part.split(":")
            out.append(("random_signs", int(count), int(seed)))
        elif part in ("ball", "sphere"):
            out.append(part)
        else:
            raise UsageError(f"unknown family {part!r}")
    return out


def _cmd_rho(G, a, threads):
    prof = rho_profile(G, a.radius, _families(a.families), a.method, a.k, budget=a.budget, seed=a.seed)
    return prof.to_csv(), None


def _cmd_check(G, a, threads) -> list[CriterionReport]:
    c = a.criterion
    if c != "injections" and a.word is None and not (c == "coamen" and a.subgroup):
        raise UsageError(f"check {c} needs --word")
    if c == "trace":
        return [criteria.check_trace_vanishing(G, a.word, a.n_max, a.conj_budget, a.budget)]
    if c == "freeness":
        wits = None if a.witnesses is None else [w.strip() for w in a.witnesses.split(";")]
        return [criteria.check_freeness(G, a.word, a.n_max, wits, a.window, a.budget)]
    if c == "stationary":
        return [criteria.check_stationary_vanishing(G, a.word, WalkSpec.parse(G, a.mu), a.n_max,
                                                    min(a.budget, 200_000), a.samples, a.seed)]
    if c == "coamen":
        oracle = parse_subgroup(G, a.subgroup) if a.subgroup else None
        return [criteria.check_coamenability(G, a.word, a.window, oracle, WalkSpec.parse(G, a.mu),
                                             min(a.budget, 200_000))]
    if c == "pcsec":
        return [criteria.classify_pc_sec(G, a.word, a.n_max, a.conj_budget, a.budget)]
    return criteria.injection_reports(G, a.word, a.n_max, a.budget)


COMMANDS = {"balls": _cmd_balls, "growth": _cmd_growth, "conjclass": _cmd_conjclass,
            "schreier": _cmd_schreier, "walk": _cmd_walk, "rho": _cmd_rho}


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)
        sys.stdout.flush()


def run_command(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    threads = a.threads if a.threads is not None else _default_threads()
    try:
        if threads < 1:
            raise UsageError("--threads must be >= 1")
        try:
            text = Path(a.group).read_text(encoding="utf-8")
        except OSError as exc:
            raise UsageError(f"cannot read group file: {exc}") from None
        G = parse_group_config(text)
        params = {k: (list(v) if isinstance(v, tuple) else v) for k, v in vars(a).items()
                  if k not in ("command", "group", "threads", "out", "format")}
        rc = RunConfig(a.command, a.group, json.loads(text), params, a.format,
                       [x for x in _strip_threads(argv)])
        if a.command == "check":
            reports = _cmd_check(G, a, threads)
            _emit(_render_reports(reports, rc, a.format), a.out)
            return 0
        body, partial = COMMANDS[a.command](G, a, threads)
    except (UsageError, ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    _emit(body, a.out)
    if a.out:
        side = rc.to_dict()
        side["partial"] = partial is not None
        Path(a.out + ".run.json").write_text(json.dumps(side, indent=2, sort_keys=True) + "\n",
                                             encoding="utf-8", newline="\n")
    if partial is not None:
        print(f"budget exhausted: {partial}; partial output up to radius {partial.completed_radius}",
              file=sys.stderr)
        return EXIT_BUDGET
    return 0


def _strip_threads(argv: list[str]) -> list[str]:
    """argv without --threads, which never changes outputs."""
    out, skip = [], False
    for x in argv:
        if skip:
            skip = False
            continue
        if x == "--threads":
            skip = True
            continue
        if x.startswith("--threads="):
            continue
        out.append(x)
    return out


def _render_reports(reports: list[CriterionReport], rc: RunConfig, fmt: str) -> str:
    if fmt == "text":
        return "\n".join(r.to_text() for r in reports)
    if fmt == "csv":
        rows = ["criterion,verdict"] + [f"{r.criterion},{r.verdict}" for r in reports]
        return "\n".join(rows) + "\n"
    docs = []
    for r in reports:
        d = r.to_dict()
        d["run_config"] = rc.to_dict()
        docs.append(d)
    body = docs[0] if len(docs) == 1 else docs
    return json.dumps(body, indent=2, sort_keys=True) + "\n"


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
