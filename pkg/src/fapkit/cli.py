"""Command line entry point.

Exit codes: 0 on success, 2 on bad or infeasible input (including an
exhausted oracle budget), 3 when an internal structural assertion fires or
an audit fails. JSON output schemas are documented in the README.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .credits import audit_run
from .driver import bench, solve_combined
from .errors import InputError, InternalDefect
from .generate import FAMILIES, GeneratorProfile, generate
from .instance import Instance, parse_instance, render_instance, render_solution, validate
from .matching import initial_partial_solution
from .oracle import Budget, solve_exact_fap
from .pap import solve_pap, steps_to_jsonl
from .tap import solve_tap_track


def _load(path: str) -> Instance:
    return validate(parse_instance(Path(path).read_text()))


def _link_objs(inst: Instance, eids) -> list[dict]:
    by_id = inst.graph.edge_by_id
    out = []
    for eid in sorted(eids):
        e = by_id[eid]
        out.append({"u": e.u + 1, "v": e.v + 1, "id": eid})
    return out


def _cmd_solve(args: argparse.Namespace) -> int:
    inst = _load(args.file)
    sol = solve_combined(inst, eps=args.eps)
    report = None
    if args.audit:
        report = audit_run(sol.pap_steps, sol.paths_instance)
    if args.json:
        payload = {
            "n": inst.n,
            "n_comp": sol.n_comp,
            "pap": len(sol.pap_links),
            "tap": len(sol.tap_links),
            "track": sol.track,
            "size": len(sol.links),
            "links": _link_objs(inst, sol.links),
        }
        if report is not None:
            payload["audit"] = {
                "passed": report.passed,
                "opt": report.opt,
                "certificate": report.certificate_applies,
                "witnesses": report.witness_count,
                "violations": [
                    {"check": v.check, "step": v.step, "witness": v.witness, "detail": v.detail}
                    for v in report.violations
                ]
                + [
                    {"check": v.check, "step": v.step, "witness": v.witness, "detail": v.detail}
                    for w in report.witnesses
                    if not w.passed
                    for v in w.violations
                ],
            }
        print(json.dumps(payload, indent=2))
    else:
        print(f"n {inst.n}")
        print(f"components {sol.n_comp}")
        print(f"pap {len(sol.pap_links)}")
        print(f"tap {len(sol.tap_links)}")
        print(f"track {sol.track}")
        print(render_solution(inst, sol.links), end="")
        if report is not None:
            verdict = "passed" if report.passed else "FAILED"
            scope = "" if report.certificate_applies else ", certificate out of scope"
            print(
                f"audit {verdict} (opt {report.opt}, {report.witness_count} witnesses{scope})"
            )
            for v in report.violations:
                print(f"audit-violation {v.check} step={v.step}: {v.detail}")
    if report is not None and not report.passed:
        return 3
    return 0


def _cmd_pap(args: argparse.Namespace) -> int:
    inst = _load(args.file)
    if not inst.is_paths_instance():
        raise InputError(
            "not a disjoint-path instance; use 'fapkit solve' for general forests"
        )
    res = solve_pap(inst)
    if args.log:
        Path(args.log).write_text(steps_to_jsonl(inst, res.steps))
    print(f"matching {len(res.matching)}")
    print(f"steps {len(res.steps)}")
    print(render_solution(inst, res.links), end="")
    return 0


def _cmd_tap(args: argparse.Namespace) -> int:
    inst = _load(args.file)
    res = solve_tap_track(inst, eps=args.eps)
    print(f"root {res.root}")
    print(f"uplinks {res.uplink_count}")
    print(render_solution(inst, res.links), end="")
    return 0


def _cmd_exact(args: argparse.Namespace) -> int:
    inst = _load(args.file)
    budget = Budget(max_links=args.cap)
    res = solve_exact_fap(inst, budget=budget, all_optimal=args.all_optimal)
    print(f"opt {res.opt_value}")
    print(render_solution(inst, res.witness), end="")
    if args.all_optimal and res.all_optimal is not None:
        print(f"optimal-sets {len(res.all_optimal)}")
    return 0


def _cmd_match(args: argparse.Namespace) -> int:
    inst = _load(args.file)
    if not inst.is_paths_instance():
        raise InputError("matching initialization needs a disjoint-path instance")
    matching, unmatched = initial_partial_solution(inst)
    print(f"match {len(matching)}")
    by_id = inst.graph.edge_by_id
    for eid in sorted(matching):
        e = by_id[eid]
        print(f"l {e.u + 1} {e.v + 1}")
    print(f"unmatched {unmatched}")
    return 0


def _cmd_gen(args: argparse.Namespace) -> int:
    profile = GeneratorProfile(
        family=args.family,
        size=args.size,
        n=args.n,
        n_components=args.components,
        link_density=args.density,
    )
    inst = generate(args.seed, profile)
    comment = f"family={args.family} size={args.size} seed={args.seed}"
    if args.family == "random":
        comment = (
            f"family=random n={args.n} components={args.components}"
            f" density={args.density} seed={args.seed}"
        )
    text = render_instance(inst, comment=comment)
    if args.out:
        Path(args.out).write_text(text)
    else:
        print(text, end="")
    return 0


def _cmd_bench(args: argparse.Namespace) -> int:
    profiles = []
    for family in args.families.split(","):
        family = family.strip()
        if family == "random":
            profiles.append(
                GeneratorProfile(
                    family="random",
                    n=args.n,
                    n_components=args.components,
                    link_density=args.density,
                )
            )
        else:
            for size in args.sizes.split(","):
                profiles.append(GeneratorProfile(family=family, size=int(size)))
    seeds = [int(s) for s in args.seeds.split(",")]
    table = bench(profiles, seeds, with_opt=not args.no_opt, times=args.times)
    if args.out:
        Path(args.out).write_text(table)
    else:
        print(table, end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fapkit", description="forest augmentation solver")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="run both tracks, print the smaller solution")
    s.add_argument("file")
    s.add_argument("--eps", type=float, default=0.01)
    s.add_argument("--audit", action="store_true", help="replay the run against the exact oracle")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=_cmd_solve)

    s = sub.add_parser("pap", help="solve a disjoint-path instance")
    s.add_argument("file")
    s.add_argument("--log", help="write the step log as JSON lines")
    s.set_defaults(func=_cmd_pap)

    s = sub.add_parser("tap", help="solve via the tree augmentation track")
    s.add_argument("file")
    s.add_argument("--eps", type=float, default=0.01)
    s.set_defaults(func=_cmd_tap)

    s = sub.add_parser("exact", help="optimal solution by exhaustive search")
    s.add_argument("file")
    s.add_argument("--all-optimal", action="store_true", help="count every optimal link set")
    s.add_argument("--cap", type=int, default=22, help="largest link count the search accepts")
    s.set_defaults(func=_cmd_exact)

    s = sub.add_parser("match", help="initial leaf matching of a disjoint-path instance")
    s.add_argument("file")
    s.set_defaults(func=_cmd_match)

    s = sub.add_parser("gen", help="generate an instance")
    s.add_argument("--family", choices=FAMILIES, default="random")
    s.add_argument("--size", type=int, default=3)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--n", type=int, default=8)
    s.add_argument("--components", type=int, default=2)
    s.add_argument("--density", type=float, default=1.0)
    s.add_argument("--out")
    s.set_defaults(func=_cmd_gen)

    s = sub.add_parser("bench", help="solve generated instances, emit CSV")
    s.add_argument("--families", default="figure2,figure3")
    s.add_argument("--sizes", default="2,3")
    s.add_argument("--seeds", default="0")
    s.add_argument("--n", type=int, default=8)
    s.add_argument("--components", type=int, default=2)
    s.add_argument("--density", type=float, default=1.0)
    s.add_argument("--no-opt", action="store_true")
    s.add_argument("--times", action="store_true")
    s.add_argument("--out")
    s.set_defaults(func=_cmd_bench)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (InternalDefect, AssertionError) as exc:
        print(f"internal defect: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
