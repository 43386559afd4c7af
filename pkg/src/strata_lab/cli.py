"""Command line front end.

Every command prints one report ``{"command", "input_digest", "pass",
"result", "version"}``.  Exit status: 0 when the verdict passes, 1 when it
fails, 2 on unusable input.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Callable, Sequence

from . import __version__
from .cech import (
    ArrangementError,
    RegularityError,
    ResourceError,
    cech_sweep,
    check_regular_sequence,
    verify_koszul_conjecture,
)
from .scenario import ScenarioError, bundled, digest_bytes, load_correspondence, load_scenario
from .specseq import descent_ss
from .ssimplicial import (
    CorrespondenceError,
    SemiSimplicialError,
    StratumCorrespondence,
    check_thrifty,
    dual_complex,
)
from .toricoh import (
    ConeScenario,
    atiyah_table,
    blp2lines_table,
    cone_rationality_check,
    pn_blowup_table,
    top_cohomology_of_exceptional,
)

EXAMPLES = ("blp-2lines", "pn-blowup", "atiyah", "cone-rationality")


class InputError(Exception):
    pass


# commands ----------------------------------------------------------------------

def _degree(args, scenario) -> int:
    d = scenario.d_max if args.max_degree is None else args.max_degree
    if d < 0:
        raise InputError("--max-degree must be nonnegative")
    return d


def cmd_dualcx(args):
    sc = load_scenario(args.scenario)
    return sc.digest, dual_complex(sc.arrangement).to_json(), True


def cmd_thrifty(args):
    src, tgt = load_scenario(args.source), load_scenario(args.target)
    corr, raw = load_correspondence(args.map)
    verdict = check_thrifty(dual_complex(src.arrangement), dual_complex(tgt.arrangement), corr)
    return digest_bytes(src.digest.encode(), tgt.digest.encode(), raw), verdict.to_json(), verdict.thrifty


def cmd_cech(args):
    sc = load_scenario(args.scenario)
    d = _degree(args, sc)
    rep = check_regular_sequence(sc.arrangement, d)
    if not rep.regular:
        return sc.digest, {"regularity": rep.to_json(), "tables": []}, False
    tables = cech_sweep(sc.arrangement, d, require_regular=False)
    ok = all(t.passed for t in tables)
    return sc.digest, {"max_degree": d, "tables": [t.to_json() for t in tables]}, ok


def cmd_koszul(args):
    sc = load_scenario(args.scenario)
    d = _degree(args, sc)
    rep = verify_koszul_conjecture(sc.arrangement, d)
    reg = check_regular_sequence(sc.arrangement, d)
    return sc.digest, {"regular": reg.regular, **rep.to_json()}, rep.holds


def cmd_specseq(args):
    sc = load_scenario(args.scenario)
    d = _degree(args, sc)
    rep = check_regular_sequence(sc.arrangement, d)
    if not rep.regular:
        return sc.digest, {"regularity": rep.to_json(), "degrees": []}, False
    reports = [descent_ss(sc.arrangement, k) for k in range(d + 1)]
    return (sc.digest, {"max_degree": d, "degrees": [r.to_json(pages=args.pages) for r in reports]},
            all(r.passed for r in reports))


def cmd_regseq(args):
    sc = load_scenario(args.scenario)
    rep = check_regular_sequence(sc.arrangement, _degree(args, sc))
    return sc.digest, rep.to_json(), rep.regular


# appendix examples -------------------------------------------------------------------

def example_blp2lines(d_max: int) -> tuple[dict, bool]:
    table = blp2lines_table(d_max)
    down = load_scenario(bundled("blp2lines_downstairs.json")).arrangement
    up = load_scenario(bundled("blp2lines_upstairs.json")).arrangement
    verdict = check_thrifty(dual_complex(down), dual_complex(up),
                            StratumCorrespondence({"D1": "D1", "D2": "D2"}))
    h0_expected = [max(d - 1, 0) for d in range(d_max + 1)]
    total_h1 = table.total(1)
    ok = total_h1 == 1 and list(table.column(0)) == h0_expected and not verdict.thrifty
    result = {
        "table": table.to_json(),
        "total_h1": total_h1,
        "rational": total_h1 == 0,
        "thrifty": verdict.to_json(),
    }
    return result, ok


def example_pn_blowup(d_max: int) -> tuple[dict, bool]:
    rows = []
    for n in range(2, 6):
        t = pn_blowup_table(n, d_max)
        rows.append({"n": n, "top_h": top_cohomology_of_exceptional(n),
                     "total_top": t.total(1), "table": t.to_json()})
    return {"cases": rows}, all(r["top_h"] == 1 and r["total_top"] == 1 for r in rows)


def example_atiyah(d_max: int) -> tuple[dict, bool]:
    table = atiyah_table(d_max)
    src = load_scenario(bundled("atiyah_source.json")).arrangement
    tgt = load_scenario(bundled("atiyah_target.json")).arrangement
    labels = {lab: lab for lab in src.labels}
    verdict = check_thrifty(dual_complex(src), dual_complex(tgt), StratumCorrespondence(labels))
    ok = table.total(1) == 0 and not verdict.thrifty
    return {"table": table.to_json(), "h1_vanishes": table.total(1) == 0, "thrifty": verdict.to_json()}, ok


def example_cone(d_max: int, polarization=None, boundary=None) -> tuple[dict, bool]:
    if polarization is not None or boundary is not None:
        sc = ConeScenario(polarization or (1, 1), boundary or (0, 0), d_max)
        v = cone_rationality_check(sc)
        return {"polarization": list(sc.polarization), "boundary": list(sc.boundary), **v.to_json()}, v.holds
    cases = []
    expected = {(2, 1): None, (2, 0): (0, 1, 1)}
    ok = True
    for b, want in expected.items():
        v = cone_rationality_check(ConeScenario((1, 1), b, d_max))
        ok &= v.failure == want
        cases.append({"polarization": [1, 1], "boundary": list(b), **v.to_json()})
    return {"cases": cases}, ok


def _pair(text: str) -> tuple[int, int]:
    try:
        a, b = (int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'a,b', got {text!r}") from None
    return a, b


def cmd_examples(args):
    d = 10 if args.max_degree is None else args.max_degree
    if d < 0:
        raise InputError("--max-degree must be nonnegative")
    if args.name == "blp-2lines":
        result, ok = example_blp2lines(d)
    elif args.name == "pn-blowup":
        result, ok = example_pn_blowup(d)
    elif args.name == "atiyah":
        result, ok = example_atiyah(d)
    else:
        result, ok = example_cone(d, args.polarization, args.boundary)
    extra = f"{args.polarization}|{args.boundary}" if args.name == "cone-rationality" else ""
    digest = digest_bytes(f"{args.name}|{d}|{extra}".encode())
    return digest, {"example": args.name, "max_degree": d, **result}, ok


# rendering -------------------------------------------------------------------------

def render_text(report: dict) -> str:
    lines = [f"command: {report['command']}", f"pass: {report['pass']}",
             f"input_digest: {report['input_digest']}", f"version: {report['version']}"]

    def walk(obj, indent):
        pad = "  " * indent
        if isinstance(obj, dict):
            for k in sorted(obj):
                v = obj[k]
                if isinstance(v, (dict, list)) and v:
                    lines.append(f"{pad}{k}:")
                    walk(v, indent + 1)
                else:
                    lines.append(f"{pad}{k}: {v}")
        elif isinstance(obj, list):
            if all(isinstance(x, dict) and not any(isinstance(y, (dict, list)) for y in x.values())
                   for x in obj):
                keys = sorted({k for x in obj for k in x})
                cells = [[str(x.get(k, "")) for k in keys] for x in obj]
                widths = [max(len(k), *(len(r[i]) for r in cells)) for i, k in enumerate(keys)]
                lines.append(pad + "  ".join(k.rjust(w) for k, w in zip(keys, widths)))
                for r in cells:
                    lines.append(pad + "  ".join(c.rjust(w) for c, w in zip(r, widths)))
            else:
                for x in obj:
                    if isinstance(x, (dict, list)):
                        lines.append(f"{pad}-")
                        walk(x, indent + 1)
                    else:
                        lines.append(f"{pad}- {x}")

    lines.append("result:")
    walk(report["result"], 1)
    return "\n".join(lines) + "\n"


# entry point -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--output", help="write the report here instead of stdout")
    degree = argparse.ArgumentParser(add_help=False)
    degree.add_argument("--max-degree", type=int, default=None)

    parser = argparse.ArgumentParser(prog="strata-lab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dualcx", parents=[common], help="dual complex of a scenario")
    p.add_argument("scenario")
    p.set_defaults(run=cmd_dualcx)

    p = sub.add_parser("thrifty", parents=[common], help="compare two dual complexes")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--map", required=True, help="JSON with a label map and optional stratum map")
    p.set_defaults(run=cmd_thrifty)

    for name, fn, text in (("cech-verify", cmd_cech, "exactness of the Čech-type slices"),
                           ("koszul-verify", cmd_koszul, "Koszul double complex checks"),
                           ("regseq", cmd_regseq, "regular-sequence certificate")):
        p = sub.add_parser(name, parents=[common, degree], help=text)
        p.add_argument("scenario")
        p.set_defaults(run=fn)

    p = sub.add_parser("specseq", parents=[common, degree], help="descent spectral sequences")
    p.add_argument("scenario")
    p.add_argument("--pages", action="store_true", help="include every page")
    p.set_defaults(run=cmd_specseq)

    ex = sub.add_parser("examples", help="worked examples")
    exsub = ex.add_subparsers(dest="action", required=True)
    p = exsub.add_parser("run", parents=[common, degree])
    p.add_argument("name", choices=EXAMPLES)
    p.add_argument("--polarization", type=_pair, default=None, help="cone-rationality only, 'a,b'")
    p.add_argument("--boundary", type=_pair, default=None, help="cone-rationality only, 'a,b'")
    p.set_defaults(run=cmd_examples)
    return parser


def _command_name(args) -> str:
    if args.command == "examples":
        return f"examples run {args.name}"
    return args.command


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    run: Callable = args.run
    try:
        digest, result, ok = run(args)
    except (ScenarioError, InputError, ArrangementError, RegularityError, ResourceError,
            CorrespondenceError, SemiSimplicialError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report = {
        "command": _command_name(args),
        "input_digest": digest,
        "pass": bool(ok),
        "result": result,
        "version": __version__,
    }
    if args.format == "json":
        text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    else:
        text = render_text(report)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
