"""
DefCoh - Command Line

    defcoh run <scenario> [--q ...] [--hbar ...] [--bound Dx,Dy] [--order K]
                          [--window order=o,deg=d] [--seed n]
                          [--format json|csv|text] [--out path] [--timings]
    defcoh star --pairs "(dx,dy)" --order 6 --check assoc --bound 4
    defcoh cohomology --algebra qp --q zeta:5 --arity 1 --bidegree 0,0
    defcoh ep-fuzz --count 200 --max-dim 6 --max-len 5 --seed 42

Exit status: 0 when every check passes (NONE-AT-WINDOW included), 1 on a
FAIL, 2 on invalid parameters, 3 when a report cannot be written.
"""

import json
import logging
import sys
from argparse import ArgumentParser, Namespace, RawTextHelpFormatter
from typing import Dict, List, Optional

from pydantic import ValidationError

from .core.eulerpoincare import DEFAULT_FUZZ_COUNT, DEFAULT_MAX_DIM, DEFAULT_MAX_LENGTH, DEFAULT_SEED, fuzz
from .core.exceptions import DefCohError, InvalidParameters, IOFailure
from .core.hochschild import CochainWindow, PolyDiffCochain, window_cohomology_dims
from .core.starprod import (
    DEFAULT_ORDER,
    associativity_defect,
    gm_star,
    moyal_star,
    parse_pairs,
    quantum_plane_star,
    star_commutator,
    weyl_star,
)
from .scenarios import OutputFormat, Scenario, ScenarioName, emit, run
from .scenarios.quantum_plane import first_cohomology_dim, is_central_bidegree, plane_algebra, second_cohomology_dim

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INVALID = 2
EXIT_IO = 3

ALGEBRAS = ("poly", "moyal", "weyl", "qp")


def _pair(text: str, what: str):
    parts = text.split(",")
    try:
        if len(parts) != 2:
            raise ValueError
        return (int(parts[0]), int(parts[1]))
    except ValueError as exc:
        raise InvalidParameters(f"{what} must look like a,b, got {text!r}") from exc


def _write(payload: Dict[str, object], path: Optional[str]) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)
    except OSError as exc:
        raise IOFailure(f"cannot write {path}: {exc}") from exc


# Subcommands


def cmd_run(args: Namespace) -> int:
    options = {
        "name": args.scenario,
        "q": args.q,
        "hbar": args.hbar,
        "bound": args.bound,
        "order": args.order,
        "window": args.window,
        "seed": args.seed,
        "count": args.count,
        "max_dim": args.max_dim,
        "max_len": args.max_len,
        "workers": args.workers,
    }
    try:
        scenario = Scenario(**{k: v for k, v in options.items() if v is not None})
    except ValidationError as exc:
        raise InvalidParameters(f"scenario {args.scenario}: {exc.errors()[0]['msg']}") from exc
    report = run(scenario)
    emit(report, OutputFormat(args.format), args.out, args.timings)
    return report.exit_code


def cmd_star(args: Namespace) -> int:
    star = gm_star(parse_pairs(args.pairs), args.order, "cli")
    payload: Dict[str, object] = {"pairs": args.pairs, "order": args.order, "check": args.check}
    if args.check == "assoc":
        result = associativity_defect(star, (args.bound, args.bound))
        payload.update(
            {
                "bound": [args.bound, args.bound],
                "passed": result.passed,
                "checked": result.checked,
                "failed_order": result.order,
                "triple": [list(m) for m in result.triple] if result.triple else None,
            }
        )
        passed = result.passed
    else:
        R = star.ring
        x, y = R.gens[0], R.gens[1]
        payload["x*y - y*x"] = PolyDiffCochain.element(star_commutator(star, x, y)).render()
        passed = True
    _write(payload, args.out)
    return EXIT_OK if passed else EXIT_FAIL


STARS = {"moyal": moyal_star, "weyl": weyl_star, "qp": quantum_plane_star}


def _graded_qp_row(q: str, arity: int, bidegree) -> Dict[str, object]:
    """Quantum plane at a numeric q: H^n by bidegree, no window needed."""
    algebra = plane_algebra(q)
    if arity == 0:
        dim = 1 if is_central_bidegree(bidegree, algebra.root_order) else 0
    elif arity == 1:
        dim = first_cohomology_dim(algebra, bidegree)[1]
    elif arity == 2:
        dim = second_cohomology_dim(algebra, bidegree)
    else:
        dim = 0
    return {"arity": arity, "bidegree": list(bidegree), "window": "graded", "dim": dim, "witnesses": []}


def cmd_cohomology(args: Namespace) -> int:
    bidegree = _pair(args.bidegree, "bidegree")
    if args.algebra == "qp" and args.q is not None:
        row = _graded_qp_row(args.q, args.arity, bidegree)
    else:
        window = CochainWindow.parse(args.window, args.arity, bidegree) if args.window else None
        m = None if args.algebra == "poly" else STARS[args.algebra](args.order)
        row = window_cohomology_dims(m, args.arity, bidegree, window).to_row()
    row["algebra"] = args.algebra
    _write(row, args.out)
    return EXIT_OK


def cmd_ep_fuzz(args: Namespace) -> int:
    rows = fuzz(args.count, args.max_dim, args.max_len, args.seed, args.workers)
    payload = {
        "parameters": {"count": args.count, "max_dim": args.max_dim, "max_len": args.max_len, "seed": args.seed},
        "rows": [row.to_row() for row in rows],
        "passed": all(row.passed for row in rows),
    }
    _write(payload, args.out)
    return EXIT_OK if payload["passed"] else EXIT_FAIL


# Parser


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog="defcoh", description=__doc__, formatter_class=RawTextHelpFormatter)
    parser.add_argument("--log-level", default="WARNING", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run a named scenario and emit its report")
    p.add_argument("scenario", choices=[s.value for s in ScenarioName])
    p.add_argument("--q")
    p.add_argument("--hbar")
    p.add_argument("--bound", help="Dx,Dy")
    p.add_argument("--order", type=int)
    p.add_argument("--window", help="order=o,deg=d")
    p.add_argument("--seed", type=int)
    p.add_argument("--count", type=int)
    p.add_argument("--max-dim", type=int)
    p.add_argument("--max-len", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--format", default=OutputFormat.JSON.value, choices=[f.value for f in OutputFormat])
    p.add_argument("--out")
    p.add_argument("--timings", action="store_true", help="include wall-time per check")
    p.set_defaults(handler=cmd_run)

    p = sub.add_parser("star", help="check a Groenewold-Moyal star product")
    p.add_argument("--pairs", required=True, help='e.g. "(dx,dy);(x*dx,y*dy)"')
    p.add_argument("--order", type=int, default=DEFAULT_ORDER)
    p.add_argument("--check", choices=["assoc", "commutator"], default="assoc")
    p.add_argument("--bound", type=int, default=3)
    p.add_argument("--out")
    p.set_defaults(handler=cmd_star)

    p = sub.add_parser("cohomology", help="cohomology dimension at one arity and bidegree")
    p.add_argument("--algebra", choices=ALGEBRAS, default="poly")
    p.add_argument("--q", help="quantum plane parameter; graded computation when given")
    p.add_argument("--arity", type=int, required=True)
    p.add_argument("--bidegree", required=True, help="r,s")
    p.add_argument("--window", help="order=o,deg=d")
    p.add_argument("--order", type=int, default=2, help="truncation order of the star product")
    p.add_argument("--out")
    p.set_defaults(handler=cmd_cohomology)

    p = sub.add_parser("ep-fuzz", help="Euler-Poincaré fuzz rows as JSON")
    p.add_argument("--count", type=int, default=DEFAULT_FUZZ_COUNT)
    p.add_argument("--max-dim", type=int, default=DEFAULT_MAX_DIM)
    p.add_argument("--max-len", type=int, default=DEFAULT_MAX_LENGTH)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--format", default="json", choices=["json"])
    p.add_argument("--out")
    p.set_defaults(handler=cmd_ep_fuzz)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=getattr(logging, args.log_level), format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.handler(args)
    except InvalidParameters as exc:
        logger.error("invalid parameters: %s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except IOFailure as exc:
        logger.error("%s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except DefCohError as exc:
        logger.error("%s: %s", type(exc).__name__, exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
