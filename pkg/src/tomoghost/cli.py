"""Command-line entry point.  Every command prints one JSON document."""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import SCHEMA_VERSION, __version__
from .bounds import (
    DEFAULT_BIT_CAP,
    INCONCLUSIVE,
    guaranteed_threshold_scan,
    pigeonhole_certificate,
)
from .constructions import (
    GhostPair,
    coprime_census,
    hypercube_ghost,
    paper_example_m5,
    polygon_ghost,
    select_directions,
    zeta_lower_check,
)
from .lattice import (
    DirectionSet,
    Grid,
    PointConfiguration,
    TomographyError,
    canonicalize_direction,
    validate_direction_set,
)
from .pte import PTESolution, ghost_to_pte2, reduce_to_pte1, suggest_alpha, verify_pte
from .search import DEFAULT_BUDGET, BudgetExceeded, min_ghost, uniqueness_check, ugon_check
from .xray import count_lines_bound, count_lines_exact, tomographically_equivalent, xray

log = logging.getLogger("tomoghost")

EXIT_CODES = {"ok": 0, "invalid-input": 2, "inconclusive": 3, "internal-error": 4}


@dataclass
class CommandResult:
    status: str
    payload: dict
    diagnostics: list[str] = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]


class InputError(Exception):
    pass


# -- input helpers -------------------------------------------------------------------


def _read_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _grid_shape(text: str) -> list[int]:
    try:
        return [int(x) for x in text.lower().split("x")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a shape like 6x5, got {text!r}") from None


def _fraction(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational like 1/2, got {text!r}") from None
    return value


def _load_points(path: str) -> PointConfiguration:
    obj = _read_json(path)
    try:
        return PointConfiguration.from_json(obj)
    except (KeyError, TypeError) as exc:
        raise InputError(f"{path}: expected {{'d': int, 'points': [[int, ...], ...]}} ({exc})") from None


def _load_directions(path: str) -> DirectionSet:
    obj = _read_json(path)
    try:
        return DirectionSet.from_json(obj)
    except (KeyError, TypeError) as exc:
        raise InputError(f"{path}: expected {{'d': int, 'directions': [[int, ...], ...]}} ({exc})") from None


def _load_pair(path: str) -> GhostPair:
    obj = _read_json(path)
    try:
        return GhostPair.from_json(obj)
    except (KeyError, TypeError) as exc:
        raise InputError(f"{path}: expected a ghost pair with keys F, G, S ({exc})") from None


def _load_solution(path: str) -> PTESolution:
    obj = _read_json(path)
    try:
        return PTESolution.from_json(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: expected a solution with keys r, degree, X, Y ({exc})") from None


def _grid(args) -> Grid:
    return Grid(tuple(args.grid), None if args.offset is None else tuple(args.offset))


# -- commands ----------------------------------------------------------------------


def cmd_xray(args):
    F = _load_points(args.points)
    return CommandResult("ok", xray(F, canonicalize_direction(args.direction)).to_json())


def cmd_verify_ghost(args):
    pair = _load_pair(args.pair)
    eq = tomographically_equivalent(pair.F, pair.G, pair.S)
    payload = {
        "verified": pair.verified,
        "equivalence": eq.to_json(),
        "sizes": [len(pair.F), len(pair.G)],
        "disjoint": not pair.F.intersection(pair.G).items,
    }
    return CommandResult("ok", payload)


def cmd_construct(args):
    if args.kind == "hypercube":
        return CommandResult("ok", hypercube_ghost(_load_directions(args.directions)).to_json())
    if args.kind == "polygon":
        cert = polygon_ghost(args.m)
        payload = cert.to_json()
        payload["float_check"] = cert.float_check()
        return CommandResult("ok", payload)
    return CommandResult("ok", paper_example_m5().to_json())


def cmd_select_directions(args):
    return CommandResult("ok", select_directions(args.m, args.d).to_json())


def cmd_coprime_census(args):
    payload = coprime_census(args.p, args.d, method=args.method).to_json()
    z = zeta_lower_check(args.p, args.d)
    payload.update(exceeds_half=z.exceeds_half, inverse_zeta=z.inverse_zeta, deviation=z.deviation)
    return CommandResult("ok", payload)


def cmd_count_lines(args):
    s = args.direction
    return CommandResult(
        "ok", {"exact": count_lines_exact(s, args.n, args.d), "lemma1_bound": count_lines_bound(s, args.n, args.d)}
    )


def cmd_random_directions(args):
    seed = getattr(args, "seed", 0)
    rng = random.Random(seed)
    for _ in range(10_000):
        vecs = [[rng.randint(-args.max_entry, args.max_entry) for _ in range(args.d)] for _ in range(args.m)]
        if any(not any(v) for v in vecs):
            continue
        try:
            S = validate_direction_set(vecs, args.d)
        except TomographyError:
            continue
        payload = S.to_json()
        payload["seed"] = seed
        return CommandResult("ok", payload)
    return CommandResult("inconclusive", {"error": "no valid direction set drawn", "seed": seed})


def cmd_bounds(args):
    if args.kind == "certificate":
        S = _load_directions(args.directions) if args.directions else None
        rep = pigeonhole_certificate(
            args.m, args.d, args.epsilon, S=S, n=args.n, bit_cap=args.bit_cap, method=args.method
        )
        status = "inconclusive" if rep.verdict == INCONCLUSIVE else "ok"
        return CommandResult(status, rep.to_json())
    scan = guaranteed_threshold_scan(args.d, args.epsilon, args.m_from, args.m_to, bit_cap=args.bit_cap)
    return CommandResult("ok", scan.to_json())


def cmd_search(args):
    if args.kind == "min-ghost":
        out = min_ghost(_load_directions(args.directions), _grid(args), args.kmax, args.budget, getattr(args, "threads", 1))
        return CommandResult("ok" if out.exhausted else "inconclusive", out.to_json(), list(out.warnings))
    if args.kind == "unique":
        F = _load_points(args.points)
        S = _load_directions(args.directions)
        return CommandResult("ok", uniqueness_check(F, S, _grid(args), budget=args.budget).to_json())
    return CommandResult("ok", ugon_check(_load_points(args.points), _load_directions(args.directions)).to_json())


def cmd_pte(args):
    if args.kind == "from-ghost":
        return CommandResult("ok", ghost_to_pte2(_load_pair(args.pair)).to_json())
    sol = _load_solution(args.solution)
    if args.kind == "verify":
        return CommandResult("ok", verify_pte(sol).to_json())
    alpha = tuple(args.alpha) if args.alpha else suggest_alpha(sol)
    if len(alpha) != 2:
        raise InputError("alpha needs exactly two integers")
    payload = reduce_to_pte1(sol, alpha).to_json()
    payload["alpha"] = list(alpha)
    return CommandResult("ok", payload)


# -- parser -----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    # SUPPRESS keeps subparsers from overwriting values given before the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", default=argparse.SUPPRESS, help="write the JSON result here instead of stdout")
    common.add_argument(
        "--seed", type=int, default=argparse.SUPPRESS, help="seed for randomized helpers (recorded in their output)"
    )
    common.add_argument(
        "--threads", type=int, default=argparse.SUPPRESS, help="worker processes for the search engine (default 1)"
    )

    parser = argparse.ArgumentParser(prog="tomoghost", description=__doc__, parents=[common])
    parser.add_argument(
        "--version", action="version", version=f"tomoghost {__version__} (schema {SCHEMA_VERSION})"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("xray", parents=[common], help="X-ray of a point configuration")
    p.add_argument("--points", required=True)
    p.add_argument("--direction", required=True, type=_int_list)
    p.set_defaults(func=cmd_xray)

    p = sub.add_parser("verify-ghost", parents=[common], help="check a ghost pair (reads stdin by default)")
    p.add_argument("--pair", default="-")
    p.set_defaults(func=cmd_verify_ghost)

    p = sub.add_parser("construct", parents=[common], help="explicit switching components")
    csub = p.add_subparsers(dest="kind", required=True)
    q = csub.add_parser("hypercube", parents=[common])
    q.add_argument("--directions", required=True)
    q = csub.add_parser("polygon", parents=[common])
    q.add_argument("--m", type=int, required=True)
    csub.add_parser("paper-example", parents=[common])
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("select-directions", parents=[common], help="coprime direction selection")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.set_defaults(func=cmd_select_directions)

    p = sub.add_parser("coprime-census", parents=[common], help="count relatively prime tuples")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--method", choices=["mobius", "gcd", "both"], default="mobius")
    p.set_defaults(func=cmd_coprime_census)

    p = sub.add_parser("count-lines", parents=[common], help="lines of a direction meeting [n]^d")
    p.add_argument("--direction", required=True, type=_int_list)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.set_defaults(func=cmd_count_lines)

    p = sub.add_parser("random-directions", parents=[common], help="draw a random valid direction set")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--max-entry", type=int, default=3)
    p.set_defaults(func=cmd_random_directions)

    p = sub.add_parser("bounds", parents=[common], help="pigeonhole counting certificate")
    bsub = p.add_subparsers(dest="kind", required=True)
    q = bsub.add_parser("certificate", parents=[common])
    q.add_argument("--m", type=int)
    q.add_argument("--d", type=int)
    q.add_argument("--epsilon", type=_fraction)
    q.add_argument("--directions")
    q.add_argument("--n", type=int)
    q.add_argument("--bit-cap", type=int, default=DEFAULT_BIT_CAP)
    q.add_argument("--method", choices=["auto", "exact", "log2"], default="auto")
    q = bsub.add_parser("scan", parents=[common])
    q.add_argument("--d", type=int, required=True)
    q.add_argument("--epsilon", type=_fraction, required=True)
    q.add_argument("--m-from", type=int, required=True)
    q.add_argument("--m-to", type=int, required=True)
    q.add_argument("--bit-cap", type=int, default=DEFAULT_BIT_CAP)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("search", parents=[common], help="exhaustive ghost and reconstruction search")
    ssub = p.add_subparsers(dest="kind", required=True)
    for name in ("min-ghost", "unique", "ugon"):
        q = ssub.add_parser(name, parents=[common])
        q.add_argument("--directions", required=True)
        if name != "ugon":
            q.add_argument("--grid", type=_grid_shape, required=True)
            q.add_argument("--offset", type=_int_list)
            q.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
        if name == "min-ghost":
            q.add_argument("--kmax", type=int, required=True)
        else:
            q.add_argument("--points", required=True)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("pte", parents=[common], help="Prouhet-Tarry-Escott solutions")
    psub = p.add_subparsers(dest="kind", required=True)
    q = psub.add_parser("from-ghost", parents=[common])
    q.add_argument("--pair", default="-")
    q = psub.add_parser("verify", parents=[common])
    q.add_argument("--solution", default="-")
    q = psub.add_parser("reduce", parents=[common])
    q.add_argument("--solution", default="-")
    q.add_argument("--alpha", type=_int_list, help="a1,a2 (default: a heuristic injective choice)")
    p.set_defaults(func=cmd_pte)
    return parser


def dispatch(argv: list[str] | None = None) -> CommandResult:
    """Parse ``argv`` and run the command.  Usage errors exit via argparse with code 2."""
    return _execute(build_parser().parse_args(argv))


def _execute(args) -> CommandResult:
    try:
        return args.func(args)
    except (TomographyError, InputError) as exc:
        return CommandResult("invalid-input", {"error": str(exc), "kind": type(exc).__name__}, [str(exc)])
    except BudgetExceeded as exc:
        return CommandResult("inconclusive", {"error": str(exc), "kind": "BudgetExceeded"}, [str(exc)])
    except Exception as exc:  # noqa: BLE001 - every other failure is ours
        log.debug("internal error", exc_info=True)
        return CommandResult("internal-error", {"error": str(exc), "kind": type(exc).__name__}, [str(exc)])


def render(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    result = _execute(args)
    for note in result.diagnostics:
        log.warning(note)
    text = render(result.payload)
    output = getattr(args, "output", None)
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
