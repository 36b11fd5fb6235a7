"""Command-line interface.

Subcommands write JSON (``schema: 1``, floats with 17 significant digits)
except ``levels``, which writes CSV.  Exit status: 0 success, 1 failed
verification, 2 usage error, 3 non-physical state.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import __version__
from .clifford import CONVENTIONS, build_gamma_tower, max_anticommuting_set
from .discord import DEFAULT_BUDGET as DISCORD_BUDGET
from .discord import NonPhysicalState, discord_closed, evaluate_discord
from .entropy import EntropySpec
from .gmqd import DEFAULT_BUDGET as GMQD_BUDGET
from .gmqd import evaluate_gmqd
from .region import classify, extremal_values, ppt_spectrum, sample_level_surface
from .search import SEED_ENV, default_seed
from .state import GbssSpec, closed_form_spectrum, full_spectrum, is_physical, partial_transpose, realize

SCHEMA = 1
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NONPHYSICAL = 0, 1, 2, 3


class UsageError(ValueError):
    pass


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    return obj


def _encode(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list)) for v in obj):
            return "[" + ", ".join(_encode(v, indent, level) for v in obj) + "]"
        items = [pad + _encode(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return json.dumps(str(obj))
        text = format(obj, ".17g")
        if all(c not in text for c in ".en"):
            text += ".0"
        return text
    return json.dumps(obj)


def dumps(payload: dict) -> str:
    """JSON text with ``schema`` first and floats at 17 significant digits."""
    return _encode(_plain({"schema": SCHEMA, **payload}), 2, 0) + "\n"


def _complex_matrix(mat) -> dict:
    mat = np.asarray(mat)
    return {"re": mat.real.tolist(), "im": mat.imag.tolist()}


def _emit(text: str, path: str | None) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# argument handling
# ---------------------------------------------------------------------------


def _vector(text: str | None, name: str):
    if text is None:
        return None
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"--{name} must be a comma-separated list of numbers") from None


def _spec_from_args(args) -> GbssSpec:
    try:
        if args.state is not None:
            if any(v is not None for v in (args.n, args.m, args.t, args.x, args.y)):
                raise UsageError("--state cannot be combined with --n/--m/--t/--x/--y")
            return GbssSpec.from_json(args.state)
        if args.n is None or args.t is None:
            raise UsageError("give --state or at least --n and --t")
        m = args.n if args.m is None else args.m
        return GbssSpec(args.n, m, _vector(args.t, "t"), _vector(args.x, "x"), _vector(args.y, "y"))
    except UsageError:
        raise
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"malformed state descriptor: {exc}") from None


def _seed(args) -> int:
    return default_seed() if args.seed is None else args.seed


def _entropy(args) -> EntropySpec:
    try:
        return EntropySpec.parse(args.entropy)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _require_physical(spec: GbssSpec) -> None:
    ok, margins = is_physical(spec)
    if not ok:
        raise NonPhysicalState(margins)


def _state_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, help="qubits on A (N = 2^n)")
    p.add_argument("--m", type=int, help="qubits on B (M = 2^m); defaults to n")
    p.add_argument("--t", help="correlation vector, 2n+1 comma-separated values")
    p.add_argument("--x", help="local vector on A")
    p.add_argument("--y", help="local vector on B")
    p.add_argument("--state", help="JSON descriptor {n, m, t[, x, y]} inline or as a file path")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--output", "-o", help="output file (default stdout)")
    p.add_argument(
        "--convention", choices=CONVENTIONS, default="tower", help="gamma convention on A (default tower)"
    )
    p.add_argument("--seed", type=lambda s: int(s, 0), help=f"RNG seed (default ${SEED_ENV} or {default_seed():#x})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gbss", description="Discord and geometry of generalized Bloch sphere states.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gamma", help="gamma matrices and identity checks")
    p.add_argument("--d", type=int, help="even number of generators (default 2n)")
    p.add_argument("--n", type=int, help="qubits; gives d = 2n")
    _common(p)

    p = sub.add_parser("state", help="closed-form and numerical spectrum with region tags")
    _state_args(p)
    _common(p)

    p = sub.add_parser("discord", help="classical correlation and discord")
    _state_args(p)
    _common(p)
    p.add_argument("--entropy", default="vn", help="vn, renyi:q or tsallis:q (default vn)")
    p.add_argument("--oracle-budget", type=int, default=DISCORD_BUDGET, help=f"random bases for the oracle; 0 skips it (default {DISCORD_BUDGET})")

    p = sub.add_parser("gmqd", help="geometric discord")
    _state_args(p)
    _common(p)
    p.add_argument("--oracle-budget", type=int, default=GMQD_BUDGET, help=f"random bases for the oracle; 0 skips it (default {GMQD_BUDGET})")

    p = sub.add_parser("region", help="extremal geometric discord over the physical set and the l1 ball")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int)
    _common(p)

    p = sub.add_parser("levels", help="CSV samples of a geometric-discord level surface")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int)
    p.add_argument("--D", type=float, required=True, dest="D", help="target value")
    p.add_argument("--count", type=int, default=30)
    _common(p)

    p = sub.add_parser("verify", help="run the acceptance criteria")
    p.add_argument("--quick", action="store_true", help="reduced sample counts")
    p.add_argument("--only", help="comma-separated criterion numbers")
    _common(p)
    return parser


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_gamma(args) -> int:
    if args.d is not None and args.n is not None:
        raise UsageError("give --d or --n, not both")
    d = args.d if args.d is not None else 2 * (args.n or 1)
    try:
        gs = build_gamma_tower(d)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    res = gs.residuals()
    payload = {
        "command": "gamma",
        "d": gs.d,
        "dim": gs.dim,
        "parity": list(gs.parity),
        "gammas": [_complex_matrix(g) for g in gs.gammas],
        "residuals": res,
        "identities_hold": max(res.values()) <= 1e-12,
    }
    if args.convention != "tower":
        if gs.dim != 4:
            raise UsageError(f"convention {args.convention!r} is only defined for dimension 4")
        payload["convention"] = args.convention
        payload["gammas"] = [_complex_matrix(g) for g in max_anticommuting_set(4, args.convention)]
    _emit(dumps(payload), args.output)
    return EXIT_OK


def cmd_state(args) -> int:
    spec = _spec_from_args(args)
    rho = realize(spec, args.convention)
    numeric = np.linalg.eigvalsh(rho.data)
    pt = np.linalg.eigvalsh(partial_transpose(rho, "B").data)
    payload = {"command": "state", "state": spec.to_dict(), "convention": args.convention}
    payload["spectrum_numerical"] = numeric
    payload["physical_numerical"] = bool(numeric.min() >= -1e-12)
    payload["pt_spectrum_numerical"] = pt
    if not spec.has_local_terms:
        values, mult = closed_form_spectrum(spec)
        closed = full_spectrum(spec)
        pt_closed = np.sort(np.repeat(ppt_spectrum(spec), mult))
        payload["spectrum_closed"] = closed
        payload["multiplicity"] = mult
        payload["spectrum_deviation"] = float(np.abs(closed - numeric).max())
        payload["pt_spectrum_closed"] = pt_closed
        payload["pt_spectrum_deviation"] = float(np.abs(pt_closed - pt).max())
        payload["region"] = classify(spec).to_dict()
    _emit(dumps(payload), args.output)
    return EXIT_OK


def cmd_discord(args) -> int:
    spec = _spec_from_args(args)
    ent = _entropy(args)
    if spec.has_local_terms:
        raise UsageError("discord closed forms need x = y = 0")
    _require_physical(spec)
    if args.oracle_budget < 0:
        raise UsageError("--oracle-budget must be >= 0")
    seed = _seed(args)
    if args.oracle_budget == 0:
        report = discord_closed(spec, ent, args.convention)
    else:
        report = evaluate_discord(spec, ent, args.oracle_budget, seed, args.convention)
    payload = {
        "command": "discord",
        "state": spec.to_dict(),
        "convention": args.convention,
        "seed": seed,
        "oracle_budget": args.oracle_budget,
        **report.to_dict(),
    }
    _emit(dumps(payload), args.output)
    return EXIT_OK


def cmd_gmqd(args) -> int:
    spec = _spec_from_args(args)
    _require_physical(spec)
    if args.oracle_budget < 0:
        raise UsageError("--oracle-budget must be >= 0")
    seed = _seed(args)
    report = evaluate_gmqd(spec, max(args.oracle_budget, 1), seed, args.convention, oracle=args.oracle_budget > 0)
    payload = {
        "command": "gmqd",
        "state": spec.to_dict(),
        "convention": args.convention,
        "seed": seed,
        "oracle_budget": args.oracle_budget,
        **report.to_dict(),
    }
    _emit(dumps(payload), args.output)
    return EXIT_OK


def _nm(args) -> tuple[int, int]:
    m = args.n if args.m is None else args.m
    if args.n < 1 or m < args.n:
        raise UsageError("need 1 <= n <= m")
    return args.n, m


def cmd_region(args) -> int:
    n, m = _nm(args)
    payload = {"command": "region", **extremal_values(n, m).to_dict()}
    _emit(dumps(payload), args.output)
    return EXIT_OK


def cmd_levels(args) -> int:
    n, m = _nm(args)
    if args.D < 0 or args.count < 1:
        raise UsageError("need --D >= 0 and --count >= 1")
    samples = sample_level_surface(n, m, args.D, args.count, seed=_seed(args))
    k = 2 * n + 1
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([f"t{i + 1}" for i in range(k)] + ["D", "physical", "ppt", "separable"])
    for s in samples:
        r = s.report
        writer.writerow(
            [format(v, ".17g") for v in s.t + 0.0]
            + [format(s.D, ".17g"), int(r.physical), int(r.ppt), int(r.separable)]
        )
    _emit(buf.getvalue(), args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .acceptance import CRITERIA, run_all

    only = None
    if args.only:
        try:
            only = [int(v) for v in args.only.split(",")]
        except ValueError:
            raise UsageError("--only takes comma-separated criterion numbers") from None
        if not set(only) <= set(CRITERIA):
            raise UsageError(f"criteria are numbered {min(CRITERIA)}..{max(CRITERIA)}")
    results = run_all(quick=args.quick, only=only, echo=lambda line: print(line, file=sys.stderr))
    payload = {
        "command": "verify",
        "quick": args.quick,
        "passed": all(r.passed for r in results),
        "criteria": [
            {"number": r.number, "name": r.name, "passed": r.passed, "tolerance": r.tolerance, "measured": r.measured}
            for r in results
        ],
    }
    _emit(dumps(payload), args.output)
    return EXIT_OK if payload["passed"] else EXIT_FAIL


COMMANDS = {
    "gamma": cmd_gamma,
    "state": cmd_state,
    "discord": cmd_discord,
    "gmqd": cmd_gmqd,
    "region": cmd_region,
    "levels": cmd_levels,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"gbss: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NonPhysicalState as exc:
        print(f"gbss: {exc}", file=sys.stderr)
        print("margins: " + ", ".join(format(v, ".17g") for v in exc.margins), file=sys.stderr)
        return EXIT_NONPHYSICAL


if __name__ == "__main__":
    sys.exit(main())
