"""Command line entry point: ``nielsenlab <subcommand> ...``.

Every report is a JSON object carrying ``schema_version`` and the budgets in
force.  Exit status: 0 on success, 2 on invalid input, 3 when a budget or
cap stops a computation (partial results are still printed when defined).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import constants as cst
from . import nielsen, normalize, sampling, symplectic
from .groups import FiniteGroup, GroupSpecError, UnsupportedOperation, _split_top, build, closure_mask
from .invariants import invariants, lattice_of
from .lattice import DEFAULT_MAX_ORDER, BudgetExceeded, enumerate_subgroups

SCHEMA_VERSION = 1
EXIT_OK, EXIT_INVALID, EXIT_BUDGET = 0, 2, 3


class InvalidInput(ValueError):
    pass


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True)


def _group(args) -> FiniteGroup:
    g = build(args.group)
    if g.order > args.max_order:
        raise BudgetExceeded(f"group order {g.order} exceeds --max-order {args.max_order}")
    return g


def parse_tuple(g: FiniteGroup, text: str) -> tuple[int, ...]:
    """Comma separated element ids or labels; commas inside brackets belong to labels."""
    tokens = [t for t in _split_top(text, ",") if t.strip()]
    if not tokens:
        raise InvalidInput("empty tuple")
    return tuple(g.parse_element(t) for t in tokens)


def parse_ints(text: str) -> list[int]:
    try:
        return [int(float(x)) if "e" in x.lower() else int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InvalidInput(f"expected comma separated integers, got {text!r}") from None


def _count(text: str) -> int:
    value = float(text)
    if value != int(value) or value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text!r}")
    return int(value)


def _labels(g: FiniteGroup, t) -> list[str]:
    return [g.label(x) for x in t]


# ---------------------------------------------------------------------------
# Subcommands


def cmd_invariants(args) -> dict:
    g = _group(args)
    skip = tuple(s.strip() for s in (args.skip or "").split(",") if s.strip())
    unknown = set(skip) - {"ic_tilde", "d_tilde"}
    if unknown:
        raise InvalidInput(f"cannot skip {sorted(unknown)}")
    rep = invariants(g, skip=skip)
    out = rep.to_json()
    out["chain_holds"] = rep.chain_holds()
    return out


def cmd_lattice(args) -> dict:
    g = _group(args)
    return enumerate_subgroups(g, budget=args.cap, max_order=args.max_order).to_json()


def cmd_orbits(args) -> dict:
    g = _group(args)
    if args.n < 1:
        raise InvalidInput("--n must be >= 1")
    lat = lattice_of(g)
    kwargs = {"seed": args.seed}
    if args.cap is not None:
        kwargs["cap"] = args.cap
    return nielsen.classify(g, args.n, lat, **kwargs).to_json()


def cmd_redundant(args) -> tuple[dict, int]:
    g = _group(args)
    t = parse_tuple(g, args.tuple)
    if not 1 <= args.k < len(t):
        raise InvalidInput("need 1 <= k < n")
    res = nielsen.is_redundant(g, t, args.k, cap=args.cap or 1_000_000)
    out = res.to_json()
    out.update(source=list(t), k=args.k)
    if res.endpoint is not None:
        out["endpoint_labels"] = _labels(g, res.endpoint)
    return out, EXIT_OK if res.complete else EXIT_BUDGET


def cmd_normalize(args) -> dict:
    g = _group(args)
    t = parse_tuple(g, args.tuple)
    targets = parse_tuple(g, args.targets) if args.targets else None
    if args.mode == "epi":
        if targets is None:
            targets = normalize.min_generators(g, closure_mask(g, range(g.order)))
        form = normalize.canonicalize_epi(g, t, targets)
    elif args.mode == "abelian":
        form = normalize.dunwoody_abelian(g, t, targets)
    else:
        a = parse_tuple(g, args.normal) if args.normal else None
        data = normalize.exact_sequence(g, a)
        if args.mode == "exseq":
            form = normalize.exseq_redundancy(g, t, data)
        else:
            form = normalize.jordan_canonical(g, t, data)
    out = form.to_json(g)
    out["verified"] = normalize.verify_form(g, form)
    return out


def cmd_verify_witness(args) -> dict:
    g = _group(args)
    data = json.loads(Path(args.witness).read_text())
    source = target = None
    if isinstance(data, dict) and "result" in data:
        data = data["result"]  # a full report from normalize or redundant
    if isinstance(data, dict):
        source = data.get("source")
        target = data.get("target", data.get("endpoint"))
        data = data["witness"]
    if args.tuple:
        source = parse_tuple(g, args.tuple)
    if args.endpoint:
        target = parse_tuple(g, args.endpoint)
    if source is None:
        raise InvalidInput("no source tuple: pass --tuple or a witness file with 'source'")
    moves = nielsen.witness_from_json(data)
    source = tuple(int(x) for x in source)
    end = nielsen.replay(g, moves, source)
    ok = nielsen.verify_witness(g, source, moves, target, check_image=True)
    return {"source": list(source), "endpoint": list(end),
            "claimed_endpoint": list(target) if target is not None else None,
            "moves": len(moves), "valid": ok}


def cmd_constants(args) -> dict:
    policy = cst.JordanPolicy.from_file(args.jordan) if args.jordan else cst.DEFAULT_POLICY
    if args.m < 1:
        raise InvalidInput("--m must be >= 1")
    return cst.report(args.m, policy, args.b).to_json()


def cmd_sp_reduce(args) -> dict:
    w = parse_ints(args.w)
    if len(w) != 2 * args.g:
        raise InvalidInput(f"--w needs {2 * args.g} entries")
    m = symplectic.sp_reduce(w)
    image = symplectic.matvec(m, w)
    return {"g": args.g, "w": w, "matrix": m, "image": image,
            "check": image == [1] + [0] * (2 * args.g - 1) and symplectic.is_symplectic(m)}


def cmd_stabilize(args) -> dict:
    moduli = parse_ints(args.moduli)
    if ";" in args.v:
        rows = [parse_ints(r) for r in args.v.split(";")]
    else:
        flat = parse_ints(args.v)
        r = len(moduli)
        if len(flat) != 2 * args.g * r:
            raise InvalidInput(f"--v needs {2 * args.g} x {r} entries")
        rows = [flat[i * r:(i + 1) * r] for i in range(2 * args.g)]
    return symplectic.stabilize(rows, args.g, moduli).to_json()


def cmd_walk(args) -> dict:
    g = _group(args)
    if args.start:
        start = parse_tuple(g, args.start)
    else:
        gens = normalize.min_generators(g, closure_mask(g, range(g.order)))
        start = tuple(gens) + (0,) * (args.n - len(gens))
        if len(start) != args.n:
            raise InvalidInput(f"--n must be at least d(G) = {len(gens)} without --start")
    cfg = sampling.WalkConfig(g, args.n, start, args.steps, args.burn_in, args.seed,
                              args.laziness, args.cap or 2_000_000)
    rep = sampling.walk(cfg).to_json()
    if not args.counts:
        rep.pop("counts")
    return rep


COMMANDS = {
    "invariants": cmd_invariants, "lattice": cmd_lattice, "orbits": cmd_orbits,
    "redundant": cmd_redundant, "normalize": cmd_normalize, "verify-witness": cmd_verify_witness,
    "constants": cmd_constants, "sp-reduce": cmd_sp_reduce, "stabilize": cmd_stabilize,
    "walk": cmd_walk,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "table"), default="json")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--cap", type=_count, default=None, help="state or subgroup budget")
    common.add_argument("--max-order", type=_count, default=DEFAULT_MAX_ORDER)
    common.add_argument("--threads", type=int, default=1,
                        help="accepted for compatibility; work is vectorized in one process")

    p = argparse.ArgumentParser(prog="nielsenlab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        return sub.add_parser(name, parents=[common], help=help_text)

    s = add("invariants", "rank and incompressibility invariants")
    s.add_argument("--group", required=True)
    s.add_argument("--skip", help="comma list from ic_tilde,d_tilde")
    s = add("lattice", "subgroup lattice")
    s.add_argument("--group", required=True)
    s = add("orbits", "classify orbits on n-tuples")
    s.add_argument("--group", required=True)
    s.add_argument("--n", type=int, required=True)
    s = add("redundant", "decide redundancy of a tuple")
    s.add_argument("--group", required=True)
    s.add_argument("--tuple", required=True)
    s.add_argument("--k", type=int, default=1)
    s = add("normalize", "move a tuple to a normal form")
    s.add_argument("--group", required=True)
    s.add_argument("--tuple", required=True)
    s.add_argument("--mode", choices=("epi", "abelian", "exseq", "jordan"), default="epi")
    s.add_argument("--targets", help="target generators (epi, abelian)")
    s.add_argument("--normal", help="elements of the normal abelian subgroup (exseq, jordan)")
    s = add("verify-witness", "replay a move sequence")
    s.add_argument("--group", required=True)
    s.add_argument("--tuple")
    s.add_argument("--witness", required=True)
    s.add_argument("--endpoint")
    s = add("constants", "explicit thresholds for dimension m")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--jordan", help="JSON object mapping m to J(m)")
    s.add_argument("--b", type=int, default=1000)
    s = add("sp-reduce", "symplectic matrix sending a primitive vector to u_1")
    s.add_argument("--g", type=int, required=True)
    s.add_argument("--w", required=True)
    s = add("stabilize", "kill the last hyperbolic pair of a vector in A^(2g)")
    s.add_argument("--g", type=int, required=True)
    s.add_argument("--moduli", required=True)
    s.add_argument("--v", required=True, help="rows separated by ';' or 2g*r values row-major")
    s = add("walk", "lazy random walk of Nielsen moves")
    s.add_argument("--group", required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--steps", type=_count, default=10**5)
    s.add_argument("--burn-in", type=_count, default=0)
    s.add_argument("--laziness", type=float, default=0.5)
    s.add_argument("--start")
    s.add_argument("--counts", action="store_true", help="include per-tuple counts")
    return p


def _table(obj, indent: str = "") -> str:
    lines = []
    for k in sorted(obj):
        v = obj[k]
        if isinstance(v, dict):
            lines.append(f"{indent}{k}:")
            lines.append(_table(v, indent + "  "))
        else:
            lines.append(f"{indent}{k}: {json.dumps(v) if isinstance(v, (list, type(None))) else v}")
    return "\n".join(lines)


def _emit(report: dict, fmt: str) -> None:
    print(dumps(report) if fmt == "json" else _table(report))


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    envelope = {"schema_version": SCHEMA_VERSION, "command": args.command,
                "budgets": {"cap": args.cap, "max_order": args.max_order, "seed": args.seed,
                            "threads": args.threads}}
    status = EXIT_OK
    try:
        result = COMMANDS[args.command](args)
        if isinstance(result, tuple):
            result, status = result
        envelope["result"] = result
    except BudgetExceeded as exc:
        envelope["error"] = {"kind": "budget", "message": str(exc)}
        partial = exc.partial
        if partial is not None:
            envelope["partial"] = _partial_json(partial)
        status = EXIT_BUDGET
    except (GroupSpecError, InvalidInput, UnsupportedOperation, ValueError, KeyError,
            FileNotFoundError, json.JSONDecodeError) as exc:
        envelope["error"] = {"kind": "invalid", "message": str(exc)}
        if isinstance(exc, GroupSpecError):
            envelope["error"]["field"] = exc.field
        status = EXIT_INVALID
    _emit(envelope, args.format)
    if "error" in envelope:
        print(f"error: {envelope['error']['message']}", file=sys.stderr)
    return status


def _partial_json(partial):
    if isinstance(partial, (list, tuple)) and partial and hasattr(partial[0], "members"):
        return [list(h.members) for h in partial]
    try:
        json.dumps(partial)
        return partial
    except TypeError:
        return repr(partial)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
