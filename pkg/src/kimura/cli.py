"""``engine``: run power, dimension, filtration and splitting checks on JSON
instance files.

Exit codes: 0 ok, 2 usage or schema error, 3 cap exceeded, 4 verification
failure, 5 inapplicable hypotheses.
"""

from __future__ import annotations

import argparse
import sys
import time
from math import factorial

from . import config
from .checks import jsonable
from .complexes import BlockTriangleInput, homology
from .errors import CapExceeded, EngineError, InapplicableError, SchemaError
from .filtration import filtration_report, vanishing_exponent, verify_main_theorem
from .group_algebra import GroupAlgebraElement, idempotent_system, multiply
from .powers import kimura_profile, schur_power, sym_power, wedge_power
from .serialize import Instance, chain_map_to_json, dims_to_json, dump, load_instance
from .symgroup import Partition, Permutation, enumerate_group, hook_dimension

EXIT_OK, EXIT_USAGE, EXIT_CAP, EXIT_FAILED, EXIT_INAPPLICABLE = 0, 2, 3, 4, 5


class VerificationFailed(Exception):
    def __init__(self, report: dict):
        super().__init__("verification failed")
        self.report = report


def _sign(value: str) -> str:
    aliases = {"+": "+", "wedge": "+", "plus": "+", "-": "-", "sym": "-", "minus": "-"}
    if value not in aliases:
        raise argparse.ArgumentTypeError(f"sign must be + or - (or wedge/sym), got {value!r}")
    return aliases[value]


def _partition(value: str) -> Partition:
    try:
        parts = tuple(int(p) for p in value.replace(" ", "").split(",") if p)
        return Partition(parts)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad partition {value!r}: {exc}") from None


def _fmt_dims(d) -> str:
    return "{" + ", ".join(f"{k}:{v}" for k, v in sorted((int(a), b) for a, b in d.items())) + "}" if d else "0"


def _table(headers: list[str], rows: list[list]) -> str:
    cells = [headers] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[j]) for r in cells) for j in range(len(headers))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


# ---------------------------------------------------------------- commands


def cmd_powers(inst: Instance, args) -> dict:
    C = inst.object(args.object)
    if args.kind == "schur":
        if args.partition is None:
            raise SchemaError("--partition is required for schur powers")
        P = schur_power(C, args.partition)
        spec = {"partition": args.partition.to_json()}
    else:
        if args.n is None:
            raise SchemaError("--n is required for wedge and sym powers")
        P = (wedge_power if args.kind == "wedge" else sym_power)(C, args.n)
        spec = {"n": args.n}
    H = homology(P)
    verdict = "vanishes" if P.is_zero() else "acyclic" if not H else "nonzero"
    return {"command": "powers", "object": args.object, "kind": args.kind, **spec,
            "dims": dims_to_json(P.dims), "total_dim": P.total_dim(),
            "homology": dims_to_json(H), "verdict": verdict}


def render_powers(r: dict) -> str:
    label = f"n={r['n']}" if "n" in r else "partition=" + ",".join(map(str, r["partition"]))
    return (f"{r['kind']} power of {r['object']} ({label})\n"
            f"  dims      {_fmt_dims(r['dims'])}  (total {r['total_dim']})\n"
            f"  homology  {_fmt_dims(r['homology'])}\n"
            f"  verdict   {r['verdict']}")


def cmd_dim(inst: Instance, args) -> dict:
    C = inst.object(args.object)
    p = kimura_profile(C)
    return {"command": "dim", "object": args.object, "homology": dims_to_json(homology(C)), **p.to_json()}


def render_dim(r: dict) -> str:
    rows = [["even", r["even_dimension"], r["even_witness"]], ["odd", r["odd_dimension"], r["odd_witness"]]]
    return (f"Kimura profile of {r['object']}  (homology {_fmt_dims(r['homology'])})\n"
            + _table(["part", "dimension", "first vanishing power"], rows)
            + f"\n  total dimension {r['dimension']}, witnesses verified: {r['verified']} ({r['witness_method']})")


def cmd_filtration(inst: Instance, args) -> dict:
    f = inst.map(args.map)
    report = filtration_report(f, args.m, args.sign, threads=args.threads)
    out = {"command": "filtration", "map": args.map, **report.to_json()}
    if not report.passed:
        raise VerificationFailed(out)
    return out


def render_filtration(r: dict) -> str:
    kind = "wedge" if r["sign"] == "+" else "symmetric"
    rows = []
    for lvl in r["levels"]:
        sc = lvl["scalar_check"]
        rows.append([lvl["i"], _fmt_dims(lvl["dims_I"]), _fmt_dims(lvl["dims_J"]), _fmt_dims(lvl["expected_dims"]),
                     "-" if sc is None else ("ok" if sc["u_d"] and sc["intertwining"] else "FAIL"), lvl["verdict"]])
    return (f"filtration of the {kind} power m={r['m']} along {r['map']}: "
            f"X {_fmt_dims(r['dims_X'])}, Y {_fmt_dims(r['dims_Y'])}, Z {_fmt_dims(r['dims_Z'])}\n"
            + _table(["level", "dims I_i", "dims J_i", "expected", "scalar", "verdict"], rows)
            + f"\n  power dims {_fmt_dims(r['power_dims'])}; telescoping {r['telescoping']}, "
              f"vandermonde {r['vandermonde']}, boundary {r['boundary']}\n  overall: {r['verdict']}")


def cmd_verify(inst: Instance, args) -> dict:
    f = inst.map(args.map)
    a = args.a if args.a is not None else vanishing_exponent(f.source, args.sign)
    if a is None:
        raise InapplicableError(f"no {'wedge' if args.sign == '+' else 'symmetric'} power of X vanishes")
    if args.b is not None:
        b = args.b
    else:
        from .filtration import ShortExactSequence

        b = vanishing_exponent(ShortExactSequence(f).Z, args.sign)
        if b is None:
            raise InapplicableError(f"no {'wedge' if args.sign == '+' else 'symmetric'} power of Z vanishes")
    v = verify_main_theorem(f, a, b, args.sign, threads=args.threads)
    out = {"command": "verify", "map": args.map, **jsonable(v.details), "verdict": "pass" if v.passed else "fail"}
    if not v.passed:
        raise VerificationFailed(out)
    return out


def render_verify(r: dict) -> str:
    kind = "wedge" if r["sign"] == "+" else "symmetric"
    return (f"{kind} powers along {r['map']}: a_X={r['a_X']}, b_Z={r['b_Z']}, m={r['m']}\n"
            f"  graded pieces acyclic: {r['pieces_acyclic']} (killed by {', '.join(str(k) for k in r['killing_factor'])})\n"
            f"  power of Y acyclic:   {r['power_of_Y_acyclic']}\n  verdict: {r['verdict']}")


def cmd_idempotents(inst: Instance | None, args) -> dict:
    n = args.n
    config.check_group(n)
    system = idempotent_system(n)
    one = GroupAlgebraElement.one(n)
    total = GroupAlgebraElement.zero(n)
    rows = []
    orthogonal = True
    group = enumerate_group(n)
    # conjugating by the Coxeter generators suffices for centrality
    gens = [Permutation.transposition(n, j, j + 1) for j in range(n - 1)]
    for lam, e in system:
        total = total + e
        idem = multiply(e, e) == e
        central = all(multiply(GroupAlgebraElement.of(g), e) == multiply(e, GroupAlgebraElement.of(g)) for g in gens)
        rows.append({"partition": lam.to_json(), "hook_dimension": hook_dimension(lam), "terms": len(e),
                     "idempotent": idem, "central": central})
    for a in range(len(system)):
        for b in range(a + 1, len(system)):
            if not multiply(system[a][1], system[b][1]).is_zero():
                orthogonal = False
    squares = sum(r["hook_dimension"] ** 2 for r in rows)
    complete = total == one
    ok = all(r["idempotent"] and r["central"] for r in rows) and orthogonal and complete and squares == len(group)
    out = {"command": "idempotents", "n": n, "rows": rows, "sum_of_squares": squares, "group_order": factorial(n),
           "orthogonal": orthogonal, "complete": complete, "verdict": "pass" if ok else "fail"}
    if not ok:
        raise VerificationFailed(out)
    return out


def render_idempotents(r: dict) -> str:
    rows = [[",".join(map(str, x["partition"])) or "()", x["hook_dimension"], x["terms"], x["idempotent"], x["central"]]
            for x in r["rows"]]
    return (f"central idempotents of Q[S_{r['n']}]\n"
            + _table(["partition", "dim", "terms", "idempotent", "central"], rows)
            + f"\n  sum of dim^2 = {r['sum_of_squares']} (n! = {r['group_order']}); "
              f"orthogonal {r['orthogonal']}; sum = 1: {r['complete']}\n  verdict: {r['verdict']}")


def cmd_split(inst: Instance, args) -> dict:
    from .complexes import schur_split

    task = inst.task(args.task)
    try:
        data = BlockTriangleInput(*(inst.map(task[k]) for k in "abcd"))
    except KeyError as exc:
        raise SchemaError(f"task {args.task!r} needs maps a, b, c and d") from exc
    except EngineError as exc:
        raise SchemaError(f"task {args.task!r}: {exc}") from exc
    t, rep = schur_split(data)
    out = {"command": "split", "task": args.task,
           "t": chain_map_to_json(t, source=_name_of(inst, data.b.source), target=_name_of(inst, data.c.target)),
           "cone_full_homology": dims_to_json(rep.cone_full), "cone_t_homology": dims_to_json(rep.cone_t),
           "cone_a_homology": dims_to_json(rep.cone_a), "block_identity": rep.block_identity,
           "verdict": "pass" if rep.passed else "fail"}
    if not rep.passed:
        raise VerificationFailed(out)
    return out


def _name_of(inst: Instance, C) -> str | dict:
    for name, obj in inst.objects.items():
        if obj == C:
            return name
    from .serialize import complex_to_json

    return complex_to_json(C)


def render_split(r: dict) -> str:
    blocks = "; ".join(f"deg {k}: {v}" for k, v in r["t"]["blocks"].items()) or "0"
    return (f"triangle splitting for task {r['task']}\n"
            f"  t = d - c a^-1 b   {blocks}\n"
            f"  H(cone full) {_fmt_dims(r['cone_full_homology'])}   H(cone t) {_fmt_dims(r['cone_t_homology'])}"
            f"   H(cone a) {_fmt_dims(r['cone_a_homology'])}\n"
            f"  block identity {r['block_identity']}\n  verdict: {r['verdict']}")


COMMANDS = {
    "powers": (cmd_powers, render_powers),
    "dim": (cmd_dim, render_dim),
    "filtration": (cmd_filtration, render_filtration),
    "verify": (cmd_verify, render_verify),
    "idempotents": (cmd_idempotents, render_idempotents),
    "split": (cmd_split, render_split),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--threads", type=int, default=1, metavar="N")
    common.add_argument("--cap-m", type=int, default=None, metavar="K", help="largest tensor power")
    common.add_argument("--cap-dim", type=int, default=None, metavar="D", help="largest total dimension")
    common.add_argument("--timings", action="store_true", help="report elapsed time")

    parser = argparse.ArgumentParser(prog="engine", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("powers", parents=[common], help="wedge, symmetric or Schur power of an object")
    p.add_argument("instance")
    p.add_argument("--object", required=True)
    p.add_argument("--kind", choices=["wedge", "sym", "schur"], required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--partition", type=_partition)

    p = sub.add_parser("dim", parents=[common], help="Kimura even/odd dimensions")
    p.add_argument("instance")
    p.add_argument("--object", required=True)

    p = sub.add_parser("filtration", parents=[common], help="filtration report along an injective map")
    p.add_argument("instance")
    p.add_argument("--map", required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--sign", type=_sign, default="+")

    p = sub.add_parser("verify", parents=[common], help="vanishing propagation along a short exact sequence")
    p.add_argument("instance")
    p.add_argument("--map", required=True)
    p.add_argument("--sign", type=_sign, default="+")
    p.add_argument("--a", type=int, default=None, help="vanishing exponent for X (default: smallest)")
    p.add_argument("--b", type=int, default=None, help="vanishing exponent for Z (default: smallest)")

    p = sub.add_parser("idempotents", parents=[common], help="central idempotents of Q[S_n]")
    p.add_argument("instance", nargs="?")
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("split", parents=[common], help="reduce a block triangle to its Schur complement")
    p.add_argument("instance")
    p.add_argument("--task", required=True)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    run, render = COMMANDS[args.command]

    def emit(report: dict) -> None:
        sys.stdout.write(dump(report) if args.json else render(report) + "\n")

    def fail(code: int, kind: str, message: str) -> int:
        print(f"engine: {message}", file=sys.stderr)
        if args.json:
            sys.stdout.write(dump({"command": args.command, "error": kind, "message": message, "exit_code": code}))
        return code

    changes = {}
    if args.cap_m is not None:
        changes["power_m"] = args.cap_m
    if args.cap_dim is not None:
        changes["total_dim"] = args.cap_dim
    start = time.perf_counter()
    with config.override(**changes):
        try:
            inst = load_instance(args.instance) if args.instance else None
            report = run(inst, args)
        except VerificationFailed as exc:
            emit(exc.report)
            return EXIT_FAILED
        except CapExceeded as exc:
            return fail(EXIT_CAP, "cap_exceeded", str(exc))
        except InapplicableError as exc:
            return fail(EXIT_INAPPLICABLE, "inapplicable", str(exc))
        except (EngineError, ValueError) as exc:
            return fail(EXIT_USAGE, type(exc).__name__, str(exc))
    if args.timings:
        report["elapsed_seconds"] = round(time.perf_counter() - start, 3)
    emit(report)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
