"""Command-line front end: JSON I/O and the golden-table regression runner.

Exit codes: 0 on success, 1 on a golden-table mismatch or failed selftest,
2 on invalid input.  Output is deterministic for fixed input (sorted JSON
keys, fixed row ordering, no unseeded randomness).
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources

from .engine import GradedInvariants, quotient_report
from .hilbert import K3_TABLE, betti_table, bb_quotient, hilbert_report, k3_table
from .intmat import IntMatrix
from .lattices import (
    GLattice,
    Lattice,
    discriminant,
    discriminant_group,
    invariants,
    pushforward_quotient_lattice,
    signature,
)
from .profiles import jordan_profile
from .selftest import run_selftest
from .toric import (
    CyclicSingularity,
    hj_resolution,
    is_regular,
    quotient_fan,
    resolve,
    surface_chain,
)


class InputError(Exception):
    pass


def _load_json(path: str | None) -> dict:
    try:
        if path is None or path == "-":
            return json.load(sys.stdin)
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read JSON input: {exc}") from exc


def _golden(name: str) -> dict:
    ref = resources.files("quotcoh").joinpath("golden", f"{name}.json")
    return json.loads(ref.read_text(encoding="utf-8"))


def _lattice_payload(l: Lattice) -> dict:
    inv = invariants(l)
    return {
        "rank": inv.rank,
        "signature": list(inv.signature),
        "discriminant": discriminant(l),
        "discriminant_group": list(inv.discriminant_group),
        "even": inv.even,
    }


def _cmd_profile(args) -> tuple[int, dict]:
    data = _load_json(args.input)
    try:
        action = IntMatrix(data["action"])
        p = int(data["p"])
        prof = jordan_profile(action, p)
    except (KeyError, ValueError) as exc:
        raise InputError(str(exc)) from exc
    return 0, {
        "p": p,
        "counts": {str(q): c for q, c in prof.blocks},
        "dimension": prof.dimension(),
    }


def _cmd_lattice(args) -> tuple[int, dict]:
    data = _load_json(args.input)
    try:
        l = Lattice(IntMatrix(data["gram"]))
    except (KeyError, ValueError) as exc:
        raise InputError(str(exc)) from exc
    out = _lattice_payload(l)
    out["gram"] = l.gram.to_lists()
    return 0, out


def _cmd_quotient(args) -> tuple[int, dict]:
    data = _load_json(args.input)
    try:
        if args.action == "pushforward":
            gl = GLattice(
                gram=IntMatrix(data["gram"]),
                action=IntMatrix(data["action"]),
                p=int(data["p"]),
                allow_trivial=bool(data.get("allow_trivial", False)),
            )
            pushed = pushforward_quotient_lattice(gl)
            out = _lattice_payload(pushed)
            out["gram"] = pushed.gram.to_lists()
            return 0, out
        inv = GradedInvariants.from_json(data)
        report = quotient_report(inv, conjectural_split=args.conjectural_split)
        return 0, report.to_json()
    except (KeyError, ValueError) as exc:
        raise InputError(str(exc)) from exc


def _cmd_toric(args) -> tuple[int, dict]:
    try:
        weights = tuple(int(w) for w in args.weights.split(","))
        sing = CyclicSingularity(p=args.p, weights=weights)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    fan = quotient_fan(sing)
    resolved = resolve(fan)
    original_rays = set(fan.rays())
    added = sorted(r for r in resolved.rays() if r not in original_rays)
    out: dict = {
        "p": sing.p,
        "weights": list(weights),
        "rays_added": [list(r) for r in added],
        "maximal_cones": len(resolved.maximal),
        "regular": all(is_regular(c) for c in resolved.maximal),
    }
    if len(weights) == 2:
        a = (weights[1] * pow(weights[0], -1, sing.p)) % sing.p
        hj = hj_resolution(sing.p, a)
        chain = surface_chain(resolved, fan)
        if chain not in (hj.chain, hj.chain[::-1]):
            raise RuntimeError(
                f"resolution chain {chain} disagrees with the continued fraction {hj.chain}"
            )
        out["chain"] = list(hj.chain)
        out["exceptional_gram"] = hj.exceptional_gram.to_lists()
        out["det"] = abs(hj.exceptional_gram.det())
    return 0, out


def _cmd_hilbert(args) -> tuple[int, dict]:
    try:
        return 0, hilbert_report(args.p, args.m, conjectural_split=args.conjectural_split)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _cmd_k3(args) -> tuple[int, dict]:
    try:
        row = k3_table(args.p, args.kind)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    return 0, {
        "p": row.spec.p,
        "kind": row.spec.kind,
        "lattice": row.spec.lattice_name,
        "rank": row.invariants.rank,
        "signature": list(row.invariants.signature),
        "discriminant_group": list(row.invariants.discriminant_group),
        "singular_points": row.n_sing,
        "l_plus_2": row.spec.l_plus_2,
        "l_p_2": row.spec.l_p_2,
        "pushforward_verified": row.pushforward_verified,
    }


def _rows_k3(kind: str) -> list[dict]:
    rows = []
    for spec in K3_TABLE:
        if spec.kind != kind:
            continue
        row = k3_table(spec.p, spec.kind)
        rows.append(
            {
                "p": spec.p,
                "lattice": spec.lattice_name,
                "rank": row.invariants.rank,
                "signature": list(row.invariants.signature),
                "discriminant_group": list(row.invariants.discriminant_group),
                "singular_points": row.n_sing,
                "l_plus_2": spec.l_plus_2,
                "l_p_2": spec.l_p_2,
            }
        )
    return rows


def _rows_torsion2() -> list[dict]:
    rows = []
    for p, m in ((5, 2), (7, 2), (5, 3), (7, 3)):
        rep = hilbert_report(p, m)
        inv = rep["invariants"]
        l_plus_even = {
            str(d["k"]): d["l_plus"]
            for d in inv["degrees"]
            if d["k"] % 2 == 0 and 0 < d["k"] <= 2 * m and d["l_plus"]
        }
        pairs = {
            k: v for k, v in rep["report"]["odd_torsion_pairs"].items()
            if int(k) <= m  # the mirror partners k > n/2 repeat these
        }
        rows.append(
            {
                "p": p,
                "m": m,
                "l_plus_even": l_plus_even,
                "eta": rep["eta"],
                "odd_torsion_pairs": pairs,
            }
        )
    return rows


def _rows_betti() -> list[dict]:
    rows = []
    for p, m in ((5, 2), (7, 2), (5, 3), (7, 3)):
        table = betti_table(p, m)
        rows.append(
            {"p": p, "m": m, "b2": table.b2, "b4": table.b4, "b6": table.b6,
             "singular_points": table.n_sing}
        )
    return rows


def _rows_bb() -> list[dict]:
    rows = []
    for p, max_m in ((5, 4), (7, 6)):
        for m in range(2, max_m + 1):
            lattice, fujiki = bb_quotient(p, m)
            inv = invariants(lattice)
            rows.append(
                {
                    "p": p,
                    "m": m,
                    "rank": inv.rank,
                    "signature": list(inv.signature),
                    "discriminant_group": list(inv.discriminant_group),
                    "fujiki": fujiki.numerator if fujiki.denominator == 1 else str(fujiki),
                }
            )
    return rows


_TABLES = {
    "k3-symplectic": ("k3_symplectic", lambda: _rows_k3("symplectic")),
    "k3-nonsymplectic": ("k3_nonsymplectic", lambda: _rows_k3("non-symplectic")),
    "torsion2": ("torsion2", _rows_torsion2),
    "betti": ("betti", _rows_betti),
    "bb": ("bb", _rows_bb),
}

_COMPARED_KEYS = {
    "k3-symplectic": ("p", "rank", "signature", "discriminant_group", "singular_points", "l_plus_2", "l_p_2"),
    "k3-nonsymplectic": ("p", "rank", "signature", "discriminant_group", "singular_points", "l_plus_2", "l_p_2"),
    "torsion2": ("p", "m", "l_plus_even", "eta", "odd_torsion_pairs"),
    "betti": ("p", "m", "b2", "b4", "b6", "singular_points"),
    "bb": ("p", "m", "rank", "signature", "discriminant_group", "fujiki"),
}


def _cmd_tables(args) -> tuple[int, dict]:
    which = list(_TABLES) if args.which == "all" else [args.which]
    results = {}
    status = 0
    for table_id in which:
        if table_id not in _TABLES:
            raise InputError(f"unknown table {table_id!r}")
        golden_name, builder = _TABLES[table_id]
        expected_rows = _golden(golden_name)["rows"]
        computed_rows = builder()
        keys = _COMPARED_KEYS[table_id]
        diffs = []
        for want, got in zip(expected_rows, computed_rows):
            for key in keys:
                if want.get(key) != got.get(key):
                    diffs.append(
                        {"row": {k: want.get(k) for k in ("p", "m") if k in want},
                         "key": key, "expected": want.get(key), "computed": got.get(key)}
                    )
        if len(expected_rows) != len(computed_rows):
            diffs.append({"key": "row count", "expected": len(expected_rows),
                          "computed": len(computed_rows)})
        results[table_id] = {
            "rows": len(computed_rows),
            "match": not diffs,
            "diffs": diffs,
            "computed": computed_rows,
        }
        if diffs:
            status = 1
    return status, {"tables": results, "all_match": status == 0}


def _cmd_selftest(args) -> tuple[int, dict]:
    results = run_selftest(seed=args.seed, rounds=args.rounds)
    payload = {
        "seed": args.seed,
        "checks": [
            {"name": r.name, "passed": r.passed, "detail": r.detail} for r in results
        ],
        "all_passed": all(r.passed for r in results),
    }
    return (0 if payload["all_passed"] else 1), payload


def _tables_text(payload: dict) -> str:
    lines = []
    for table_id, result in payload["tables"].items():
        lines.append(f"== {table_id} ==")
        for row in result["computed"]:
            lines.append("  " + "  ".join(f"{k}={v}" for k, v in row.items()))
        lines.append("match" if result["match"] else f"MISMATCH: {result['diffs']}")
    lines.append("all tables match" if payload["all_match"] else "GOLDEN MISMATCH")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quotcoh",
        description="integral cohomology of prime-order cyclic quotients (exact arithmetic)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_io(p):
        p.add_argument("--input", help="JSON input file ('-' for stdin)")
        p.add_argument("--output", help="write JSON here instead of stdout")

    p = sub.add_parser("profile", help="Jordan profile of an order-p integer matrix")
    add_io(p)
    p.set_defaults(fn=_cmd_profile)

    p = sub.add_parser("lattice", help="discriminant, divisors and signature of a Gram matrix")
    add_io(p)
    p.set_defaults(fn=_cmd_lattice)

    p = sub.add_parser("quotient", help="pushforward lattice or full quotient report")
    p.add_argument("action", choices=("pushforward", "report"))
    p.add_argument("--conjectural-split", action="store_true",
                   help="include the (unproven) conjectural odd-torsion split")
    add_io(p)
    p.set_defaults(fn=_cmd_quotient)

    p = sub.add_parser("toric", help="resolve an isolated cyclic quotient singularity")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--weights", required=True, help="comma-separated weights, e.g. 1,2")
    p.add_argument("--output")
    p.set_defaults(fn=_cmd_toric)

    p = sub.add_parser("hilbert", help="quotient report for Hilbert schemes of K3 points")
    p.add_argument("--p", type=int, required=True, choices=(5, 7))
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--conjectural-split", action="store_true")
    p.add_argument("--report", default="all", choices=("all",))
    p.add_argument("--output")
    p.set_defaults(fn=_cmd_hilbert)

    p = sub.add_parser("k3", help="one row of the prime-order K3 quotient tables")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--kind", default="symplectic", choices=("symplectic", "non-symplectic"))
    p.add_argument("--output")
    p.set_defaults(fn=_cmd_k3)

    p = sub.add_parser("tables", help="recompute tables and diff against golden data")
    p.add_argument("--which", default="all", choices=tuple(_TABLES) + ("all",))
    p.add_argument("--format", default="json", choices=("json", "text"))
    p.add_argument("--output")
    p.set_defaults(fn=_cmd_tables)

    p = sub.add_parser("selftest", help="randomized property suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rounds", type=int, default=40)
    p.add_argument("--output")
    p.set_defaults(fn=_cmd_selftest)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        status, payload = args.fn(args)
    except InputError as exc:
        text = json.dumps({"error": str(exc)}, sort_keys=True, indent=2) + "\n"
        sys.stderr.write(text)
        return 2
    if args.command == "tables" and getattr(args, "format", "json") == "text":
        text = _tables_text(payload)
    else:
        text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    output = getattr(args, "output", None)
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
