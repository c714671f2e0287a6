"""forge: build, reduce and check complexes with prescribed torsion.

Exit codes: 0 success, 1 verification failure, 2 bad input, 3 the
resampling colorer gave up.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from .coloring import ReductionError, ResamplingError, reduce
from .complex import ComplexError, degree_profile, read_complex, write_complex
from .construct import assemble_cyclic_marked, constants
from .homology import GroupStructure, homology, torsion
from .zoo import SumComplexSpec, random_complex, random_complex_p, sum_complex

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_RESAMPLE = 0, 1, 2, 3
CSV_FIELDS = ["d", "m", "vertices_initial", "vertices_reduced", "delta_initial",
              "num_colors", "torsion_ok", "seconds"]
DEFAULT_VERIFY_LIMIT = 500_000


class InputError(ValueError):
    pass


def parse_int(text: str) -> int:
    """Decimal integer of any length; ``a^b`` is accepted as a power."""
    text = text.strip().replace("_", "")
    try:
        if "^" in text:
            base, exp = text.split("^")
            return int(base) ** int(exp)
        return int(text)
    except ValueError:
        raise InputError(f"not an integer: {text!r}") from None


def parse_list(text: str) -> list[int]:
    return [parse_int(t) for t in text.split(",") if t.strip()]


def resolve_seed(seed: int | None) -> int:
    if seed is not None:
        return seed
    env = os.environ.get("FORGE_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise InputError(f"FORGE_SEED is not an integer: {env!r}") from None


def _group_from_args(args) -> list[int]:
    if (args.m is None) == (args.orders is None):
        raise InputError("give exactly one of -m or --orders")
    orders = [parse_int(args.m)] if args.m is not None else parse_list(args.orders)
    if args.m is not None and not orders:
        raise InputError("empty group order")
    for q in orders:
        if q < 2:
            raise InputError(f"cyclic orders must be >= 2, got {q}")
    return orders


def _build(d: int, orders: list[int]):
    from .complex import disjoint_union
    parts = [assemble_cyclic_marked(d, q) for q in orders]
    X = disjoint_union([p.complex for p in parts])
    marks, offset = [], 0
    for p in parts:
        marks.extend([v + offset for v in z] for z in p.marks)
        offset += p.complex.num_vertices
    return X, marks


def cmd_build(args) -> int:
    if args.d < 2:
        raise InputError("dimension must be >= 2")
    orders = _group_from_args(args)
    X, marks = _build(args.d, orders)
    const = constants(args.d)
    write_complex(X, args.out)
    sidecar = args.marks or _sidecar_path(args.out)
    with open(sidecar, "w") as fh:
        json.dump({"marks": marks, "constants": const.to_json()}, fh)
        fh.write("\n")
    order = math.prod(orders)
    log_order = math.log2(order) if order > 1 else 0.0
    print(f"vertices: {X.num_vertices}")
    print(f"max degree: {degree_profile(X).delta_max}")
    print(f"K: {const.K}")
    print(f"bound K*log2|G|: {const.K * log_order:.1f}")
    if args.verify:
        T = torsion(X, args.d - 1)
        print(f"torsion H_{args.d - 1}: {T}")
        if T != GroupStructure.from_cyclic(orders):
            print("torsion does not match the requested group", file=sys.stderr)
            return EXIT_VERIFY
    return EXIT_OK


def _sidecar_path(out: str) -> str:
    root, ext = os.path.splitext(out)
    return root + ".marks" + (ext or ".json")


def cmd_homology(args) -> int:
    X = read_complex(args.input)
    degrees = [args.i] if args.i is not None else range(max(X.dimension, 0) + 1)
    for i in degrees:
        if i < 0:
            raise InputError("homology degree must be nonnegative")
        H = homology(X, i, reduced=args.reduced)
        if args.json:
            print(json.dumps({"degree": i, **H.to_json()}))
        else:
            print(f"H_{i}: {H}")
    return EXIT_OK


def cmd_reduce(args) -> int:
    X = read_complex(args.input)
    if X.dimension < 2:
        raise InputError("reduction needs a complex of dimension >= 2")
    seed = resolve_seed(args.seed)
    Y, report = reduce(X, args.method, seed, K=args.K, max_rounds=args.max_rounds)
    write_complex(Y, args.out)
    if args.report:
        with open(args.report, "w") as fh:
            json.dump(report.to_json(), fh, indent=2)
            fh.write("\n")
    print(f"vertices: {report.input_vertices} -> {report.output_vertices}")
    print(f"torsion H_{X.dimension - 1}: {report.torsion_before} -> {report.torsion_after}")
    return EXIT_OK


def report_cell(d: int, m: int, method: str, seed: int, verify_limit: int) -> dict:
    row = {"d": d, "m": m}
    start = time.perf_counter()
    try:
        X, _ = _build(d, [m])
        verify = sum(X.f_vector) <= verify_limit
        Y, rep = reduce(X, method, seed, verify=verify)
        row.update(vertices_initial=X.num_vertices, vertices_reduced=Y.num_vertices,
                   delta_initial=degree_profile(X).delta_max, num_colors=rep.num_colors,
                   torsion_ok="true" if verify else "unverified")
    except (ReductionError, ResamplingError, ValueError) as exc:
        row.update(torsion_ok="false", error=str(exc))
    row["seconds"] = round(time.perf_counter() - start, 3)
    return row


def cmd_report(args) -> int:
    d_list = parse_list(args.d)
    m_list = parse_list(args.m) if args.m else []
    for d in d_list:
        if d < 2:
            raise InputError("dimensions must be >= 2")
    for m in m_list:
        if m < 2:
            raise InputError("orders must be >= 2")
    seed = resolve_seed(args.seed)
    cells = [(d, m) for m in m_list for d in d_list]
    job = [(d, m, args.method, seed, args.verify_limit) for d, m in cells]
    if args.jobs > 1 and len(job) > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            rows = list(pool.map(report_cell, *zip(*job)))
    else:
        rows = [report_cell(*j) for j in job]

    fields = CSV_FIELDS if args.timing else CSV_FIELDS[:-1]
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fields, extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            fh.write(buf.getvalue())
    _print_table(rows, fields)
    for row in rows:
        if "error" in row:
            print(f"d={row['d']} m={row['m']}: {row['error']}", file=sys.stderr)
    return EXIT_VERIFY if any(r["torsion_ok"] == "false" for r in rows) else EXIT_OK


def _print_table(rows, fields) -> None:
    shown = [[_short(r.get(f, "")) for f in fields] for r in rows]
    widths = [max([len(f)] + [len(s[i]) for s in shown]) for i, f in enumerate(fields)]
    print("  ".join(f.rjust(w) for f, w in zip(fields, widths)))
    for s in shown:
        print("  ".join(x.rjust(w) for x, w in zip(s, widths)))


def _short(value) -> str:
    s = str(value)
    if isinstance(value, int) and len(s) > 12:
        return f"~1e{len(s) - 1}"
    return s


def cmd_sum_complex(args) -> int:
    spec = SumComplexSpec(args.n, parse_list(args.set))
    X = sum_complex(spec)
    write_complex(X, args.out)
    print(f"vertices: {X.num_vertices}  top faces: {X.f_vector[-1]}  dimension: {X.dimension}")
    return EXIT_OK


def cmd_random(args) -> int:
    seed = resolve_seed(args.seed)
    if (args.faces is None) == (args.p is None):
        raise InputError("give exactly one of --faces or --p")
    if args.faces is not None:
        X = random_complex(args.n, args.d, args.faces, seed)
    else:
        X = random_complex_p(args.n, args.d, args.p, seed)
    write_complex(X, args.out)
    print(f"vertices: {X.num_vertices}  top faces: {len(X.faces[args.d]) if X.dimension >= args.d else 0}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="forge", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="construct a complex for a finite abelian group")
    b.add_argument("-d", type=int, required=True, help="dimension")
    b.add_argument("-m", help="cyclic order (decimal, any length)")
    b.add_argument("--orders", help="comma-separated cyclic orders")
    b.add_argument("-o", "--out", required=True)
    b.add_argument("--marks", help="sidecar path (default: <out>.marks.json)")
    b.add_argument("--verify", action="store_true", help="compute and check the torsion")
    b.set_defaults(func=cmd_build)

    h = sub.add_parser("homology", help="integral homology of a complex file")
    h.add_argument("input")
    h.add_argument("-i", type=int, help="degree (default: all)")
    h.add_argument("--reduced", action="store_true", help="reduced H_0")
    h.add_argument("--json", action="store_true")
    h.set_defaults(func=cmd_homology)

    r = sub.add_parser("reduce", help="shrink a complex by a pattern coloring")
    r.add_argument("input")
    r.add_argument("--method", choices=["greedy", "lll"], default="greedy")
    r.add_argument("--seed", type=int)
    r.add_argument("-K", type=int, help="degree constant for the lll method")
    r.add_argument("--max-rounds", type=int, default=10 ** 6)
    r.add_argument("-o", "--out", required=True)
    r.add_argument("--report", help="write the reduction report as JSON")
    r.set_defaults(func=cmd_reduce)

    t = sub.add_parser("report", help="table of construction and reduction sizes")
    t.add_argument("-d", default="2,3", help="comma-separated dimensions")
    t.add_argument("-m", default="", help="comma-separated orders, e.g. 10^10,10^25")
    t.add_argument("--method", choices=["greedy", "lll"], default="greedy")
    t.add_argument("--seed", type=int)
    t.add_argument("--csv", help="write the table as CSV")
    t.add_argument("--timing", action="store_true", help="include the seconds column")
    t.add_argument("--jobs", type=int, default=1)
    t.add_argument("--verify-limit", type=int, default=DEFAULT_VERIFY_LIMIT,
                   help="skip homology checks above this many faces")
    t.set_defaults(func=cmd_report)

    s = sub.add_parser("sum-complex", help="write a sum complex")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--set", required=True, help="comma-separated residues")
    s.add_argument("-o", "--out", required=True)
    s.set_defaults(func=cmd_sum_complex)

    q = sub.add_parser("random", help="write a random complex with full skeleton")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--d", type=int, required=True)
    q.add_argument("--faces", type=int)
    q.add_argument("--p", type=float)
    q.add_argument("--seed", type=int)
    q.add_argument("-o", "--out", required=True)
    q.set_defaults(func=cmd_random)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except ResamplingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESAMPLE
    except ReductionError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (InputError, ComplexError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
