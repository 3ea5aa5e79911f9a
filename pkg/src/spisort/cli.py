"""Command line front end.

Exit codes: 0 success, 2 bad parameters, 3 malformed or invalid instance file,
4 recovered order or counts disagree, 5 counting refused.
"""

from __future__ import annotations

import argparse
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Sequence

from . import spi
from .generators import (
    family_shape,
    gen_lower_bound_family,
    gen_random_chain_union,
    gen_random_poset,
    nearest_family_sizes,
)
from .harness import aggregate, format_record, run_record
from .poset import (
    DEFAULT_COUNT_LIMIT,
    CountLimitError,
    PosetInstance,
    chain_union_sizes,
    count_linear_extensions,
    log_extensions_chain_union,
)

EXIT_OK, EXIT_USAGE, EXIT_FILE, EXIT_MISMATCH, EXIT_REFUSED = 0, 2, 3, 4, 5


class UsageError(Exception):
    pass


def _err(msg: str) -> None:
    print(f"spisort: {msg}", file=sys.stderr)


def _int_c(c: float) -> int:
    if c != int(c):
        raise UsageError(f"family instances need an integer c, got {c}")
    return int(c)


def make_instance(kind: str, n: int, c: float, seed: int, w: int | None, density: float | None) -> PosetInstance:
    try:
        if kind == "family":
            ci = _int_c(c)
            try:
                family_shape(n, ci)
            except ValueError as exc:
                near = nearest_family_sizes(n, ci)
                hint = f"; nearest valid n: {', '.join(map(str, near))}" if near else ""
                raise UsageError(f"{exc}{hint}") from None
            return gen_lower_bound_family(n, ci, seed)
        if kind == "chain-union":
            if w is None:
                raise UsageError("chain-union needs --w")
            return gen_random_chain_union(n, w, seed)
        if kind == "random":
            if density is None:
                raise UsageError("random needs --density")
            return gen_random_poset(n, density, seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    raise UsageError(f"unknown kind {kind!r}")


def cmd_gen(args: argparse.Namespace) -> int:
    try:
        p = make_instance(args.kind, args.n, args.c, args.seed, args.w, args.density)
    except UsageError as exc:
        _err(str(exc))
        return EXIT_USAGE
    spi.write_file(p, args.out)
    if args.kind == "family":
        w, h = family_shape(args.n, int(args.c))
        print(f"n={p.n} w={w} h={h} out={args.out}")
    else:
        print(f"n={p.n} edges={len(p.cover_edges)} out={args.out}")
    return EXIT_OK


def _read(path: str) -> PosetInstance | None:
    try:
        return spi.read_file(path)
    except (OSError, UnicodeDecodeError, spi.SPIFormatError) as exc:
        _err(f"{path}: {exc}")
        return None


def cmd_sort(args: argparse.Namespace) -> int:
    if args.c < 1:
        _err("c must be >= 1")
        return EXIT_USAGE
    p = _read(args.input)
    if p is None:
        return EXIT_FILE
    if p.n == 0:
        rec = {"n": 0, "c": args.c, "ok": 1}
    else:
        rec = run_record(p, args.c, timing=args.timing)
    line = format_record(rec)
    print(line)
    if args.report:
        with open(args.report, "w", encoding="ascii") as fp:
            fp.write(line + "\n")
    if not rec["ok"]:
        _err("recovered order differs from the hidden order")
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    p = _read(args.input)
    if p is None:
        return EXIT_FILE
    print(f"ok n={p.n} edges={len(p.cover_edges)}")
    return EXIT_OK


def cmd_count(args: argparse.Namespace) -> int:
    p = _read(args.input)
    if p is None:
        return EXIT_FILE
    sizes = chain_union_sizes(p)
    closed = None
    if sizes:
        closed = math.factorial(p.n)
        for s in sizes:
            closed //= math.factorial(s)
    try:
        exact = count_linear_extensions(p, limit=args.limit)
    except CountLimitError as exc:
        if closed is None:
            _err(str(exc))
            return EXIT_REFUSED
        exact = None
    parts = [f"n={p.n}"]
    if exact is not None:
        parts.append(f"e={exact}")
    if closed is not None:
        parts.append(f"closed_form={closed}")
        parts.append(f"log2_e={log_extensions_chain_union(sizes):.6f}")
    print(" ".join(parts))
    if exact is not None and closed is not None and exact != closed:
        _err("brute-force count and closed form disagree")
        return EXIT_MISMATCH
    return EXIT_OK


def _parse_list(text: str, conv) -> list:
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ".." in part:
            a, b = part.split("..", 1)
            out.extend(range(int(a), int(b) + 1))
        else:
            out.append(conv(part))
    return out


def _bench_cell(cell: tuple) -> dict:
    kind, n, c, seed, w, density, timing = cell
    head = {"kind": kind, "seed": seed}
    try:
        p = make_instance(kind, n, c, seed, w, density)
    except UsageError as exc:
        return {**head, "n": n, "c": c, "skipped": 1, "reason": str(exc).replace(" ", "_")}
    return {**head, **run_record(p, c, timing=timing)}


def cmd_bench(args: argparse.Namespace) -> int:
    try:
        kinds = _parse_list(args.kinds, str)
        ns = _parse_list(args.ns, int)
        cs = _parse_list(args.cs, float)
        seeds = _parse_list(args.seeds, int)
    except ValueError as exc:
        _err(f"bad matrix argument: {exc}")
        return EXIT_USAGE
    if any(c < 1 for c in cs):
        _err("c must be >= 1")
        return EXIT_USAGE
    cells = [
        (k, n, c, s, args.w, args.density, args.timing)
        for k in kinds for n in ns for c in cs for s in seeds
    ]
    if not cells:
        _err("empty benchmark matrix")
        return EXIT_USAGE
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            records = list(pool.map(_bench_cell, cells))
    else:
        records = [_bench_cell(cell) for cell in cells]
    lines = [format_record(r) for r in records]
    lines += [format_record(a) for a in aggregate(records)]
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="ascii") as fp:
            fp.write(text)
    sys.stdout.write(text)
    bad = [r for r in records if not r.get("skipped") and not r.get("ok")]
    return EXIT_MISMATCH if bad else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="spisort", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate an SPI instance file")
    g.add_argument("--kind", choices=["family", "chain-union", "random"], required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--c", type=float, default=2.0)
    g.add_argument("--w", type=int)
    g.add_argument("--density", type=float)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("sort", help="preprocess and sort an instance, print counters")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--c", type=float, required=True)
    s.add_argument("--report")
    s.add_argument("--timing", action="store_true", help="add wall-clock time to the record")
    s.set_defaults(func=cmd_sort)

    v = sub.add_parser("verify", help="check an instance file")
    v.add_argument("--in", dest="input", required=True)
    v.set_defaults(func=cmd_verify)

    cnt = sub.add_parser("count", help="count linear extensions exactly")
    cnt.add_argument("--in", dest="input", required=True)
    cnt.add_argument("--limit", type=int, default=DEFAULT_COUNT_LIMIT)
    cnt.set_defaults(func=cmd_count)

    b = sub.add_parser("bench", help="run a benchmark matrix")
    b.add_argument("--kinds", default="family")
    b.add_argument("--ns", default="256,1024,4096")
    b.add_argument("--cs", default="1,2,3")
    b.add_argument("--seeds", default="0..9")
    b.add_argument("--w", type=int, default=8, help="chain count for chain-union cells")
    b.add_argument("--density", type=float, default=0.2, help="density for random cells")
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--timing", action="store_true")
    b.add_argument("--out")
    b.set_defaults(func=cmd_bench)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
