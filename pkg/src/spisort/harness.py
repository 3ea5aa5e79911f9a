"""Run records for the CLI and benchmark matrix."""

from __future__ import annotations

import math
import time
from collections import defaultdict
from typing import Any

from .poset import PosetInstance, chain_union_sizes, log_extensions_chain_union
from .sorter import ExtensionViolationError, sort_instance

RECORD_FIELDS = (
    "n", "c", "w", "c0", "antichains", "antichain_elems", "y", "greedy_chains",
    "partial_queries", "linear_queries", "linear_merge", "linear_loop1",
    "linear_loop2", "steps", "log2_e", "partial_ratio", "linear_ratio", "ok",
)


def run_record(p: PosetInstance, c: float, timing: bool = False) -> dict[str, Any]:
    """Sort ``p`` once and collect the counters reported by ``sort`` and ``bench``."""
    t0 = time.perf_counter()
    try:
        idx, res = sort_instance(p, c)
    except ExtensionViolationError:
        return {"n": p.n, "c": c, "ok": 0}
    d = idx.decomposition
    rec: dict[str, Any] = {
        "n": p.n,
        "c": c,
        "w": d.w,
        "c0": len(d.c0),
        "antichains": len(d.antichains),
        "antichain_elems": len(d.antichain_elements),
        "y": len(d.chain_cover_elements),
        "greedy_chains": len(d.chain_cover),
        "partial_queries": res.partial_queries,
        "linear_queries": res.linear_queries,
        "linear_merge": res.phases["merge"],
        "linear_loop1": res.phases["loop1"],
        "linear_loop2": res.phases["loop2"],
        "steps": res.steps,
    }
    sizes = chain_union_sizes(p)
    if sizes:
        log_e = log_extensions_chain_union(sizes)
        rec["log2_e"] = round(log_e, 6)
        rec["partial_ratio"] = round(res.partial_queries / p.n ** (1 + 1 / c), 6)
        rec["linear_ratio"] = round(res.linear_queries / (c * max(1.0, log_e)), 6)
    rec["ok"] = int(res.order == list(p.hidden_order))
    if timing:
        rec["wall_ms"] = round(1000 * (time.perf_counter() - t0), 3)
    return rec


def format_record(rec: dict[str, Any]) -> str:
    return " ".join(f"{k}={_fmt(v)}" for k, v in rec.items())


def _fmt(v: Any) -> str:
    if isinstance(v, float):
        return f"{v:g}" if v == int(v) and abs(v) < 1e15 else repr(v)
    return str(v)


def aggregate(records: list[dict[str, Any]]) -> list[dict[str, Any]]:
    """Mean ratios per ``(kind, c, n)`` and their drift from the next smaller ``n``."""
    groups: dict[tuple, list[dict[str, Any]]] = defaultdict(list)
    for r in records:
        if "linear_ratio" in r:
            groups[(r.get("kind", ""), r["c"], r["n"])].append(r)
    out = []
    last: dict[tuple, dict[str, Any]] = {}
    for key in sorted(groups):
        kind, c, n = key
        rs = groups[key]
        row: dict[str, Any] = {
            "aggregate": kind,
            "c": c,
            "n": n,
            "runs": len(rs),
            "mean_partial_ratio": round(sum(r["partial_ratio"] for r in rs) / len(rs), 6),
            "mean_linear_ratio": round(sum(r["linear_ratio"] for r in rs) / len(rs), 6),
        }
        prev = last.get((kind, c))
        if prev is not None:
            for f in ("partial", "linear"):
                a, b = prev[f"mean_{f}_ratio"], row[f"mean_{f}_ratio"]
                row[f"{f}_drift"] = round(b / a, 6) if a > 0 else math.inf
            row["from_n"] = prev["n"]
        last[(kind, c)] = row
        out.append(row)
    return out
