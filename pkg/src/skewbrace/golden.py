"""Reference tables shipped with the package (hand-transcribed counts)."""

from __future__ import annotations

import json
import math
from functools import lru_cache
from importlib import resources


@lru_cache(maxsize=None)
def load_table(name: str) -> dict:
    """Parse tables/<name>.json from the package data."""
    path = resources.files(__package__).joinpath("tables", f"{name}.json")
    return json.loads(path.read_text())


def braces_12() -> dict:
    """{(E, F): count} for braces of size 12."""
    t = load_table("braces_12")
    g = t["groups"]
    return {(g[i], g[j]): v for i, row in enumerate(t["rows"]) for j, v in enumerate(row)}


def totals_12p(r: int) -> dict:
    """{(E, F): count} for braces of size 12p, p = r mod 12."""
    t = load_table("totals_12p")
    g = t["groups"]
    rows = t["classes"][str(r)]["rows"]
    return {(g[i], g[j]): v for i, row in enumerate(rows) for j, v in enumerate(row)}


def grand_total_12p(r: int) -> int:
    return load_table("totals_12p")["classes"][str(r)]["total"]


def _kernel(short: str) -> int:
    return 12 if short == "x" else int(short[1:].rstrip("abcdefgh"))


def subtables_12p(r: int = 1) -> dict:
    """{(E, F): (row labels, col labels, values)} restricted to the kernels
    that occur for p = r mod 12 (kernel k needs 12/k to divide p - 1)."""
    D = math.gcd(12, r - 1)
    out = {}
    for t in load_table("subtables_12p")["tables"]:
        ri = [i for i, l in enumerate(t["rows"]) if D % (12 // _kernel(l)) == 0]
        ci = [j for j, l in enumerate(t["cols"]) if D % (12 // _kernel(l)) == 0]
        if not ri or not ci:
            continue
        vals = [[t["values"][i][j] for j in ci] for i in ri]
        out[(t["add"], t["mul"])] = ([t["rows"][i] for i in ri], [t["cols"][j] for j in ci], vals)
    return out


__all__ = ["load_table", "braces_12", "totals_12p", "grand_total_12p", "subtables_12p"]
