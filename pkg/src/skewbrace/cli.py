"""Command-line front end: group data, brace tables, counts and oracle checks.

Exit codes: 0 success, 1 verification diff (or unfinished verification),
2 bad arguments or invalid group input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from typing import Optional, Sequence

from . import golden
from .counting import CountReport, PrimeSpec, count_np, label_structures
from .groups import GroupError, make_group
from .holomorph import BudgetExceeded
from .morphisms import automorphism_group, homs_to_cyclic, orbits_and_stabilizers
from .oracle import compare_reports, default_catalog, enumerate_braces_bruteforce, plain_catalog

FORMATS = ("md", "json", "csv")
VERIFY_SIZES = (12, 20, 30, 84)


# -- rendering ------------------------------------------------------------------------


def md_table(header: Sequence, rows: Sequence[Sequence]) -> str:
    lines = ["| " + " | ".join(str(h) for h in header) + " |", "|" + "---|" * len(header)]
    lines += ["| " + " | ".join(str(v) for v in row) + " |" for row in rows]
    return "\n".join(lines)


def csv_table(header: Sequence, rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue().rstrip("\n")


def render(fmt: str, sections: list[tuple[str, Sequence, list]], payload: dict) -> str:
    """sections: (title, header, rows); payload is the json form."""
    if fmt == "json":
        return json.dumps(payload, indent=2)
    out = []
    for title, header, rows in sections:
        if fmt == "md":
            out.append(f"### {title}\n\n{md_table(header, rows)}" if title else md_table(header, rows))
        else:
            out.append((f"# {title}\n" if title else "") + csv_table(header, rows))
    return "\n\n".join(out)


def block_section(report: CountReport, title: str) -> tuple[str, list, list]:
    """E x F table with a column-total row and the grand total in the corner."""
    names = report.groups
    rows = report.block_rows()
    body = [[e] + r + [sum(r)] for e, r in zip(names, rows)]
    body.append(["total"] + [sum(c) for c in zip(*rows)] + [report.total])
    return title, ["E \\ F"] + list(names) + ["total"], body


def subtable_sections(report: CountReport) -> list[tuple[str, list, list]]:
    out = []
    for E in report.groups:
        for F in report.groups:
            rows, cols, vals = report.subtable(E, F)
            if rows:
                body = [[str(r)] + v for r, v in zip(rows, vals)]
                out.append((f"{E} -> {F}", ["N \\ G"] + [str(c) for c in cols], body))
    return out


# -- subcommands ------------------------------------------------------------------------


def cmd_group(args) -> tuple[int, str]:
    G = make_group(args.preset)
    show = [s.strip() for s in args.show.split(",") if s.strip()]
    bad = set(show) - {"aut", "homs", "orbits"}
    if bad:
        raise ValueError(f"unknown --show item(s): {', '.join(sorted(bad))}")
    if args.modulus is not None:
        m = args.modulus
    elif args.p_class is not None:
        m = math.gcd(G.exponent, PrimeSpec.residue(args.p_class).modulus(12))
    else:
        m = G.exponent
    aut = automorphism_group(G)
    space = homs_to_cyclic(G, m)
    sections, payload = [], {"group": G.name, "order": G.order, "modulus": m}
    if "aut" in show:
        A = aut.group_structure
        census = ", ".join(f"{o}^{c}" for o, c in A.order_census)
        rows = [["order", aut.order], ["abelian", A.is_abelian], ["element orders", census]]
        sections.append((f"Aut({G.name})", ["property", "value"], rows))
        payload["aut"] = {"order": aut.order, "abelian": A.is_abelian, "order_census": A.order_census}
    if "homs" in show:
        rows = [[i, str(chi.serialize()), chi.order, chi.kernel_size] for i, chi in enumerate(space)]
        sections.append((f"Hom({G.name}, C{m})", ["id", "character", "order", "kernel"], rows))
        payload["homs"] = [dict(zip(("id", "character", "order", "kernel"), r)) for r in rows]
    if "orbits" in show:
        orbs = orbits_and_stabilizers(aut, space.characters)
        rows = []
        for orb, stab in zip(orbs.orbits, orbs.stabilizers):
            chi = space[orb[0]]
            rows.append([orb[0], str(chi.serialize()), len(orb), len(stab), chi.kernel_size,
                         label_structures(G, chi).short()])
        sections.append((f"Aut({G.name}) orbits on Hom({G.name}, C{m})",
                         ["rep", "character", "orbit", "stabilizer", "kernel", "label"], rows))
        payload["orbits"] = [dict(zip(("rep", "character", "orbit", "stabilizer", "kernel", "label"), r))
                             for r in rows]
    return 0, render(args.format, sections, payload)


def cmd_braces(args) -> tuple[int, str]:
    report = enumerate_braces_bruteforce(args.order, plain_catalog(args.order),
                                         budget_seconds=args.budget_seconds, workers=args.workers)
    return 0, render(args.format, [block_section(report, f"skew braces of size {args.order}")],
                     report.to_json())


def cmd_count(args) -> tuple[int, str]:
    prime = PrimeSpec.residue(args.p_class) if args.p_class is not None else PrimeSpec.concrete(args.p)
    report = count_np(args.n, prime, assume_hypothesis=args.assume_hypothesis)
    sections = [block_section(report, f"skew braces of size {args.n}p, {prime}")]
    if args.subtables:
        sections += subtable_sections(report)
    return 0, render(args.format, sections, report.to_json())


def _reference_report(size: int) -> CountReport:
    if size == 20:
        return count_np(4, PrimeSpec.concrete(5))
    if size == 30:
        # every group of order 30 has a normal Sylow 5-subgroup, though the
        # divisor test alone cannot show it (6 = 1 mod 5)
        return count_np(6, PrimeSpec.concrete(5), assume_hypothesis=True)
    return count_np(12, PrimeSpec.concrete(7))


def cmd_verify(args) -> tuple[int, str]:
    size = args.size
    t0 = time.monotonic()
    catalog = plain_catalog(12) if size == 12 else default_catalog(size)
    pruned = args.pruned or size == 84
    try:
        oracle = enumerate_braces_bruteforce(size, catalog, budget_seconds=args.budget_seconds,
                                             pruned=pruned, workers=args.workers)
    except BudgetExceeded as exc:
        part = exc.partial
        rows = [[g["group"], g["classes"], g["seconds"]] for g in part.per_brace]
        msg = render(args.format, [(f"budget exceeded after {len(rows)} of {len(catalog)} groups",
                                    ["group", "classes", "seconds"], rows)],
                     {"size": size, "status": "budget_exceeded", "partial": part.to_json()})
        return 1, msg
    diff: list = []
    reference_total = None
    if size == 12:
        ref = golden.braces_12()
        got = oracle.block()
        diff = [(k, got.get(k, 0), v) for k, v in sorted(ref.items()) if got.get(k, 0) != v]
        reference_total = sum(ref.values())
    else:
        ref_report = _reference_report(size)
        diff = compare_reports(oracle, ref_report)
        reference_total = ref_report.total
        if size == 84:
            ref = golden.totals_12p(7)
            got = oracle.block()
            diff += [(k, got.get(k, 0), v) for k, v in sorted(ref.items()) if got.get(k, 0) != v]
    seconds = round(time.monotonic() - t0, 3)
    rows = [[a, b, va, vb] for (a, b), va, vb in diff]
    summary = [["size", size], ["pruned", pruned], ["oracle total", oracle.total],
               ["reference total", reference_total], ["differing cells", len(diff)], ["seconds", seconds]]
    sections = [("summary", ["item", "value"], summary)]
    sections.append(("diff", ["add", "mul", "oracle", "reference"], rows))
    payload = {"size": size, "pruned": pruned, "oracle_total": oracle.total, "reference_total": reference_total,
               "diff": [{"add": a, "mul": b, "oracle": va, "reference": vb} for a, b, va, vb in rows],
               "seconds": seconds, "per_group": oracle.per_brace}
    return (1 if diff else 0), render(args.format, sections, payload)


# -- entry point ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="skewbrace", description="Skew brace counts via holomorph regular subgroups.")
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=FORMATS, default="md")
    work = argparse.ArgumentParser(add_help=False)
    work.add_argument("--workers", type=int, default=None,
                      help="processes for the oracle search (default: SKEWBRACE_THREADS or 1)")
    work.add_argument("--budget-seconds", type=float, default=None)
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("group", parents=[fmt], help="automorphisms, characters and character orbits")
    g.add_argument("--preset", required=True, help="C12, C6xC2, A4, D12, Dic12, Cn(k) or sd(Cp, E, sigma=id)")
    g.add_argument("--show", default="aut,homs,orbits")
    tgt = g.add_mutually_exclusive_group()
    tgt.add_argument("--modulus", type=int, default=None, help="order of the cyclic target")
    tgt.add_argument("--p-class", type=int, default=None, help="target Z_p^* for p in this class mod 12")

    b = sub.add_parser("braces", parents=[fmt, work], help="table of skew braces of a small order")
    b.add_argument("--order", type=int, required=True)

    c = sub.add_parser("count", parents=[fmt], help="braces of size n*p by structure")
    c.add_argument("--n", type=int, required=True)
    pm = c.add_mutually_exclusive_group(required=True)
    pm.add_argument("--p-class", type=int, help="residue class of p mod 12 (1, 5, 7 or 11)")
    pm.add_argument("--p", type=int, help="a concrete prime p >= 5")
    c.add_argument("--assume-hypothesis", action="store_true",
                   help="proceed when a normal Sylow p-subgroup cannot be established")
    c.add_argument("--subtables", action="store_true", help="also print kernel-resolved tables")

    v = sub.add_parser("verify", parents=[fmt, work], help="brute-force oracle against the pipeline")
    v.add_argument("--size", type=int, choices=VERIFY_SIZES, required=True)
    v.add_argument("--pruned", action="store_true", help="anchored search (always on for size 84)")
    return ap


COMMANDS = {"group": cmd_group, "braces": cmd_braces, "count": cmd_count, "verify": cmd_verify}


def run(argv: Optional[Sequence[str]] = None) -> tuple[int, str]:
    """Parse argv and return (exit code, rendered output)."""
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0), ""
    try:
        return COMMANDS[args.command](args)
    except (GroupError, ValueError) as exc:
        return 2, f"error: {exc}"


def main(argv: Optional[Sequence[str]] = None) -> int:
    code, text = run(argv)
    if text:
        print(text, file=sys.stderr if code == 2 else sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
