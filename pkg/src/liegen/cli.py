"""``invgen`` command line: tables and reports as text, CSV or JSON.

Exit status: 0 on success, 1 when a verification fails, 2 on usage errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import ffmc
from .errors import ContractError, RangeError
from .invgen import (alpha_report, leading_term_two_random, partner_mass, relation_sim,
                     sharpness_triples, verify_ab, verify_many, ab_families)
from .rootsys_g2 import g2_incidence
from .torus_lattice import incidence_matrix
from .weyl_stats import GroupFamily, Kind, parse_class, torus_classes

FAMILY_ALIASES = {"SL": "A", "SU": "2A", "Sp": "C", "O": "B", "O+": "D+", "O-": "D-"}
FAMILIES = ["A", "2A", "C", "B", "D+", "D-", "G2"]
TABLE_LIMIT = 14  # largest rank for commands that list every class pair


class UsageError(Exception):
    pass


def rat(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def family_from_args(args) -> GroupFamily:
    name = FAMILY_ALIASES.get(args.family, args.family)
    if name not in FAMILIES:
        raise UsageError(f"--family: unknown family {args.family!r}")
    if name == "G2":
        return GroupFamily.g2(args.p3)
    if args.p3:
        raise UsageError("--p3 applies to G2 only")
    if args.rank is None:
        raise UsageError("--n/--m is required for classical families")
    if args.q == "even" and name != "C":
        raise UsageError("--q even applies to the symplectic family only")
    try:
        return GroupFamily(Kind(name), args.rank, q_even=(args.q == "even"))
    except (RangeError, ContractError) as exc:
        raise UsageError(f"--n/--m: {exc}") from exc


def _limit(fam: GroupFamily) -> None:
    if fam.classical and fam.rank > TABLE_LIMIT:
        raise UsageError(f"--n/--m: this command lists class pairs; rank must be <= {TABLE_LIMIT}")


# ------------------------------------------------------------------ commands
# Each command returns (document, header, rows, ok).

def cmd_weyl_classes(args):
    fam = family_from_args(args)
    classes = torus_classes(fam)
    rows = [[t.label, rat(t.probability), int(t.split)] for t in classes]
    doc = {"family": str(fam), "count": len(classes),
           "classes": [{"class": t.label, "probability": rat(t.probability), "split": t.split}
                       for t in classes]}
    return doc, ["class", "probability", "split"], rows, True


def cmd_incidence(args):
    fam = family_from_args(args)
    if fam.kind is Kind.G2:
        inc = g2_incidence(fam.p3)
        cols = [c.label for c in inc.columns]
        rows = [[str(j)] + [int(inc.cells[(j, c)]) for c in cols] for j in inc.classes]
        doc = {"family": str(fam), "columns": cols,
               "rows": {str(j): [int(inc.cells[(j, c)]) for c in cols] for j in inc.classes},
               "report": inc.report}
        return doc, ["class"] + cols, rows, True
    _limit(fam)
    classes, cols, cells = incidence_matrix(fam)
    tags = [F.tag for F in cols]
    rows = [[t.label] + r for t, r in zip(classes, cells)]
    doc = {"family": str(fam), "columns": tags,
           "rows": {t.label: r for t, r in zip(classes, cells)}}
    return doc, ["class"] + tags, rows, True


def _pair_labels(fam, pairs):
    order = {t.data: i for i, t in enumerate(torus_classes(fam))}
    out = [sorted(pair, key=lambda t: order[t.data]) for pair in pairs]
    out.sort(key=lambda ab: (order[ab[0].data], order[ab[1].data]))
    return [(a.label, b.label) for a, b in out]


def cmd_sim(args):
    fam = family_from_args(args)
    _limit(fam)
    pairs = _pair_labels(fam, relation_sim(fam))
    doc = {"family": str(fam), "pairs": [list(p) for p in pairs]}
    return doc, ["class_i", "class_j"], [list(p) for p in pairs], True


def cmd_leading_term(args):
    fam = family_from_args(args)
    _limit(fam)
    value = leading_term_two_random(fam)
    partners = partner_mass(fam)
    doc = {"family": str(fam), "leading_term": rat(value),
           "partner_mass": {t.label: rat(v) for t, v in partners.items()}}
    rows = [[t.label, rat(t.probability), rat(v)] for t, v in partners.items()]
    if args.format == "text":
        return doc, None, [[rat(value)]], True
    return doc, ["class", "probability", "partner_mass"], rows, True


def cmd_pinv_leading(args):
    fam = family_from_args(args)
    _limit(fam)
    partners = partner_mass(fam)
    if args.cls:
        data = int(args.cls) if fam.kind is Kind.G2 else parse_class(args.cls)
        match = [t for t in partners if t.data == data]
        if not match:
            raise UsageError(f"--class: {args.cls!r} is not a torus class of {fam}")
        partners = {match[0]: partners[match[0]]}
    doc = {"family": str(fam), "pinv_leading": {t.label: rat(v) for t, v in partners.items()}}
    return doc, ["class", "pinv_leading"], [[t.label, rat(v)] for t, v in partners.items()], True


def _ab_doc(rep):
    return {
        "family": str(rep.family),
        "elements": rep.elements,
        "empty": rep.empty,
        "residual": rep.residual,
        "residual_mass": rat(rep.residual_mass),
        "per_element_families": rep.per_element_families,
        "subset_residuals": [{"subset": list(s.labels), "count": s.count, "mass": rat(s.mass),
                              "witnesses": s.witnesses} for s in rep.subset_residuals],
    }


def cmd_verify_ab(args):
    if args.max_rank is not None:
        if not 2 <= args.max_rank <= 30:
            raise UsageError("--max-rank must lie in [2, 30]")
        reports = verify_many(ab_families(args.max_rank))
    else:
        fam = family_from_args(args)
        if fam.kind is Kind.G2:
            raise UsageError("--family: verify-ab covers classical families")
        reports = [verify_ab(fam)]
    ok = all(r.empty and r.proper_subsets_nonempty for r in reports)
    rows = [[str(r.family), len(r.elements), int(r.empty), int(r.proper_subsets_nonempty),
             rat(r.residual_mass)] for r in reports]
    doc = _ab_doc(reports[0]) if len(reports) == 1 else {
        "families": len(reports), "all_empty": all(r.empty for r in reports),
        "proper_subsets_nonempty": all(r.proper_subsets_nonempty for r in reports),
        "reports": [_ab_doc(r) for r in reports]}
    return doc, ["family", "elements", "empty", "proper_subsets_nonempty", "residual_mass"], rows, ok


def cmd_sharpness(args):
    if args.rank is None:
        raise UsageError("--m is required")
    try:
        rep = sharpness_triples(args.rank)
    except RangeError as exc:
        raise UsageError(f"--m: {exc}") from exc
    doc = {"family": str(GroupFamily.symplectic(args.rank, "even")), "triples": rep.triples,
           "all_triples_blocked": rep.all_triples_blocked,
           "min_residual_mass": rat(rep.min_residual_mass), "bound": rat(rep.bound),
           "proof_witness_counts": rep.proof_witness_counts,
           "uncovered": [list(t) for t in rep.uncovered],
           "witnesses": {" | ".join(k): v for k, v in rep.witnesses.items()}}
    rows = [[" | ".join(k), v] for k, v in rep.witnesses.items()]
    return doc, ["triple", "witness"], rows, rep.bound_holds


def cmd_alpha_check(args):
    try:
        rep = alpha_report(args.m_max)
    except RangeError as exc:
        raise UsageError(f"--m-max: {exc}") from exc
    rows = [[str(r.family), r.minimizer, rat(r.value), rat(r.bound), int(r.holds), int(r.equality)]
            for r in rep.rows]
    doc = {"m_max": args.m_max, "bound_holds": rep.bound_holds,
           "equality_cases": [[str(r.family), r.minimizer, rat(r.value)] for r in rep.equality_cases],
           "equality_only_at_D4": rep.equality_only_at_d4, "ok": rep.ok}
    return doc, ["family", "minimizer", "value", "bound", "holds", "equality"], rows, rep.ok


def cmd_g2_report(args):
    fam = GroupFamily.g2(args.p3)
    inc = g2_incidence(args.p3)
    partners = partner_mass(fam)
    star = {j: inc.shares(1, j) and inc.shares(2, j) for j in inc.classes}
    pinv_36 = min(v for t, v in partners.items() if t.data in (3, 4, 5, 6))
    doc = {
        "family": str(fam),
        "columns": {c.label: sorted(inc.column_set(c.label)) for c in inc.columns},
        "relation": sorted(sorted(t.data for t in p) for p in relation_sim(fam)),
        "leading_term": rat(leading_term_two_random(fam)),
        "pinv_leading": {str(t.data): rat(v) for t, v in partners.items()},
        "min_pinv_classes_3_to_6": rat(pinv_36),
        "mass_classes_1_2": rat(sum(t.probability for t in partners if t.data in (1, 2))),
        "shares_with_1_and_2": {str(j): v for j, v in star.items()},
        "report": inc.report,
    }
    rows = [[str(t.data), rat(t.probability), rat(v), int(star[t.data])] for t, v in partners.items()]
    return doc, ["class", "probability", "pinv_leading", "shares_with_1_and_2"], rows, True


def _mc_report(args):
    try:
        return ffmc.torus_statistics(args.group, args.n, args.q, args.samples, args.seed,
                                     args.streams, args.exhaustive, args.workers)
    except (RangeError, ContractError) as exc:
        raise UsageError(str(exc)) from exc


def cmd_mc_run(args):
    rep = _mc_report(args)
    doc = ffmc.report_to_dict(rep)
    rows = [[lam, doc["counts"][lam], doc["frequencies"][lam]] for lam in doc["counts"]]
    return doc, ["partition", "count", "frequency"], rows, True


def cmd_mc_compare(args):
    rep = _mc_report(args)
    devs = ffmc.compare_to_weyl(rep)
    doc = ffmc.report_to_dict(rep, devs)
    rows = [[c["partition"], c["exact"], c["frequency"], c["deviation"], c["threshold"],
             int(c["flagged"])] for c in doc["comparison"]]
    return doc, ["partition", "exact", "frequency", "deviation", "threshold", "flagged"], rows, \
        not any(d.flagged for d in devs)


# ------------------------------------------------------------------ parsing

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _family_flags(p, rank=True):
    p.add_argument("--family", default="A", help="A, 2A, C, B, D+, D- or G2 (aliases SL, SU, Sp)")
    if rank:
        p.add_argument("--n", "--m", dest="rank", type=int, help="rank n (types A) or m (B, C, D)")
    p.add_argument("--q", choices=["odd", "even"], default="odd", help="parity of q (type C)")
    p.add_argument("--p3", action="store_true", help="3 divides q (G2)")


def _mc_flags(p):
    p.add_argument("--group", choices=["GL", "SL"], default="GL")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--q", type=int, default=101, help="a prime")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--streams", type=int, default=1)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--exhaustive", action="store_true", help="enumerate the whole group")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="invgen", description="Weyl-level leading terms of invariable generation.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    commands = {
        "weyl-classes": (cmd_weyl_classes, "torus classes and their probabilities"),
        "incidence": (cmd_incidence, "torus class by subgroup family incidence"),
        "sim": (cmd_sim, "pairs of related torus classes"),
        "leading-term": (cmd_leading_term, "leading two-element generation probability"),
        "pinv-leading": (cmd_pinv_leading, "per-class partner mass"),
        "verify-ab": (cmd_verify_ab, "check that the distinguished elements leave no common torus"),
        "sharpness": (cmd_sharpness, "three-element sets in Sp(2m, q even)"),
        "alpha-check": (cmd_alpha_check, "the 1/(4m) class probability bound"),
        "g2-report": (cmd_g2_report, "G2 incidence, relation and leading terms"),
        "mc-run": (cmd_mc_run, "sample GL/SL over F_q and tally torus types"),
        "mc-compare": (cmd_mc_compare, "compare sampled torus types with 1/z"),
    }
    for name, (func, help_text) in commands.items():
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        p.add_argument("--format", choices=["text", "csv", "json"], default="text")
        p.add_argument("--out", help="write the document to this file")
        if name in ("mc-run", "mc-compare"):
            _mc_flags(p)
        elif name == "sharpness":
            p.add_argument("--m", dest="rank", type=int, required=True)
        elif name == "alpha-check":
            p.add_argument("--m-max", type=int, default=30)
        elif name == "g2-report":
            p.add_argument("--p3", action="store_true")
        else:
            _family_flags(p)
            if name == "pinv-leading":
                p.add_argument("--class", dest="cls", help="one class label, e.g. 3-,1+ or 5")
            if name == "verify-ab":
                p.add_argument("--max-rank", type=int, help="verify every family up to this rank")
    return parser


def render(doc, header, rows, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        if header:
            writer.writerow(header)
        writer.writerows(rows)
        return buf.getvalue()
    lines = []
    if header:
        widths = [max(len(str(x)) for x in col) for col in zip(header, *rows)]
        lines.append("  ".join(str(h).ljust(w) for h, w in zip(header, widths)).rstrip())
        for row in rows:
            lines.append("  ".join(str(x).ljust(w) for x, w in zip(row, widths)).rstrip())
    else:
        lines += [" ".join(str(x) for x in row) for row in rows]
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "command", None):
            raise UsageError("a command is required")
        doc, header, rows, ok = args.func(args)
    except UsageError as exc:
        print(f"invgen: error: {exc}", file=sys.stderr)
        return 2
    text = render(doc, header, rows, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
