#!/usr/bin/env python3
"""Recompute corpus aggregates from first principles and diff them against a report.

Usage: check_corpus_aggregates.py <corpus.json> <report.json>

The report is the JSON output of `mvx corpus --format json`. Coverage fractions
are derived from the corpus file alone; character-occurrence counts (COC) are
recomputed here with an independent definition and averaged over the entries
the report marks as paired. All figures must match the report to three
decimal places.
"""

import json
import sys

WHITESPACE = {" ", "\t", "\r", "\n"}


def coc(text):
    return sum(1 for ch in text if ch not in WHITESPACE)


def fmt(x):
    return f"{x:.3f}"


def main():
    if len(sys.argv) != 3:
        print(__doc__.strip(), file=sys.stderr)
        return 2
    with open(sys.argv[1], encoding="utf-8") as f:
        corpus = json.load(f)
    with open(sys.argv[2], encoding="utf-8") as f:
        report = json.load(f)

    entries = corpus["entries"]
    by_id = {e["id"]: e for e in entries}
    agg = report["aggregates"]
    failures = []

    def check(label, expected, actual):
        if fmt(expected) != fmt(actual):
            failures.append(f"{label}: recomputed {fmt(expected)}, report says {fmt(actual)}")

    total = len(entries)
    with_ocl = sum(1 for e in entries if e.get("ocl"))
    with_navex = sum(1 for e in entries if e.get("navex"))
    if agg["total"] != total:
        failures.append(f"total: corpus has {total} entries, report says {agg['total']}")
    check("oclCoverage", with_ocl / total, agg["oclCoverage"])
    check("navexCoverage", with_navex / total, agg["navexCoverage"])

    paired_ids = [r["id"] for r in report["entries"] if r["paired"]]
    missing = [i for i in paired_ids if i not in by_id]
    if missing:
        failures.append(f"report pairs unknown entries: {missing}")
        paired_ids = [i for i in paired_ids if i in by_id]
    if paired_ids:
        mean_ocl = sum(coc(by_id[i]["ocl"]) for i in paired_ids) / len(paired_ids)
        mean_navex = sum(coc(by_id[i]["navex"]) for i in paired_ids) / len(paired_ids)
        check("meanCocOcl", mean_ocl, agg["meanCocOcl"])
        check("meanCocNavex", mean_navex, agg["meanCocNavex"])

    for r in report["entries"]:
        e = by_id.get(r["id"])
        if e is None:
            failures.append(f"report entry '{r['id']}' is not in the corpus")
            continue
        for side, key in (("ocl", "cocOcl"), ("navex", "cocNavex")):
            text = e.get(side)
            reported = r.get(key)
            if text and reported != coc(text):
                failures.append(
                    f"{r['id']}.{key}: recomputed {coc(text)}, report says {reported}"
                )

    agree = sum(1 for r in report["entries"] if r["paired"] and r["agree"])
    paired = sum(1 for r in report["entries"] if r["paired"])
    if agg["paired"] != paired or agg["agreeCount"] != agree:
        failures.append(
            f"agreement tally: entries say {agree}/{paired}, "
            f"aggregates say {agg['agreeCount']}/{agg['paired']}"
        )
    if paired:
        check("agreementRate", agree / paired, agg["agreementRate"])

    if failures:
        for line in failures:
            print(f"MISMATCH {line}")
        return 1
    print(
        f"aggregates confirmed: coverage {fmt(with_ocl / total)}/{fmt(with_navex / total)}, "
        f"agreement {agree}/{paired}, "
        f"mean coc {fmt(mean_ocl)} vs {fmt(mean_navex)}"
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
