"""Recall and Comparisons aggregates plus tradeoff-curve export.

Recall is the fraction of targets whose coreferent cluster survived
pruning into the suggested list, among targets that had a coreferent
cluster in the store at all. Comparisons is the total review effort:
one unit per candidate-target inspection, counting up to and including
the accepted candidate (or all presented candidates on a miss).
"""

from __future__ import annotations

import csv
import io
import json
from typing import IO, Iterable, Sequence


def recall(records: Iterable) -> float:
    """hits / eligible; defined as 1.0 when no target was eligible."""
    eligible = 0
    hits = 0
    for r in records:
        if r.had_coreferent_in_store:
            eligible += 1
            if r.hit_rank is not None:
                hits += 1
    if eligible == 0:
        return 1.0
    return hits / eligible


def comparisons(records: Iterable) -> int:
    """Total candidate-target inspections across all records."""
    return sum(r.comparisons for r in records)


def _csv_rows(points: Sequence) -> list[list[str]]:
    rows = [["k", "recall", "comparisons", "replicates"]]
    for p in sorted(points, key=lambda p: p.k):
        rows.append(
            [repr(float(p.k)), f"{p.recall:.6f}", f"{p.comparisons:.6f}",
             str(int(p.replicates))]
        )
    return rows


def export_curves(points: Sequence, fmt: str, destination) -> None:
    """Write curve points as CSV or JSON, rows sorted by k ascending.

    `destination` is a file path or a writable text stream. Recall is
    written with 6 decimals; so is the (possibly replicate-averaged)
    comparisons column.
    """
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerows(_csv_rows(points))
        payload = buf.getvalue()
    elif fmt == "json":
        payload = json.dumps(
            [
                {
                    "k": float(p.k),
                    "recall": round(p.recall, 6),
                    "comparisons": round(p.comparisons, 6),
                    "replicates": int(p.replicates),
                }
                for p in sorted(points, key=lambda p: p.k)
            ],
            indent=2,
        ) + "\n"
    else:
        raise ValueError(f"unknown export format '{fmt}' (use csv or json)")

    if hasattr(destination, "write"):
        destination.write(payload)
    else:
        with open(destination, "w", encoding="utf-8") as fh:
            fh.write(payload)


def load_curves(source: IO | str, fmt: str = "csv") -> list:
    """Parse a curve export back into CurvePoint objects."""
    from .simulator import CurvePoint

    if hasattr(source, "read"):
        text = source.read()
    else:
        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()

    points = []
    if fmt == "csv":
        reader = csv.DictReader(io.StringIO(text))
        for row in reader:
            points.append(
                CurvePoint(
                    k=float(row["k"]),
                    recall=float(row["recall"]),
                    comparisons=float(row["comparisons"]),
                    replicates=int(row["replicates"]),
                )
            )
    elif fmt == "json":
        for obj in json.loads(text):
            points.append(
                CurvePoint(
                    k=float(obj["k"]),
                    recall=float(obj["recall"]),
                    comparisons=float(obj["comparisons"]),
                    replicates=int(obj["replicates"]),
                )
            )
    else:
        raise ValueError(f"unknown export format '{fmt}' (use csv or json)")
    return points
