"""Naive step-by-step reference simulator used as a test oracle.

Independent of the library's workflow/simulator code paths: plain lists,
its own scoring loop, its own sort, and its own inline copy of the
documented fractional-k draw contract (first 8 bytes of
blake2b("prune-extra:<seed>:<draw_index>"), big-endian, over 2**64).
"""

from __future__ import annotations

import math
from hashlib import blake2b


def prune_uniform(seed: int, draw_index: int) -> float:
    msg = f"prune-extra:{seed}:{draw_index}".encode("utf-8")
    return int.from_bytes(blake2b(msg, digest_size=8).digest(), "big") / 2.0**64


def simulate_topic_reference(mentions, score_fn, k, seed, oracle_repair=False):
    """Returns (records, clusters); records are plain dicts.

    clusters: list of {"id", "seq", "members": [Mention, ...]} in creation
    order, mirroring what an annotator driven by gold labels would build.
    """
    clusters: list[dict] = []
    next_seq = 1
    records: list[dict] = []

    for draw_index, target in enumerate(mentions):
        scored = []
        for cl in clusters:
            values = [score_fn(target, member) for member in cl["members"]]
            scored.append((sum(values) / len(values), cl))
        scored.sort(key=lambda item: (-item[0], item[1]["seq"], item[1]["id"]))

        keep = math.floor(k)
        frac = k - keep
        if frac > 0 and prune_uniform(seed, draw_index) < frac:
            keep += 1
        presented = scored[:keep]

        had_coreferent = any(
            cl["members"][0].gold_cluster_id == target.gold_cluster_id
            for cl in clusters
        )

        hit_rank = None
        for rank, (_, cl) in enumerate(presented, start=1):
            if cl["members"][0].gold_cluster_id == target.gold_cluster_id:
                hit_rank = rank
                cl["members"].append(target)
                break

        if hit_rank is not None:
            comparisons = hit_rank
        else:
            comparisons = len(presented)
            if oracle_repair and had_coreferent:
                for _, cl in scored:
                    if cl["members"][0].gold_cluster_id == target.gold_cluster_id:
                        cl["members"].append(target)
                        break
            else:
                clusters.append(
                    {"id": f"c{next_seq}", "seq": next_seq, "members": [target]}
                )
                next_seq += 1

        records.append(
            {
                "target_id": target.mention_id,
                "presented_count": len(presented),
                "hit_rank": hit_rank,
                "had_coreferent_in_store": had_coreferent,
                "comparisons": comparisons,
            }
        )
    return records, clusters


def reference_partition(clusters) -> set[frozenset]:
    return {
        frozenset(m.mention_id for m in cl["members"]) for cl in clusters
    }


def reference_recall(records) -> float:
    eligible = [r for r in records if r["had_coreferent_in_store"]]
    if not eligible:
        return 1.0
    return sum(1 for r in eligible if r["hit_rank"] is not None) / len(eligible)


def reference_comparisons(records) -> int:
    return sum(r["comparisons"] for r in records)
