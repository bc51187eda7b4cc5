"""The shared rank -> prune -> decide pipeline.

Both the gold-oracle simulator and the live annotation service run this
exact code path, which is what makes their outputs comparable: a cluster
is scored by the mean pairwise score of its mentions against the target,
the ranked list is cut to a (possibly fractional) top-k, and the
decision source reviews the survivors one at a time.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

from .cluster_store import Cluster, ClusterStore
from .corpus import Mention
from .errors import StoreError
from .scorers import PairwiseScorer
from .seeding import stable_uniform

ACCEPT = "accept"
NEW_CLUSTER = "new_cluster"


@dataclass(frozen=True)
class RankedCandidate:
    cluster_id: str
    score: float
    rank: int  # 1-based


@dataclass(frozen=True)
class PruneConfig:
    """Fractional top-k: keep floor(k) candidates plus one more with
    probability equal to k's decimal part."""

    k: float
    seed: int = 0

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")


@dataclass(frozen=True)
class Decision:
    target_id: str
    kind: str  # ACCEPT or NEW_CLUSTER
    cluster_id: str | None
    reviewed_count: int


def rank_candidates(
    target: Mention,
    clusters: Iterable[Cluster],
    mentions_by_id: Mapping[str, Mention],
    scorer: PairwiseScorer,
) -> list[RankedCandidate]:
    """Score each cluster as the mean pairwise score vs the target.

    Sorted by score descending; ties break toward the earlier-created
    cluster, then lexicographic cluster_id, so rankings are reproducible.
    """
    scored = []
    for cluster in clusters:
        total = 0.0
        for mid in cluster.mention_ids:
            total += scorer.score(target, mentions_by_id[mid])
        mean = total / len(cluster.mention_ids)
        scored.append((-mean, cluster.created_seq, cluster.cluster_id, mean))
    scored.sort()
    return [
        RankedCandidate(cluster_id=cid, score=mean, rank=i)
        for i, (_, _, cid, mean) in enumerate(scored, start=1)
    ]


def prune_draw(seed: int, draw_index: int) -> float:
    """The deterministic uniform behind the fractional-k Bernoulli draw."""
    return stable_uniform("prune-extra", seed, draw_index)


def prune_top_k(
    ranked: list[RankedCandidate], cfg: PruneConfig, draw_index: int
) -> list[RankedCandidate]:
    """Keep floor(k) candidates, plus one more with probability frac(k).

    The Bernoulli draw is a pure function of (cfg.seed, draw_index), so a
    run presents the same candidate counts every time it is replayed.
    The output is always a prefix of the input.
    """
    keep = int(math.floor(cfg.k))
    frac = cfg.k - keep
    if frac > 0.0 and prune_draw(cfg.seed, draw_index) < frac:
        keep += 1
    return ranked[:keep]


def review(
    target: Mention,
    presented: list[RankedCandidate],
    judge: Callable[[Mention, RankedCandidate], bool],
) -> Decision:
    """Offer candidates in rank order until the judge accepts one.

    Each judged candidate costs one unit of review effort: accepting at
    rank r gives reviewed_count == r and skips the rest; exhausting the
    list yields a new-cluster decision with reviewed_count == len(presented).
    """
    for candidate in presented:
        if judge(target, candidate):
            return Decision(
                target_id=target.mention_id,
                kind=ACCEPT,
                cluster_id=candidate.cluster_id,
                reviewed_count=candidate.rank,
            )
    return Decision(
        target_id=target.mention_id,
        kind=NEW_CLUSTER,
        cluster_id=None,
        reviewed_count=len(presented),
    )


def validate_decision(presented: list[RankedCandidate], decision: Decision) -> None:
    """Enforce the review contract on an externally supplied decision.

    Accepting cluster at rank r requires reviewed_count == r; opening a
    new cluster requires reviewed_count == len(presented).
    """
    if decision.kind == ACCEPT:
        match = next(
            (c for c in presented if c.cluster_id == decision.cluster_id), None
        )
        if match is None:
            raise StoreError(
                f"decision accepts cluster '{decision.cluster_id}'"
                " which was not presented"
            )
        if decision.reviewed_count != match.rank:
            raise StoreError(
                f"accept at rank {match.rank} requires reviewed_count"
                f" {match.rank}, got {decision.reviewed_count}"
            )
    elif decision.kind == NEW_CLUSTER:
        if decision.reviewed_count != len(presented):
            raise StoreError(
                f"new_cluster requires reviewed_count {len(presented)}"
                f" (all presented candidates), got {decision.reviewed_count}"
            )
    else:
        raise StoreError(f"unknown decision kind '{decision.kind}'")


def apply_decision(
    store: ClusterStore,
    target: Mention,
    decision: Decision,
    log: list[dict] | None = None,
    presented: list[RankedCandidate] | None = None,
    timestamp: str | None = None,
) -> str:
    """Mutate the store per the decision; returns the affected cluster id.

    When `log` is given, appends a replayable entry (decision fields plus
    the presented cluster ids and a timestamp).
    """
    if decision.kind == ACCEPT:
        store.merge(target, decision.cluster_id)
        cluster_id = decision.cluster_id
    elif decision.kind == NEW_CLUSTER:
        cluster_id = store.create_singleton(target)
    else:
        raise StoreError(f"unknown decision kind '{decision.kind}'")
    if log is not None:
        log.append(
            log_entry(decision, presented or [], timestamp=timestamp)
        )
    return cluster_id


def log_entry(
    decision: Decision,
    presented: list[RankedCandidate],
    timestamp: str | None = None,
) -> dict:
    return {
        "target_id": decision.target_id,
        "kind": decision.kind,
        "cluster_id": decision.cluster_id,
        "reviewed_count": decision.reviewed_count,
        "presented": [c.cluster_id for c in presented],
        "timestamp": timestamp,
    }


def decision_from_entry(entry: Mapping) -> Decision:
    return Decision(
        target_id=entry["target_id"],
        kind=entry["kind"],
        cluster_id=entry.get("cluster_id"),
        reviewed_count=int(entry["reviewed_count"]),
    )


def replay_log(
    entries: Iterable[Mapping],
    mentions_by_id: Mapping[str, Mention],
    stores: Mapping[str, ClusterStore],
    by_subtopic: bool = False,
) -> None:
    """Re-apply a decision log to a fresh set of per-topic stores."""
    for entry in entries:
        decision = decision_from_entry(entry)
        target = mentions_by_id[decision.target_id]
        key = target.subtopic_id if by_subtopic else target.topic_id
        apply_decision(stores[key], target, decision)


def dump_log_line(entry: dict) -> str:
    return json.dumps(entry, ensure_ascii=False, sort_keys=True)
