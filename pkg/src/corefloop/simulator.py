"""Gold-driven annotation simulation and the recall/effort tradeoff.

The simulator replaces the human with a ground-truth oracle: candidates
are retrieved, ranked, and pruned exactly as in a live session, then the
oracle accepts the highest-ranked presented cluster whose gold label
matches the target's. A hit costs as many comparisons as the accepted
rank; a miss costs one comparison per presented candidate and opens a
new cluster, fragmenting the target's gold cluster (unless
oracle_repair is set, which instead merges the target into the pruned-
away coreferent cluster so the gold partition is preserved).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from statistics import fmean
from typing import Mapping, Sequence

import numpy as np

from .cluster_store import ClusterStore
from .corpus import Mention
from .errors import ValidationError
from .metrics import comparisons as total_comparisons
from .metrics import recall as recall_of
from .scorers import (
    CachedScorer,
    LambdaConfig,
    LemmaScorer,
    CombinedMatrixScorer,
    PairwiseScorer,
    ScoreMatrix,
)
from .workflow import (
    ACCEPT,
    Decision,
    NEW_CLUSTER,
    PruneConfig,
    RankedCandidate,
    apply_decision,
    log_entry,
    prune_top_k,
    rank_candidates,
    review,
)

_trapezoid = getattr(np, "trapezoid", None) or np.trapz


@dataclass(frozen=True)
class TargetRecord:
    """Per-target trace of one simulated (or live) annotation step."""

    target_id: str
    presented_count: int
    hit_rank: int | None
    had_coreferent_in_store: bool
    comparisons: int

    def to_dict(self) -> dict:
        return {
            "target_id": self.target_id,
            "presented_count": self.presented_count,
            "hit_rank": self.hit_rank,
            "had_coreferent_in_store": self.had_coreferent_in_store,
            "comparisons": self.comparisons,
        }


@dataclass(frozen=True)
class RunResult:
    """One full simulation run plus its configuration echo."""

    scorer_name: str
    k: float
    lam: float | None
    seed: int
    oracle_repair: bool
    records: tuple[TargetRecord, ...]
    recall: float
    total_comparisons: int

    def to_dict(self) -> dict:
        return {
            "config": {
                "scorer": self.scorer_name,
                "k": self.k,
                "lambda": self.lam,
                "seed": self.seed,
                "oracle_repair": self.oracle_repair,
            },
            "recall": self.recall,
            "total_comparisons": self.total_comparisons,
            "records": [r.to_dict() for r in self.records],
        }


@dataclass(frozen=True)
class CurvePoint:
    """One (k, recall, comparisons) sample of the tradeoff curve."""

    k: float
    recall: float
    comparisons: float
    replicates: int = 1


@dataclass(frozen=True)
class TuneResult:
    lambda_star: float
    auc_by_lambda: dict[float, float]
    curves_by_lambda: dict[float, list[CurvePoint]]


def _cluster_gold(store: ClusterStore, cluster_id: str,
                  mentions_by_id: Mapping[str, Mention]) -> str:
    # all mentions of a store cluster share one gold id by construction
    first = store.get_cluster(cluster_id).mention_ids[0]
    return mentions_by_id[first].gold_cluster_id


def simulate_topic(
    mentions: Sequence[Mention],
    scorer: PairwiseScorer,
    prune_cfg: PruneConfig,
    oracle_repair: bool = False,
    log: list[dict] | None = None,
    topic_id: str | None = None,
) -> list[TargetRecord]:
    """Run the oracle over one topic's mentions in traversal order.

    The fractional-k draw for the i-th target uses draw_index == i, so a
    fixed (seed, traversal) presents identical candidate counts on every
    replay, independent of other topics.
    """
    if not mentions:
        return []
    for m in mentions:
        if m.gold_cluster_id is None:
            raise ValidationError(
                f"mention '{m.mention_id}' has no gold_cluster_id;"
                " simulation requires gold labels"
            )
    mentions_by_id = {m.mention_id: m for m in mentions}
    store = ClusterStore(topic_id or mentions[0].topic_id)
    records: list[TargetRecord] = []

    def judge(target: Mention, candidate: RankedCandidate) -> bool:
        gold = _cluster_gold(store, candidate.cluster_id, mentions_by_id)
        return gold == target.gold_cluster_id

    for draw_index, target in enumerate(mentions):
        candidates = store.candidates_for(target)
        ranked = rank_candidates(target, candidates, mentions_by_id, scorer)
        presented = prune_top_k(ranked, prune_cfg, draw_index)
        had_coreferent = any(
            _cluster_gold(store, c.cluster_id, mentions_by_id)
            == target.gold_cluster_id
            for c in candidates
        )

        decision = review(target, presented, judge)
        hit_rank = decision.reviewed_count if decision.kind == ACCEPT else None
        if decision.kind == NEW_CLUSTER and oracle_repair and had_coreferent:
            # the coreferent cluster was pruned away; merge anyway so the
            # gold partition survives (the effort was still spent, and the
            # miss still counts against recall)
            repair_id = next(
                c.cluster_id
                for c in ranked
                if _cluster_gold(store, c.cluster_id, mentions_by_id)
                == target.gold_cluster_id
            )
            decision = Decision(
                target_id=target.mention_id,
                kind=ACCEPT,
                cluster_id=repair_id,
                reviewed_count=len(presented),
            )
            store.merge(target, repair_id)
            if log is not None:
                entry = log_entry(decision, presented)
                entry["repair"] = True
                log.append(entry)
        else:
            apply_decision(store, target, decision, log=log, presented=presented)

        records.append(
            TargetRecord(
                target_id=target.mention_id,
                presented_count=len(presented),
                hit_rank=hit_rank,
                had_coreferent_in_store=had_coreferent,
                comparisons=decision.reviewed_count,
            )
        )
    return records


def simulate_corpus(
    partitioned: Mapping[str, Sequence[Mention]],
    scorer: PairwiseScorer,
    prune_cfg: PruneConfig,
    oracle_repair: bool = False,
    log: list[dict] | None = None,
) -> RunResult:
    """Simulate every topic independently and aggregate the records."""
    records: list[TargetRecord] = []
    for topic_id in sorted(partitioned):
        records.extend(
            simulate_topic(
                partitioned[topic_id],
                scorer,
                prune_cfg,
                oracle_repair=oracle_repair,
                log=log,
                topic_id=topic_id,
            )
        )
    lam = getattr(getattr(scorer, "cfg", None), "lam", None)
    return RunResult(
        scorer_name=scorer.name,
        k=prune_cfg.k,
        lam=lam,
        seed=prune_cfg.seed,
        oracle_repair=oracle_repair,
        records=tuple(records),
        recall=recall_of(records),
        total_comparisons=total_comparisons(records),
    )


def default_k_grid() -> list[float]:
    """k from 2 to 20 in increments of 0.5 (37 values)."""
    return [2.0 + 0.5 * i for i in range(37)]


def sweep_k(
    partitioned: Mapping[str, Sequence[Mention]],
    scorer: PairwiseScorer,
    k_grid: Sequence[float] | None = None,
    replicates: int = 5,
    base_seed: int = 0,
    oracle_repair: bool = False,
) -> list[CurvePoint]:
    """Sample the tradeoff curve over a k grid.

    Each k runs `replicates` simulations with prune seeds base_seed ..
    base_seed + replicates - 1 and reports mean recall and mean
    comparisons. Pair scores are cached across runs (scorers are
    deterministic, so this is invisible in the results).
    """
    if k_grid is None:
        k_grid = default_k_grid()
    if not k_grid:
        raise ValueError("k_grid must not be empty")
    if replicates < 1:
        raise ValueError("replicates must be >= 1")
    cached = CachedScorer(scorer)
    points = []
    for k in k_grid:
        runs = [
            simulate_corpus(
                partitioned,
                cached,
                PruneConfig(k=k, seed=base_seed + r),
                oracle_repair=oracle_repair,
            )
            for r in range(replicates)
        ]
        points.append(
            CurvePoint(
                k=float(k),
                recall=fmean(run.recall for run in runs),
                comparisons=fmean(float(run.total_comparisons) for run in runs),
                replicates=replicates,
            )
        )
    return points


def curve_auc(points: Sequence[CurvePoint]) -> float:
    """Area under recall vs log(comparisons), normalized by the log span.

    Comparisons are floored at 1 before the log. A curve with zero span
    (degenerate corpus) scores its mean recall.
    """
    pts = sorted((math.log(max(p.comparisons, 1.0)), p.recall) for p in points)
    xs = [x for x, _ in pts]
    ys = [y for _, y in pts]
    span = xs[-1] - xs[0]
    if span == 0.0:
        return fmean(ys)
    return float(_trapezoid(ys, xs)) / span


def tune_lambda(
    partitioned_dev: Mapping[str, Sequence[Mention]],
    scorer_family: str = "lemma",
    lambda_grid: Sequence[float] | None = None,
    k_grid: Sequence[float] | None = None,
    replicates: int = 5,
    base_seed: int = 0,
    matrices: tuple[ScoreMatrix, ScoreMatrix] | None = None,
) -> TuneResult:
    """Pick the blend weight whose tradeoff curve dominates on dev data.

    Each candidate weight gets a full k sweep; curves are compared by
    normalized area under recall vs log(comparisons). Ties break toward
    the smaller weight.
    """
    if lambda_grid is None:
        lambda_grid = [round(0.1 * i, 10) for i in range(11)]
    if not lambda_grid:
        raise ValueError("lambda_grid must not be empty")
    if k_grid is not None and not k_grid:
        raise ValueError("k_grid must not be empty")

    def make_scorer(lam: float) -> PairwiseScorer:
        cfg = LambdaConfig(lam)
        if scorer_family == "lemma":
            return LemmaScorer(cfg)
        if scorer_family == "combined":
            if matrices is None:
                raise ValueError(
                    "scorer_family 'combined' requires (trigger, context) matrices"
                )
            return CombinedMatrixScorer(matrices[0], matrices[1], cfg)
        raise ValueError(f"unknown scorer family '{scorer_family}'")

    curves: dict[float, list[CurvePoint]] = {}
    aucs: dict[float, float] = {}
    best_lam: float | None = None
    best_auc = -math.inf
    for lam in sorted(lambda_grid):
        points = sweep_k(
            partitioned_dev,
            make_scorer(lam),
            k_grid=k_grid,
            replicates=replicates,
            base_seed=base_seed,
        )
        curves[lam] = points
        aucs[lam] = curve_auc(points)
        if aucs[lam] > best_auc:
            best_auc = aucs[lam]
            best_lam = lam
    return TuneResult(
        lambda_star=best_lam, auc_by_lambda=aucs, curves_by_lambda=curves
    )
