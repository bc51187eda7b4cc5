"""HTTP service for live human annotation sessions.

A session walks the corpus in the same traversal order as the
simulator, presenting each target with its ranked, pruned candidate
clusters. Decisions are strictly sequential per session; state is the
decision log plus a manifest (no database), so killing and restarting
the service reconstructs every session by replay.

State directory layout:  {state_dir}/{session_id}/manifest.json
                         {state_dir}/{session_id}/decisions.jsonl
"""

from __future__ import annotations

import json
import threading
import uuid
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from fastapi import FastAPI, HTTPException, Response
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, ConfigDict, Field

from .cluster_store import ClusterStore
from .corpus import Mention, load_corpus, parse_mentions, partition_by_topic
from .errors import CorefLoopError, StoreError, ValidationError
from .metrics import recall as recall_of
from .scorers import CachedScorer, build_scorer
from .simulator import TargetRecord
from .workflow import (
    ACCEPT,
    Decision,
    NEW_CLUSTER,
    PruneConfig,
    RankedCandidate,
    prune_top_k,
    rank_candidates,
    validate_decision,
)


@dataclass
class SessionConfig:
    scorer: str = "lemma"
    k: float = 3.0
    lam: float = 0.7
    seed: int = 0
    by_subtopic: bool = False
    matrix_paths: tuple[str, ...] = ()
    default_score: float | None = None
    corpus_path: str | None = None
    corpus_inline: list[dict] | None = None

    def to_manifest(self) -> dict:
        return {
            "scorer": self.scorer,
            "k": self.k,
            "lambda": self.lam,
            "seed": self.seed,
            "by_subtopic": self.by_subtopic,
            "matrix_paths": list(self.matrix_paths),
            "default_score": self.default_score,
            "corpus_path": self.corpus_path,
            "corpus_inline": self.corpus_inline,
        }

    @staticmethod
    def from_manifest(obj: dict) -> "SessionConfig":
        return SessionConfig(
            scorer=obj["scorer"],
            k=obj["k"],
            lam=obj["lambda"],
            seed=obj["seed"],
            by_subtopic=obj.get("by_subtopic", False),
            matrix_paths=tuple(obj.get("matrix_paths") or ()),
            default_score=obj.get("default_score"),
            corpus_path=obj.get("corpus_path"),
            corpus_inline=obj.get("corpus_inline"),
        )


def _mention_view(m: Mention) -> dict:
    return {
        "mention_id": m.mention_id,
        "doc_id": m.doc_id,
        "topic_id": m.topic_id,
        "sentence_id": m.sentence_id,
        "sentence_tokens": list(m.sentence_tokens),
        "trigger_start": m.trigger_start,
        "trigger_token_count": m.trigger_token_count,
        "trigger_text": m.trigger_text,
    }


class Session:
    """One annotation session: corpus traversal, stores, and the log."""

    def __init__(self, session_id: str, config: SessionConfig,
                 mentions: list[Mention], state_dir: Path):
        self.session_id = session_id
        self.config = config
        self.lock = threading.Lock()
        self.dir = state_dir / session_id
        self.log_path = self.dir / "decisions.jsonl"

        self.mentions = mentions
        self.mentions_by_id = {m.mention_id: m for m in mentions}
        self.has_gold = all(m.gold_cluster_id is not None for m in mentions)

        partitioned = partition_by_topic(mentions, config.by_subtopic)
        self.stores = {key: ClusterStore(key) for key in partitioned}
        self.traversal: list[tuple[str, int, Mention]] = []
        for key in sorted(partitioned):
            for idx, m in enumerate(partitioned[key]):
                self.traversal.append((key, idx, m))

        self.scorer = CachedScorer(
            build_scorer(config.scorer, lam=config.lam,
                         matrix_paths=config.matrix_paths, seed=config.seed,
                         default_score=config.default_score)
        )
        self.prune_cfg = PruneConfig(k=config.k, seed=config.seed)
        self.cursor = 0
        self.trace: list[dict] = []
        self.records: list[TargetRecord] = []
        self.comparisons_total = 0

    # -- pipeline -----------------------------------------------------

    def presented_for_cursor(self) -> tuple[Mention, list[RankedCandidate]]:
        key, draw_index, target = self.traversal[self.cursor]
        store = self.stores[key]
        ranked = rank_candidates(
            target, store.candidates_for(target), self.mentions_by_id, self.scorer
        )
        return target, prune_top_k(ranked, self.prune_cfg, draw_index)

    def next_payload(self) -> dict | None:
        if self.cursor >= len(self.traversal):
            return None
        target, presented = self.presented_for_cursor()
        key = self.traversal[self.cursor][0]
        store = self.stores[key]
        return {
            "session_id": self.session_id,
            "target": _mention_view(target),
            "candidates": [
                {
                    "cluster_id": c.cluster_id,
                    "score": c.score,
                    "rank": c.rank,
                    "mentions": [
                        _mention_view(self.mentions_by_id[mid])
                        for mid in store.get_cluster(c.cluster_id).mention_ids
                    ],
                }
                for c in presented
            ],
            "progress": {
                "done": self.cursor,
                "total": len(self.traversal),
                "comparisons_so_far": self.comparisons_total,
            },
        }

    def apply(self, decision: Decision, persist: bool = True) -> dict:
        """Validate and apply one decision at the current cursor."""
        if self.cursor >= len(self.traversal):
            raise StaleTarget("session is exhausted; no pending target")
        key, _, target = self.traversal[self.cursor]
        if decision.target_id != target.mention_id:
            raise StaleTarget(
                f"expected decision for target '{target.mention_id}',"
                f" got '{decision.target_id}'"
            )
        _, presented = self.presented_for_cursor()
        validate_decision(presented, decision)

        store = self.stores[key]
        had_coreferent = None
        hit_rank = None
        if self.has_gold:
            had_coreferent = any(
                self.mentions_by_id[c.mention_ids[0]].gold_cluster_id
                == target.gold_cluster_id
                for c in store.clusters
            )
            if decision.kind == ACCEPT:
                accepted = store.get_cluster(decision.cluster_id)
                accepted_gold = self.mentions_by_id[
                    accepted.mention_ids[0]
                ].gold_cluster_id
                if accepted_gold == target.gold_cluster_id:
                    hit_rank = decision.reviewed_count

        if decision.kind == ACCEPT:
            store.merge(target, decision.cluster_id)
            cluster_id = decision.cluster_id
        else:
            cluster_id = store.create_singleton(target)

        entry = {
            "target_id": decision.target_id,
            "kind": decision.kind,
            "cluster_id": decision.cluster_id,
            "reviewed_count": decision.reviewed_count,
            "presented": [c.cluster_id for c in presented],
            "timestamp": datetime.now(timezone.utc).isoformat(),
        }
        if persist:
            with open(self.log_path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(entry, ensure_ascii=False) + "\n")

        self.comparisons_total += decision.reviewed_count
        trace_row = {
            "target_id": decision.target_id,
            "kind": decision.kind,
            "cluster_id": cluster_id,
            "presented_count": len(presented),
            "comparisons": decision.reviewed_count,
            "hit_rank": hit_rank,
            "had_coreferent_in_store": had_coreferent,
        }
        self.trace.append(trace_row)
        if self.has_gold:
            self.records.append(
                TargetRecord(
                    target_id=decision.target_id,
                    presented_count=len(presented),
                    hit_rank=hit_rank,
                    had_coreferent_in_store=bool(had_coreferent),
                    comparisons=decision.reviewed_count,
                )
            )
        self.cursor += 1
        return {
            "applied": True,
            "cluster_id": cluster_id,
            "done": self.cursor,
            "total": len(self.traversal),
        }

    def replay_from_disk(self) -> None:
        """Re-drive the decision pipeline from the persisted log."""
        if not self.log_path.exists():
            return
        with open(self.log_path, "r", encoding="utf-8") as fh:
            for line in fh:
                if not line.strip():
                    continue
                entry = json.loads(line)
                self.apply(
                    Decision(
                        target_id=entry["target_id"],
                        kind=entry["kind"],
                        cluster_id=entry.get("cluster_id"),
                        reviewed_count=int(entry["reviewed_count"]),
                    ),
                    persist=False,
                )

    def metrics_payload(self) -> dict:
        return {
            "session_id": self.session_id,
            "done": self.cursor,
            "total": len(self.traversal),
            "comparisons_total": self.comparisons_total,
            "recall": recall_of(self.records) if self.has_gold else None,
            "per_target": list(self.trace),
        }

    def export_payload(self) -> dict:
        return {
            "session_id": self.session_id,
            "topics": [self.stores[key].export() for key in sorted(self.stores)],
        }


class StaleTarget(CorefLoopError):
    """Decision does not match the session's current pending target."""


class CreateSessionRequest(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    corpus_path: str | None = None
    corpus: list[dict] | None = None
    scorer: str | None = None
    k: float | None = None
    lam: float | None = Field(default=None, alias="lambda")
    seed: int | None = None
    by_subtopic: bool | None = None
    matrix: list[str] | None = None
    default_score: float | None = None


class DecisionRequest(BaseModel):
    target_id: str
    kind: str
    cluster_id: str | None = None
    reviewed_count: int = Field(ge=0)


def _load_mentions(config: SessionConfig) -> list[Mention]:
    if config.corpus_inline is not None:
        lines = "\n".join(json.dumps(obj) for obj in config.corpus_inline)
        return parse_mentions(lines)
    if config.corpus_path:
        return load_corpus(config.corpus_path)
    raise ValidationError("session needs corpus_path or an inline corpus")


def create_app(state_dir, defaults: SessionConfig | None = None) -> FastAPI:
    """Build the service, restoring any sessions found under state_dir."""
    state = Path(state_dir)
    state.mkdir(parents=True, exist_ok=True)
    defaults = defaults or SessionConfig()
    sessions: dict[str, Session] = {}
    registry_lock = threading.Lock()

    app = FastAPI(title="corefloop annotation service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    def restore_sessions() -> None:
        for manifest_path in sorted(state.glob("*/manifest.json")):
            obj = json.loads(manifest_path.read_text(encoding="utf-8"))
            config = SessionConfig.from_manifest(obj["config"])
            session = Session(
                obj["session_id"], config, _load_mentions(config), state
            )
            session.replay_from_disk()
            sessions[session.session_id] = session

    restore_sessions()

    def get_session(session_id: str) -> Session:
        session = sessions.get(session_id)
        if session is None:
            raise HTTPException(404, f"unknown session '{session_id}'")
        return session

    @app.post("/sessions")
    def create_session(req: CreateSessionRequest):
        config = SessionConfig(
            scorer=req.scorer if req.scorer is not None else defaults.scorer,
            k=req.k if req.k is not None else defaults.k,
            lam=req.lam if req.lam is not None else defaults.lam,
            seed=req.seed if req.seed is not None else defaults.seed,
            by_subtopic=(
                req.by_subtopic
                if req.by_subtopic is not None
                else defaults.by_subtopic
            ),
            matrix_paths=(
                tuple(req.matrix) if req.matrix is not None
                else defaults.matrix_paths
            ),
            default_score=(
                req.default_score
                if req.default_score is not None
                else defaults.default_score
            ),
            corpus_path=req.corpus_path
            if req.corpus_path is not None or req.corpus is not None
            else defaults.corpus_path,
            corpus_inline=req.corpus,
        )
        session_id = uuid.uuid4().hex[:12]
        try:
            mentions = _load_mentions(config)
            session = Session(session_id, config, mentions, state)
        except (CorefLoopError, OSError, ValueError) as exc:
            raise HTTPException(422, str(exc)) from exc
        session.dir.mkdir(parents=True, exist_ok=True)
        manifest = {
            "session_id": session_id,
            "created_at": datetime.now(timezone.utc).isoformat(),
            "config": config.to_manifest(),
        }
        (session.dir / "manifest.json").write_text(
            json.dumps(manifest, ensure_ascii=False, indent=2), encoding="utf-8"
        )
        with registry_lock:
            sessions[session_id] = session
        return {"session_id": session_id, "total": len(session.traversal)}

    @app.get("/sessions")
    def list_sessions():
        return [
            {
                "session_id": s.session_id,
                "done": s.cursor,
                "total": len(s.traversal),
            }
            for s in sessions.values()
        ]

    @app.get("/sessions/{session_id}/next")
    def next_target(session_id: str):
        session = get_session(session_id)
        with session.lock:
            payload = session.next_payload()
        if payload is None:
            return Response(status_code=204)
        return payload

    @app.post("/sessions/{session_id}/decision")
    def post_decision(session_id: str, req: DecisionRequest):
        session = get_session(session_id)
        decision = Decision(
            target_id=req.target_id,
            kind=req.kind,
            cluster_id=req.cluster_id,
            reviewed_count=req.reviewed_count,
        )
        if decision.kind not in (ACCEPT, NEW_CLUSTER):
            raise HTTPException(422, f"unknown decision kind '{decision.kind}'")
        with session.lock:
            try:
                return session.apply(decision)
            except StaleTarget as exc:
                raise HTTPException(409, str(exc)) from exc
            except StoreError as exc:
                raise HTTPException(422, str(exc)) from exc

    @app.get("/sessions/{session_id}/export")
    def export_clusters(session_id: str):
        session = get_session(session_id)
        with session.lock:
            return session.export_payload()

    @app.get("/sessions/{session_id}/metrics")
    def session_metrics(session_id: str):
        session = get_session(session_id)
        with session.lock:
            return session.metrics_payload()

    return app
