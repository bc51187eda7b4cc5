"""Per-topic store of disjoint annotated event clusters.

The store is the evolving partition an annotation session builds up:
each processed mention either merges into an existing cluster or opens a
new singleton. Candidate retrieval returns every cluster in the topic;
all selectivity lives downstream in ranking and pruning.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .corpus import Mention
from .errors import StoreError


@dataclass
class Cluster:
    cluster_id: str
    mention_ids: list[str]
    created_seq: int


class ClusterStore:
    """Disjoint clusters over the processed mentions of one topic.

    Single writer per store; cluster ids are sequence-based ("c1", "c2",
    ...) so tie-breaking and logs stay deterministic.
    """

    def __init__(self, topic_id: str):
        self.topic_id = topic_id
        self.clusters: list[Cluster] = []
        self._by_mention: dict[str, Cluster] = {}
        self._next_seq = 1

    def __len__(self) -> int:
        return len(self.clusters)

    @property
    def mention_count(self) -> int:
        return len(self._by_mention)

    def contains_mention(self, mention_id: str) -> bool:
        return mention_id in self._by_mention

    def cluster_of(self, mention_id: str) -> Cluster | None:
        return self._by_mention.get(mention_id)

    def get_cluster(self, cluster_id: str) -> Cluster:
        for cluster in self.clusters:
            if cluster.cluster_id == cluster_id:
                return cluster
        raise StoreError(f"unknown cluster '{cluster_id}'")

    def candidates_for(self, target: Mention) -> list[Cluster]:
        """All current clusters, in creation order (ranking happens later)."""
        if target.topic_id != self.topic_id and target.subtopic_id != self.topic_id:
            raise StoreError(
                f"target '{target.mention_id}' belongs to topic"
                f" '{target.topic_id}', store holds '{self.topic_id}'"
            )
        if target.mention_id in self._by_mention:
            raise StoreError(f"target '{target.mention_id}' is already clustered")
        return list(self.clusters)

    def merge(self, target: Mention, cluster_id: str) -> None:
        """Append the target to an existing cluster."""
        if target.mention_id in self._by_mention:
            raise StoreError(f"target '{target.mention_id}' is already clustered")
        cluster = self.get_cluster(cluster_id)
        cluster.mention_ids.append(target.mention_id)
        self._by_mention[target.mention_id] = cluster

    def create_singleton(self, target: Mention) -> str:
        """Open a new cluster containing only the target."""
        if target.mention_id in self._by_mention:
            raise StoreError(f"target '{target.mention_id}' is already clustered")
        cluster = Cluster(
            cluster_id=f"c{self._next_seq}",
            mention_ids=[target.mention_id],
            created_seq=self._next_seq,
        )
        self._next_seq += 1
        self.clusters.append(cluster)
        self._by_mention[target.mention_id] = cluster
        return cluster.cluster_id

    def audit(self) -> None:
        """Assert disjointness, index consistency, and seq monotonicity."""
        seen: set[str] = set()
        prev_seq = 0
        for cluster in self.clusters:
            if not cluster.mention_ids:
                raise StoreError(f"cluster '{cluster.cluster_id}' is empty")
            if cluster.created_seq <= prev_seq:
                raise StoreError("created_seq is not strictly increasing")
            prev_seq = cluster.created_seq
            for mid in cluster.mention_ids:
                if mid in seen:
                    raise StoreError(f"mention '{mid}' appears in two clusters")
                seen.add(mid)
                if self._by_mention.get(mid) is not cluster:
                    raise StoreError(f"index out of sync for mention '{mid}'")
        if seen != set(self._by_mention):
            raise StoreError("index covers mentions missing from clusters")

    def export(self) -> dict:
        """JSON view: {topic_id, clusters: [{cluster_id, mention_ids}]}."""
        return {
            "topic_id": self.topic_id,
            "clusters": [
                {"cluster_id": c.cluster_id, "mention_ids": list(c.mention_ids)}
                for c in self.clusters
            ],
        }

    def partition(self) -> set[frozenset[str]]:
        """The store's clustering as a set of mention-id sets."""
        return {frozenset(c.mention_ids) for c in self.clusters}
