"""Mention data model, JSONL corpus ingestion, topic partitioning, statistics.

The corpus format is JSONL: one mention object per line, UTF-8. Lemmas
arrive precomputed (lemmatization is external to the engine); when the
lemma fields are absent they fall back to lowercased tokens and a
warning is emitted.
"""

from __future__ import annotations

import io
import json
import math
import warnings
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator

from .errors import ValidationError

REQUIRED_FIELDS = (
    "mention_id",
    "doc_id",
    "topic_id",
    "sentence_id",
    "trigger_start",
    "trigger_text",
    "sentence_tokens",
)


@dataclass(frozen=True)
class Mention:
    """One annotated event trigger with its sentence context.

    `trigger_start` is a token index into `sentence_tokens`; the trigger
    spans as many tokens as `trigger_text` has whitespace-separated words.
    `extra` preserves unknown JSON fields for lossless round-trips.
    """

    mention_id: str
    doc_id: str
    topic_id: str
    subtopic_id: str
    sentence_id: int
    trigger_start: int
    trigger_text: str
    trigger_lemmas: tuple[str, ...]
    sentence_tokens: tuple[str, ...]
    sentence_lemmas: tuple[str, ...]
    gold_cluster_id: str | None = None
    extra: tuple[tuple[str, object], ...] = ()

    @property
    def trigger_token_count(self) -> int:
        return len(self.trigger_text.split())

    def trigger_lemma_set(self) -> frozenset[str]:
        return frozenset(self.trigger_lemmas)

    def sentence_lemma_set(self) -> frozenset[str]:
        return frozenset(self.sentence_lemmas)

    def to_dict(self) -> dict:
        """JSON-serializable dict using the corpus field names."""
        d = {
            "mention_id": self.mention_id,
            "doc_id": self.doc_id,
            "topic_id": self.topic_id,
            "subtopic_id": self.subtopic_id,
            "sentence_id": self.sentence_id,
            "trigger_start": self.trigger_start,
            "trigger_text": self.trigger_text,
            "trigger_lemmas": list(self.trigger_lemmas),
            "sentence_tokens": list(self.sentence_tokens),
            "sentence_lemmas": list(self.sentence_lemmas),
        }
        if self.gold_cluster_id is not None:
            d["gold_cluster_id"] = self.gold_cluster_id
        d.update(dict(self.extra))
        return d


@dataclass(frozen=True)
class CorpusStats:
    """Corpus-level counts over gold-labelled mentions."""

    topics: int
    documents: int
    mentions: int
    clusters: int
    singletons: int
    pairs_within_topic: int
    positive_pairs: int

    def to_dict(self) -> dict:
        return {
            "topics": self.topics,
            "documents": self.documents,
            "mentions": self.mentions,
            "clusters": self.clusters,
            "singletons": self.singletons,
            "pairs_within_topic": self.pairs_within_topic,
            "positive_pairs": self.positive_pairs,
        }


_KNOWN_FIELDS = set(REQUIRED_FIELDS) | {
    "subtopic_id",
    "trigger_lemmas",
    "sentence_lemmas",
    "gold_cluster_id",
}


def _mention_from_obj(obj: dict, line_no: int) -> Mention:
    for name in REQUIRED_FIELDS:
        if name not in obj:
            raise ValidationError(f"missing required field '{name}'", line_no)

    tokens = obj["sentence_tokens"]
    if not isinstance(tokens, list) or not tokens:
        raise ValidationError("sentence_tokens must be a non-empty list", line_no)
    trigger_text = obj["trigger_text"]
    if not isinstance(trigger_text, str) or not trigger_text.strip():
        raise ValidationError("trigger_text must be a non-empty string", line_no)

    sentence_id = obj["sentence_id"]
    trigger_start = obj["trigger_start"]
    if not isinstance(sentence_id, int) or sentence_id < 0:
        raise ValidationError("sentence_id must be an integer >= 0", line_no)
    if not isinstance(trigger_start, int) or trigger_start < 0:
        raise ValidationError("trigger_start must be an integer >= 0", line_no)

    n_trigger_tokens = len(trigger_text.split())
    if trigger_start + n_trigger_tokens > len(tokens):
        raise ValidationError(
            f"trigger span [{trigger_start}, {trigger_start + n_trigger_tokens})"
            f" exceeds sentence length {len(tokens)}",
            line_no,
        )

    for lemma_field in ("trigger_lemmas", "sentence_lemmas"):
        value = obj.get(lemma_field)
        if value is not None and not isinstance(value, list):
            raise ValidationError(f"{lemma_field} must be a list", line_no)

    trigger_lemmas = obj.get("trigger_lemmas")
    if not trigger_lemmas:
        warnings.warn(
            f"line {line_no}: trigger_lemmas absent for mention"
            f" '{obj['mention_id']}'; falling back to lowercased trigger tokens",
            stacklevel=2,
        )
        trigger_lemmas = [t.lower() for t in trigger_text.split()]

    sentence_lemmas = obj.get("sentence_lemmas")
    if sentence_lemmas is None:
        warnings.warn(
            f"line {line_no}: sentence_lemmas absent for mention"
            f" '{obj['mention_id']}'; falling back to lowercased sentence tokens",
            stacklevel=2,
        )
        sentence_lemmas = [t.lower() for t in tokens]
    if len(sentence_lemmas) != len(tokens):
        raise ValidationError(
            f"sentence_lemmas has length {len(sentence_lemmas)} but"
            f" sentence_tokens has length {len(tokens)}",
            line_no,
        )

    extra = tuple(sorted((k, v) for k, v in obj.items() if k not in _KNOWN_FIELDS))
    return Mention(
        mention_id=str(obj["mention_id"]),
        doc_id=str(obj["doc_id"]),
        topic_id=str(obj["topic_id"]),
        subtopic_id=str(obj.get("subtopic_id", obj["topic_id"])),
        sentence_id=sentence_id,
        trigger_start=trigger_start,
        trigger_text=trigger_text,
        trigger_lemmas=tuple(trigger_lemmas),
        sentence_tokens=tuple(tokens),
        sentence_lemmas=tuple(sentence_lemmas),
        gold_cluster_id=obj.get("gold_cluster_id"),
        extra=extra,
    )


def _iter_lines(stream: IO | Iterable[str] | str | bytes) -> Iterator[str]:
    if isinstance(stream, bytes):
        stream = stream.decode("utf-8")
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    for line in stream:
        if isinstance(line, bytes):
            line = line.decode("utf-8")
        yield line


def parse_mentions(stream: IO | Iterable[str] | str | bytes) -> list[Mention]:
    """Parse a JSONL mention stream, enforcing all corpus invariants.

    Raises ValidationError with the offending 1-based line number on
    malformed JSON, missing fields, token/lemma length mismatch, bad
    trigger spans, and duplicate mention ids.
    """
    mentions: list[Mention] = []
    seen: set[str] = set()
    for line_no, line in enumerate(_iter_lines(stream), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"malformed JSON ({exc.msg})", line_no) from exc
        if not isinstance(obj, dict):
            raise ValidationError("each line must be a JSON object", line_no)
        mention = _mention_from_obj(obj, line_no)
        if mention.mention_id in seen:
            raise ValidationError(
                f"duplicate mention_id '{mention.mention_id}'", line_no
            )
        seen.add(mention.mention_id)
        mentions.append(mention)
    return mentions


def load_corpus(path) -> list[Mention]:
    """Read a corpus JSONL file from disk."""
    with open(path, "r", encoding="utf-8") as fh:
        return parse_mentions(fh)


def serialize_mentions(mentions: Iterable[Mention]) -> str:
    """JSONL text which parse_mentions reads back into an identical list."""
    return "".join(
        json.dumps(m.to_dict(), ensure_ascii=False) + "\n" for m in mentions
    )


def partition_key(mention: Mention, by_subtopic: bool = False) -> str:
    return mention.subtopic_id if by_subtopic else mention.topic_id


def partition_by_topic(
    mentions: Iterable[Mention], by_subtopic: bool = False
) -> dict[str, list[Mention]]:
    """Group mentions by gold topic (or subtopic) in annotator reading order.

    Within each partition mentions are sorted by
    (doc_id, sentence_id, trigger_start, mention_id), so the result does
    not depend on input order. Keys are sorted.
    """
    groups: dict[str, list[Mention]] = defaultdict(list)
    for m in mentions:
        groups[partition_key(m, by_subtopic)].append(m)
    order = lambda m: (m.doc_id, m.sentence_id, m.trigger_start, m.mention_id)
    return {key: sorted(groups[key], key=order) for key in sorted(groups)}


def corpus_stats(
    mentions: list[Mention], by_subtopic: bool = False
) -> CorpusStats:
    """Count topics, documents, mentions, clusters, and mention pairs.

    Pair counts are within-topic: pairs_within_topic sums C(m, 2) over
    topic partitions and positive_pairs sums C(c, 2) over gold clusters.
    Requires gold labels on every mention; a gold cluster spanning two
    topic partitions is rejected.
    """
    for m in mentions:
        if m.gold_cluster_id is None:
            raise ValidationError(
                f"mention '{m.mention_id}' has no gold_cluster_id;"
                " statistics require a fully labelled corpus"
            )

    cluster_topics: dict[str, str] = {}
    for m in mentions:
        topic = partition_key(m, by_subtopic)
        prev = cluster_topics.setdefault(m.gold_cluster_id, topic)
        if prev != topic:
            raise ValidationError(
                f"gold cluster '{m.gold_cluster_id}' spans topic partitions"
                f" '{prev}' and '{topic}'"
            )

    topic_sizes = Counter(partition_key(m, by_subtopic) for m in mentions)
    cluster_sizes = Counter(m.gold_cluster_id for m in mentions)

    pairs = sum(math.comb(n, 2) for n in topic_sizes.values())
    positives = sum(math.comb(n, 2) for n in cluster_sizes.values())
    return CorpusStats(
        topics=len(topic_sizes),
        documents=len({m.doc_id for m in mentions}),
        mentions=len(mentions),
        clusters=len(cluster_sizes),
        singletons=sum(1 for n in cluster_sizes.values() if n == 1),
        pairs_within_topic=pairs,
        positive_pairs=positives,
    )
