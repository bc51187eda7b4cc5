"""Deterministic synthetic corpora for simulation studies and tests.

Real annotation corpora cannot ship with the engine, so these builders
produce gold-labelled corpora with controllable signal: a general mixed
corpus whose triggers are informative but noisy, plus two adversarial
constructions where either the trigger or the sentence context carries
all the clustering signal (used to sanity-check blend-weight tuning).
"""

from __future__ import annotations

import random

from .corpus import Mention, partition_by_topic
from .scorers import ScoreMatrix
from .seeding import stable_uniform

_FILLER = [
    "say", "report", "week", "year", "city", "new", "old", "group",
    "plan", "talk", "meet", "day", "time", "place", "people", "claim",
]

_VERBS = [
    "replace", "resign", "win", "lose", "buy", "sell", "attack", "arrest",
    "launch", "cancel", "merge", "split", "hire", "fire", "open", "close",
    "elect", "crash", "strike", "sign", "sue", "settle", "ban", "approve",
]


def _draw_cluster_sizes(rng: random.Random, n: int) -> list[int]:
    # mixed sizes: plenty of singletons, occasional large clusters
    sizes = []
    remaining = n
    while remaining > 0:
        size = min(remaining, rng.choice([1, 1, 1, 2, 2, 3, 3, 4, 5, 8]))
        sizes.append(size)
        remaining -= size
    return sizes


def _make_mention(
    mention_id: str,
    topic_id: str,
    doc_id: str,
    sentence_id: int,
    trigger_lemmas: list[str],
    context_lemmas: list[str],
    gold_cluster_id: str,
) -> Mention:
    trigger_text = " ".join(trigger_lemmas)
    tokens = context_lemmas[:2] + trigger_lemmas + context_lemmas[2:]
    trigger_start = 2
    return Mention(
        mention_id=mention_id,
        doc_id=doc_id,
        topic_id=topic_id,
        subtopic_id=topic_id,
        sentence_id=sentence_id,
        trigger_start=trigger_start,
        trigger_text=trigger_text,
        trigger_lemmas=tuple(trigger_lemmas),
        sentence_tokens=tuple(tokens),
        sentence_lemmas=tuple(t.lower() for t in tokens),
        gold_cluster_id=gold_cluster_id,
    )


def synthetic_corpus(
    seed: int,
    n_mentions: int,
    n_topics: int = 2,
    trigger_fidelity: float = 0.8,
) -> list[Mention]:
    """General gold-labelled corpus with noisy lexical signal.

    Each gold cluster owns a core trigger verb; a mention repeats the
    core with probability `trigger_fidelity`, otherwise it uses a random
    verb. Sentences mix cluster words with shared filler, so lemma
    overlap correlates with gold labels without determining them.
    """
    rng = random.Random(seed)
    mentions: list[Mention] = []
    counter = 0
    per_topic = [n_mentions // n_topics] * n_topics
    for i in range(n_mentions % n_topics):
        per_topic[i] += 1

    for t, topic_n in enumerate(per_topic):
        topic_id = f"t{t}"
        n_docs = max(2, topic_n // 4)
        for c, size in enumerate(_draw_cluster_sizes(rng, topic_n)):
            gold = f"g{t}_{c}"
            core = rng.choice(_VERBS)
            cluster_words = rng.sample(_FILLER, 3)
            for _ in range(size):
                trigger = [core if rng.random() < trigger_fidelity
                           else rng.choice(_VERBS)]
                context = (
                    rng.sample(cluster_words, 2)
                    + rng.sample(_FILLER, 3)
                )
                rng.shuffle(context)
                mentions.append(
                    _make_mention(
                        mention_id=f"m{counter:04d}",
                        topic_id=topic_id,
                        doc_id=f"{topic_id}_d{rng.randrange(n_docs)}",
                        sentence_id=rng.randrange(30),
                        trigger_lemmas=trigger,
                        context_lemmas=context,
                        gold_cluster_id=gold,
                    )
                )
                counter += 1
    return mentions


def _signal_corpus(
    seed: int,
    n_mentions: int,
    n_topics: int,
    signal_in_trigger: bool,
) -> list[Mention]:
    rng = random.Random(seed)
    mentions: list[Mention] = []
    counter = 0
    per_topic = [n_mentions // n_topics] * n_topics
    for i in range(n_mentions % n_topics):
        per_topic[i] += 1

    for t, topic_n in enumerate(per_topic):
        topic_id = f"t{t}"
        n_docs = max(2, topic_n // 4)
        for c, size in enumerate(_draw_cluster_sizes(rng, topic_n)):
            gold = f"g{t}_{c}"
            core = f"core_{t}_{c}"
            for _ in range(size):
                # the signal side carries the cluster's private core word
                # plus shared filler; the noise side is filler only
                signal = [core] + rng.sample(_FILLER, rng.choice([1, 2]))
                noise = rng.sample(_FILLER, 4)
                if signal_in_trigger:
                    trigger, context = signal, noise
                else:
                    trigger, context = noise[:2], signal + noise[2:]
                mentions.append(
                    _make_mention(
                        mention_id=f"m{counter:04d}",
                        topic_id=topic_id,
                        doc_id=f"{topic_id}_d{rng.randrange(n_docs)}",
                        sentence_id=rng.randrange(30),
                        trigger_lemmas=trigger,
                        context_lemmas=context,
                        gold_cluster_id=gold,
                    )
                )
                counter += 1
    return mentions


def trigger_signal_corpus(
    seed: int = 11, n_mentions: int = 80, n_topics: int = 2
) -> list[Mention]:
    """Triggers determine the gold clusters; sentences are pure filler."""
    return _signal_corpus(seed, n_mentions, n_topics, signal_in_trigger=True)


def sentence_signal_corpus(
    seed: int = 11, n_mentions: int = 80, n_topics: int = 2
) -> list[Mention]:
    """Sentences determine the gold clusters; triggers are pure filler."""
    return _signal_corpus(seed, n_mentions, n_topics, signal_in_trigger=False)


def random_matrix_for(
    mentions: list[Mention],
    seed: int,
    by_subtopic: bool = False,
    correlate_with_gold: float = 0.0,
) -> ScoreMatrix:
    """Score matrix covering every within-topic pair.

    Scores are seeded uniforms; `correlate_with_gold` > 0 shifts
    coreferent pairs upward so matrix-backed runs have real signal.
    """
    matrix = ScoreMatrix()
    for topic_mentions in partition_by_topic(mentions, by_subtopic).values():
        for i, a in enumerate(topic_mentions):
            for b in topic_mentions[i + 1:]:
                base = stable_uniform("synthetic-matrix", seed,
                                      *sorted((a.mention_id, b.mention_id)))
                if a.gold_cluster_id == b.gold_cluster_id:
                    base = min(1.0, base + correlate_with_gold)
                matrix.put(a.mention_id, b.mention_id, base)
    return matrix
