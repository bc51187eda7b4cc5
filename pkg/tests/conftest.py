from __future__ import annotations

import pytest

from corefloop.corpus import Mention
from corefloop.synthetic import synthetic_corpus


def make_mention(
    mention_id: str,
    trigger: str = "replace",
    sentence: str | None = None,
    topic_id: str = "t1",
    doc_id: str = "d1",
    sentence_id: int = 0,
    trigger_start: int = 0,
    gold: str | None = None,
    trigger_lemmas: tuple[str, ...] | None = None,
    sentence_lemmas: tuple[str, ...] | None = None,
) -> Mention:
    """Hand-rolled mention for small fixtures."""
    trig_tokens = trigger.split()
    if sentence is None:
        tokens = tuple(trig_tokens)
        trigger_start = 0
    else:
        tokens = tuple(sentence.split())
    return Mention(
        mention_id=mention_id,
        doc_id=doc_id,
        topic_id=topic_id,
        subtopic_id=topic_id,
        sentence_id=sentence_id,
        trigger_start=trigger_start,
        trigger_text=trigger,
        trigger_lemmas=trigger_lemmas or tuple(t.lower() for t in trig_tokens),
        sentence_tokens=tokens,
        sentence_lemmas=sentence_lemmas or tuple(t.lower() for t in tokens),
        gold_cluster_id=gold,
    )


# (seed, size, topics) for the synthetic fixture suite: 10 corpora,
# 20-500 mentions, cluster sizes mixed by construction
FIXTURE_PARAMS = [
    (101, 20, 1),
    (102, 35, 2),
    (103, 50, 2),
    (104, 80, 3),
    (105, 120, 3),
    (106, 160, 4),
    (107, 200, 4),
    (108, 260, 4),
    (109, 350, 5),
    (110, 500, 6),
]


@pytest.fixture(scope="session")
def fixture_suite() -> list[tuple[str, list[Mention]]]:
    return [
        (f"synthetic-{size}", synthetic_corpus(seed, size, topics))
        for seed, size, topics in FIXTURE_PARAMS
    ]
