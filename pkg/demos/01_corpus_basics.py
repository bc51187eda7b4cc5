"""
Corpus basics: the mention format, validation, partitioning, statistics
=======================================================================

The engine ingests one JSONL object per event mention. Each mention is
an annotated trigger span plus its sentence, with lemmas precomputed
upstream and an optional gold cluster label for simulation.
"""

import json

from corefloop import corpus_stats, parse_mentions, partition_by_topic, serialize_mentions
from corefloop.synthetic import synthetic_corpus

# A single mention, as it appears in a corpus file.
line = json.dumps({
    "mention_id": "m1",
    "doc_id": "news_03",
    "topic_id": "t39",
    "subtopic_id": "t39a",
    "sentence_id": 4,
    "trigger_start": 3,
    "trigger_text": "replace",
    "trigger_lemmas": ["replace"],
    "sentence_tokens": ["The", "star", "will", "replace", "Smith"],
    "sentence_lemmas": ["the", "star", "will", "replace", "smith"],
    "gold_cluster_id": "g7",
})

(mention,) = parse_mentions(line)
print("parsed:", mention.mention_id, "->", mention.trigger_text,
      "in", " ".join(mention.sentence_tokens))

# Round-trips are lossless, including unknown extra fields.
assert parse_mentions(serialize_mentions([mention])) == [mention]

# A generated gold-labelled corpus stands in for real annotation data.
corpus = synthetic_corpus(seed=1, n_mentions=60, n_topics=3)
print(f"\nsynthetic corpus: {len(corpus)} mentions")

# Candidate retrieval never crosses gold topics, so everything downstream
# works on per-topic partitions in annotator reading order.
partitioned = partition_by_topic(corpus)
for topic_id, members in partitioned.items():
    print(f"  topic {topic_id}: {len(members)} mentions,"
          f" first is {members[0].mention_id} ({members[0].doc_id})")

# Corpus statistics in the usual corpus-table shape.
stats = corpus_stats(corpus)
print("\nstatistics:")
for key, value in stats.to_dict().items():
    print(f"  {key:<20} {value}")
