"""
Pairwise scorers and candidate ranking
======================================

Every ranking method is a pairwise scorer: a symmetric, deterministic
real-valued function of two mentions. A candidate cluster is scored by
the mean pairwise score of its members against the target, then the
ranked list is pruned to a (possibly fractional) top-k.
"""

from corefloop import (
    ClusterStore,
    LambdaConfig,
    LemmaScorer,
    MatrixScorer,
    PruneConfig,
    RandomScorer,
    build_bert_sentence,
    jaccard,
    lemma_score,
    load_score_matrix,
    prune_top_k,
    rank_candidates,
)
from corefloop.synthetic import synthetic_corpus

# --- lemma overlap -----------------------------------------------------
# Trigger and sentence lemma sets are compared with Jaccard overlap and
# blended: lam * JS(triggers) + (1 - lam) * JS(sentences).
print("jaccard({replace}, {replace}) =", jaccard({"replace"}, {"replace"}))
print("jaccard({a,b,c}, {b,c,d})     =", jaccard({"a", "b", "c"}, {"b", "c", "d"}))

corpus = synthetic_corpus(seed=2, n_mentions=30, n_topics=1)
a, b = corpus[0], corpus[1]
for lam in (0.0, 0.7, 1.0):
    print(f"lemma_score(a, b, lam={lam}) = {lemma_score(a, b, LambdaConfig(lam)):.4f}")

# --- text for external embedding pipelines -----------------------------
# Offline scorers consume exactly this combined-sentence construction,
# so their score matrices line up with what the engine ranks.
print("\ncombined sentence:", build_bert_sentence(a))

# --- precomputed score matrices -----------------------------------------
# Embedding-based methods run offline and deliver pair scores as CSV.
csv_text = (
    "mention_id_a,mention_id_b,score\n"
    f"{a.mention_id},{b.mention_id},0.91\n"
)
matrix = load_score_matrix(csv_text, default_score=0.05)
external = MatrixScorer(matrix)
print(f"matrix score either direction: {external.score(a, b)}"
      f" == {external.score(b, a)}")

# --- ranking and pruning -------------------------------------------------
# Build a store with a few clusters, then rank them for a new target.
by_id = {m.mention_id: m for m in corpus}
store = ClusterStore("t0")
for m in corpus[:8]:
    store.create_singleton(m)
target = corpus[10]

scorer = LemmaScorer(LambdaConfig(0.7))
ranked = rank_candidates(target, store.candidates_for(target), by_id, scorer)
print(f"\nranked candidates for {target.mention_id} (trigger"
      f" '{target.trigger_text}'):")
for c in ranked[:5]:
    members = store.get_cluster(c.cluster_id).mention_ids
    print(f"  rank {c.rank}: {c.cluster_id} score={c.score:.4f} members={members}")

# Fractional k: floor(k) candidates plus one more with probability equal
# to the decimal part, drawn deterministically from (seed, draw_index).
cfg = PruneConfig(k=2.5, seed=42)
counts = [len(prune_top_k(ranked, cfg, draw)) for draw in range(12)]
print("\npresented counts at k=2.5 over 12 targets:", counts)

# The random baseline is just another scorer, so the code path is shared.
baseline = RandomScorer(seed=42)
print("random baseline score:", round(baseline.score(a, b), 4))
