"""
Tuning the trigger/sentence blend weight on a development corpus
================================================================

The lemma scorer blends trigger overlap against sentence-context
overlap with a weight in [0, 1]. tune_lambda sweeps candidate weights,
runs a full k sweep for each, and scores every curve by normalized area
under recall vs log(comparisons): higher means more recall for less
effort across the whole operating range.
"""

from corefloop import partition_by_topic, tune_lambda
from corefloop.synthetic import sentence_signal_corpus, trigger_signal_corpus

GRID = [round(0.1 * i, 10) for i in range(11)]
K_GRID = [2.0, 3.0, 5.0, 8.0, 12.0]


def report(name, result):
    print(f"\n{name}: best weight = {result.lambda_star}")
    for lam in sorted(result.auc_by_lambda):
        bar = "#" * int(40 * result.auc_by_lambda[lam])
        print(f"  lam={lam:<4} auc={result.auc_by_lambda[lam]:.4f} {bar}")


# Corpus A: the trigger word identifies the event, sentences are filler.
# The sweep should push the weight toward the trigger side.
trigger_corpus = partition_by_topic(trigger_signal_corpus(seed=11, n_mentions=80))
report("trigger-signal corpus",
       tune_lambda(trigger_corpus, "lemma", lambda_grid=GRID,
                   k_grid=K_GRID, replicates=3))

# Corpus B: mirrored construction, the sentence carries the signal.
sentence_corpus = partition_by_topic(sentence_signal_corpus(seed=11, n_mentions=80))
report("sentence-signal corpus",
       tune_lambda(sentence_corpus, "lemma", lambda_grid=GRID,
                   k_grid=K_GRID, replicates=3))

print("\nOn balanced real corpora the optimum sits between the extremes;"
      "\nthe engine defaults to 0.7 (trigger-leaning).")
