"""Model-in-the-loop event coreference annotation engine.

Suggests ranked candidate clusters for each target mention, simulates
the annotation process against gold labels to measure the
recall/annotation-effort tradeoff, and serves live annotation sessions
over HTTP.
"""

from .corpus import (
    CorpusStats,
    Mention,
    corpus_stats,
    load_corpus,
    parse_mentions,
    partition_by_topic,
    serialize_mentions,
)
from .cluster_store import Cluster, ClusterStore
from .errors import CorefLoopError, ScoreLookupError, StoreError, ValidationError
from .metrics import comparisons, export_curves, load_curves, recall
from .scorers import (
    CachedScorer,
    CombinedMatrixScorer,
    LambdaConfig,
    LemmaScorer,
    MatrixScorer,
    PairwiseScorer,
    RandomScorer,
    ScoreMatrix,
    build_bert_sentence,
    combined_score,
    jaccard,
    lemma_score,
    load_score_matrix,
    matrix_score,
    random_score,
)
from .simulator import (
    CurvePoint,
    RunResult,
    TargetRecord,
    TuneResult,
    curve_auc,
    default_k_grid,
    simulate_corpus,
    simulate_topic,
    sweep_k,
    tune_lambda,
)
from .workflow import (
    ACCEPT,
    Decision,
    NEW_CLUSTER,
    PruneConfig,
    RankedCandidate,
    apply_decision,
    prune_top_k,
    rank_candidates,
    review,
    validate_decision,
)

__version__ = "0.1.0"

__all__ = [
    "ACCEPT",
    "CachedScorer",
    "Cluster",
    "ClusterStore",
    "CombinedMatrixScorer",
    "CorefLoopError",
    "CorpusStats",
    "CurvePoint",
    "Decision",
    "LambdaConfig",
    "LemmaScorer",
    "MatrixScorer",
    "Mention",
    "NEW_CLUSTER",
    "PairwiseScorer",
    "PruneConfig",
    "RandomScorer",
    "RankedCandidate",
    "RunResult",
    "ScoreLookupError",
    "ScoreMatrix",
    "StoreError",
    "TargetRecord",
    "TuneResult",
    "ValidationError",
    "apply_decision",
    "build_bert_sentence",
    "combined_score",
    "comparisons",
    "corpus_stats",
    "curve_auc",
    "default_k_grid",
    "export_curves",
    "jaccard",
    "lemma_score",
    "load_corpus",
    "load_curves",
    "load_score_matrix",
    "matrix_score",
    "parse_mentions",
    "partition_by_topic",
    "prune_top_k",
    "random_score",
    "rank_candidates",
    "recall",
    "review",
    "serialize_mentions",
    "simulate_corpus",
    "simulate_topic",
    "sweep_k",
    "tune_lambda",
    "validate_decision",
]
