"""Pairwise mention-coreference scorers behind one interface.

All scorers are symmetric and deterministic for a fixed configuration:

* ``LemmaScorer`` — weighted Jaccard overlap of trigger and sentence
  lemma sets (runs natively, no models involved).
* ``MatrixScorer`` — lookups into a precomputed pairwise score matrix,
  the entry point for scores produced offline by embedding models.
* ``CombinedMatrixScorer`` — weighted combination of two precomputed
  matrices (trigger-level and combined-sentence-level scores).
* ``RandomScorer`` — seeded hash-uniform baseline (no ranking signal).
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from typing import IO, Iterable, Protocol

from .corpus import Mention
from .errors import ScoreLookupError, ValidationError
from .seeding import stable_uniform

SENTENCE_SEPARATOR = "[SEP]"


class PairwiseScorer(Protocol):
    """A real-valued coreference score for a mention pair."""

    name: str

    def score(self, target: Mention, candidate: Mention) -> float: ...


@dataclass(frozen=True)
class LambdaConfig:
    """Weight blending trigger similarity against sentence-context similarity.

    The default of 0.7 is the tuned operating point; see
    ``simulator.tune_lambda`` for re-deriving it on a development corpus.
    """

    lam: float = 0.7

    def __post_init__(self):
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError(f"lambda must be in [0, 1], got {self.lam}")


def jaccard(a: Iterable[str], b: Iterable[str]) -> float:
    """Set Jaccard overlap |a ∩ b| / |a ∪ b|.

    Two empty sets count as identical (1.0); exactly one empty set is
    maximally dissimilar (0.0).
    """
    sa, sb = set(a), set(b)
    if not sa and not sb:
        return 1.0
    if not sa or not sb:
        return 0.0
    return len(sa & sb) / len(sa | sb)


def combined_score(
    trigger_score: float, context_score: float, cfg: LambdaConfig
) -> float:
    """lam * trigger_score + (1 - lam) * context_score."""
    if not (math.isfinite(trigger_score) and math.isfinite(context_score)):
        raise ValueError(
            f"sub-scores must be finite, got ({trigger_score}, {context_score})"
        )
    return cfg.lam * trigger_score + (1.0 - cfg.lam) * context_score


def lemma_score(target: Mention, candidate: Mention, cfg: LambdaConfig) -> float:
    """Weighted Jaccard of trigger lemma sets and sentence lemma sets."""
    trig = jaccard(target.trigger_lemma_set(), candidate.trigger_lemma_set())
    sent = jaccard(target.sentence_lemma_set(), candidate.sentence_lemma_set())
    return combined_score(trig, sent, cfg)


def build_bert_sentence(m: Mention) -> str:
    """Combined sentence consumed by external embedding pipelines.

    Concatenates the trigger text, a separator token, and the full
    sentence so offline scorers see exactly the text the engine would.
    """
    return f"{m.trigger_text} {SENTENCE_SEPARATOR} {' '.join(m.sentence_tokens)}"


def random_score(seed: int, a: Mention, b: Mention) -> float:
    """Deterministic pseudo-uniform score in [0, 1) for an unordered pair."""
    lo, hi = sorted((a.mention_id, b.mention_id))
    return stable_uniform("pair-score", seed, lo, hi)


class ScoreMatrix:
    """Symmetric mention-pair score lookup, keyed by unordered id pair."""

    def __init__(self, scores: dict[tuple[str, str], float] | None = None,
                 default_score: float | None = None):
        self._scores: dict[tuple[str, str], float] = {}
        self.default_score = default_score
        if scores:
            for (a, b), s in scores.items():
                self.put(a, b, s)

    @staticmethod
    def _key(a: str, b: str) -> tuple[str, str]:
        return (a, b) if a <= b else (b, a)

    def put(self, a: str, b: str, score: float, line: int | None = None) -> None:
        if not math.isfinite(score):
            raise ValidationError(f"non-finite score for pair ({a}, {b})", line)
        key = self._key(a, b)
        existing = self._scores.get(key)
        if existing is not None and existing != score:
            raise ValidationError(
                f"conflicting scores for pair ({a}, {b}): {existing} vs {score}",
                line,
            )
        self._scores[key] = score

    def lookup(self, a: str, b: str) -> float:
        key = self._key(a, b)
        if key in self._scores:
            return self._scores[key]
        if self.default_score is not None:
            return self.default_score
        raise ScoreLookupError(
            f"no score for mention pair ({a}, {b}) and no default configured"
        )

    def __len__(self) -> int:
        return len(self._scores)


def load_score_matrix(
    stream: IO | str, default_score: float | None = None
) -> ScoreMatrix:
    """Load a pair-score file (CSV with header, or JSONL objects).

    CSV columns: ``mention_id_a,mention_id_b,score``. JSONL objects:
    ``{"a": ..., "b": ..., "score": ...}``. Pair order is irrelevant;
    duplicate entries must agree.
    """
    if isinstance(stream, str):
        text = stream
    else:
        text = stream.read()
        if isinstance(text, bytes):
            text = text.decode("utf-8")

    matrix = ScoreMatrix(default_score=default_score)
    stripped = text.lstrip()
    if stripped.startswith("{"):
        for line_no, line in enumerate(io.StringIO(text), start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValidationError(
                    f"malformed JSON ({exc.msg})", line_no
                ) from exc
            try:
                a, b, score = obj["a"], obj["b"], obj["score"]
            except (TypeError, KeyError) as exc:
                raise ValidationError(
                    "pair object must have fields a, b, score", line_no
                ) from exc
            matrix.put(str(a), str(b), _parse_score(score, line_no), line_no)
    else:
        reader = csv.reader(io.StringIO(text))
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != [
            "mention_id_a",
            "mention_id_b",
            "score",
        ]:
            raise ValidationError(
                "expected CSV header 'mention_id_a,mention_id_b,score'", 1
            )
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise ValidationError(f"expected 3 columns, got {len(row)}", line_no)
            matrix.put(row[0], row[1], _parse_score(row[2], line_no), line_no)
    return matrix


def _parse_score(raw: object, line_no: int) -> float:
    try:
        score = float(raw)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"score '{raw}' is not a number", line_no) from exc
    if not math.isfinite(score):
        raise ValidationError(f"score '{raw}' is not finite", line_no)
    return score


def matrix_score(mx: ScoreMatrix, a: Mention, b: Mention) -> float:
    return mx.lookup(a.mention_id, b.mention_id)


class LemmaScorer:
    def __init__(self, cfg: LambdaConfig | None = None):
        self.cfg = cfg or LambdaConfig()
        self.name = "lemma"

    def score(self, target: Mention, candidate: Mention) -> float:
        return lemma_score(target, candidate, self.cfg)


class MatrixScorer:
    def __init__(self, matrix: ScoreMatrix, name: str = "matrix"):
        self.matrix = matrix
        self.name = name

    def score(self, target: Mention, candidate: Mention) -> float:
        return matrix_score(self.matrix, target, candidate)


class CombinedMatrixScorer:
    """Weighted combination of trigger-level and context-level matrices.

    Both matrices hold externally computed scores (e.g. token-level
    similarity of the triggers, and of the combined sentences built by
    ``build_bert_sentence``); the blend weight is applied natively.
    """

    def __init__(self, trigger_matrix: ScoreMatrix, context_matrix: ScoreMatrix,
                 cfg: LambdaConfig | None = None):
        self.trigger_matrix = trigger_matrix
        self.context_matrix = context_matrix
        self.cfg = cfg or LambdaConfig()
        self.name = "combined"

    def score(self, target: Mention, candidate: Mention) -> float:
        return combined_score(
            matrix_score(self.trigger_matrix, target, candidate),
            matrix_score(self.context_matrix, target, candidate),
            self.cfg,
        )


class RandomScorer:
    """No-signal baseline: a seeded uniform score per unordered pair."""

    def __init__(self, seed: int):
        self.seed = seed
        self.name = "random"

    def score(self, target: Mention, candidate: Mention) -> float:
        return random_score(self.seed, target, candidate)


SCORER_NAMES = ("lemma", "matrix", "combined", "random")


def build_scorer(
    name: str,
    lam: float = 0.7,
    matrix_paths: tuple[str, ...] = (),
    seed: int = 0,
    default_score: float | None = None,
) -> PairwiseScorer:
    """Construct a scorer from configuration values (CLI and service).

    `matrix` needs one pair-score file; `combined` needs two, the
    trigger-level matrix first and the context-level matrix second.
    """
    if name == "lemma":
        if matrix_paths:
            raise ValidationError("scorer 'lemma' takes no score matrix")
        return LemmaScorer(LambdaConfig(lam))
    if name == "random":
        if matrix_paths:
            raise ValidationError("scorer 'random' takes no score matrix")
        return RandomScorer(seed)
    if name == "matrix":
        if len(matrix_paths) != 1:
            raise ValidationError(
                f"scorer 'matrix' needs exactly one score file,"
                f" got {len(matrix_paths)}"
            )
        with open(matrix_paths[0], "r", encoding="utf-8") as fh:
            return MatrixScorer(load_score_matrix(fh, default_score))
    if name == "combined":
        if len(matrix_paths) != 2:
            raise ValidationError(
                "scorer 'combined' needs two score files"
                " (trigger matrix, then context matrix),"
                f" got {len(matrix_paths)}"
            )
        loaded = []
        for path in matrix_paths:
            with open(path, "r", encoding="utf-8") as fh:
                loaded.append(load_score_matrix(fh, default_score))
        return CombinedMatrixScorer(loaded[0], loaded[1], LambdaConfig(lam))
    raise ValidationError(
        f"unknown scorer '{name}' (choose from {', '.join(SCORER_NAMES)})"
    )


class CachedScorer:
    """Memoizes a deterministic scorer over unordered id pairs."""

    def __init__(self, inner: PairwiseScorer):
        self.inner = inner
        self.name = inner.name
        self._cache: dict[tuple[str, str], float] = {}

    def score(self, target: Mention, candidate: Mention) -> float:
        key = ScoreMatrix._key(target.mention_id, candidate.mention_id)
        hit = self._cache.get(key)
        if hit is None:
            hit = self._cache[key] = self.inner.score(target, candidate)
        return hit
