"""Operator command line: validate, stats, simulate, sweep, tune-lambda, serve.

Every command is deterministic given its flags: all randomness (random
baseline scores, fractional top-k draws) is keyed off --seed through
stable hashing, so one integer reproduces any output byte for byte.
Exit codes: 0 ok, 1 runtime error, 2 validation/usage error.
"""

from __future__ import annotations

import json
import sys

import click

from .corpus import corpus_stats, load_corpus, partition_by_topic
from .errors import CorefLoopError, ValidationError
from .metrics import export_curves
from .scorers import SCORER_NAMES, build_scorer
from .simulator import default_k_grid, simulate_corpus, sweep_k, tune_lambda
from .workflow import PruneConfig

EXIT_RUNTIME = 1
EXIT_VALIDATION = 2


def _fail(message: str, code: int) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _load(corpus_path: str):
    try:
        return load_corpus(corpus_path)
    except ValidationError as exc:
        _fail(str(exc), EXIT_VALIDATION)
    except OSError as exc:
        _fail(str(exc), EXIT_RUNTIME)


def _scorer(name: str, lam: float, matrix: tuple[str, ...], seed: int,
            default_score: float | None):
    try:
        return build_scorer(name, lam=lam, matrix_paths=matrix, seed=seed,
                            default_score=default_score)
    except ValidationError as exc:
        _fail(str(exc), EXIT_VALIDATION)
    except OSError as exc:
        _fail(str(exc), EXIT_RUNTIME)


def _parse_grid(spec: str) -> list[float]:
    """Parse 'start:stop:step' (inclusive) or a comma-separated list."""
    try:
        if ":" in spec:
            start_s, stop_s, step_s = spec.split(":")
            start, stop, step = float(start_s), float(stop_s), float(step_s)
            if step <= 0:
                raise ValueError("step must be positive")
            n = int(round((stop - start) / step))
            grid = [round(start + i * step, 10) for i in range(n + 1)]
            return [g for g in grid if g <= stop + 1e-9]
        return [float(x) for x in spec.split(",") if x.strip()]
    except ValueError as exc:
        raise click.UsageError(f"bad grid '{spec}': {exc}") from exc


scorer_option = click.option(
    "--scorer", type=click.Choice(SCORER_NAMES), default="lemma",
    show_default=True, help="Ranking method.",
)
matrix_option = click.option(
    "--matrix", multiple=True, type=click.Path(),
    help="Pair-score file; pass twice for 'combined' (trigger, then context).",
)
lambda_option = click.option(
    "--lambda", "lam", type=click.FloatRange(0.0, 1.0), default=0.7,
    show_default=True,
    help="Trigger-vs-sentence blend weight for lemma/combined scorers.",
)
seed_option = click.option(
    "--seed", type=int, default=0, show_default=True,
    help="Root seed; reproduces all draws.",
)
default_score_option = click.option(
    "--default-score", type=float, default=None,
    help="Fallback score for pairs missing from the matrix.",
)
subtopic_option = click.option(
    "--by-subtopic", is_flag=True, default=False,
    help="Scope candidates by subtopic_id instead of topic_id.",
)


@click.group()
def main():
    """Event-coreference annotation engine."""


@main.command()
@click.argument("corpus", type=click.Path())
def validate(corpus):
    """Parse CORPUS and report invariant violations (exit 2 on failure)."""
    mentions = _load(corpus)
    click.echo(f"ok: {len(mentions)} mentions, all invariants satisfied")


@main.command()
@click.argument("corpus", type=click.Path())
@subtopic_option
def stats(corpus, by_subtopic):
    """Print corpus statistics (topics, mentions, clusters, pairs)."""
    mentions = _load(corpus)
    try:
        s = corpus_stats(mentions, by_subtopic=by_subtopic)
    except ValidationError as exc:
        _fail(str(exc), EXIT_VALIDATION)
    rows = [
        ("topics (T)", s.topics),
        ("documents (D)", s.documents),
        ("mentions (M)", s.mentions),
        ("clusters (C)", s.clusters),
        ("singletons (S)", s.singletons),
        ("pairs within topic (P)", s.pairs_within_topic),
        ("coreferent pairs (P+)", s.positive_pairs),
    ]
    width = max(len(label) for label, _ in rows)
    for label, value in rows:
        click.echo(f"{label:<{width}}  {value}")


@main.command()
@click.option("--corpus", "corpus_path", required=True, type=click.Path())
@scorer_option
@matrix_option
@lambda_option
@default_score_option
@click.option("--k", type=float, required=True, help="Top-k prune level (>= 1).")
@seed_option
@click.option("--oracle-repair", is_flag=True, default=False,
              help="On a pruned-away match, merge anyway instead of fragmenting.")
@subtopic_option
def simulate(corpus_path, scorer, matrix, lam, default_score, k, seed,
             oracle_repair, by_subtopic):
    """Run one gold-oracle simulation; print the RunResult as JSON."""
    mentions = _load(corpus_path)
    ranker = _scorer(scorer, lam, matrix, seed, default_score)
    try:
        result = simulate_corpus(
            partition_by_topic(mentions, by_subtopic),
            ranker,
            PruneConfig(k=k, seed=seed),
            oracle_repair=oracle_repair,
        )
    except CorefLoopError as exc:
        _fail(str(exc), EXIT_VALIDATION)
    except ValueError as exc:
        _fail(str(exc), EXIT_VALIDATION)
    click.echo(json.dumps(result.to_dict(), sort_keys=True, indent=2))


@main.command()
@click.option("--corpus", "corpus_path", required=True, type=click.Path())
@scorer_option
@matrix_option
@lambda_option
@default_score_option
@click.option("--k-min", type=float, default=2.0, show_default=True)
@click.option("--k-max", type=float, default=20.0, show_default=True)
@click.option("--k-step", type=float, default=0.5, show_default=True)
@click.option("--replicates", type=int, default=5, show_default=True)
@seed_option
@click.option("--oracle-repair", is_flag=True, default=False,
              help="On a pruned-away match, merge anyway instead of fragmenting.")
@subtopic_option
@click.option("--out", type=click.Path(), required=True,
              help="Curve file; .json extension switches to JSON.")
def sweep(corpus_path, scorer, matrix, lam, default_score, k_min, k_max,
          k_step, replicates, seed, oracle_repair, by_subtopic, out):
    """Sweep k and write the recall/comparisons tradeoff curve."""
    mentions = _load(corpus_path)
    ranker = _scorer(scorer, lam, matrix, seed, default_score)
    grid = _parse_grid(f"{k_min}:{k_max}:{k_step}")
    try:
        points = sweep_k(
            partition_by_topic(mentions, by_subtopic),
            ranker,
            k_grid=grid,
            replicates=replicates,
            base_seed=seed,
            oracle_repair=oracle_repair,
        )
    except CorefLoopError as exc:
        _fail(str(exc), EXIT_VALIDATION)
    except ValueError as exc:
        _fail(str(exc), EXIT_VALIDATION)
    fmt = "json" if str(out).endswith(".json") else "csv"
    export_curves(points, fmt, out)
    manifest = {
        "corpus": corpus_path,
        "scorer": scorer,
        "lambda": lam,
        "matrix": list(matrix),
        "default_score": default_score,
        "k_grid": grid,
        "replicates": replicates,
        "seed": seed,
        "oracle_repair": oracle_repair,
        "by_subtopic": by_subtopic,
        "out": str(out),
        "format": fmt,
    }
    with open(f"{out}.manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    click.echo(f"wrote {len(points)} curve points to {out}")


@main.command("tune-lambda")
@click.option("--corpus", "corpus_path", required=True, type=click.Path(),
              help="Development corpus used for tuning.")
@click.option("--scorer", type=click.Choice(["lemma", "combined"]),
              default="lemma", show_default=True)
@matrix_option
@default_score_option
@click.option("--lambda-grid", default="0:1:0.1", show_default=True,
              help="start:stop:step or comma-separated weights in [0, 1].")
@click.option("--k-min", type=float, default=2.0, show_default=True)
@click.option("--k-max", type=float, default=20.0, show_default=True)
@click.option("--k-step", type=float, default=0.5, show_default=True)
@click.option("--replicates", type=int, default=5, show_default=True)
@seed_option
@subtopic_option
@click.option("--out", type=click.Path(), required=True, help="Report JSON path.")
def tune_lambda_cmd(corpus_path, scorer, matrix, default_score, lambda_grid,
                    k_min, k_max, k_step, replicates, seed, by_subtopic, out):
    """Sweep blend weights on a dev corpus and report the best one."""
    mentions = _load(corpus_path)
    grid = _parse_grid(lambda_grid)
    k_grid = _parse_grid(f"{k_min}:{k_max}:{k_step}")
    matrices = None
    if scorer == "combined":
        if len(matrix) != 2:
            _fail("scorer 'combined' needs two --matrix files"
                  " (trigger, then context)", EXIT_VALIDATION)
        from .scorers import load_score_matrix

        loaded = []
        try:
            for path in matrix:
                with open(path, "r", encoding="utf-8") as fh:
                    loaded.append(load_score_matrix(fh, default_score))
        except ValidationError as exc:
            _fail(str(exc), EXIT_VALIDATION)
        except OSError as exc:
            _fail(str(exc), EXIT_RUNTIME)
        matrices = (loaded[0], loaded[1])
    try:
        result = tune_lambda(
            partition_by_topic(mentions, by_subtopic),
            scorer_family=scorer,
            lambda_grid=grid,
            k_grid=k_grid,
            replicates=replicates,
            base_seed=seed,
            matrices=matrices,
        )
    except CorefLoopError as exc:
        _fail(str(exc), EXIT_VALIDATION)
    except ValueError as exc:
        _fail(str(exc), EXIT_VALIDATION)
    report = {
        "lambda_star": result.lambda_star,
        "auc_by_lambda": {str(lam): auc
                          for lam, auc in sorted(result.auc_by_lambda.items())},
        "curves": {
            str(lam): [
                {"k": p.k, "recall": p.recall, "comparisons": p.comparisons,
                 "replicates": p.replicates}
                for p in points
            ]
            for lam, points in sorted(result.curves_by_lambda.items())
        },
        "config": {
            "scorer": scorer,
            "lambda_grid": grid,
            "k_grid": k_grid,
            "replicates": replicates,
            "seed": seed,
        },
    }
    with open(out, "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
    click.echo(f"lambda_star = {result.lambda_star} (report: {out})")


@main.command()
@click.option("--corpus", "corpus_path", required=True, type=click.Path())
@scorer_option
@matrix_option
@lambda_option
@default_score_option
@click.option("--k", type=float, default=3.0, show_default=True)
@seed_option
@subtopic_option
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--state", "state_dir", type=click.Path(), required=True,
              help="Directory for session manifests and decision logs.")
def serve(corpus_path, scorer, matrix, lam, default_score, k, seed,
          by_subtopic, port, host, state_dir):
    """Serve live annotation sessions over HTTP."""
    import uvicorn

    from .service import SessionConfig, create_app

    _load(corpus_path)  # fail fast on a bad corpus before binding the port
    defaults = SessionConfig(
        scorer=scorer,
        k=k,
        lam=lam,
        seed=seed,
        by_subtopic=by_subtopic,
        matrix_paths=tuple(matrix),
        default_score=default_score,
        corpus_path=corpus_path,
    )
    app = create_app(state_dir, defaults)
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
