import pytest
from fastapi.testclient import TestClient

from corefloop.corpus import partition_by_topic, serialize_mentions
from corefloop.scorers import LemmaScorer, LambdaConfig
from corefloop.service import SessionConfig, create_app
from corefloop.simulator import simulate_corpus
from corefloop.synthetic import synthetic_corpus
from corefloop.workflow import PruneConfig
from conftest import make_mention


def fig_style_mentions():
    """Four mentions staged so the last target ranks its non-coreferent
    lexical twin first and its true match second."""
    return [
        make_mention("m2", trigger="replace", sentence="will make debut replace",
                     trigger_start=3, doc_id="d1", gold="H"),
        make_mention("mstar", trigger="take over", sentence="take over the show",
                     trigger_start=0, doc_id="d2", gold="X"),
        make_mention("m4", trigger="step into", sentence="step into replace smith shoe",
                     trigger_start=0, doc_id="d3", gold="G"),
        make_mention("m1", trigger="replace", sentence="will replace smith",
                     trigger_start=1, doc_id="d4", gold="G"),
    ]


@pytest.fixture()
def client(tmp_path):
    app = create_app(tmp_path / "state", SessionConfig(scorer="lemma", k=5.0))
    with TestClient(app) as c:
        yield c


def _create_inline(client, mentions, **config):
    body = {"corpus": [m.to_dict() for m in mentions]}
    body.update(config)
    resp = client.post("/sessions", json=body)
    assert resp.status_code == 200, resp.text
    return resp.json()["session_id"]


def _gold_of(corpus):
    return {m.mention_id: m.gold_cluster_id for m in corpus}


def drive_with_oracle(client, session_id, gold_by_id):
    """Gold-oracle client: accept the first gold-matching candidate."""
    while True:
        resp = client.get(f"/sessions/{session_id}/next")
        if resp.status_code == 204:
            return
        payload = resp.json()
        target_id = payload["target"]["mention_id"]
        target_gold = gold_by_id[target_id]
        decision = None
        for candidate in payload["candidates"]:
            member = candidate["mentions"][0]["mention_id"]
            if gold_by_id[member] == target_gold:
                decision = {
                    "target_id": target_id,
                    "kind": "accept",
                    "cluster_id": candidate["cluster_id"],
                    "reviewed_count": candidate["rank"],
                }
                break
        if decision is None:
            decision = {
                "target_id": target_id,
                "kind": "new_cluster",
                "reviewed_count": len(payload["candidates"]),
            }
        resp = client.post(f"/sessions/{session_id}/decision", json=decision)
        assert resp.status_code == 200, resp.text


class TestSessionBasics:
    def test_first_target_has_no_candidates(self, client):
        sid = _create_inline(client, fig_style_mentions())
        payload = client.get(f"/sessions/{sid}/next").json()
        assert payload["candidates"] == []
        assert payload["target"]["mention_id"] == "m2"
        assert payload["progress"] == {
            "done": 0, "total": 4, "comparisons_so_far": 0,
        }

    def test_first_decision_must_be_new_cluster(self, client):
        sid = _create_inline(client, fig_style_mentions())
        resp = client.post(
            f"/sessions/{sid}/decision",
            json={"target_id": "m2", "kind": "accept", "cluster_id": "c1",
                  "reviewed_count": 1},
        )
        assert resp.status_code == 422

    def test_unknown_session_404(self, client):
        assert client.get("/sessions/nope/next").status_code == 404

    def test_stale_target_409(self, client):
        sid = _create_inline(client, fig_style_mentions())
        resp = client.post(
            f"/sessions/{sid}/decision",
            json={"target_id": "m4", "kind": "new_cluster", "reviewed_count": 0},
        )
        assert resp.status_code == 409

    def test_invalid_body_422(self, client):
        sid = _create_inline(client, fig_style_mentions())
        resp = client.post(f"/sessions/{sid}/decision", json={"kind": "accept"})
        assert resp.status_code == 422

    def test_wrong_reviewed_count_422(self, client):
        sid = _create_inline(client, fig_style_mentions())
        client.post(
            f"/sessions/{sid}/decision",
            json={"target_id": "m2", "kind": "new_cluster", "reviewed_count": 0},
        )
        resp = client.post(
            f"/sessions/{sid}/decision",
            json={"target_id": "mstar", "kind": "new_cluster",
                  "reviewed_count": 0},  # one candidate was presented
        )
        assert resp.status_code == 422

    def test_corpusless_session_422(self, tmp_path):
        app = create_app(tmp_path / "state")
        with TestClient(app) as client:
            assert client.post("/sessions", json={}).status_code == 422


class TestWalkthrough:
    def test_accept_at_rank_two_contributes_two_comparisons(self, client):
        mentions = fig_style_mentions()
        sid = _create_inline(client, mentions, k=5.0)
        drive_with_oracle(client, sid, _gold_of(mentions))

        metrics = client.get(f"/sessions/{sid}/metrics").json()
        per_target = {row["target_id"]: row for row in metrics["per_target"]}
        # the final target reviewed its lexical twin first, then accepted
        assert per_target["m1"]["comparisons"] == 2
        assert per_target["m1"]["hit_rank"] == 2
        assert metrics["comparisons_total"] == 0 + 1 + 2 + 2

        export = client.get(f"/sessions/{sid}/export").json()
        (topic,) = export["topics"]
        clusters = {frozenset(c["mention_ids"]) for c in topic["clusters"]}
        assert clusters == {
            frozenset({"m2"}), frozenset({"mstar"}), frozenset({"m4", "m1"}),
        }

    def test_candidates_sorted_by_rank_with_scores(self, client):
        mentions = fig_style_mentions()
        sid = _create_inline(client, mentions)
        gold = _gold_of(mentions)
        for _ in range(3):
            payload = client.get(f"/sessions/{sid}/next").json()
            target_id = payload["target"]["mention_id"]
            client.post(
                f"/sessions/{sid}/decision",
                json={"target_id": target_id, "kind": "new_cluster",
                      "reviewed_count": len(payload["candidates"])},
            )
        payload = client.get(f"/sessions/{sid}/next").json()
        assert payload["target"]["mention_id"] == "m1"
        ranks = [c["rank"] for c in payload["candidates"]]
        scores = [c["score"] for c in payload["candidates"]]
        assert ranks == [1, 2, 3]
        assert scores == sorted(scores, reverse=True)
        first_members = [m["mention_id"]
                         for m in payload["candidates"][0]["mentions"]]
        assert first_members == ["m2"]

    def test_exhausted_session_204(self, client):
        mentions = fig_style_mentions()
        sid = _create_inline(client, mentions)
        drive_with_oracle(client, sid, _gold_of(mentions))
        assert client.get(f"/sessions/{sid}/next").status_code == 204


class TestPersistence:
    def test_restart_replays_to_identical_state(self, tmp_path):
        state = tmp_path / "state"
        corpus = synthetic_corpus(seed=70, n_mentions=12, n_topics=2)
        gold = _gold_of(corpus)

        app = create_app(state, SessionConfig(scorer="lemma", k=3.0, seed=2))
        with TestClient(app) as client:
            sid = _create_inline(client, corpus, k=3.0, seed=2)
            # decide the first 7 targets, then "crash"
            for _ in range(7):
                payload = client.get(f"/sessions/{sid}/next").json()
                target_id = payload["target"]["mention_id"]
                match = None
                for cand in payload["candidates"]:
                    member = cand["mentions"][0]["mention_id"]
                    if gold[member] == gold[target_id]:
                        match = cand
                        break
                if match:
                    body = {"target_id": target_id, "kind": "accept",
                            "cluster_id": match["cluster_id"],
                            "reviewed_count": match["rank"]}
                else:
                    body = {"target_id": target_id, "kind": "new_cluster",
                            "reviewed_count": len(payload["candidates"])}
                assert client.post(
                    f"/sessions/{sid}/decision", json=body
                ).status_code == 200
            before_next = client.get(f"/sessions/{sid}/next").json()
            before_metrics = client.get(f"/sessions/{sid}/metrics").json()
            before_export = client.get(f"/sessions/{sid}/export").json()

        revived = create_app(state, SessionConfig(scorer="lemma", k=3.0, seed=2))
        with TestClient(revived) as client:
            assert client.get(f"/sessions/{sid}/next").json() == before_next
            assert client.get(f"/sessions/{sid}/metrics").json() == before_metrics
            assert client.get(f"/sessions/{sid}/export").json() == before_export

    def test_corpus_path_sessions_restore(self, tmp_path):
        corpus = synthetic_corpus(seed=71, n_mentions=8, n_topics=1)
        corpus_path = tmp_path / "corpus.jsonl"
        corpus_path.write_text(serialize_mentions(corpus), encoding="utf-8")
        state = tmp_path / "state"

        app = create_app(state, SessionConfig(corpus_path=str(corpus_path)))
        with TestClient(app) as client:
            resp = client.post("/sessions", json={"k": 2.0, "seed": 1})
            sid = resp.json()["session_id"]

        revived = create_app(state)
        with TestClient(revived) as client:
            sessions = client.get("/sessions").json()
            assert [s["session_id"] for s in sessions] == [sid]
            assert client.get(f"/sessions/{sid}/next").status_code == 200


class TestSimulatorEquivalence:
    @pytest.mark.parametrize("k,seed", [(2.5, 3), (3.0, 0), (10.0, 7)])
    def test_oracle_client_matches_in_process_simulation(self, tmp_path, k, seed):
        corpus = synthetic_corpus(seed=72, n_mentions=50, n_topics=2,
                                  trigger_fidelity=0.45)
        expected = simulate_corpus(
            partition_by_topic(corpus),
            LemmaScorer(LambdaConfig(0.7)),
            PruneConfig(k=k, seed=seed),
        )

        app = create_app(tmp_path / "state")
        with TestClient(app) as client:
            sid = _create_inline(client, corpus, k=k, seed=seed, scorer="lemma")
            drive_with_oracle(client, sid, _gold_of(corpus))
            metrics = client.get(f"/sessions/{sid}/metrics").json()

        assert metrics["comparisons_total"] == expected.total_comparisons
        assert metrics["recall"] == expected.recall
        by_target = {r.target_id: r for r in expected.records}
        for row in metrics["per_target"]:
            record = by_target[row["target_id"]]
            assert row["comparisons"] == record.comparisons
            assert row["hit_rank"] == record.hit_rank
            assert row["had_coreferent_in_store"] == record.had_coreferent_in_store
            assert row["presented_count"] == record.presented_count
