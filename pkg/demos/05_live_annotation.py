"""
Driving a live annotation session over the HTTP API
===================================================

The same rank/prune pipeline serves human annotators: GET next returns
the pending target with its pruned candidate list, POST decision merges
or opens a cluster and advances the cursor. This demo runs the service
in-process and plays the annotator with a script; point the browser UI
(frontend/) at a real `corefloop serve` instance for the same flow.
"""

import tempfile

from fastapi.testclient import TestClient

from corefloop.service import SessionConfig, create_app
from corefloop.synthetic import synthetic_corpus

corpus = synthetic_corpus(seed=14, n_mentions=12, n_topics=1)
gold = {m.mention_id: m.gold_cluster_id for m in corpus}

state_dir = tempfile.mkdtemp(prefix="corefloop-demo-")
app = create_app(state_dir, SessionConfig(scorer="lemma", k=3.0, seed=0))
client = TestClient(app)

resp = client.post("/sessions", json={"corpus": [m.to_dict() for m in corpus]})
session_id = resp.json()["session_id"]
print(f"session {session_id}, state in {state_dir}")

while True:
    resp = client.get(f"/sessions/{session_id}/next")
    if resp.status_code == 204:
        break
    payload = resp.json()
    target = payload["target"]
    tokens = target["sentence_tokens"]
    start = target["trigger_start"]
    end = start + target["trigger_token_count"]
    highlighted = " ".join(
        f"[{t}]" if start <= i < end else t for i, t in enumerate(tokens)
    )
    print(f"\ntarget {target['mention_id']}: {highlighted}")

    # The scripted annotator reviews candidates in rank order and accepts
    # the first one that is truly coreferent (it peeks at gold labels).
    decision = None
    for candidate in payload["candidates"]:
        member = candidate["mentions"][0]
        print(f"  candidate {candidate['rank']}"
              f" ({candidate['cluster_id']}, score {candidate['score']:.3f}):"
              f" trigger '{member['trigger_text']}'")
        if gold[member["mention_id"]] == gold[target["mention_id"]]:
            decision = {
                "target_id": target["mention_id"],
                "kind": "accept",
                "cluster_id": candidate["cluster_id"],
                "reviewed_count": candidate["rank"],
            }
            print(f"  -> accept at rank {candidate['rank']}")
            break
    if decision is None:
        decision = {
            "target_id": target["mention_id"],
            "kind": "new_cluster",
            "reviewed_count": len(payload["candidates"]),
        }
        print("  -> no match, new cluster")
    client.post(f"/sessions/{session_id}/decision", json=decision)

metrics = client.get(f"/sessions/{session_id}/metrics").json()
print(f"\nfinished: {metrics['done']}/{metrics['total']} targets,"
      f" {metrics['comparisons_total']} comparisons,"
      f" recall {metrics['recall']:.3f}")

export = client.get(f"/sessions/{session_id}/export").json()
for topic in export["topics"]:
    print(f"clusters in {topic['topic_id']}:",
          [c["mention_ids"] for c in topic["clusters"]])
