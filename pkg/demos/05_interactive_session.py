"""A simulated human driving the interactive session API.

Talks to the HTTP service in-process, rating each of the ten candidates by
eye (here: a noisy preference for balanced classes), freezing a liked class,
and stepping until the evaluation cap.
"""

import numpy as np
from fastapi.testclient import TestClient

from designsearch import InstanceSpec, generate_instance
from designsearch.service import create_app

problem = generate_instance(InstanceSpec(16, 15, 39, 5, 0.85, seed=101))
client = TestClient(create_app({problem.name: problem}))
rng = np.random.default_rng(11)

session = client.post(
    "/sessions", json={"problem": problem.name, "engine": "aco", "seed": 42}
).json()
sid = session["id"]
print(f"session {sid} on {session['problem']} ({session['engine']})")


def simulated_levels(candidates):
    """Prefer even class sizes, with rating noise: a stand-in for a person."""
    levels = []
    for candidate in candidates:
        sizes = [
            len(group["attributes"]) + len(group["methods"])
            for group in candidate["classes"]
        ]
        spread = np.std(sizes)
        level = int(np.clip(round(7 - spread + rng.normal(0, 0.7)), 1, 7))
        levels.append(level)
    return levels


frozen = None
for step in range(25):
    population = client.get(f"/sessions/{sid}/population").json()
    candidates = population["candidates"]
    levels = simulated_levels(candidates)

    if step == 3:  # freeze the favourite class of the top-rated candidate
        favourite = int(np.argmax(levels))
        response = client.post(
            f"/sessions/{sid}/freeze", json={"candidate": favourite, "class": 0}
        )
        frozen = response.json()["frozen"]
        names = [problem.element_name(i) for i in frozen]
        print(f"  step {step}: froze {{{', '.join(names)}}}")

    body = [{"index": i, "level": lvl} for i, lvl in enumerate(levels)]
    summary = client.post(f"/sessions/{sid}/ratings", json=body).json()
    if step % 6 == 0 or summary["status"] != "active":
        print(
            f"  step {step}: gen {summary['generation']}, "
            f"evaluations {summary['evaluations']}/{summary['evaluation_cap']}, "
            f"best so far {summary['best_so_far']['fitness']:.1f}"
        )
    if summary["status"] != "active":
        print(f"  session {summary['status']}")
        break

final = client.get(f"/sessions/{sid}").json()
best = final["best_so_far"]
print(f"\nbest rated design (fitness {best['fitness']:.1f}, coupling {best['f_cbo']:.1f}):")
for k, group in enumerate(best["classes"]):
    members = ", ".join(group["attributes"] + group["methods"])
    print(f"  class {k}: {members}")
