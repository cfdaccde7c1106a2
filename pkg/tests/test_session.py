import numpy as np
import pytest
from fastapi.testclient import TestClient

from designsearch.problem import DesignProblem, InstanceSpec, generate_instance
from designsearch.service import create_app
from designsearch.session import (
    Rating,
    SessionManager,
    rating_score,
    replay_session,
)


@pytest.fixture(scope="module")
def small_problem():
    return generate_instance(InstanceSpec(6, 6, 14, 2, 0.8, seed=31))


@pytest.fixture(scope="module")
def problems(small_problem):
    return {small_problem.name: small_problem}


@pytest.fixture()
def client(problems):
    return TestClient(create_app(problems))


def create_session(client, problems, engine="aco", **overrides):
    body = {"problem": next(iter(problems)), "engine": engine, "seed": 1}
    body.update(overrides)
    response = client.post("/sessions", json=body)
    assert response.status_code == 200, response.text
    return response.json()["id"]


def rate_all(client, session_id, level=4):
    body = [{"index": i, "level": level} for i in range(10)]
    return client.post(f"/sessions/{session_id}/ratings", json=body)


class TestRatingScale:
    def test_affine_mapping(self):
        assert rating_score(1) == 0.0
        assert rating_score(7) == 100.0
        assert rating_score(4) == pytest.approx(50.0)

    def test_level_validation(self):
        with pytest.raises(Exception):
            Rating(0, 0)
        with pytest.raises(Exception):
            Rating(0, 8)


class TestCreate:
    def test_population_of_ten_feasible(self, client, problems):
        session_id = create_session(client, problems, engine="aco")
        population = client.get(f"/sessions/{session_id}/population").json()
        assert len(population["candidates"]) == 10
        assert all(c["feasible"] for c in population["candidates"])

    def test_each_candidate_partitions_all_elements(
        self, client, problems, small_problem
    ):
        session_id = create_session(client, problems, engine="ea-ng")
        population = client.get(f"/sessions/{session_id}/population").json()
        all_names = set(small_problem.attribute_names) | set(
            small_problem.method_names
        )
        for candidate in population["candidates"]:
            seen = [
                name
                for group in candidate["classes"]
                for name in group["attributes"] + group["methods"]
            ]
            assert sorted(seen) == sorted(all_names)

    def test_unknown_problem_404(self, client):
        response = client.post(
            "/sessions", json={"problem": "nope", "engine": "aco"}
        )
        assert response.status_code == 404

    def test_gls_engine_rejected(self, client, problems):
        response = client.post(
            "/sessions",
            json={"problem": next(iter(problems)), "engine": "gls"},
        )
        assert response.status_code == 422

    def test_sessions_are_independent(self, client, problems):
        a = create_session(client, problems, seed=1)
        b = create_session(client, problems, seed=2)
        assert a != b
        pop_a = client.get(f"/sessions/{a}/population").json()
        pop_b = client.get(f"/sessions/{b}/population").json()
        assert pop_a != pop_b

    def test_unknown_session_404(self, client):
        assert client.get("/sessions/missing").status_code == 404


class TestRatingsAndStepping:
    def test_step_advances_generation(self, client, problems):
        session_id = create_session(client, problems, engine="ea-xp")
        summary = rate_all(client, session_id).json()
        assert summary["generation"] == 1
        assert summary["evaluations"] == 9  # elite carried over

    def test_aco_step_costs_colony_size(self, client, problems):
        session_id = create_session(client, problems, engine="aco")
        summary = rate_all(client, session_id).json()
        assert summary["evaluations"] == 10

    def test_missing_rating_422(self, client, problems):
        session_id = create_session(client, problems)
        body = [{"index": i, "level": 4} for i in range(9)]
        response = client.post(f"/sessions/{session_id}/ratings", json=body)
        assert response.status_code == 422

    def test_duplicate_rating_422(self, client, problems):
        session_id = create_session(client, problems)
        body = [{"index": 0, "level": 4}] + [
            {"index": i, "level": 4} for i in range(9)
        ]
        response = client.post(f"/sessions/{session_id}/ratings", json=body)
        assert response.status_code == 422

    def test_out_of_range_level_422(self, client, problems):
        session_id = create_session(client, problems)
        body = [{"index": i, "level": 9} for i in range(10)]
        response = client.post(f"/sessions/{session_id}/ratings", json=body)
        assert response.status_code == 422

    def test_exhaustion_at_cap(self, client, problems):
        session_id = create_session(client, problems, engine="aco", evaluation_cap=30)
        for _ in range(3):
            response = rate_all(client, session_id)
            assert response.status_code == 200
        summary = client.get(f"/sessions/{session_id}").json()
        assert summary["evaluations"] == 30
        assert summary["status"] == "exhausted"
        assert rate_all(client, session_id).status_code == 409
        assert client.get(f"/sessions/{session_id}/population").status_code == 409

    def test_cap_never_exceeded(self, client, problems):
        session_id = create_session(client, problems, engine="ea-ng", evaluation_cap=25)
        while True:
            response = rate_all(client, session_id)
            if response.status_code != 200:
                break
            assert response.json()["evaluations"] <= 25

    def test_best_so_far_tracks_ratings(self, client, problems):
        session_id = create_session(client, problems)
        summary = rate_all(client, session_id, level=7).json()
        assert summary["best_so_far"] is not None
        assert summary["best_so_far"]["fitness"] > 0

    def test_concurrent_mutation_conflict(self, problems, small_problem):
        manager = SessionManager(problems)
        session = manager.create(small_problem.name, "aco", seed=3)
        app_client = TestClient(create_app(problems))
        app_client.app.state.manager.sessions[session.id] = session
        session.lock.acquire()
        try:
            response = app_client.post(
                f"/sessions/{session.id}/ratings",
                json=[{"index": i, "level": 4} for i in range(10)],
            )
            assert response.status_code == 409
        finally:
            session.lock.release()


class TestFreezing:
    def test_freeze_on_ea_is_unsupported(self, client, problems):
        session_id = create_session(client, problems, engine="ea-xp")
        response = client.post(
            f"/sessions/{session_id}/freeze", json={"candidate": 0, "class": 0}
        )
        assert response.status_code == 400
        assert "unsupported" in response.json()["detail"]

    def test_freeze_keeps_class_together(self, client, problems, small_problem):
        session_id = create_session(client, problems, engine="aco", seed=5)
        population = client.get(f"/sessions/{session_id}/population").json()
        target = population["candidates"][0]["classes"][0]
        response = client.post(
            f"/sessions/{session_id}/freeze", json={"candidate": 0, "class": 0}
        )
        assert response.status_code == 200
        frozen = set(response.json()["frozen"])
        name_of = {
            i: small_problem.element_name(i)
            for i in range(small_problem.element_count)
        }
        frozen_names = {name_of[i] for i in frozen}
        assert frozen_names == set(target["attributes"] + target["methods"])

        for _ in range(5):
            rate_all(client, session_id)
            population = client.get(f"/sessions/{session_id}/population").json()
            intact = sum(
                any(
                    frozen_names <= set(group["attributes"] + group["methods"])
                    for group in candidate["classes"]
                )
                for candidate in population["candidates"]
            )
            assert intact >= 9

    def test_unfreeze_restores(self, client, problems):
        session_id = create_session(client, problems, engine="aco", seed=6)
        response = client.post(
            f"/sessions/{session_id}/freeze", json={"candidate": 0, "class": 1}
        )
        frozen = response.json()["frozen"]
        response = client.request(
            "DELETE", f"/sessions/{session_id}/freeze", json={"class": frozen}
        )
        assert response.status_code == 200
        summary = client.get(f"/sessions/{session_id}").json()
        assert summary["frozen_classes"] == []

    def test_unfreeze_unknown_class_422(self, client, problems):
        session_id = create_session(client, problems, engine="aco", seed=7)
        response = client.request(
            "DELETE", f"/sessions/{session_id}/freeze", json={"class": [0, 1, 2]}
        )
        assert response.status_code == 422


class TestReplay:
    def test_event_log_replays_to_same_state(self, problems, small_problem):
        manager = SessionManager(problems)
        session = manager.create(small_problem.name, "aco", seed=11)
        rng = np.random.default_rng(0)
        for _ in range(4):
            levels = [int(rng.integers(1, 8)) for _ in range(10)]
            session.submit_ratings([Rating(i, lvl) for i, lvl in enumerate(levels)])
        twin = replay_session(problems, session.events)
        assert twin.evaluations == session.evaluations
        assert twin.generation == session.generation
        assert [d.canonical() for d in twin.engine.designs(small_problem)] == [
            d.canonical() for d in session.engine.designs(small_problem)
        ]


class TestCompletion:
    def test_perfect_candidate_completes_session(self):
        # one class holding everything: every design is fully decoupled
        problem = DesignProblem(
            name="single",
            attribute_names=("a0",),
            method_names=("m0",),
            uses=((0, 0),),
            class_count=1,
        )
        manager = SessionManager({"single": problem})
        session = manager.create("single", "ea-ng", seed=1)
        summary = session.submit_ratings([Rating(i, 7) for i in range(10)])
        assert summary["status"] == "completed"
        with pytest.raises(Exception):
            session.submit_ratings([Rating(i, 7) for i in range(10)])
