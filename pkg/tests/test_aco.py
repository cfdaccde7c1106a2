import numpy as np
import pytest

from designsearch.aco import (
    AcoConfig,
    AcoEngine,
    PheromoneMatrix,
    construct_trail,
    freeze_class,
    run_aco,
    unfreeze_class,
    update_pheromone,
)
from designsearch.encodings import XpGenotype
from designsearch.evaluation import LabelCodec
from designsearch.harness import brute_force_optimum, rank_significance
from designsearch.gls import random_rows


class TestConstructTrail:
    def test_valid_permutation(self, cbs_dim):
        pher = PheromoneMatrix(cbs_dim)
        rng = np.random.default_rng(0)
        n = pher.node_count
        for _ in range(100):
            trail = construct_trail(pher, 1.5, rng)
            assert np.array_equal(np.sort(trail.perm), np.arange(n))

    def test_uniform_tau_gives_uniform_steps(self, toy):
        # with equal pheromone everywhere the first two nodes are a uniform
        # ordered pair regardless of alpha
        pher = PheromoneMatrix(toy)
        rng = np.random.default_rng(1)
        n = pher.node_count
        counts = np.zeros((n, n))
        trials = 20_000
        for _ in range(trials):
            trail = construct_trail(pher, 2.5, rng)
            counts[trail.perm[0], trail.perm[1]] += 1
        expected = trials / (n * (n - 1))
        sigma = np.sqrt(expected)
        off_diagonal = counts[~np.eye(n, dtype=bool)]
        assert np.all(np.abs(off_diagonal - expected) < 5 * sigma)

    def test_full_evaporation_falls_back_to_uniform(self, toy):
        pher = PheromoneMatrix(toy)
        pher.tau[:] = 0.0
        rng = np.random.default_rng(2)
        trail = construct_trail(pher, 1.0, rng)
        assert np.array_equal(np.sort(trail.perm), np.arange(pher.node_count))

    def test_pinned_pair_stays_adjacent(self, cbs_dim):
        pher = PheromoneMatrix(cbs_dim)
        freeze_class(pher, [0, cbs_dim.attribute_count], tau_high=1e6)
        rng = np.random.default_rng(3)
        adjacent = 0
        trials = 1000
        method_node = cbs_dim.attribute_count
        for _ in range(trials):
            perm = construct_trail(pher, 1.0, rng).perm
            i = int(np.flatnonzero(perm == 0)[0])
            j = int(np.flatnonzero(perm == method_node)[0])
            if abs(i - j) == 1 or {i, j} == {0, len(perm) - 1}:
                adjacent += 1
        assert adjacent > 990

    def test_feasibility_bias_constructs_feasible(self, sc_dim):
        pher = PheromoneMatrix(sc_dim)
        codec = LabelCodec(sc_dim)
        rng = np.random.default_rng(4)
        feasible = sum(
            int(
                codec.feasible(
                    codec.xp_labels(construct_trail(pher, 1.5, rng, True).perm)
                )[0]
            )
            for _ in range(200)
        )
        assert feasible >= 180


class TestUpdatePheromone:
    def test_full_decay_zeroes_everything(self, toy):
        pher = PheromoneMatrix(toy)
        update_pheromone(pher, [], mu=0.0, rho=1.0)
        assert np.all(pher.tau == 0.0)

    def test_full_decay_keeps_frozen(self, toy):
        pher = PheromoneMatrix(toy)
        freeze_class(pher, [0, 2], tau_high=50.0)
        update_pheromone(pher, [], mu=0.0, rho=1.0)
        assert pher.tau[0, 2] == 50.0
        assert pher.tau[2, 0] == 50.0

    def test_deposit_on_perfect_trail(self, toy):
        pher = PheromoneMatrix(toy)
        trail = XpGenotype(np.arange(pher.node_count), element_count=4)
        update_pheromone(pher, [(trail, 100.0)], mu=3.0, rho=0.0)
        assert pher.tau[0, 1] == pytest.approx(1.0 + 3.0)
        assert pher.tau[pher.node_count - 1, 0] == pytest.approx(4.0)  # closing link

    def test_shared_link_arithmetic(self, toy):
        # two of the ants traverse link (0,1); fitness 50, mu 3, rho 0.1
        pher = PheromoneMatrix(toy)
        n = pher.node_count
        base = np.arange(n)
        t1 = XpGenotype(base.copy(), 4)
        t2 = XpGenotype(np.array([0, 1, 3, 2, 5, 4]), 4)
        update_pheromone(pher, [(t1, 50.0), (t2, 50.0)], mu=3.0, rho=0.1)
        assert pher.tau[0, 1] == pytest.approx(0.9 * 1.0 + 2 * 3.0 * 0.5)

    def test_symmetry_preserved(self, cbs_dim):
        pher = PheromoneMatrix(cbs_dim)
        rng = np.random.default_rng(5)
        trails = [
            (construct_trail(pher, 1.0, rng), float(rng.uniform(0, 100)))
            for _ in range(10)
        ]
        update_pheromone(pher, trails, mu=2.0, rho=0.3)
        assert np.array_equal(pher.tau, pher.tau.T)

    def test_negative_fitness_deposits_nothing(self, toy):
        pher = PheromoneMatrix(toy)
        trail = XpGenotype(np.arange(pher.node_count), 4)
        update_pheromone(pher, [(trail, -40.0)], mu=3.0, rho=0.0)
        assert np.all(pher.tau >= 0.0)
        assert pher.tau[0, 1] == 1.0

    def test_deposit_linearity(self, cbs_dim):
        pher = PheromoneMatrix(cbs_dim)
        rng = np.random.default_rng(6)
        n = pher.node_count
        trails = [
            (construct_trail(pher, 0.0, rng), 40.0),
            (construct_trail(pher, 0.0, rng), 70.0),
        ]
        before = np.triu(pher.tau).sum()
        update_pheromone(pher, trails, mu=3.0, rho=0.0)
        added = np.triu(pher.tau).sum() - before
        assert added == pytest.approx(3.0 / 100.0 * (40.0 + 70.0) * n)


class TestFreezing:
    def test_infeasible_class_rejected(self, toy):
        pher = PheromoneMatrix(toy)
        with pytest.raises(ValueError, match="feasible"):
            freeze_class(pher, [0, 1])  # attributes only

    def test_freeze_then_unfreeze_restores(self, toy):
        pher = PheromoneMatrix(toy)
        freeze_class(pher, [0, 2], tau_high=99.0)
        assert pher.tau[0, 2] == 99.0
        unfreeze_class(pher, [0, 2])
        assert pher.tau[0, 2] == pher.tau0
        assert not pher.frozen_pairs

    def test_unfreeze_unknown_class(self, toy):
        pher = PheromoneMatrix(toy)
        with pytest.raises(ValueError, match="not frozen"):
            unfreeze_class(pher, [0, 2])

    def test_frozen_class_decodes_together(self, cbs_dim):
        pher = PheromoneMatrix(cbs_dim)
        codec = LabelCodec(cbs_dim)
        group = sorted(cbs_dim.manual_design.classes[0])
        freeze_class(pher, group, tau_high=1e6)
        rng = np.random.default_rng(7)
        intact = 0
        trials = 1000
        for _ in range(trials):
            labels = codec.xp_labels(construct_trail(pher, 1.0, rng).perm)[0]
            if len({int(labels[i]) for i in group}) == 1:
                intact += 1
        assert intact >= 990


class TestRunAco:
    def test_toy_direct_finds_optimum(self, toy):
        optimum, _ = brute_force_optimum(toy)
        hits = 0
        for seed in range(50):
            record = run_aco(
                toy,
                AcoConfig(
                    alpha=1.0, mu=3.0, rho=0.1, colony_size=10,
                    constraint_mode="direct", budget=500,
                    target_fitness=optimum, seed=seed,
                ),
            )
            hits += record.best.f_cbo == pytest.approx(optimum)
        assert hits >= 49

    def test_exact_budget_with_partial_iteration(self, cbs_dim):
        record = run_aco(
            cbs_dim, AcoConfig(colony_size=25, budget=60, seed=1)
        )
        assert record.total_evaluations == 60

    def test_determinism(self, cbs_dim):
        cfg = AcoConfig(colony_size=10, budget=300, seed=2)
        a = run_aco(cbs_dim, cfg)
        b = run_aco(cbs_dim, cfg)
        assert a.best == b.best
        assert a.aes == b.aes

    def test_indirect_zeroes_infeasible(self, cbs_dim):
        seen = []
        run_aco(
            cbs_dim,
            AcoConfig(colony_size=10, budget=300, seed=3),
            eval_hook=lambda i, f, s: seen.append((f, s)),
        )
        assert all(s == 0.0 for f, s in seen if not f)

    def test_direct_mode_feasible_or_zero(self, sc_dim):
        # the regeneration cap may exhaust on the hard instance; those ants
        # must score zero and never deposit
        seen = []
        run_aco(
            sc_dim,
            AcoConfig(colony_size=10, budget=100, seed=4, constraint_mode="direct"),
            eval_hook=lambda i, f, s: seen.append((f, s)),
        )
        assert all(f or s == 0.0 for f, s in seen)

    def test_random_search_equivalence_when_unguided(self, cbs_dim):
        # alpha = 0 and mu = 0 is uniform random search over permutations
        aco_best = [
            run_aco(
                cbs_dim,
                AcoConfig(alpha=0.0, mu=0.0, rho=0.0, colony_size=25, budget=500, seed=s),
            ).best.f_cbo
            for s in range(12)
        ]
        codec = LabelCodec(cbs_dim)
        uniform_best = []
        for s in range(12):
            rng = np.random.default_rng(1000 + s)
            rows = random_rows("xp", codec, rng, 500)
            labels = codec.xp_labels(rows)
            feasible = codec.feasible(labels)
            scores = np.where(feasible, codec.coupling_scores(labels), 0.0)
            uniform_best.append(float(scores.max()))
        _, p = rank_significance(aco_best, uniform_best)
        assert p > 0.01

    def test_mo_requires_direct(self, toy):
        with pytest.raises(ValueError, match="direct"):
            run_aco(toy, AcoConfig(budget=10, seed=0), objective="mo")

    def test_config_validation(self):
        with pytest.raises(ValueError):
            AcoConfig(alpha=-1.0)
        with pytest.raises(ValueError):
            AcoConfig(rho=2.0)
        with pytest.raises(ValueError):
            AcoConfig(regeneration_cap=0)
        with pytest.raises(ValueError):
            AcoConfig(use_link_boost=0.5)


class TestAcoEngine:
    def test_colony_always_feasible(self, cbs_dim):
        cfg = AcoConfig(
            colony_size=6, constraint_mode="direct", feasibility_bias=True, seed=5
        )
        engine = AcoEngine(cbs_dim, cfg, np.random.default_rng(5))
        for _ in range(3):
            assert all(d.feasible for d in engine.designs(cbs_dim))
            engine.advance(np.linspace(10, 60, 6))

    def test_advance_returns_colony_size(self, cbs_dim):
        cfg = AcoConfig(colony_size=6, constraint_mode="direct", seed=6)
        engine = AcoEngine(cbs_dim, cfg, np.random.default_rng(6))
        assert engine.advance(np.ones(6)) == 6
