import numpy as np
import pytest

from edgecache.caching import (
    CacherState,
    caching_update,
    project_capped_box_simplex,
)

from oracles import projection_oracle


def random_feasible(rng, n, Z):
    q = rng.uniform(0, 1, n)
    if q.sum() > Z:
        q *= Z / q.sum()
    return q


class TestProjectionExamples:
    def test_already_feasible_is_identity(self):
        v = np.array([0.2, 0.3])
        assert np.array_equal(project_capped_box_simplex(v, 2), v)

    def test_equality_case_with_uniform_shift(self):
        p = project_capped_box_simplex(np.array([0.9, 0.8, 0.7]), 2)
        assert p == pytest.approx([0.9 - 0.4 / 3, 0.8 - 0.4 / 3, 0.7 - 0.4 / 3])
        assert p.sum() == pytest.approx(2.0, abs=1e-12)

    def test_symmetric_overflow(self):
        p = project_capped_box_simplex(np.array([2.0, 2.0, 2.0]), 1)
        assert p == pytest.approx([1 / 3, 1 / 3, 1 / 3])

    def test_clip_first_shortcut(self):
        p = project_capped_box_simplex(np.array([1.5, 0.9, 0.1]), 2)
        assert p == pytest.approx([1.0, 0.9, 0.1])

    def test_vacuous_sum_constraint(self):
        v = np.array([5.0, -3.0, 0.4])
        p = project_capped_box_simplex(v, 10)
        assert p == pytest.approx([1.0, 0.0, 0.4])


class TestProjectionAgainstQP:
    def test_random_instances_match_qp_oracle(self):
        rng = np.random.default_rng(41)
        for _ in range(60):
            n = int(rng.integers(1, 21))
            Z = int(rng.integers(1, n + 1))
            v = rng.normal(0, 2, n)
            p = project_capped_box_simplex(v, Z)
            q = projection_oracle(v, Z)
            assert np.linalg.norm(p - q) <= 1e-8

    def test_worked_examples_match_qp_oracle(self):
        for v, Z in (
            ([0.2, 0.3], 2),
            ([0.9, 0.8, 0.7], 2),
            ([2.0, 2.0, 2.0], 1),
            ([1.5, 0.9, 0.1], 2),
        ):
            p = project_capped_box_simplex(np.array(v), Z)
            q = projection_oracle(np.array(v), Z)
            assert np.linalg.norm(p - q) <= 1e-8


class TestProjectionProperties:
    def test_feasibility(self):
        rng = np.random.default_rng(43)
        for _ in range(200):
            n = int(rng.integers(1, 30))
            Z = int(rng.integers(1, n + 1))
            p = project_capped_box_simplex(rng.normal(0, 3, n), Z)
            assert np.all(p >= -1e-9) and np.all(p <= 1 + 1e-9)
            assert p.sum() <= Z + 1e-9

    def test_variational_inequality(self):
        rng = np.random.default_rng(47)
        n, Z = 12, 4
        v = rng.normal(0, 2, n)
        p = project_capped_box_simplex(v, Z)
        for _ in range(100):
            q = random_feasible(rng, n, Z)
            assert np.dot(v - p, q - p) <= 1e-8

    def test_nonexpansiveness(self):
        rng = np.random.default_rng(53)
        for _ in range(100):
            n = int(rng.integers(2, 15))
            Z = int(rng.integers(1, n + 1))
            u = rng.normal(0, 2, n)
            v = rng.normal(0, 2, n)
            pu = project_capped_box_simplex(u, Z)
            pv = project_capped_box_simplex(v, Z)
            assert np.linalg.norm(pu - pv) <= np.linalg.norm(u - v) + 1e-9

    def test_idempotence(self):
        rng = np.random.default_rng(59)
        for _ in range(50):
            n = int(rng.integers(2, 15))
            Z = int(rng.integers(1, n + 1))
            p = project_capped_box_simplex(rng.normal(0, 2, n), Z)
            assert project_capped_box_simplex(p, Z) == pytest.approx(p, abs=1e-12)


class TestCachingUpdate:
    def test_zero_subgradient_from_origin(self):
        state = CacherState.initial(3, eta=0.05)
        new = caching_update(state, np.zeros(3), Z=2)
        assert np.all(new.x == 0) and np.all(new.theta == 0)

    def test_interior_step_is_unprojected(self):
        state = CacherState.initial(2, eta=0.05)
        new = caching_update(state, np.array([-3.0, 0.0]), Z=1)
        assert new.theta == pytest.approx([3.0, 0.0])
        assert new.x == pytest.approx([0.15, 0.0])

    def test_saturated_accumulator_projects_to_equality(self):
        state = CacherState(theta=np.array([100.0, 100.0]), x=np.zeros(2), eta=0.05)
        new = caching_update(state, np.zeros(2), Z=1)
        assert new.x == pytest.approx([0.5, 0.5])

    def test_state_invariant_x_is_projection_of_eta_theta(self):
        rng = np.random.default_rng(61)
        state = CacherState.initial(6, eta=0.05)
        for _ in range(30):
            g = rng.normal(0, 5, 6)
            state = caching_update(state, g, Z=3)
            assert state.x == pytest.approx(
                project_capped_box_simplex(state.eta * state.theta, 3), abs=1e-12
            )

    def test_per_slot_movement_bound(self):
        # ||x' - x||_+ <= sqrt(N) * eta * ||g||_2
        rng = np.random.default_rng(67)
        n, Z = 8, 3
        state = CacherState.initial(n, eta=0.05)
        for _ in range(50):
            g = -np.abs(rng.normal(0, 5, n))
            new = caching_update(state, g, Z)
            moved = np.maximum(new.x - state.x, 0).sum()
            assert moved <= np.sqrt(n) * state.eta * np.linalg.norm(g) + 1e-9
            state = new

    def test_initial_state_requires_positive_eta(self):
        with pytest.raises(ValueError):
            CacherState.initial(3, eta=0.0)
