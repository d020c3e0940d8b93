import numpy as np
import pytest

from edgecache.model import (
    LoadCeilingError,
    MM1Latency,
    ServiceCatalog,
    SlotArrivals,
    eval_latency_cost,
    eval_marginal,
    validate_latency_pairing,
)


@pytest.fixture
def mm1():
    return MM1Latency(phi=10.0)


@pytest.fixture
def catalog():
    return ServiceCatalog(forwarding_latency=np.array([2.0, 1.0]), capacity=2)


@pytest.fixture
def arrivals():
    return SlotArrivals(rates=np.array([3.0, 4.0]), slot_index=1)


class TestTypes:
    def test_catalog_rejects_nonpositive_latency(self):
        with pytest.raises(ValueError):
            ServiceCatalog(np.array([2.0, 0.0]), 1)

    def test_catalog_rejects_zero_capacity(self):
        with pytest.raises(ValueError):
            ServiceCatalog(np.array([2.0]), 0)

    def test_descending_order_with_stable_ties(self):
        cat = ServiceCatalog(np.array([1.0, 3.0, 3.0, 2.0]), 2)
        assert list(cat.order_desc) == [1, 2, 3, 0]

    def test_arrivals_reject_negative(self):
        with pytest.raises(ValueError):
            SlotArrivals(np.array([-1.0]))

    def test_mm1_requires_positive_rate(self):
        with pytest.raises(ValueError):
            MM1Latency(phi=0.0)

    def test_pairing_validation(self, catalog):
        validate_latency_pairing(catalog, MM1Latency(phi=10.0))
        # C(0) = 1/phi = 2 > min d = 1
        with pytest.raises(ValueError):
            validate_latency_pairing(catalog, MM1Latency(phi=0.5))


class TestLatencyCost:
    def test_all_forwarded_ignores_computation(self, catalog, arrivals, mm1):
        y = np.zeros(2)
        assert eval_latency_cost(catalog, arrivals, mm1, y) == 3 * 2 + 4 * 1

    def test_worked_mixed_routing_value(self, catalog, arrivals, mm1):
        # edge load 10 - sqrt(10), remaining requests of service 1 forwarded
        s = 10 - np.sqrt(10)
        y = np.array([1.0, (s - 3.0) / 4.0])
        expected = s / (10 - s) + (4 - (s - 3)) * 1.0
        got = eval_latency_cost(catalog, arrivals, mm1, y)
        assert got == pytest.approx(expected, rel=1e-12)
        assert got == pytest.approx(2.32456, abs=1e-5)

    def test_ceiling_violation_raises(self, mm1):
        cat = ServiceCatalog(np.array([2.0]), 1)
        arr = SlotArrivals(np.array([20.0]))
        with pytest.raises(LoadCeilingError) as exc:
            eval_latency_cost(cat, arr, mm1, np.array([1.0]))
        assert exc.value.load == pytest.approx(20.0)

    def test_zero_routing_exact_forwarding_sum(self, mm1):
        rng = np.random.default_rng(3)
        for _ in range(20):
            n = int(rng.integers(1, 8))
            d = rng.uniform(2, 4, n)
            lam = rng.uniform(0, 5, n)
            cat = ServiceCatalog(d, 1)
            arr = SlotArrivals(lam)
            assert eval_latency_cost(cat, arr, mm1, np.zeros(n)) == np.dot(lam, d)


class TestMarginal:
    def test_zero_load(self, catalog, arrivals, mm1):
        assert eval_marginal(catalog, arrivals, mm1, np.zeros(2)) == pytest.approx(0.1)

    def test_closed_form_at_load_three(self, catalog, mm1):
        arr = SlotArrivals(np.array([3.0, 0.0]))
        got = eval_marginal(catalog, arr, mm1, np.array([1.0, 0.0]))
        assert got == pytest.approx(10 / 49, rel=1e-12)

    def test_mm1_closed_form_matches_generic(self, mm1):
        # marginal() closed form vs c + s*c' on a grid
        s = np.linspace(0, 10, 1001)[:-1]
        generic = mm1.c(s) + s * mm1.c_prime(s)
        assert np.allclose(mm1.marginal(s), generic, rtol=1e-12)

    def test_marginal_strictly_increasing_and_diverging(self, mm1):
        s = np.linspace(0, 10 * (1 - 1e-9), 1000)
        j = mm1.marginal(s)
        assert np.all(np.diff(j) > 0)
        assert j[-1] > 1e9

    def test_marginal_infinite_at_ceiling(self, mm1):
        assert mm1.marginal(10.0) == np.inf
        assert mm1.marginal(11.0) == np.inf


class TestGradientOfLatency:
    def test_partials_match_finite_differences(self, mm1):
        rng = np.random.default_rng(7)
        checked = 0
        while checked < 100:
            n = int(rng.integers(2, 6))
            d = rng.uniform(2, 4, n)
            lam = rng.uniform(0.1, 2.0, n)
            cat = ServiceCatalog(d, n)
            arr = SlotArrivals(lam)
            y = rng.uniform(0.05, 0.95, n)
            if np.dot(lam, y) > 0.8 * mm1.phi:
                continue
            j = eval_marginal(cat, arr, mm1, y)
            analytic = lam * (j - d)
            h = 1e-6
            for i in range(n):
                yp, ym = y.copy(), y.copy()
                yp[i] += h
                ym[i] -= h
                fd = (
                    eval_latency_cost(cat, arr, mm1, yp)
                    - eval_latency_cost(cat, arr, mm1, ym)
                ) / (2 * h)
                assert fd == pytest.approx(analytic[i], rel=1e-6, abs=1e-8)
            checked += 1
