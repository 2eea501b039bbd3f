import math

import numpy as np
import pytest

import linsteer.search as search
from linsteer.errors import SettingsError
from linsteer.qubit import PHI_PLUS, ZERO_ZERO, mes_from_parameters, random_unit_vector
from linsteer.search import (
    MesSearchResult,
    SearchConfig,
    certify_corollary2,
    certify_theorem1,
    certify_theorem2,
    child_seed,
    max_over_all_states,
    max_over_mes,
    mes_objective,
    optimize_alice_directions,
)
from linsteer.steering import MeasurementSettings, build_steering_operator, eval_fn, signed_expectation

from oracles import nuclear_norm_bound

X, Y, Z = (1, 0, 0), (0, 1, 0), (0, 0, 1)
XZ = (1 / math.sqrt(2), 0, 1 / math.sqrt(2))
NEG = [(-1, 0, 0), (0, -1, 0), (0, 0, -1)]


def test_search_config_defaults_and_validation():
    cfg = SearchConfig()
    assert (cfg.multistarts, cfg.max_iterations, cfg.convergence_tolerance) == (24, 2000, 1e-10)
    for bad in ({"multistarts": 0}, {"convergence_tolerance": 0.0}, {"seed": -1}, {"max_iterations": 0}):
        with pytest.raises(SettingsError):
            SearchConfig(**bad)


def test_child_seed_is_stable_and_distinct():
    assert child_seed(11, 2, 0) == child_seed(11, 2, 0)
    assert len({child_seed(11, 2, t) for t in range(100)}) == 100


class TestMaxOverAllStates:
    def test_corollary1(self):
        s = MeasurementSettings([Z, X], [Z, X])
        rep = max_over_all_states(s)
        assert rep.mu_max == pytest.approx(math.sqrt(2), abs=1e-12)
        assert rep.witness_concurrence == pytest.approx(1, abs=1e-10)
        assert eval_fn(rep.witness_state, s) == pytest.approx(rep.mu_max, abs=1e-10)

    def test_single_setting_degenerate_cluster(self):
        rep = max_over_all_states(MeasurementSettings([Z], [Z]))
        assert rep.mu_max == pytest.approx(1, abs=1e-12)
        assert rep.top_cluster.shape == (4, 2)
        proj = rep.top_cluster @ rep.top_cluster.conj().T
        for v in (ZERO_ZERO, PHI_PLUS):
            assert np.linalg.norm(proj @ v) == pytest.approx(1, abs=1e-12)

    def test_forty_five_degrees(self):
        rep = max_over_all_states(MeasurementSettings([Z, XZ], [Z, X]))
        assert rep.mu_max == pytest.approx(math.sqrt(1 + 1 / math.sqrt(2)), abs=1e-12)

    def test_witness_consistency_random(self):
        rng = np.random.default_rng(31)
        for _ in range(100):
            n = int(rng.integers(1, 7))
            s = MeasurementSettings([random_unit_vector(rng) for _ in range(n)], [random_unit_vector(rng) for _ in range(n)])
            rep = max_over_all_states(s)
            assert eval_fn(rep.witness_state, s) == pytest.approx(rep.mu_max, abs=1e-10)
            assert rep.mu_max == pytest.approx(nuclear_norm_bound(s.alice, s.bob), abs=1e-10)


class TestMaxOverMes:
    def test_objective_matches_state_path(self):
        rng = np.random.default_rng(2)
        s = MeasurementSettings([random_unit_vector(rng) for _ in range(3)], [random_unit_vector(rng) for _ in range(3)])
        op = build_steering_operator(s)
        f = mes_objective(op.matrix)
        for _ in range(50):
            xi = rng.uniform(-7, 7, 3)
            assert f(xi) == pytest.approx(signed_expectation(mes_from_parameters(xi), op), abs=1e-13)

    def test_corollary1(self):
        res = max_over_mes(MeasurementSettings([Z, X], [Z, X]))
        assert res.value == pytest.approx(math.sqrt(2), abs=1e-8)
        assert res.converged

    def test_singlet_three_settings(self):
        s = MeasurementSettings([X, Y, Z], NEG)
        res = max_over_mes(s)
        assert res.value == pytest.approx(math.sqrt(3), abs=1e-8)
        assert eval_fn(mes_from_parameters(res.xi), s) == pytest.approx(res.value, abs=1e-12)

    def test_single_setting(self):
        assert max_over_mes(MeasurementSettings([Z], [Z])).value == pytest.approx(1, abs=1e-12)

    def test_deterministic(self):
        s = MeasurementSettings([Z, XZ, Y], [X, Y, Z])
        assert max_over_mes(s, SearchConfig(seed=5)) == max_over_mes(s, SearchConfig(seed=5))

    def test_never_exceeds_exact_optimum(self):
        rng = np.random.default_rng(17)
        for _ in range(20):
            n = int(rng.integers(1, 6))
            s = MeasurementSettings([random_unit_vector(rng) for _ in range(n)], [random_unit_vector(rng) for _ in range(n)])
            res = max_over_mes(s, SearchConfig(multistarts=6, seed=int(rng.integers(1 << 32))))
            assert res.value <= max_over_all_states(s).mu_max + 1e-9


class TestCertifyTheorem2:
    def test_single_setting_gap_is_zero(self):
        rep = certify_theorem2(1, 10, SearchConfig(seed=3))
        assert rep.passed
        assert rep.max_abs_deviation < 1e-9

    @pytest.mark.parametrize("n", [2, 3, 5])
    def test_small_runs(self, n):
        rep = certify_theorem2(n, 8, SearchConfig(seed=11))
        assert rep.passed
        assert rep.details["bob_regime"] == ("orthonormal" if n <= 3 else "unconstrained")

    def test_reproducible(self):
        cfg = SearchConfig(multistarts=4, seed=99)
        assert certify_theorem2(2, 5, cfg).to_dict() == certify_theorem2(2, 5, cfg).to_dict()

    def test_records_failure_after_escalation(self, monkeypatch):
        calls = []

        def weak_search(s, cfg):
            calls.append(cfg.multistarts)
            return MesSearchResult(0.0, (0.0, 0.0, 0.0), True, (True,))

        monkeypatch.setattr(search, "max_over_mes", weak_search)
        rep = certify_theorem2(2, 1, SearchConfig(multistarts=3, seed=1))
        assert calls == [3, 12]
        assert not rep.passed
        assert rep.failures[0].margin == pytest.approx(rep.failures[0].expected)

    def test_rejects_bad_arguments(self):
        with pytest.raises(SettingsError):
            certify_theorem2(0, 1)


class TestCertifyTheorem1:
    def test_small_run(self):
        rep = certify_theorem1(40, 11)
        assert rep.passed
        assert rep.details["commuting_trials"] == 20
        assert rep.max_abs_deviation < 1e-9

    def test_reproducible(self):
        assert certify_theorem1(10, 4).to_dict() == certify_theorem1(10, 4).to_dict()


class TestOptimizeAlice:
    @pytest.mark.parametrize("bob", [(Z, X), (X, Y)])
    def test_reaches_sqrt2_with_orthogonal_pair(self, bob):
        res = optimize_alice_directions(bob)
        assert res.mu_best == pytest.approx(math.sqrt(2), abs=1e-6)
        assert np.linalg.norm(np.cross(*res.alice_star)) == pytest.approx(1, abs=1e-5)

    def test_commuting_pair_is_suboptimal(self):
        mu = max_over_all_states(MeasurementSettings([Z, Z], [Z, X])).mu_max
        assert mu == pytest.approx(1, abs=1e-12)
        assert mu < math.sqrt(2) - 0.1

    def test_requires_orthonormal_bob(self):
        with pytest.raises(SettingsError):
            optimize_alice_directions((Z, XZ))


class TestCertifyCorollary2:
    def test_small_run(self):
        rep = certify_corollary2(40, 7)
        assert rep.passed
        assert rep.details["violable_trials"] == 30

    def test_knife_band(self):
        assert search._in_knife_band(5e-9, 1e-9)
        assert not search._in_knife_band(1e-16, 1e-9)
        assert not search._in_knife_band(0.3, 1e-9)
