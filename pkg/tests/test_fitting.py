import numpy as np
import pytest
from scipy.stats import zipf

from coevonet import (GeneratorSpec, NetworkKind, fit_degree_distribution,
                      fit_lognormal, fit_power_law, generate_ba)
from coevonet.fitting import STATUS_DEGENERATE, STATUS_OK

from conftest import graph_from_edges


def ba(n=500, m=3, seed=1):
    return generate_ba(GeneratorSpec(kind=NetworkKind.BARABASI_ALBERT,
                                     n=n, m_i=m, seed=seed))


class TestPowerLawFit:
    def test_recovers_zipf_exponent(self):
        samples = zipf.rvs(2.5, size=5000, random_state=np.random.default_rng(11))
        fit = fit_power_law(samples)
        assert abs(fit.params["alpha"] - 2.5) < 0.15

    def test_ks_in_unit_interval(self):
        fit = fit_power_law(ba().degrees())
        assert 0.0 <= fit.ks_distance <= 1.0
        assert fit.params["alpha"] > 1.0


class TestLognormalFit:
    def test_recovers_generating_parameters(self):
        rng = np.random.default_rng(11)
        samples = np.maximum(1, np.round(rng.lognormal(2.0, 0.6, 500))).astype(int)
        fit = fit_lognormal(samples)
        assert abs(fit.params["mu_ln"] - 2.0) / 2.0 < 0.10
        assert abs(fit.params["sigma_ln"] - 0.6) / 0.6 < 0.10
        assert fit.params["sigma_ln"] > 0.0

    def test_lognormal_sample_prefers_lognormal(self):
        rng = np.random.default_rng(11)
        samples = np.maximum(1, np.round(rng.lognormal(2.0, 0.6, 500))).astype(int)
        assert fit_lognormal(samples).ks_distance < fit_power_law(samples).ks_distance


class TestDegreeFitReport:
    def test_fresh_ba_prefers_power_law(self):
        report = fit_degree_distribution(ba())
        assert report.status == STATUS_OK
        assert report.preferred == "power_law"

    def test_fresh_ba_majority_over_30_seeds(self):
        prefs = [fit_degree_distribution(ba(n=100, seed=s)).preferred
                 for s in range(30)]
        assert sum(p == "power_law" for p in prefs) > 15

    def test_regular_graph_is_degenerate(self):
        ring = graph_from_edges(12, [(i, (i + 1) % 12) for i in range(12)])
        report = fit_degree_distribution(ring)
        assert report.status == STATUS_DEGENERATE
        assert report.preferred is None

    def test_too_few_positive_degrees_rejected(self):
        g = graph_from_edges(20, [(0, 1), (2, 3)])
        with pytest.raises(ValueError):
            fit_degree_distribution(g)

    def test_deterministic(self):
        g = ba(seed=9)
        a = fit_degree_distribution(g).to_json_dict()
        b = fit_degree_distribution(g).to_json_dict()
        assert a == b

    def test_json_shape(self):
        d = fit_degree_distribution(ba()).to_json_dict()
        assert set(d) == {"status", "power_law", "lognormal", "preferred"}
        assert set(d["power_law"]) == {"family", "params", "ks_distance",
                                       "log_likelihood"}
