import math

import numpy as np
import pytest

from coevonet import (ConfigError, GeneratorSpec, Graph, NetworkKind,
                      from_edge_text, generate_ba, generate_er, to_edge_text)


def er_spec(n=10, p=0.5, seed=0):
    return GeneratorSpec(kind=NetworkKind.ERDOS_RENYI, n=n, p_c=p, seed=seed)


def ba_spec(n=10, m=3, seed=0):
    return GeneratorSpec(kind=NetworkKind.BARABASI_ALBERT, n=n, m_i=m, seed=seed)


class TestErdosRenyi:
    def test_zero_probability_gives_no_edges(self):
        g = generate_er(er_spec(n=10, p=0.0))
        assert g.edge_count == 0

    def test_probability_one_gives_complete_graph(self):
        g = generate_er(er_spec(n=10, p=1.0))
        assert g.edge_count == 45
        g.check_invariants()

    def test_invalid_probability_rejected(self):
        with pytest.raises(ConfigError):
            generate_er(er_spec(p=1.5))
        with pytest.raises(ConfigError):
            generate_er(er_spec(p=-0.1))

    def test_deterministic_given_seed(self):
        a = generate_er(er_spec(n=60, p=0.1, seed=42))
        b = generate_er(er_spec(n=60, p=0.1, seed=42))
        assert to_edge_text(a) == to_edge_text(b)
        c = generate_er(er_spec(n=60, p=0.1, seed=43))
        assert to_edge_text(a) != to_edge_text(c)

    def test_edge_count_concentration_paper_scale(self):
        # C(500,2) * 0.01 = 1247.5 expected edges, sigma ~ 35.1.
        counts = [generate_er(er_spec(n=500, p=0.01, seed=s)).edge_count
                  for s in range(30)]
        expected = math.comb(500, 2) * 0.01
        sigma = math.sqrt(math.comb(500, 2) * 0.01 * 0.99)
        assert abs(np.mean(counts) - expected) < 3 * sigma

    def test_isolated_nodes_are_kept(self):
        g = generate_er(er_spec(n=50, p=0.02, seed=7))
        assert g.node_count == 50
        g.check_invariants()


class TestBarabasiAlbert:
    def test_edge_count_formula(self):
        # m*(m-1)/2 core edges plus m per subsequent node.
        g = generate_ba(ba_spec(n=500, m=3, seed=1))
        assert g.edge_count == 3 + 497 * 3
        g.check_invariants()

    def test_forced_attachment_gives_complete_graph(self):
        g = generate_ba(ba_spec(n=4, m=3))
        assert g.edge_count == 6
        assert all(g.degree(u) == 3 for u in range(4))

    def test_m_must_be_below_n(self):
        with pytest.raises(ConfigError):
            generate_ba(ba_spec(n=3, m=3))

    def test_m_one_builds_tree(self):
        g = generate_ba(ba_spec(n=30, m=1, seed=5))
        assert g.edge_count == 29
        g.check_invariants()

    def test_deterministic_given_seed(self):
        a = generate_ba(ba_spec(n=100, m=3, seed=9))
        b = generate_ba(ba_spec(n=100, m=3, seed=9))
        assert to_edge_text(a) == to_edge_text(b)


class TestRewire:
    def test_path_rewire_hand_example(self):
        g = Graph(3)
        g.add_edge(0, 1)
        g.add_edge(1, 2)
        g.rewire(0, 1, 2)
        assert g.edge_count == 2
        assert g.has_edge(0, 2) and g.has_edge(1, 2)
        assert not g.has_edge(0, 1)
        g.check_invariants()

    def test_precondition_violations_raise(self):
        g = Graph(4)
        g.add_edge(0, 1)
        g.add_edge(2, 3)
        with pytest.raises(ValueError):
            g.rewire(0, 2, 3)  # edge (0,2) does not exist
        with pytest.raises(ValueError):
            g.rewire(0, 1, 0)  # target equals source
        g.add_edge(0, 3)
        with pytest.raises(ValueError):
            g.rewire(0, 1, 3)  # edge (0,3) already exists

    def test_random_rewires_conserve_invariants(self, rng):
        g = generate_er(er_spec(n=40, p=0.15, seed=3))
        m0 = g.edge_count
        done = 0
        while done < 1000:
            u = int(rng.integers(0, 40))
            if g.degree(u) == 0 or g.degree(u) >= 39:
                continue
            old = int(g.neighbors(u)[rng.integers(0, g.degree(u))])
            new = int(rng.integers(0, 40))
            if new == u or g.has_edge(u, new):
                continue
            g.rewire(u, old, new)
            done += 1
        assert g.edge_count == m0
        g.check_invariants()


class TestSerialization:
    def test_header_and_sorted_pairs(self):
        g = Graph(5)
        g.add_edge(3, 1)
        g.add_edge(0, 4)
        g.add_edge(0, 2)
        text = to_edge_text(g)
        lines = text.splitlines()
        assert lines[0] == "# nodes=5 edges=3"
        assert lines[1:] == ["0 2", "0 4", "1 3"]

    def test_round_trip(self):
        g = generate_er(er_spec(n=30, p=0.2, seed=11))
        h = from_edge_text(to_edge_text(g))
        assert to_edge_text(h) == to_edge_text(g)

    def test_rejects_bad_header(self):
        with pytest.raises(ValueError):
            from_edge_text("0 1\n")

    def test_rejects_edge_count_mismatch(self):
        with pytest.raises(ValueError):
            from_edge_text("# nodes=3 edges=2\n0 1\n")
