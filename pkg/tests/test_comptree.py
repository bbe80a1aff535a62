from fractions import Fraction

import pytest

from randomfacet import (
    RF,
    RF_STAR,
    EnumerationBoundExceeded,
    TreePolicy,
    comptree,
    expected_pivots_rf,
    expected_pivots_rf_star,
)


@pytest.fixture(scope="module")
def trees_001(errata, enc):
    start = enc.tree("001")
    return {rule: comptree(errata, None, start, rule) for rule in (RF, RF_STAR)}


class TestStructure:
    def test_leaf_probabilities_sum_to_one(self, trees_001):
        for tree in trees_001.values():
            assert sum(p for p, _ in tree.paths()) == 1

    def test_branch_probabilities_sum_to_one_at_every_choice(self, trees_001):
        def walk(node):
            picks = [c for c in node.children if c.kind == "pick"]
            if picks:
                assert len(picks) == len(node.children)
                assert sum(c.prob for c in picks) == 1
            for c in node.children:
                walk(c)

        for tree in trees_001.values():
            walk(tree.root)

    def test_rf_choices_are_uniform(self, trees_001, errata):
        idx = errata._index

        def walk(node):
            picks = [c for c in node.children if c.kind == "pick"]
            for c in picks:
                assert c.prob == Fraction(1, len(picks))
            for c in node.children:
                walk(c)

        walk(trees_001[RF].root)

    def test_rfstar_root_choice_is_uniform(self, trees_001):
        dist = trees_001[RF_STAR].root_distribution()
        assert set(dist.values()) == {Fraction(1, 3)}

    def test_leaf_payload_counts_pivots_on_path(self, trees_001):
        for tree in trees_001.values():
            for _, nodes in tree.paths():
                pivots = sum(1 for n in nodes if n.kind == "pivot")
                assert nodes[-1].pivots == pivots


class TestExpectations:
    def test_rf_weighting_matches_engine(self, errata, enc, trees_001):
        assert trees_001[RF].expectation() == expected_pivots_rf(
            errata, None, enc.tree("001")
        )

    def test_rfstar_weighting_matches_engine(self, errata, enc, trees_001):
        assert trees_001[RF_STAR].expectation() == expected_pivots_rf_star(
            errata, None, enc.tree("001")
        )

    def test_base_case_single_leaf(self, errata, enc):
        tree = enc.tree("101")
        ct = comptree(errata, tree.edge_ids, tree, RF)
        assert len(ct.root.children) == 1
        leaf = ct.root.children[0]
        assert leaf.kind == "leaf" and leaf.prob == 1 and leaf.pivots == 0

    def test_pmf_from_001(self, trees_001):
        # the three pivot paths have lengths 1, 3 and 5
        assert trees_001[RF].leaf_distribution() == {
            1: Fraction(1, 2),
            3: Fraction(1, 3),
            5: Fraction(1, 6),
        }
        assert trees_001[RF_STAR].leaf_distribution() == {
            1: Fraction(1, 2),
            3: Fraction(7, 24),
            5: Fraction(5, 24),
        }


class TestPickOrderAfterPivot:
    def test_rfstar_favors_the_displaced_tree_edge(self, trees_001, names):
        region, dist = trees_001[RF_STAR].pick_order_after_pivot(names["z0"])
        assert region == Fraction(1, 3)
        assert dist == {names["y0"]: Fraction(5, 8), names["x1"]: Fraction(3, 8)}

    def test_rf_is_even(self, trees_001, names):
        region, dist = trees_001[RF].pick_order_after_pivot(names["z0"])
        assert region == Fraction(1, 3)
        assert dist == {names["y0"]: Fraction(1, 2), names["x1"]: Fraction(1, 2)}

    def test_path_class_probability(self, trees_001, names):
        region, dist = trees_001[RF_STAR].pick_order_after_pivot(names["z0"])
        assert region * dist[names["y0"]] == Fraction(5, 24)
        assert region * dist[names["y0"]] == Fraction(150, 720)

    def test_mirrored_from_111(self, errata, enc, names):
        ct = comptree(errata, None, enc.tree("111"), RF_STAR)
        region, dist = ct.pick_order_after_pivot(names["z0"])
        assert region == Fraction(1, 3)
        assert dist[names["x1"]] == Fraction(5, 8)
        assert dist[names["y0"]] == Fraction(3, 8)

    def test_missing_pivot_gives_empty_region(self, trees_001, names):
        region, dist = trees_001[RF].pick_order_after_pivot(names["x0"])
        assert region == 0 and dist == {}


class TestAgreementOnRandomInstances:
    def test_both_rules_match_engines(self, small_pool):
        for inst in small_pool[:15]:
            start = TreePolicy(
                {v: es[-1].id for v, es in inst.out_edges.items() if es}
            )
            rf = comptree(inst, None, start, RF)
            star = comptree(inst, None, start, RF_STAR)
            assert rf.expectation() == expected_pivots_rf(inst, None, start)
            assert star.expectation() == expected_pivots_rf_star(inst, None, start)


class TestExports:
    def test_text_contains_the_skewed_probability(self, trees_001):
        text = trees_001[RF_STAR].to_text()
        assert "5/8" in text
        assert "# columns: id parent kind label prob pivots" in text.splitlines()[1]

    def test_text_node_lines_are_well_formed(self, trees_001):
        for tree in trees_001.values():
            lines = [l for l in tree.to_text().splitlines() if not l.startswith("#")]
            assert lines[0].split() == ["0", "-", "root", "-", "1/1", "-"]
            ids = set()
            for line in lines:
                nid, parent, kind, label, prob, pivots = line.split()
                ids.add(int(nid))
                assert kind in ("root", "pick", "pivot", "leaf")
                assert "/" in prob
                if parent != "-":
                    assert int(parent) in ids  # parents precede children
                if kind == "leaf":
                    assert pivots.isdigit()
                else:
                    assert pivots == "-"

    def test_rf_probability_denominators_divide_choice_products(self, trees_001):
        # every branch is 1 over the number of candidates at its node
        def walk(node):
            picks = [c for c in node.children if c.kind == "pick"]
            for c in picks:
                assert c.prob.denominator == len(picks)
            for c in node.children:
                walk(c)

        walk(trees_001[RF].root)

    def test_dot_output(self, trees_001):
        dot = trees_001[RF_STAR].to_dot()
        assert dot.startswith("digraph comptree {")
        assert "shape=box" in dot
        assert "1/3" in dot

    def test_enumeration_bound_respected(self, errata, enc):
        with pytest.raises(EnumerationBoundExceeded):
            comptree(errata, None, enc.tree("001"), RF_STAR, enumeration_bound=4)

    def test_unknown_rule_rejected(self, errata, enc):
        with pytest.raises(ValueError):
            comptree(errata, None, enc.tree("001"), "greedy")
