import pytest

from randomfacet import (
    Edge,
    Instance,
    NonGenericInstance,
    NotCubeShaped,
    cube_encoding,
    optimal_tree,
    orientation_view,
)


class TestCubeEncoding:
    def test_bijection_on_the_errata_cube(self, errata, enc):
        for bits in enc.all_bits():
            assert enc.bits_of(enc.tree(bits)) == bits
        assert len(list(enc.all_bits())) == 8

    def test_named_trees(self, errata, enc, names):
        assert enc.tree("001").edge_ids == {names["x0"], names["y0"], names["z1"]}
        assert enc.tree("111").edge_ids == {names["x1"], names["y1"], names["z1"]}

    def test_rejects_non_cube_instance(self):
        inst = Instance.build("t", [Edge(0, "v", "t", 0)])
        with pytest.raises(NotCubeShaped):
            cube_encoding(inst)

    def test_bad_bits_rejected(self, enc):
        with pytest.raises(ValueError):
            enc.tree("01")
        with pytest.raises(ValueError):
            enc.tree("01x")


class TestOrientationView:
    def test_errata_orientation_is_an_acyclic_unique_sink_orientation(self, errata):
        view = orientation_view(errata)
        assert view.is_acyclic()
        assert view.unique_sink_every_face()

    def test_sink_is_the_optimal_tree(self, errata, enc):
        view = orientation_view(errata)
        assert view.sink() == enc.bits_of(optimal_tree(errata))

    def test_exactly_three_paths_from_each_start(self, errata):
        view = orientation_view(errata)
        assert view.count_paths("001", "000") == 3
        assert view.count_paths("111", "000") == 3

    def test_one_vertex_cube_single_arrow(self):
        inst = Instance.build("t", [Edge(0, "v", "t", 0), Edge(1, "v", "t", 5)])
        view = orientation_view(inst)
        assert view.arrows == {("1", "0")}
        assert view.sink() == "0"

    def test_tied_adjacent_trees_are_non_generic(self):
        inst = Instance.build("t", [Edge(0, "v", "t", 3), Edge(1, "v", "t", 3)])
        with pytest.raises(NonGenericInstance):
            orientation_view(inst)

    def test_face_count(self, errata):
        view = orientation_view(errata)
        # sum over k of C(3, k) * 2^(3-k) sub-cubes
        assert len(list(view.faces())) == 27
