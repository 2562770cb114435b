import math

import pytest

from tncode.composition import CodeTensor, TensorNetworkCode, add_node
from tncode.holographic import (
    ResourceLimitError,
    build_code,
    build_tiling,
    census,
    census_from_tiling,
    rate_reference,
)
from tncode.stabilizer import steane, validate

LAYERS = (1, 7, 35, 168, 805, 3857, 18480, 88543)


def test_small_tilings():
    g = build_tiling(1)
    assert g.layer_sizes == (1,) and len(g.boundary_legs()) == 7
    assert build_tiling(2).layer_sizes == (1, 7)
    with pytest.raises(ValueError):
        build_tiling(0)


@pytest.mark.parametrize("radius", [2, 3, 4, 5])
def test_tiling_structure(radius):
    g = build_tiling(radius)
    assert g.layer_sizes == LAYERS[:radius]
    for t in g.tiles:
        slots = [t.slot(leg) for leg in range(7)]
        assert len(slots) == 7
        if t.layer == 1:
            assert t.kind == "centre" and not t.parents
        else:
            assert len(t.parents) in (1, 2)
            assert {g.tiles[p].layer for p, _, _ in t.parents} == {t.layer - 1}
        # in-edges, child edges and boundary slots partition the seven legs
        assert slots.count("in") == len(t.parents)
    for v, deg in g.vertex_degree.items():
        assert deg <= 4
        if v not in g.boundary_vertices:
            assert deg == 4


@pytest.mark.parametrize("radius", range(1, 7))
def test_census_matches_tiling(radius):
    assert census(radius) == census_from_tiling(build_tiling(radius))


def test_census_values():
    assert (census(1).n, census(1).k) == (7, 1)
    assert (census(2).n, census(2).k) == (42, 8)
    assert (census(3).n, census(3).k) == (203, 43)
    assert census(8).tiles_per_layer == LAYERS
    assert census(8).n == 512778 and census(8).n > 5e5
    for r in range(4, 9):
        assert abs(census(r).growth_ratios[-1] - 4.8) <= 0.3
    assert census(8).growth_ratios[-1] == pytest.approx((5 + math.sqrt(21)) / 2, rel=1e-3)


def test_build_code_small():
    net, _ = build_code(1)
    assert net.flat.stabilizers == steane().stabilizers
    assert (net.n, net.k) == (7, 1)
    net, g = build_code(2)
    assert (net.n, net.k) == (42, 8)
    assert [t.layer for t in net.nodes] == [1] + [2] * 7


def test_radius3_rate():
    net, _ = build_code(3)
    assert validate(net.flat) == []
    assert abs(net.k / net.n - rate_reference()) / rate_reference() < 0.15


def test_radius4_valid():
    net, _ = build_code(4)
    assert (net.n, net.k) == (census(4).n, census(4).k)
    assert validate(net.flat) == []


def test_each_step_stays_valid():
    g = build_tiling(3)
    net = TensorNetworkCode()
    code = steane()
    for t in g.tiles[:15]:
        pairings = [((p, pleg), own) for p, pleg, own in sorted(t.parents, key=lambda x: x[2])]
        net = add_node(net, CodeTensor(code, "steane", t.layer), pairings)
        assert validate(net.flat) == []


def test_vertex_children_use_last_two_legs():
    g = build_tiling(3)
    for t in g.tiles:
        if t.kind == "vertex":
            assert sorted(t.in_legs) == [5, 6]
        elif t.kind == "edge":
            assert t.in_legs == [0]


def test_resource_limit():
    with pytest.raises(ResourceLimitError):
        build_code(7)
    with pytest.raises(ResourceLimitError):
        build_code(3, max_radius=2)
