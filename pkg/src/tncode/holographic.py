"""Layered {7,4} heptagon tiling and the holographic Steane code on it.

Layer r+1 consists of the tiles that share an edge with layer r. In the
{7,4} tiling every outer-boundary vertex of a finished layer is touched by
either one tile or three, so the next layer has two kinds of tile:

* edge-children, across one outer edge of a single parent (1 in-edge);
* vertex-children, filling the single missing tile at a vertex where two
  ring-adjacent parents meet (2 in-edges, one to each parent).

Leg conventions on the 7-leg Steane tensor: the centre tile has legs 0..6 on
its edges in clockwise order; an edge-child uses leg 0 as its in-leg and legs
1..6 clockwise; a vertex-child uses legs 5 and 6 as in-legs (to its
clockwise and counter-clockwise parent respectively) and legs 0..4 clockwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .composition import CodeTensor, TensorNetworkCode, add_node
from .stabilizer import steane

EDGE_IN_LEGS = (0,)
VERTEX_IN_LEGS = (5, 6)


class ResourceLimitError(RuntimeError):
    pass


@dataclass
class Tile:
    index: int
    layer: int
    kind: str  # "centre", "edge" or "vertex"
    parents: list[tuple[int, int, int]] = field(default_factory=list)  # (parent, parent leg, own leg)
    children: dict[int, int] = field(default_factory=dict)  # own leg -> child tile
    vertices: list[int] = field(default_factory=list)  # vertex j sits between legs j-1 and j
    outer_legs: list[int] = field(default_factory=list)  # clockwise

    @property
    def in_legs(self) -> list[int]:
        return [own for _, _, own in self.parents]

    def slot(self, leg: int) -> str:
        if leg in self.in_legs:
            return "in"
        if leg in self.children:
            return "child"
        return "boundary"


@dataclass
class TileGraph:
    radius: int
    tiles: list[Tile]
    layers: list[list[int]]  # tile indices per layer, clockwise
    # vertex id -> number of incident tiles
    vertex_degree: dict[int, int]
    boundary_vertices: set[int]

    @property
    def layer_sizes(self) -> tuple[int, ...]:
        return tuple(len(layer) for layer in self.layers)

    def boundary_legs(self) -> list[tuple[int, int]]:
        """Free legs (tile, leg) of the outermost ring, clockwise."""
        return [(t, leg) for t in self.layers[-1] for leg in self.tiles[t].outer_legs]


def _edge_vertices(tile: Tile, leg: int) -> tuple[int, int]:
    # Leg j joins vertices[j] and vertices[j + 1] going clockwise.
    return tile.vertices[leg], tile.vertices[(leg + 1) % 7]


def build_tiling(radius: int) -> TileGraph:
    if radius < 1:
        raise ValueError("radius must be at least 1")
    next_vertex = 7
    centre = Tile(0, 1, "centre", vertices=list(range(7)), outer_legs=list(range(7)))
    tiles = [centre]
    layers = [[0]]

    def new_vertices(count: int) -> list[int]:
        nonlocal next_vertex
        out = list(range(next_vertex, next_vertex + count))
        next_vertex += count
        return out

    def edge_child(parent: Tile, leg: int, layer: int) -> Tile:
        u, w = _edge_vertices(parent, leg)
        # in-leg 0 runs w -> u; outer arc u -> ... -> w is legs 1..6
        t = Tile(len(tiles), layer, "edge", vertices=[w, u] + new_vertices(5), outer_legs=[1, 2, 3, 4, 5, 6])
        t.parents.append((parent.index, leg, 0))
        parent.children[leg] = t.index
        tiles.append(t)
        return t

    def vertex_child(left: Tile, right: Tile, layer: int) -> Tile:
        la, ra = left.outer_legs[-1], right.outer_legs[0]
        a, w = _edge_vertices(left, la)
        w2, b = _edge_vertices(right, ra)
        assert w == w2, "parents do not meet at a vertex"
        # outer arc a -> ... -> b is legs 0..4; leg 5 joins b and w, leg 6 joins w and a
        t = Tile(len(tiles), layer, "vertex", vertices=[a] + new_vertices(4) + [b, w], outer_legs=[0, 1, 2, 3, 4])
        t.parents.append((left.index, la, 6))
        t.parents.append((right.index, ra, 5))
        left.children[la] = t.index
        right.children[ra] = t.index
        tiles.append(t)
        return t

    for layer in range(2, radius + 1):
        ring = [tiles[i] for i in layers[-1]]
        new: list[int] = []
        if layer == 2:
            for leg in centre.outer_legs:
                new.append(edge_child(centre, leg, layer).index)
        else:
            for i, t in enumerate(ring):
                for leg in t.outer_legs[1:-1]:
                    new.append(edge_child(t, leg, layer).index)
                new.append(vertex_child(t, ring[(i + 1) % len(ring)], layer).index)
        layers.append(new)

    degree: dict[int, int] = {}
    for t in tiles:
        for v in t.vertices:
            degree[v] = degree.get(v, 0) + 1
    boundary_vertices = set()
    for t in layers[-1]:
        tile = tiles[t]
        for leg in tile.outer_legs:
            boundary_vertices.update(_edge_vertices(tile, leg))
    return TileGraph(radius, tiles, layers, degree, boundary_vertices)


@dataclass(frozen=True)
class CodeCensus:
    radius: int
    tiles_per_layer: tuple[int, ...]
    n: int
    k: int

    @property
    def growth_ratios(self) -> tuple[float, ...]:
        """Ratio of consecutive layer sizes (layer r+1 over layer r), from layer 2 on."""
        t = self.tiles_per_layer
        return tuple(t[i + 1] / t[i] for i in range(1, len(t) - 1))

    @property
    def rate(self) -> float:
        return self.k / self.n


def census(radius: int) -> CodeCensus:
    """Qubit counts from the edge-/vertex-child recurrence, without building anything."""
    if radius < 1:
        raise ValueError("radius must be at least 1")
    sizes = [1]
    if radius == 1:
        return CodeCensus(1, (1,), 7, 1)
    edge, vertex = 7, 0
    sizes.append(edge)
    for _ in range(3, radius + 1):
        # an edge-child has 6 outer edges, 4 of them spawn edge-children;
        # a vertex-child has 5, 3 of them spawn edge-children; one
        # vertex-child per joint and there is one joint per ring tile
        edge, vertex = 4 * edge + 3 * vertex, edge + vertex
        sizes.append(edge + vertex)
    return CodeCensus(radius, tuple(sizes), 6 * edge + 5 * vertex, sum(sizes))


def census_from_tiling(g: TileGraph) -> CodeCensus:
    n = len(g.boundary_legs())
    return CodeCensus(g.radius, g.layer_sizes, n, len(g.tiles))


def build_code(radius: int, max_radius: int = 6) -> tuple[TensorNetworkCode, TileGraph]:
    """The holographic Steane code network; logical qubit i lives on tile i."""
    if radius > max_radius:
        raise ResourceLimitError(f"radius {radius} exceeds the flattened-code limit {max_radius}")
    g = build_tiling(radius)
    code = steane()
    net = TensorNetworkCode()
    for t in g.tiles:
        pairings = [((p, pleg), own) for p, pleg, own in sorted(t.parents, key=lambda x: x[2])]
        net = add_node(net, CodeTensor(code, "steane", t.layer), pairings)
    return net, g


def rate_reference() -> float:
    return 1 / math.sqrt(21)
