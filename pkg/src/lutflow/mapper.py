"""Priority-cuts LUT technology mapping over the AND-inverter graph.

Per node, candidate cuts are the pairwise leaf-set unions of the fanin
cut lists (discarding unions wider than K), ranked by the active cost
and truncated to the P best; the trivial cut {node} is kept alongside so
ancestors can always use the node as a leaf, but it never implements the
node itself.

Costs per cut, for K-input LUTs:

  vanilla:  |leaves| / K
  simopt:   |leaves| / K * clamp(log10(s / (1 + s)) + 1, 0, 1)

where s is the toggle score of the cut's root net, the factor is 0 at
s = 0 and exactly 1 at the saturated score 2**64 - 1. Ranking ties break
by depth, then leaf count, then lexicographic leaf ids, so mapping is
deterministic. Covering is a single backward pass from the outputs and
latch data edges, each required node instantiating its best cut as a LUT
whose truth table comes from exhaustive cone evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

from .dump import COUNTER_MAX
from .errors import LutflowError
from .netlist import (
    Latch,
    Lut,
    MappedNetlist,
    Netlist,
    lit_is_neg,
    lit_net,
    make_lit,
)

COST_VANILLA = "vanilla"
COST_SIMOPT = "simopt"
COST_MODES = (COST_VANILLA, COST_SIMOPT)


@dataclass(frozen=True)
class MapParams:
    k: int = 4
    priority: int = 8
    mode: str = COST_VANILLA

    def __post_init__(self):
        if not 2 <= self.k <= 8:
            raise ValueError(f"k must be in 2..8, got {self.k}")
        if self.priority < 1:
            raise ValueError("priority list size must be >= 1")
        if self.mode not in COST_MODES:
            raise ValueError(f"unknown cost mode {self.mode!r}")


@dataclass(frozen=True)
class Cut:
    """Leaf set determining `root`; `depth` is the level if implemented."""

    root: int
    leaves: tuple[int, ...]
    depth: int

    @property
    def is_trivial(self) -> bool:
        return self.leaves == (self.root,)


def cut_area_cost(cut: Cut, params: MapParams) -> float:
    """Area contribution of one selected cut: |leaves| / K (single output)."""
    return len(cut.leaves) / params.k


def scale_factor(score: int) -> float:
    """Activity weighting in [0, 1]: clamp(log10(s / (1 + s)) + 1, 0, 1).

    Monotone non-decreasing; 0 at score 0, exactly 1 at the saturated
    score, approaching 1 as the score grows.
    """
    if score <= 0:
        return 0.0
    if score >= COUNTER_MAX:
        return 1.0
    value = math.log10(score / (1 + score)) + 1.0
    return min(max(value, 0.0), 1.0)


def weighted_area_cost(cut: Cut, params: MapParams, scores: Mapping[int, int]) -> float:
    """Area cost scaled by the root net's activity factor."""
    return cut_area_cost(cut, params) * scale_factor(scores[cut.root])


def cut_cost(cut: Cut, params: MapParams, scores: Mapping[int, int] | None) -> float:
    if params.mode == COST_VANILLA:
        return cut_area_cost(cut, params)
    if scores is None:
        raise LutflowError("simopt cost mode requires a score table")
    return weighted_area_cost(cut, params, scores)


def rank_cuts(
    cuts, params: MapParams, scores: Mapping[int, int] | None = None
) -> list[Cut]:
    """Total deterministic order: cost, then depth, leaf count, leaf ids."""
    return sorted(
        cuts,
        key=lambda c: (cut_cost(c, params, scores), c.depth, len(c.leaves), c.leaves),
    )


def enumerate_cuts(
    n: Netlist, params: MapParams, scores: Mapping[int, int] | None = None
) -> dict[int, list[Cut]]:
    """Ranked priority-cut lists per net, in topological order.

    Each AND net stores up to P ranked merged cuts followed by its
    trivial cut (always last). Source nets hold just the trivial cut.
    """
    cuts: dict[int, list[Cut]] = {}
    depth: dict[int, int] = {}
    for net in n.topological_order():
        if not n.is_and(net):
            depth[net] = 0
            cuts[net] = [Cut(net, (net,), 0)]
            continue
        l0, l1 = n.fanins(net)
        n0, n1 = lit_net(l0), lit_net(l1)
        seen: set[tuple[int, ...]] = set()
        candidates: list[Cut] = []
        for ca in cuts[n0]:
            for cb in cuts[n1]:
                leaves = tuple(sorted(set(ca.leaves) | set(cb.leaves)))
                if len(leaves) > params.k or leaves in seen:
                    continue
                seen.add(leaves)
                candidates.append(
                    Cut(net, leaves, 1 + max(depth[leaf] for leaf in leaves))
                )
        ranked = rank_cuts(candidates, params, scores)[: params.priority]
        depth[net] = ranked[0].depth
        ranked.append(Cut(net, (net,), depth[net]))
        cuts[net] = ranked
    return cuts


def cone_table(n: Netlist, root: int, leaves: tuple[int, ...]) -> int:
    """Truth table of `root` over the leaf nets by exhaustive evaluation.

    Bit i of the result is the root value when leaf j carries bit j of i.
    """
    leaf_pos = {leaf: j for j, leaf in enumerate(leaves)}
    order: list[int] = []
    visited = set(leaves)
    stack = [root]
    while stack:
        net = stack.pop()
        if net in visited:
            continue
        if not n.is_and(net):
            if net == 0:
                continue  # constant net evaluates to 0 below
            raise LutflowError(f"cut {leaves} does not determine net {root}")
        l0, l1 = n.fanins(net)
        deps = [d for d in (lit_net(l0), lit_net(l1)) if d not in visited and n.is_and(d)]
        if deps:
            stack.append(net)
            stack.extend(deps)
        else:
            visited.add(net)
            order.append(net)
    table = 0
    width = len(leaves)
    values = {0: 0}
    for assignment in range(1 << width):
        for leaf, j in leaf_pos.items():
            values[leaf] = (assignment >> j) & 1
        for net in order:
            l0, l1 = n.fanins(net)
            values[net] = (values[lit_net(l0)] ^ (l0 & 1)) & (values[lit_net(l1)] ^ (l1 & 1))
        if values[root]:
            table |= 1 << assignment
    return table


def select_mapping(
    n: Netlist, params: MapParams, scores: Mapping[int, int] | None = None
) -> MappedNetlist:
    """Cover the netlist with each required node's best-ranked cut.

    The cover is extracted backward from output and latch-data edges.
    When every edge referencing a LUT root is complemented and the root
    feeds no other LUT, the complement is folded into the root's truth
    table; remaining complemented edges are preserved and realized at
    BLIF emission.
    """
    all_cuts = enumerate_cuts(n, params, scores)
    best: dict[int, Cut] = {}
    for net, lst in all_cuts.items():
        if n.is_and(net):
            best[net] = lst[0]  # ranked head; the trivial cut is stored last

    required: set[int] = set()
    stack = [lit_net(lit) for lit, _ in n.outputs]
    stack.extend(lit_net(la.data) for la in n.latches)
    while stack:
        net = stack.pop()
        if net in required or not n.is_and(net):
            continue
        required.add(net)
        stack.extend(best[net].leaves)

    tables = {net: cone_table(n, net, best[net].leaves) for net in required}

    leaf_nets = {leaf for net in required for leaf in best[net].leaves}
    out_edges = list(n.outputs)
    latch_edges = [la.data for la in n.latches]
    for net in sorted(required):
        if net in leaf_nets:
            continue
        refs = [i for i, (lit, _) in enumerate(out_edges) if lit_net(lit) == net]
        latch_refs = [i for i, lit in enumerate(latch_edges) if lit_net(lit) == net]
        edges = [out_edges[i][0] for i in refs] + [latch_edges[i] for i in latch_refs]
        if edges and all(lit_is_neg(lit) for lit in edges):
            width = len(best[net].leaves)
            tables[net] ^= (1 << (1 << width)) - 1
            for i in refs:
                out_edges[i] = (make_lit(net), out_edges[i][1])
            for i in latch_refs:
                latch_edges[i] = make_lit(net)

    luts = [Lut(net, best[net].leaves, tables[net]) for net in sorted(required)]
    latches = [
        Latch(data=latch_edges[i], state=la.state, init=la.init, clock=la.clock)
        for i, la in enumerate(n.latches)
    ]
    return MappedNetlist(
        name=n.name,
        k=params.k,
        num_nets=n.num_nets,
        inputs=n.inputs,
        outputs=out_edges,
        latches=latches,
        luts=luts,
        names=n.names,
    )


def mapping_area(m: MappedNetlist) -> float:
    """Total area cost: sum of |leaves| / K over the selected LUTs."""
    return sum(len(lut.leaves) / m.k for lut in m.luts)


def percentile_threshold(values: list[int], percentile: float) -> int:
    """Nearest-rank percentile of a non-empty value list."""
    ordered = sorted(values)
    rank = max(1, math.ceil(percentile / 100.0 * len(ordered)))
    return ordered[min(rank, len(ordered)) - 1]


@dataclass(frozen=True)
class MapMetrics:
    lut_count: int
    max_level: int
    output_levels: tuple[tuple[str, int], ...]
    hot_depth: int
    hot_flag: bool
    area_cost: float


def depth_metrics(
    m: MappedNetlist, scores: Mapping[int, int], hot_percentile: float = 80.0
) -> MapMetrics:
    """Structural depth report plus the depth of the high-activity cover.

    Hot nets score at or above the hot_percentile-th percentile
    (nearest-rank) of the non-zero, non-saturated scores; saturated
    scores always count as hot. hot_depth is the maximum level over hot
    LUT roots, flagged 0 when there are no non-zero scores or no hot LUT
    roots at all.
    """
    if not 0 <= hot_percentile <= 100:
        raise ValueError("hot percentile must be in 0..100")
    levels = m.levels
    output_levels = tuple((oname, levels[lit_net(lit)]) for lit, oname in m.outputs)
    max_level = m.max_level()

    nonzero = [s for s in scores.values() if s > 0]
    hot_depth = 0
    hot_flag = True
    if nonzero:
        basis = [s for s in nonzero if s < COUNTER_MAX]
        threshold = percentile_threshold(basis, hot_percentile) if basis else COUNTER_MAX
        hot_roots = [lut.root for lut in m.luts if scores.get(lut.root, 0) >= threshold]
        if hot_roots:
            hot_depth = max(levels[root] for root in hot_roots)
            hot_flag = False
    return MapMetrics(
        lut_count=len(m.luts),
        max_level=max_level,
        output_levels=output_levels,
        hot_depth=hot_depth,
        hot_flag=hot_flag,
        area_cost=mapping_area(m),
    )
