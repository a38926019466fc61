"""And-inverter graph netlists with latches, plus the mapped LUT network.

Nets are dense non-negative integers; net 0 is the constant-false net.
An edge is encoded as a literal `2 * net + complement`, so literal 0 is
constant false and literal 1 constant true. Netlists are immutable after
construction and safe to share between concurrent readers.
"""

from __future__ import annotations

import heapq
import re
from collections import defaultdict
from dataclasses import dataclass

from .errors import CycleError, NetlistError

CONST_NET = 0
LIT_FALSE = 0
LIT_TRUE = 1

KIND_CONST = "const"
KIND_INPUT = "input"
KIND_LATCH = "latch"
KIND_AND = "and"

_BUS_BIT_RE = re.compile(r"^(?P<base>.+)\[(?P<index>0|[1-9][0-9]*)\]$")


def make_lit(net: int, neg: bool = False) -> int:
    return net * 2 + (1 if neg else 0)


def lit_net(lit: int) -> int:
    return lit >> 1


def lit_is_neg(lit: int) -> bool:
    return bool(lit & 1)


def lit_not(lit: int) -> int:
    return lit ^ 1


def _check_token(value: str, what: str) -> str:
    if not value or re.search(r"\s", value):
        raise NetlistError(f"{what} must be a non-empty whitespace-free string: {value!r}")
    return value


@dataclass(frozen=True)
class Latch:
    """Single-bit register: `state` takes the value of edge `data` each cycle."""

    data: int  # literal
    state: int  # net id
    init: int = 0
    clock: str | None = None


@dataclass(frozen=True)
class BusGroup:
    """Nets named `base[0] .. base[w-1]`, grouped for packed tracking."""

    base: str
    bits: tuple[int, ...]

    @property
    def width(self) -> int:
        return len(self.bits)


class Netlist:
    """Immutable two-input AND network with complemented edges and latches.

    `and_defs` may arrive in any order; the constructor orders nodes
    canonically (ascending net id among ready nodes) and rejects
    combinational cycles. All of `[0, num_nets)` must be defined exactly
    once as the constant, an input, a latch state, or an AND output.
    """

    __slots__ = (
        "name",
        "num_nets",
        "inputs",
        "outputs",
        "latches",
        "and_nodes",
        "names",
        "_kind",
        "_fanins",
    )

    def __init__(
        self,
        *,
        inputs,
        and_defs,
        outputs,
        latches=(),
        names=None,
        name: str = "top",
    ):
        self.name = _check_token(name, "netlist name")
        self.inputs = tuple(inputs)
        self.latches = tuple(latches)
        and_defs = [tuple(d) for d in and_defs]
        self.num_nets = 1 + len(self.inputs) + len(self.latches) + len(and_defs)

        kind: dict[int, str] = {CONST_NET: KIND_CONST}
        for net in self.inputs:
            if net in kind:
                raise NetlistError(f"duplicate definition of net {net}")
            kind[net] = KIND_INPUT
        for la in self.latches:
            if la.state in kind:
                raise NetlistError(f"duplicate definition of net {la.state}")
            if la.init not in (0, 1):
                raise NetlistError(f"latch init must be 0 or 1, got {la.init}")
            if la.clock is not None:
                _check_token(la.clock, "clock name")
            kind[la.state] = KIND_LATCH
        fanins: dict[int, tuple[int, int]] = {}
        for out, l0, l1 in and_defs:
            if out in kind:
                raise NetlistError(f"duplicate definition of net {out}")
            kind[out] = KIND_AND
            fanins[out] = (l0, l1)
        for net in kind:
            if not 0 <= net < self.num_nets:
                raise NetlistError(f"net ids are not dense: {net} out of range")
        # counts match and all distinct, so density follows

        def check_lit(lit: int, what: str) -> None:
            if lit < 0 or lit_net(lit) >= self.num_nets:
                raise NetlistError(f"{what} literal {lit} out of range")

        for out, l0, l1 in and_defs:
            check_lit(l0, f"net {out} fanin")
            check_lit(l1, f"net {out} fanin")

        self.outputs = tuple((lit, _check_token(oname, "output name")) for lit, oname in outputs)
        for lit, _ in self.outputs:
            check_lit(lit, "output")
        for la in self.latches:
            check_lit(la.data, "latch data")

        self.names = dict(names or {})
        seen_names: set[str] = set()
        for net, net_name in self.names.items():
            if not 0 <= net < self.num_nets:
                raise NetlistError(f"name attached to unknown net {net}")
            _check_token(net_name, "net name")
            if net_name in seen_names:
                raise NetlistError(f"duplicate net name {net_name!r}")
            seen_names.add(net_name)

        self.and_nodes = self._canonical_order(and_defs, fanins)
        self._kind = kind
        self._fanins = fanins

    def _canonical_order(self, and_defs, fanins) -> tuple[tuple[int, int, int], ...]:
        and_set = set(fanins)
        pending: dict[int, int] = {}
        users: dict[int, list[int]] = defaultdict(list)
        ready: list[int] = []
        for out, l0, l1 in and_defs:
            deps = {lit_net(l0), lit_net(l1)} & and_set
            deps.discard(out)  # self-reference is a cycle; leave it pending
            if lit_net(l0) == out or lit_net(l1) == out:
                raise CycleError(f"combinational cycle through net {out}", net=out)
            pending[out] = len(deps)
            for d in deps:
                users[d].append(out)
            if not deps:
                ready.append(out)
        heapq.heapify(ready)
        order: list[int] = []
        while ready:
            out = heapq.heappop(ready)
            order.append(out)
            for user in users[out]:
                pending[user] -= 1
                if pending[user] == 0:
                    heapq.heappush(ready, user)
        if len(order) != len(and_defs):
            stuck = min(out for out, left in pending.items() if left > 0)
            raise CycleError(f"combinational cycle through net {stuck}", net=stuck)
        return tuple((out, *fanins[out]) for out in order)

    # -- queries ---------------------------------------------------------

    def kind(self, net: int) -> str:
        return self._kind[net]

    def is_and(self, net: int) -> bool:
        return self._kind[net] == KIND_AND

    def fanins(self, net: int) -> tuple[int, int]:
        return self._fanins[net]

    def source_nets(self) -> tuple[int, ...]:
        """Constant, inputs, and latch states, ascending."""
        return tuple(sorted([CONST_NET, *self.inputs, *(la.state for la in self.latches)]))

    def topological_order(self) -> tuple[int, ...]:
        """All nets, sources first, then AND nets with every fanin earlier.

        Deterministic: sources ascending, then ascending id among ready
        AND nodes (the stored node order).
        """
        return self.source_nets() + tuple(out for out, _, _ in self.and_nodes)

    def net_name(self, net: int) -> str:
        return self.names.get(net, f"n{net}")

    def __repr__(self):
        return (
            f"Netlist({self.name!r}, nets={self.num_nets}, inputs={len(self.inputs)}, "
            f"ands={len(self.and_nodes)}, latches={len(self.latches)}, outputs={len(self.outputs)})"
        )


def flat_names(n: Netlist) -> dict[int, str]:
    """Map every net to its flat name: the declared name or `n<id>`.

    Raises NetlistError if a declared name collides with the generated
    name of a different (unnamed) net.
    """
    table: dict[int, str] = {}
    used: dict[str, int] = {}
    for net in range(n.num_nets):
        name = n.net_name(net)
        if name in used:
            raise NetlistError(f"flat name collision: {name!r} used by nets {used[name]} and {net}")
        used[name] = net
        table[net] = name
    return table


def group_buses(n: Netlist) -> list[BusGroup]:
    """Group nets named `base[k]` into buses with contiguous k from 0.

    Indices must be canonical decimal (no leading zeros). A base whose
    indices are non-contiguous or do not start at 0 is not grouped; its
    nets stay single-bit. Groups are returned sorted by base name.
    """
    by_base: dict[str, dict[int, int]] = defaultdict(dict)
    for net, name in n.names.items():
        m = _BUS_BIT_RE.match(name)
        if m:
            by_base[m.group("base")][int(m.group("index"))] = net
    groups = []
    for base in sorted(by_base):
        bits = by_base[base]
        if set(bits) == set(range(len(bits))):
            groups.append(BusGroup(base, tuple(bits[k] for k in range(len(bits)))))
    return groups


@dataclass(frozen=True)
class Lut:
    """Single-output lookup table rooted at a source-netlist net.

    `table` bit i holds the output for the assignment where leaf j
    carries bit j of i (leaf 0 is the least significant index bit).
    """

    root: int
    leaves: tuple[int, ...]
    table: int


class MappedNetlist:
    """K-input LUT network covering a source netlist.

    Net ids refer back to the source netlist. Each output or latch-data
    net must be a LUT root, an input, a latch state, or the constant.
    LUTs are stored sorted by (level, root), which is a topological order.
    """

    __slots__ = (
        "name",
        "k",
        "num_nets",
        "inputs",
        "outputs",
        "latches",
        "luts",
        "names",
        "levels",
    )

    def __init__(self, *, name, k, num_nets, inputs, outputs, latches, luts, names=None):
        self.name = _check_token(name, "netlist name")
        if k < 1:
            raise NetlistError("k must be positive")
        self.k = k
        self.num_nets = num_nets
        self.inputs = tuple(inputs)
        self.latches = tuple(latches)
        self.names = dict(names or {})

        sources = {CONST_NET, *self.inputs, *(la.state for la in self.latches)}
        roots: dict[int, Lut] = {}
        for lut in luts:
            if not 1 <= len(lut.leaves) <= k:
                raise NetlistError(f"LUT at net {lut.root} has {len(lut.leaves)} leaves (k={k})")
            if lut.root in sources:
                raise NetlistError(f"LUT root {lut.root} redefines a source net")
            if lut.root in roots:
                raise NetlistError(f"net {lut.root} is the root of more than one LUT")
            if lut.root in lut.leaves:
                raise NetlistError(f"LUT at net {lut.root} lists itself as a leaf")
            if not 0 <= lut.table < (1 << (1 << len(lut.leaves))):
                raise NetlistError(f"LUT table at net {lut.root} out of range")
            roots[lut.root] = lut

        defined = sources | set(roots)
        for lut in luts:
            for leaf in lut.leaves:
                if leaf not in defined:
                    raise NetlistError(f"LUT at net {lut.root} references undefined net {leaf}")

        levels: dict[int, int] = {net: 0 for net in sources}
        visiting: set[int] = set()

        def level_of(net: int) -> int:
            if net in levels:
                return levels[net]
            if net in visiting:
                raise CycleError(f"LUT network cycle through net {net}", net=net)
            visiting.add(net)
            lut = roots[net]
            lv = 1 + max(level_of(leaf) for leaf in lut.leaves)
            visiting.discard(net)
            levels[net] = lv
            return lv

        for root in roots:
            level_of(root)
        self.levels = levels
        self.luts = tuple(sorted(roots.values(), key=lambda l: (levels[l.root], l.root)))

        self.outputs = tuple((lit, _check_token(oname, "output name")) for lit, oname in outputs)
        for lit, _ in self.outputs:
            if lit_net(lit) not in defined:
                raise NetlistError(f"output references undefined net {lit_net(lit)}")
        for la in self.latches:
            if lit_net(la.data) not in defined:
                raise NetlistError(f"latch data references undefined net {lit_net(la.data)}")

    def lut_at(self, net: int) -> Lut | None:
        for lut in self.luts:
            if lut.root == net:
                return lut
        return None

    def net_name(self, net: int) -> str:
        return self.names.get(net, f"n{net}")

    def max_level(self) -> int:
        return max((self.levels[lut.root] for lut in self.luts), default=0)

    def __repr__(self):
        return (
            f"MappedNetlist({self.name!r}, k={self.k}, luts={len(self.luts)}, "
            f"max_level={self.max_level()})"
        )


def as_lut_network(n: Netlist) -> MappedNetlist:
    """View a plain netlist as a network of 2-input LUTs (one per AND node).

    Leaf order preserves fanin order; fanin complements are folded into
    the tables. Used for BLIF emission of unmapped netlists.
    """
    luts = []
    for out, l0, l1 in n.and_nodes:
        n0, c0 = lit_net(l0), lit_is_neg(l0)
        n1, c1 = lit_net(l1), lit_is_neg(l1)
        if n0 == n1:
            table = 0
            for x in (0, 1):
                if ((x ^ c0) & (x ^ c1)) == 1:
                    table |= 1 << x
            luts.append(Lut(out, (n0,), table))
        else:
            table = 0
            for i in range(4):
                x0, x1 = i & 1, i >> 1
                if ((x0 ^ c0) & (x1 ^ c1)) == 1:
                    table |= 1 << i
            luts.append(Lut(out, (n0, n1), table))
    return MappedNetlist(
        name=n.name,
        k=2,
        num_nets=n.num_nets,
        inputs=n.inputs,
        outputs=n.outputs,
        latches=n.latches,
        luts=luts,
        names=n.names,
    )
