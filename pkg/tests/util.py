"""Shared circuit builders and brute-force reference implementations."""

from __future__ import annotations

import random
from itertools import product

from lutflow import Latch, Netlist, lit_net, make_lit
from lutflow.mapper import MapParams, cut_cost


class CircuitBuilder:
    """Incremental netlist construction with sequential net ids."""

    def __init__(self, name="top"):
        self.name = name
        self._next = 1
        self.inputs = []
        self.ands = []
        self.latch_specs = []  # (state net, init, clock); data set later
        self.latch_data = {}
        self.outputs = []
        self.names = {}

    def new_net(self) -> int:
        net = self._next
        self._next += 1
        return net

    def pi(self, name=None) -> int:
        net = self.new_net()
        self.inputs.append(net)
        if name:
            self.names[net] = name
        return make_lit(net)

    def latch(self, init=0, clock=None, name=None) -> int:
        net = self.new_net()
        self.latch_specs.append((net, init, clock))
        if name:
            self.names[net] = name
        return make_lit(net)

    def set_latch_data(self, state_lit: int, data_lit: int) -> None:
        self.latch_data[lit_net(state_lit)] = data_lit

    def AND(self, l0: int, l1: int, name=None) -> int:
        net = self.new_net()
        self.ands.append((net, l0, l1))
        if name:
            self.names[net] = name
        return make_lit(net)

    def NOT(self, l: int) -> int:
        return l ^ 1

    def OR(self, l0: int, l1: int, name=None) -> int:
        # a name lands on the AND net; the OR itself is its complement edge
        return self.NOT(self.AND(l0 ^ 1, l1 ^ 1, name=name))

    def XOR(self, a: int, b: int) -> int:
        t0 = self.AND(a, b ^ 1)
        t1 = self.AND(b, a ^ 1)
        return self.NOT(self.AND(t0 ^ 1, t1 ^ 1))

    def output(self, lit: int, name: str) -> None:
        self.outputs.append((lit, name))

    def build(self) -> Netlist:
        latches = [
            Latch(data=self.latch_data[state], state=state, init=init, clock=clock)
            for state, init, clock in self.latch_specs
        ]
        return Netlist(
            name=self.name,
            inputs=self.inputs,
            and_defs=self.ands,
            outputs=self.outputs,
            latches=latches,
            names=self.names,
        )


def ripple_counter(bits=3, clock="clk") -> Netlist:
    """bits-wide binary up-counter; state nets named q[0]..q[bits-1]."""
    b = CircuitBuilder(f"cnt{bits}")
    q = [b.latch(init=0, clock=clock, name=f"q[{k}]") for k in range(bits)]
    carry = make_lit(0, True)  # constant true
    for k in range(bits):
        b.set_latch_data(q[k], b.XOR(q[k], carry))
        if k + 1 < bits:
            carry = b.AND(carry, q[k])
    for k in range(bits):
        b.output(q[k], f"count{k}")
    return b.build()


def and_chain(width=4, name="chain") -> Netlist:
    """y = a0 & a1 & ... as a linear chain of 2-input ANDs."""
    b = CircuitBuilder(name)
    pis = [b.pi(chr(ord("a") + k)) for k in range(width)]
    acc = pis[0]
    for k, pi in enumerate(pis[1:], start=1):
        acc = b.AND(acc, pi, name=f"g{k}")
    b.output(acc, "y")
    return b.build()


def and_tree(width=8, name="tree") -> Netlist:
    """Balanced AND tree over `width` inputs (width a power of two)."""
    b = CircuitBuilder(name)
    level = [b.pi(f"i{k}") for k in range(width)]
    while len(level) > 1:
        level = [b.AND(level[i], level[i + 1]) for i in range(0, len(level), 2)]
    b.output(level[0], "y")
    return b.build()


def random_netlist(
    rng: random.Random, *, max_ands=50, max_pis=8, max_latches=4, clean=False
) -> Netlist:
    """Random valid netlist with occasional buses, names, and clocks.

    With clean=True, AND nodes never reference the constant net or use
    the same net for both fanins (no degenerate nodes).
    """
    n_pis = rng.randint(2 if clean else 1, max_pis)
    n_latches = rng.randint(0, max_latches)
    n_ands = rng.randint(1, max_ands)
    b = CircuitBuilder(f"rand{rng.randrange(1 << 16)}")
    bus_inputs = rng.random() < 0.4 and n_pis >= 2
    for k in range(n_pis):
        b.pi(f"in[{k}]" if bus_inputs else (f"p{k}" if rng.random() < 0.7 else None))
    clock = "clk" if (n_latches and rng.random() < 0.5) else None
    bus_latches = rng.random() < 0.5 and n_latches >= 2
    latch_lits = [
        b.latch(
            init=rng.randint(0, 1),
            clock=clock,
            name=f"q[{k}]" if bus_latches else None,
        )
        for k in range(n_latches)
    ]
    pool = [make_lit(net) for net in b.inputs] + latch_lits
    if not clean:
        pool.insert(0, make_lit(0))
    for k in range(n_ands):
        l0 = rng.choice(pool) ^ rng.randint(0, 1)
        l1 = rng.choice(pool) ^ rng.randint(0, 1)
        while clean and lit_net(l1) == lit_net(l0):
            l1 = rng.choice(pool) ^ rng.randint(0, 1)
        lit = b.AND(l0, l1, name=f"w{k}" if rng.random() < 0.3 else None)
        pool.append(lit)
    for state_lit in latch_lits:
        b.set_latch_data(state_lit, rng.choice(pool) ^ rng.randint(0, 1))
    for k in range(rng.randint(1, 3)):
        b.output(rng.choice(pool) ^ rng.randint(0, 1), f"out{k}")
    return b.build()


def skew_circuit() -> Netlist:
    """Four-input AND chain whose final net never toggles under the paired
    stimulus: the zero score makes weighted ranking pick the flat 4-leaf
    cut (depth tie-break) where unweighted ranking keeps the 2-leaf chain.
    """
    b = CircuitBuilder("skew")
    a = b.pi("a")
    bb = b.pi("b")
    c = b.pi("c")
    d = b.pi("d")
    g1 = b.AND(a, bb, name="g1")
    g2 = b.AND(g1, c, name="g2")
    y = b.AND(g2, d, name="y")
    b.output(y, "y")
    return b.build()


def skew_stimulus(cycles: int) -> str:
    """a and c held high, b toggling, d opposite b, so y = b & ~b stays 0."""
    lines = ["a b c d"]
    for t in range(cycles):
        bit = t % 2
        lines.append(f"0b1 0b{bit} 0b1 0b{1 - bit}")
    return "\n".join(lines) + "\n"


def acceptance_corpus() -> list[Netlist]:
    """Fixed benchmark circuits plus seeded random netlists."""
    circuits = [
        and_chain(5),
        and_tree(8),
        and_tree(16),
        ripple_counter(4),
        ripple_counter(8),
        skew_circuit(),
    ]
    rng = random.Random(2024)
    circuits += [random_netlist(rng, max_ands=45) for _ in range(15)]
    return circuits


# -- brute-force references -------------------------------------------------


def all_kfeasible_cuts(n: Netlist, root: int, k: int) -> set[frozenset[int]]:
    """Every K-feasible cut of `root`, by exhaustive recursive merging."""
    memo: dict[int, set[frozenset[int]]] = {}

    def cuts_of(net: int) -> set[frozenset[int]]:
        if net in memo:
            return memo[net]
        result = {frozenset([net])}
        if n.is_and(net):
            l0, l1 = n.fanins(net)
            for ca in cuts_of(lit_net(l0)):
                for cb in cuts_of(lit_net(l1)):
                    union = ca | cb
                    if len(union) <= k:
                        result.add(union)
        memo[net] = result
        return result

    return cuts_of(root)


def cover_semantics(inputs: list[str], rows: list[str], assignment: dict[str, int]) -> int:
    """Reference BLIF single-output cover evaluation (ON-set rows)."""
    for plane in rows:
        if all(
            ch == "-" or int(ch) == assignment[name] for ch, name in zip(plane, inputs)
        ):
            return 1
    return 0


def eval_netlist_combinational(n: Netlist, pi_values: dict[int, int]) -> dict[int, int]:
    """Direct per-net evaluation (latch states read as 0)."""
    values = {0: 0}
    for net in n.inputs:
        values[net] = pi_values[net]
    for la in n.latches:
        values[la.state] = pi_values.get(la.state, 0)
    for out, l0, l1 in n.and_nodes:
        values[out] = (values[lit_net(l0)] ^ (l0 & 1)) & (values[lit_net(l1)] ^ (l1 & 1))
    return values


def brute_force_coverings(n: Netlist, k: int):
    """Yield every covering: a per-required-net choice of non-trivial K-feasible cut.

    A covering maps each covered AND net to its chosen leaf tuple; the
    closure starts from output and latch-data nets. Only practical for
    tiny netlists.
    """
    cut_sets = {
        net: sorted(
            tuple(sorted(c))
            for c in all_kfeasible_cuts(n, net, k)
            if c != frozenset([net])
        )
        for net in n.topological_order()
        if n.is_and(net)
    }
    roots = sorted(
        {
            lit_net(lit)
            for lit, _ in n.outputs
            if n.is_and(lit_net(lit))
        }
        | {lit_net(la.data) for la in n.latches if n.is_and(lit_net(la.data))}
    )

    def expand(chosen: dict[int, tuple[int, ...]], frontier: list[int]):
        frontier = [net for net in frontier if net not in chosen and n.is_and(net)]
        if not frontier:
            yield dict(chosen)
            return
        net = frontier[0]
        rest = frontier[1:]
        for leaves in cut_sets[net]:
            chosen[net] = leaves
            yield from expand(chosen, rest + list(leaves))
            del chosen[net]

    yield from expand({}, roots)


def covering_cost(n: Netlist, covering: dict[int, tuple[int, ...]], params: MapParams, scores):
    """Total cost of a covering under the given mode, plus its level map."""
    from lutflow.mapper import Cut

    levels: dict[int, int] = {}

    def level_of(net: int) -> int:
        if net not in covering:
            return 0
        if net not in levels:
            levels[net] = 1 + max(level_of(leaf) for leaf in covering[net])
        return levels[net]

    total = 0.0
    for net, leaves in covering.items():
        cut = Cut(net, leaves, level_of(net))
        total += cut_cost(cut, params, scores)
    for net in covering:
        level_of(net)
    return total, levels
