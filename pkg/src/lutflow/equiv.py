"""Combinational equivalence checking between netlists and mappings.

Two networks are compared on their combinational cores: primary inputs
plus latch states form the input space, primary outputs plus latch data
edges the observed outputs. The check is exhaustive when the input
space has at most 12 bits, otherwise 1024 seeded random vectors are
used. Sequential equivalence follows because latch counts, order, and
initial values are required to match.
"""

from __future__ import annotations

from dataclasses import dataclass

from .netlist import MappedNetlist, Netlist, lit_is_neg, lit_net
from .prng import Xoshiro256StarStar

EXHAUSTIVE_LIMIT = 12
RANDOM_VECTORS = 1024
DEFAULT_SEED = 0x45510001


def _eval_netlist(n: Netlist, values: bytearray, assignment: int) -> None:
    values[0] = 0
    pos = 0
    for net in n.inputs:
        values[net] = (assignment >> pos) & 1
        pos += 1
    for la in n.latches:
        values[la.state] = (assignment >> pos) & 1
        pos += 1
    for out, l0, l1 in n.and_nodes:
        values[out] = (values[l0 >> 1] ^ (l0 & 1)) & (values[l1 >> 1] ^ (l1 & 1))


def _eval_mapped(m: MappedNetlist, values: bytearray, assignment: int) -> None:
    values[0] = 0
    pos = 0
    for net in m.inputs:
        values[net] = (assignment >> pos) & 1
        pos += 1
    for la in m.latches:
        values[la.state] = (assignment >> pos) & 1
        pos += 1
    for lut in m.luts:  # stored in topological (level, root) order
        index = 0
        for j, leaf in enumerate(lut.leaves):
            index |= values[leaf] << j
        values[lut.root] = (lut.table >> index) & 1


def _signature(obj, values: bytearray, assignment: int) -> int:
    if isinstance(obj, Netlist):
        _eval_netlist(obj, values, assignment)
    else:
        _eval_mapped(obj, values, assignment)
    sig = 0
    pos = 0
    for lit, _ in obj.outputs:
        sig |= (values[lit_net(lit)] ^ (1 if lit_is_neg(lit) else 0)) << pos
        pos += 1
    for la in obj.latches:
        d = la.data
        sig |= (values[lit_net(d)] ^ (1 if lit_is_neg(d) else 0)) << pos
        pos += 1
    return sig


@dataclass(frozen=True)
class EquivResult:
    equivalent: bool
    vectors_checked: int
    exhaustive: bool
    counterexample: int | None = None
    reason: str | None = None

    def __bool__(self):
        return self.equivalent


def functionally_equivalent(a, b, *, seed: int = DEFAULT_SEED) -> EquivResult:
    """Compare two networks (Netlist or MappedNetlist) on their I/O behavior."""
    if len(a.inputs) != len(b.inputs):
        return EquivResult(False, 0, False, reason="input counts differ")
    if len(a.latches) != len(b.latches):
        return EquivResult(False, 0, False, reason="latch counts differ")
    if len(a.outputs) != len(b.outputs):
        return EquivResult(False, 0, False, reason="output counts differ")
    for la, lb in zip(a.latches, b.latches):
        if la.init != lb.init:
            return EquivResult(False, 0, False, reason="latch initial values differ")

    width = len(a.inputs) + len(a.latches)
    va = bytearray(a.num_nets)
    vb = bytearray(b.num_nets)
    if width <= EXHAUSTIVE_LIMIT:
        vectors = range(1 << width)
        exhaustive = True
    else:
        rng = Xoshiro256StarStar(seed)
        vectors = [rng.bits(width) for _ in range(RANDOM_VECTORS)]
        exhaustive = False
    checked = 0
    for assignment in vectors:
        checked += 1
        if _signature(a, va, assignment) != _signature(b, vb, assignment):
            return EquivResult(False, checked, exhaustive, counterexample=assignment)
    return EquivResult(True, checked, exhaustive)
