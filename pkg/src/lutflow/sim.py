"""Cycle-accurate netlist simulation with per-bit toggle counters.

Every tracked signal carries a state word (last observed value) and one
saturating 64-bit counter per bit. After each cycle's evaluation the new
value is XOR-ed against the state; for packed multi-bit targets the
resulting mask is walked by find-first-set, incrementing exactly the
counters of the changed bits and flipping their state bits. Single-bit
targets take a direct compare-and-increment path. Cycle 0 only
initializes the states (no counting), so a counter can reach at most
cycles - 1.

Nets named `base[k]` with contiguous k are tracked packed as one bus;
all other nets are tracked single-bit. Latch clock names always appear
in the dump with the saturated counter and are never counted.

`oracle_simulate` implements the same contract with a deliberately
naive per-bit compare loop (no masks, no packing, no find-first-set)
and exists purely as an independent cross-check.
"""

from __future__ import annotations

import re
import time
import warnings
from dataclasses import dataclass
from pathlib import Path

from .dump import COUNTER_MAX, ActivityDump, make_dump
from .errors import StimulusError
from .netlist import Netlist, flat_names, group_buses, lit_is_neg, lit_net
from .prng import Xoshiro256StarStar


@dataclass
class SimConfig:
    """Simulation run parameters.

    `track` holds name globs (`*` and `?` only); empty means track
    everything. `stimulus` names a stimulus file, or None for random
    stimuli derived from `seed`.
    """

    cycles: int
    seed: int = 0
    track: tuple[str, ...] = ()
    stimulus: str | Path | None = None

    def __post_init__(self):
        if self.cycles < 1:
            raise ValueError("cycles must be >= 1")
        if not 0 <= self.seed < (1 << 64):
            raise ValueError("seed must fit in 64 bits")
        self.track = tuple(self.track)


@dataclass
class SimState:
    """Current net values (bit per net id) and pending latch updates."""

    values: bytearray
    latch_state: bytearray

    @classmethod
    def initial(cls, n: Netlist) -> "SimState":
        return cls(
            values=bytearray(n.num_nets),
            latch_state=bytearray(la.init for la in n.latches),
        )


class Tracker:
    """Toggle tracker for one net or one packed bus."""

    __slots__ = ("key", "nets", "state", "counters", "is_clock", "packed")

    def __init__(self, key: str, nets: tuple[int, ...], *, packed: bool, is_clock: bool = False):
        self.key = key
        self.nets = nets
        self.packed = packed
        self.is_clock = is_clock
        self.state = 0
        width = max(len(nets), 1)
        self.counters = [COUNTER_MAX] * width if is_clock else [0] * width

    @property
    def width(self) -> int:
        return len(self.nets)

    def flat_items(self) -> list[tuple[str, int, bool]]:
        """(flat name, counter, is_clock) triples, one per tracked bit."""
        if not self.nets:
            return [(self.key, COUNTER_MAX, True)]
        if self.packed:
            return [
                (f"{self.key}[{k}]", self.counters[k], self.is_clock) for k in range(self.width)
            ]
        return [(self.key, self.counters[0], self.is_clock)]


def mask_and_increment(tracker: Tracker, value: int) -> None:
    """Count the bits where `value` differs from the tracker state.

    Packed targets XOR the whole word and walk set bits least-significant
    first, incrementing one counter and flipping one state bit per
    iteration until the mask is exhausted. Single-bit targets use a plain
    compare. Counters saturate at 2**64 - 1. Clock trackers must not be
    passed here.
    """
    assert not tracker.is_clock
    assert 0 <= value < (1 << max(tracker.width, 1)), "value width mismatch"
    counters = tracker.counters
    if not tracker.packed:
        if value ^ tracker.state:
            c = counters[0]
            counters[0] = c + 1 if c < COUNTER_MAX else COUNTER_MAX
            tracker.state = value
        return
    mask = value ^ tracker.state
    while mask:
        low = mask & -mask
        index = low.bit_length() - 1
        c = counters[index]
        counters[index] = c + 1 if c < COUNTER_MAX else COUNTER_MAX
        tracker.state ^= low
        mask ^= low


def _glob_to_regex(pattern: str) -> re.Pattern:
    # only * and ? are special; brackets in names like out[0] stay literal
    parts = []
    for ch in pattern:
        if ch == "*":
            parts.append(".*")
        elif ch == "?":
            parts.append(".")
        else:
            parts.append(re.escape(ch))
    return re.compile("".join(parts) + r"\Z")


def build_trackers(n: Netlist, track: tuple[str, ...] = ()) -> list[Tracker]:
    """Create trackers for nets/buses matching the globs (empty = all).

    Buses whose base name matches are tracked packed; bus bits whose flat
    name matches without the base matching are tracked single-bit, as are
    all other matching nets. Latch clock names are always present as
    clock trackers (saturated, never counted), bypassing the filter.
    Globs that match nothing raise a RuntimeWarning.
    """
    table = flat_names(n)
    patterns = [_glob_to_regex(g) for g in track]
    match_counts = [0] * len(patterns)

    def matches(name: str) -> bool:
        if not patterns:
            return True
        hit = False
        for i, pat in enumerate(patterns):
            if pat.match(name):
                match_counts[i] += 1
                hit = True
        return hit

    clocks = {la.clock for la in n.latches if la.clock is not None}
    trackers: list[Tracker] = []
    bus_nets: set[int] = set()
    for bus in group_buses(n):
        if matches(bus.base):
            trackers.append(Tracker(bus.base, bus.bits, packed=True))
            bus_nets.update(bus.bits)
        else:
            for k, net in enumerate(bus.bits):
                if matches(f"{bus.base}[{k}]"):
                    trackers.append(Tracker(f"{bus.base}[{k}]", (net,), packed=False))
                    bus_nets.add(net)
    for net in range(n.num_nets):
        if net in bus_nets:
            continue
        name = table[net]
        if name in clocks:
            trackers.append(Tracker(name, (net,), packed=False, is_clock=True))
        elif matches(name):
            trackers.append(Tracker(name, (net,), packed=False))
    tracked_keys = {t.key for t in trackers}
    for clock in sorted(clocks - tracked_keys):
        trackers.append(Tracker(clock, (), packed=False, is_clock=True))
    for glob, hits in zip(track, match_counts):
        if hits == 0:
            warnings.warn(f"track filter {glob!r} matched no nets", RuntimeWarning, stacklevel=2)
    trackers.sort(key=lambda t: t.key)
    return trackers


def _evaluate(n: Netlist, state: SimState, pi_bits: int) -> None:
    """Combinational evaluation of all nets for the current cycle."""
    values = state.values
    values[0] = 0
    for pos, net in enumerate(n.inputs):
        values[net] = (pi_bits >> pos) & 1
    for idx, la in enumerate(n.latches):
        values[la.state] = state.latch_state[idx]
    for out, l0, l1 in n.and_nodes:
        values[out] = ((values[l0 >> 1] ^ (l0 & 1)) & (values[l1 >> 1] ^ (l1 & 1)))


def _latch_next(n: Netlist, state: SimState) -> bytearray:
    values = state.values
    return bytearray(
        values[lit_net(la.data)] ^ (1 if lit_is_neg(la.data) else 0) for la in n.latches
    )


def _target_value(values: bytearray, tracker: Tracker) -> int:
    if not tracker.packed:
        return values[tracker.nets[0]]
    value = 0
    for k, net in enumerate(tracker.nets):
        value |= values[net] << k
    return value


def simulate_cycle(
    n: Netlist,
    state: SimState,
    pi_bits: int,
    trackers: list[Tracker],
    *,
    count: bool = True,
) -> None:
    """One full cycle: evaluate, observe every tracked target once, commit latches.

    With count=False (initialization) tracker states are set without
    touching counters.
    """
    _evaluate(n, state, pi_bits)
    nxt = _latch_next(n, state)
    for tracker in trackers:
        if tracker.is_clock or not tracker.nets:
            continue
        value = _target_value(state.values, tracker)
        if count:
            mask_and_increment(tracker, value)
        else:
            tracker.state = value
    state.latch_state = nxt


def random_stimulus(n: Netlist, cfg: SimConfig) -> list[int]:
    """cfg.cycles input words from xoshiro256**(seed); PI i takes bit i."""
    rng = Xoshiro256StarStar(cfg.seed)
    width = len(n.inputs)
    return [rng.bits(width) for _ in range(cfg.cycles)]


def load_stimulus(text, n: Netlist) -> list[int]:
    """Parse a stimulus file into per-cycle input words.

    Line 1 names the driven columns: primary-input flat names or bus base
    names whose bits are all primary inputs. Every primary input must be
    covered exactly once. Each following line gives one `0b...` or
    `0x...` value per column, width-checked.
    """
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("utf-8")
    lines = [ln for ln in text.splitlines()]
    rows = [(i + 1, ln.split()) for i, ln in enumerate(lines) if ln.strip()]
    if not rows:
        raise StimulusError("empty stimulus file", 1)
    header_line, header = rows[0]

    pi_pos = {flat_names(n)[net]: pos for pos, net in enumerate(n.inputs)}
    pi_buses = {}
    input_set = set(n.inputs)
    for bus in group_buses(n):
        if all(net in input_set for net in bus.bits):
            pi_buses[bus.base] = [pi_pos[f"{bus.base}[{k}]"] for k in range(bus.width)]

    columns: list[list[int]] = []  # bit positions per column, LSB first
    covered: set[int] = set()
    for name in header:
        if name in pi_buses:
            positions = pi_buses[name]
        elif name in pi_pos:
            positions = [pi_pos[name]]
        else:
            raise StimulusError(f"column {name!r} is not a primary input or input bus", header_line)
        if covered & set(positions):
            raise StimulusError(f"column {name!r} drives an already-driven input", header_line)
        covered.update(positions)
        columns.append(positions)
    missing = [name for name, pos in sorted(pi_pos.items()) if pos not in covered]
    if missing:
        raise StimulusError(f"inputs not driven by stimulus: {', '.join(missing)}", header_line)

    vectors: list[int] = []
    for lineno, tokens in rows[1:]:
        if len(tokens) != len(columns):
            raise StimulusError(
                f"expected {len(columns)} values, got {len(tokens)}", lineno
            )
        word = 0
        for token, positions in zip(tokens, columns):
            if token.startswith("0b"):
                digits, base = token[2:], 2
            elif token.startswith("0x"):
                digits, base = token[2:], 16
            else:
                raise StimulusError(f"value {token!r} must use a 0b or 0x prefix", lineno)
            try:
                value = int(digits, base)
            except ValueError:
                raise StimulusError(f"bad value {token!r}", lineno) from None
            if value >= (1 << len(positions)):
                raise StimulusError(
                    f"value {token} does not fit in {len(positions)} bit(s)", lineno
                )
            for k, pos in enumerate(positions):
                word |= ((value >> k) & 1) << pos
        vectors.append(word)
    return vectors


def _stimulus_vectors(n: Netlist, cfg: SimConfig) -> list[int]:
    if cfg.stimulus is None:
        return random_stimulus(n, cfg)
    text = Path(cfg.stimulus).read_text(encoding="utf-8")
    vectors = load_stimulus(text, n)
    if len(vectors) < cfg.cycles:
        raise StimulusError(
            f"stimulus provides {len(vectors)} cycles but {cfg.cycles} requested"
        )
    return vectors[: cfg.cycles]


def run_simulation(n: Netlist, cfg: SimConfig) -> ActivityDump:
    """Simulate cfg.cycles cycles and return the counter dump.

    Cycle 0 consumes the first stimulus vector and initializes tracker
    states without counting; cycles 1 .. cycles-1 are counted.
    """
    vectors = _stimulus_vectors(n, cfg)
    trackers = build_trackers(n, cfg.track)
    state = SimState.initial(n)
    simulate_cycle(n, state, vectors[0], trackers, count=False)
    for t in range(1, cfg.cycles):
        simulate_cycle(n, state, vectors[t], trackers)
    entries = [item for tracker in trackers for item in tracker.flat_items()]
    return make_dump(n.name, cfg.cycles, entries)


def oracle_simulate(n: Netlist, cfg: SimConfig) -> ActivityDump:
    """Reference implementation: per-bit compare loop, no masks or packing."""
    vectors = _stimulus_vectors(n, cfg)
    trackers = build_trackers(n, cfg.track)
    state = SimState.initial(n)
    prev: list[list[int]] = [[0] * t.width for t in trackers]
    for t in range(cfg.cycles):
        _evaluate(n, state, vectors[t])
        nxt = _latch_next(n, state)
        for ti, tracker in enumerate(trackers):
            if tracker.is_clock:
                continue
            for k, net in enumerate(tracker.nets):
                bit = state.values[net]
                if t > 0 and bit != prev[ti][k]:
                    tracker.counters[k] = min(tracker.counters[k] + 1, COUNTER_MAX)
                prev[ti][k] = bit
        state.latch_state = nxt
    entries = [item for tracker in trackers for item in tracker.flat_items()]
    return make_dump(n.name, cfg.cycles, entries)


def simulate_plain(n: Netlist, cfg: SimConfig) -> SimState:
    """Uninstrumented run (no trackers); baseline for overhead measurement."""
    vectors = _stimulus_vectors(n, cfg)
    state = SimState.initial(n)
    for t in range(cfg.cycles):
        _evaluate(n, state, vectors[t])
        state.latch_state = _latch_next(n, state)
    return state


@dataclass
class OverheadReport:
    instrumented_seconds: float
    plain_seconds: float

    @property
    def ratio(self) -> float:
        if self.plain_seconds <= 0:
            return 1.0
        return self.instrumented_seconds / self.plain_seconds


def measure_overhead(n: Netlist, cfg: SimConfig, repeats: int = 3) -> OverheadReport:
    """Best-of-N timing of instrumented vs uninstrumented simulation."""
    best_instr = best_plain = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        run_simulation(n, cfg)
        best_instr = min(best_instr, time.perf_counter() - t0)
        t0 = time.perf_counter()
        simulate_plain(n, cfg)
        best_plain = min(best_plain, time.perf_counter() - t0)
    return OverheadReport(best_instr, best_plain)
