"""Serialized per-net toggle counters and their netlist binding.

Dump file format (bit-exact, UTF-8, LF line endings):

    simopt-dump v1
    design <name>
    cycles <n>
    net <flat_name> <counter> <0|1>
    ...

Entries are sorted strictly ascending by flat name (codepoint order)
with unique keys. A clock entry (`1` in the last column) always carries
the saturated counter 2**64 - 1. Bus bit k of bus `base` is flattened
as `base[k]`, matching the net's own name.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple

from .errors import DumpFormatError, LutflowError
from .netlist import Netlist, flat_names

MAGIC = "simopt-dump v1"
COUNTER_MAX = (1 << 64) - 1


class DumpEntry(NamedTuple):
    name: str
    count: int
    is_clock: bool


def _check_name(name: str) -> str:
    if not name or any(ch.isspace() for ch in name):
        raise LutflowError(f"dump key must be non-empty and whitespace-free: {name!r}")
    return name


@dataclass(frozen=True)
class ActivityDump:
    design: str
    cycles: int
    entries: tuple[DumpEntry, ...]

    def __post_init__(self):
        _check_name(self.design)
        if not 0 <= self.cycles <= COUNTER_MAX:
            raise LutflowError(f"cycle count {self.cycles} out of range")
        prev = None
        for entry in self.entries:
            _check_name(entry.name)
            if prev is not None and entry.name <= prev:
                raise LutflowError(
                    f"entries must be sorted strictly ascending: {entry.name!r} after {prev!r}"
                )
            prev = entry.name
            if not 0 <= entry.count <= COUNTER_MAX:
                raise LutflowError(f"counter for {entry.name!r} out of range")
            if entry.is_clock and entry.count != COUNTER_MAX:
                raise LutflowError(f"clock entry {entry.name!r} must hold the saturated counter")

    def counts(self) -> dict[str, int]:
        return {e.name: e.count for e in self.entries}


def make_dump(design: str, cycles: int, entries: Iterable[tuple[str, int, bool]]) -> ActivityDump:
    """Build a dump from unordered (name, count, is_clock) triples."""
    rows = sorted(DumpEntry(*e) for e in entries)
    return ActivityDump(design=design, cycles=cycles, entries=tuple(rows))


def dumps(d: ActivityDump) -> bytes:
    lines = [MAGIC, f"design {d.design}", f"cycles {d.cycles}"]
    lines.extend(f"net {e.name} {e.count} {1 if e.is_clock else 0}" for e in d.entries)
    return ("\n".join(lines) + "\n").encode("utf-8")


def loads(data) -> ActivityDump:
    if isinstance(data, (bytes, bytearray)):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise DumpFormatError(f"dump is not valid UTF-8: {exc}") from None
    else:
        text = data
    lines = text.splitlines()
    if not lines or lines[0] != MAGIC:
        raise DumpFormatError(f"unknown dump version (expected {MAGIC!r})", 1)
    if len(lines) < 3:
        raise DumpFormatError("truncated dump header", len(lines))

    design_tokens = lines[1].split()
    if len(design_tokens) != 2 or design_tokens[0] != "design":
        raise DumpFormatError("expected 'design <name>'", 2)
    design = design_tokens[1]

    cycle_tokens = lines[2].split()
    if len(cycle_tokens) != 2 or cycle_tokens[0] != "cycles" or not cycle_tokens[1].isdigit():
        raise DumpFormatError("expected 'cycles <n>'", 3)
    cycles = int(cycle_tokens[1])
    if cycles > COUNTER_MAX:
        raise DumpFormatError(f"cycle count {cycles} exceeds 64 bits", 3)

    entries: list[DumpEntry] = []
    prev: str | None = None
    for lineno, raw in enumerate(lines[3:], start=4):
        if not raw.strip():
            raise DumpFormatError("blank line inside dump", lineno)
        tokens = raw.split()
        if len(tokens) != 4 or tokens[0] != "net":
            raise DumpFormatError("expected 'net <name> <counter> <0|1>'", lineno)
        _, name, count_tok, clock_tok = tokens
        if not count_tok.isdigit():
            raise DumpFormatError(f"counter {count_tok!r} is not a non-negative integer", lineno)
        count = int(count_tok)
        if count > COUNTER_MAX:
            raise DumpFormatError(f"counter overflow literal {count_tok}", lineno)
        if clock_tok not in ("0", "1"):
            raise DumpFormatError(f"clock flag must be 0 or 1, got {clock_tok!r}", lineno)
        is_clock = clock_tok == "1"
        if is_clock and count != COUNTER_MAX:
            raise DumpFormatError(f"clock entry {name!r} must hold the saturated counter", lineno)
        if prev is not None:
            if name == prev:
                raise DumpFormatError(f"duplicate key {name!r}", lineno)
            if name < prev:
                raise DumpFormatError(f"entries not sorted: {name!r} after {prev!r}", lineno)
        prev = name
        entries.append(DumpEntry(name, count, is_clock))
    try:
        return ActivityDump(design=design, cycles=cycles, entries=tuple(entries))
    except LutflowError as exc:
        raise DumpFormatError(str(exc)) from None


def saturating_add(a: int, b: int) -> int:
    return min(a + b, COUNTER_MAX)


def merge(a: ActivityDump, b: ActivityDump) -> ActivityDump:
    """Key-union of two dumps: counters add with saturation, clock flags OR."""
    if a.design != b.design:
        raise LutflowError(f"cannot merge dumps of different designs: {a.design!r} vs {b.design!r}")
    by_name: dict[str, DumpEntry] = {e.name: e for e in a.entries}
    for e in b.entries:
        prev = by_name.get(e.name)
        if prev is None:
            by_name[e.name] = e
        else:
            by_name[e.name] = DumpEntry(
                e.name, saturating_add(prev.count, e.count), prev.is_clock or e.is_clock
            )
    return ActivityDump(
        design=a.design,
        cycles=saturating_add(a.cycles, b.cycles),
        entries=tuple(sorted(by_name.values())),
    )


@dataclass(frozen=True)
class BindResult:
    """Per-net scores plus match statistics for a dump applied to a netlist."""

    scores: dict[int, int]
    matched: int
    unmatched: int
    unknown_keys: tuple[str, ...]


def bind_to_netlist(d: ActivityDump, n: Netlist) -> BindResult:
    """Score every net from the dump; unmatched nets get the saturated counter.

    The saturated default keeps unscored nets cost-neutral in weighted
    mapping. Dump keys that match no net are ignored and reported.
    """
    counts = d.counts()
    table = flat_names(n)
    scores: dict[int, int] = {}
    matched = 0
    for net in range(n.num_nets):
        name = table[net]
        if name in counts:
            scores[net] = counts.pop(name)
            matched += 1
        else:
            scores[net] = COUNTER_MAX
    return BindResult(
        scores=scores,
        matched=matched,
        unmatched=n.num_nets - matched,
        unknown_keys=tuple(sorted(counts)),
    )
