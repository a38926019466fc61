"""BLIF subset reader and writer.

Reader accepts `.model`, `.inputs`, `.outputs`, `.names` (single-output
covers with at most 16 inputs, ON-set rows only), `.latch` (with
optional type/control and init), and `.end`; one model per file.
Comments (`#`), and line continuations (`\\`) are handled. Each cover is
expanded to AND nodes by naive sum-of-products construction: a row
becomes a chain of AND nodes over its non-don't-care literals and rows
are OR-ed via De Morgan, with no optimization or sharing.

Writer emits a MappedNetlist (or a plain Netlist, viewed as 2-input
LUTs) deterministically: LUT covers sorted by (level, root id), leaves
in stored order, rows in ascending order of their input pattern with
only output-1 minterms listed. Complemented or renamed output and
latch-data edges are realized with one-input buffer/inverter covers.
Unnamed nets are emitted as `n<id>`; any name collision is an error.
"""

from __future__ import annotations

from .errors import EmitError, ParseError
from .netlist import (
    CONST_NET,
    LIT_FALSE,
    LIT_TRUE,
    Latch,
    MappedNetlist,
    Netlist,
    as_lut_network,
    lit_is_neg,
    lit_net,
    lit_not,
    make_lit,
)

MAX_COVER_INPUTS = 16
_LATCH_TYPES = ("fe", "re", "ah", "al", "as")


def _logical_lines(text: str):
    """Yield (line_number, tokens) with comments stripped and continuations joined."""
    lines = text.splitlines()
    i = 0
    while i < len(lines):
        start = i + 1
        raw = lines[i]
        i += 1
        hash_pos = raw.find("#")
        if hash_pos >= 0:
            raw = raw[:hash_pos]
        raw = raw.rstrip()
        while raw.endswith("\\"):
            raw = raw[:-1]
            if i < len(lines):
                cont = lines[i]
                i += 1
                hash_pos = cont.find("#")
                if hash_pos >= 0:
                    cont = cont[:hash_pos]
                raw = raw + " " + cont.rstrip()
            else:
                break
        tokens = raw.split()
        if tokens:
            yield start, tokens


class _Cover:
    __slots__ = ("inputs", "output", "rows", "line")

    def __init__(self, inputs, output, line):
        self.inputs = inputs
        self.output = output
        self.rows: list[tuple[str, int]] = []  # (input plane, line)
        self.line = line


def parse_blif(data) -> Netlist:
    """Parse BLIF text (str or bytes) into a Netlist."""
    if isinstance(data, (bytes, bytearray)):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not valid UTF-8 text: {exc}") from None
    else:
        text = data

    model: str | None = None
    inputs: list[tuple[str, int]] = []
    outputs: list[tuple[str, int]] = []
    latch_specs: list[tuple[str, str, int, str | None, int]] = []  # (in, out, init, clock, line)
    covers: dict[str, _Cover] = {}
    defined: dict[str, int] = {}  # signal -> defining line
    current: _Cover | None = None
    ended = False

    def define(signal: str, line: int) -> None:
        if signal in defined:
            raise ParseError(f"duplicate definition of signal {signal!r}", line)
        defined[signal] = line

    for line, tokens in _logical_lines(text):
        head = tokens[0]
        if ended:
            raise ParseError("content after .end", line)
        if head.startswith("."):
            current = None
            if head == ".model":
                if model is not None:
                    raise ParseError("multiple .model directives (single model per file)", line)
                if len(tokens) != 2:
                    raise ParseError(".model expects exactly one name", line)
                model = tokens[1]
            elif head == ".inputs":
                for name in tokens[1:]:
                    define(name, line)
                    inputs.append((name, line))
            elif head == ".outputs":
                outputs.extend((name, line) for name in tokens[1:])
            elif head == ".latch":
                args = tokens[1:]
                if len(args) == 2:
                    d_in, d_out, latch_type, clock, init_tok = *args, None, None, None
                elif len(args) == 3:
                    d_in, d_out, init_tok = args
                    latch_type = clock = None
                elif len(args) == 4:
                    d_in, d_out, latch_type, clock = args
                    init_tok = None
                elif len(args) == 5:
                    d_in, d_out, latch_type, clock, init_tok = args
                else:
                    raise ParseError(".latch expects 2 to 5 arguments", line)
                if latch_type is not None and latch_type not in _LATCH_TYPES:
                    raise ParseError(f"unknown latch type {latch_type!r}", line)
                if init_tok is None:
                    init = 0
                elif init_tok in ("0", "1"):
                    init = int(init_tok)
                else:
                    raise ParseError(f"unsupported latch init {init_tok!r} (only 0 and 1)", line)
                if clock == "NIL":
                    clock = None
                define(d_out, line)
                latch_specs.append((d_in, d_out, init, clock, line))
            elif head == ".names":
                if len(tokens) < 2:
                    raise ParseError(".names expects at least an output signal", line)
                cover_inputs = tokens[1:-1]
                output = tokens[-1]
                if len(cover_inputs) > MAX_COVER_INPUTS:
                    raise ParseError(
                        f"cover has {len(cover_inputs)} inputs (limit {MAX_COVER_INPUTS})", line
                    )
                define(output, line)
                current = _Cover(cover_inputs, output, line)
                covers[output] = current
            elif head == ".end":
                ended = True
            else:
                raise ParseError(f"unsupported directive {head}", line)
        else:
            if current is None:
                raise ParseError(f"unexpected token {head!r} outside a .names cover", line)
            if len(tokens) == 1 and not current.inputs:
                plane, out_tok = "", tokens[0]
            elif len(tokens) == 2:
                plane, out_tok = tokens
            else:
                raise ParseError("cover row must be '<input-plane> <output>'", line)
            if len(plane) != len(current.inputs):
                raise ParseError(
                    f"cover row arity mismatch: {len(plane)} literals for "
                    f"{len(current.inputs)} inputs",
                    line,
                )
            if any(ch not in "01-" for ch in plane):
                raise ParseError(f"invalid cover row characters in {plane!r}", line)
            if out_tok != "1":
                raise ParseError("only ON-set cover rows ('... 1') are supported", line)
            current.rows.append((plane, line))

    # materialize: signals resolve to literals; covers expand on demand
    sig: dict[str, int] = {}
    names: dict[int, str] = {}
    and_defs: list[tuple[int, int, int]] = []
    next_net = 1

    def new_net() -> int:
        nonlocal next_net
        net = next_net
        next_net += 1
        return net

    for name, line in inputs:
        net = new_net()
        sig[name] = make_lit(net)
        names[net] = name
    pi_nets = [lit_net(sig[name]) for name, _ in inputs]

    latch_states: list[int] = []
    for d_in, d_out, init, clock, line in latch_specs:
        net = new_net()
        sig[d_out] = make_lit(net)
        names[net] = d_out
        latch_states.append(net)

    def mk_and(l0: int, l1: int) -> int:
        net = new_net()
        and_defs.append((net, l0, l1))
        return make_lit(net)

    resolving: set[str] = set()

    def resolve(signal: str, line: int) -> int:
        if signal in sig:
            return sig[signal]
        cover = covers.get(signal)
        if cover is None:
            raise ParseError(f"reference to undefined signal {signal!r}", line)
        if signal in resolving:
            raise ParseError(
                f"cyclic combinational dependency through signal {signal!r}", cover.line
            )
        resolving.add(signal)
        lit = _build_cover(cover, resolve)
        resolving.discard(signal)
        sig[signal] = lit
        net = lit_net(lit)
        # defined signal names are unique, so attachment cannot collide
        if not lit_is_neg(lit) and net not in names:
            names[net] = signal
        return lit

    def _build_cover(cover: _Cover, resolve_fn) -> int:
        in_lits = [resolve_fn(s, cover.line) for s in cover.inputs]
        terms = []
        for plane, _ in cover.rows:
            lits = []
            for ch, base in zip(plane, in_lits):
                if ch == "1":
                    lits.append(base)
                elif ch == "0":
                    lits.append(lit_not(base))
            if not lits:
                terms.append(LIT_TRUE)
                continue
            acc = lits[0]
            for l in lits[1:]:
                acc = mk_and(acc, l)
            terms.append(acc)
        if not terms:
            return LIT_FALSE
        acc = terms[0]
        for term in terms[1:]:
            acc = lit_not(mk_and(lit_not(acc), lit_not(term)))
        return acc

    for output in covers:
        resolve(output, covers[output].line)

    out_records = [(resolve(name, line), name) for name, line in outputs]
    latches = []
    for (d_in, d_out, init, clock, line), state in zip(latch_specs, latch_states):
        latches.append(Latch(data=resolve(d_in, line), state=state, init=init, clock=clock))

    return Netlist(
        name=model or "top",
        inputs=pi_nets,
        and_defs=and_defs,
        outputs=out_records,
        latches=latches,
        names=names,
    )


# -- emission -------------------------------------------------------------


def _reverse_bits(value: int, width: int) -> int:
    out = 0
    for _ in range(width):
        out = (out << 1) | (value & 1)
        value >>= 1
    return out


def _cover_rows(width: int, table: int) -> list[str]:
    rows = []
    for pattern in range(1 << width):
        index = _reverse_bits(pattern, width)  # leaf 0 is the leftmost row character
        if (table >> index) & 1:
            rows.append(format(pattern, f"0{width}b") + " 1")
    return rows


def emit_blif(m: MappedNetlist | Netlist, model_name: str | None = None) -> bytes:
    """Serialize a mapped netlist (or a plain netlist) as BLIF bytes."""
    if isinstance(m, Netlist):
        m = as_lut_network(m)
    model = model_name if model_name is not None else m.name

    claimed: dict[str, tuple] = {}

    def claim(name: str, owner: tuple) -> str:
        if claimed.setdefault(name, owner) != owner:
            raise EmitError(f"name collision on {name!r} during BLIF emission")
        return name

    # an unnamed net adopts the name of the first output driving it
    # positively, so single-use roots emit directly under the output name
    adopted: dict[int, str] = {}
    for lit, oname in m.outputs:
        net = lit_net(lit)
        if not lit_is_neg(lit) and net not in m.names and net not in adopted:
            adopted[net] = oname

    def net_name(net: int) -> str:
        name = m.names.get(net) or adopted.get(net) or f"n{net}"
        return claim(name, ("net", net))

    glue: list[tuple[str, str, bool]] = []  # (target, source net name, invert)
    glue_seen: set[str] = set()
    const_needed = False

    def edge_signal(lit: int, explicit: str | None = None) -> str:
        nonlocal const_needed
        net, neg = lit_net(lit), lit_is_neg(lit)
        base = net_name(net)
        if net == CONST_NET:
            const_needed = True
        if explicit is None:
            if not neg:
                return base
            target = claim(f"{base}_inv", ("glue", net, True))
        else:
            if not neg and explicit == base:
                return base
            target = claim(explicit, ("glue", net, neg))
        if target not in glue_seen:
            glue_seen.add(target)
            glue.append((target, base, neg))
        return target

    pi_names = [net_name(net) for net in m.inputs]
    latch_lines = []
    for la in m.latches:
        state = net_name(la.state)
        data = edge_signal(la.data)
        if la.clock is not None:
            latch_lines.append(f".latch {data} {state} re {la.clock} {la.init}")
        else:
            latch_lines.append(f".latch {data} {state} {la.init}")
    out_names = [edge_signal(lit, explicit=oname) for lit, oname in m.outputs]

    cover_blocks: list[str] = []
    for lut in m.luts:  # stored order is (level, root id), a topological order
        leaf_names = " ".join(net_name(leaf) for leaf in lut.leaves)
        for leaf in lut.leaves:
            if leaf == CONST_NET:
                const_needed = True
        head = f".names {leaf_names} {net_name(lut.root)}"
        cover_blocks.append("\n".join([head, *_cover_rows(len(lut.leaves), lut.table)]))
    for target, base, neg in glue:
        cover_blocks.append(f".names {base} {target}\n{'0' if neg else '1'} 1")

    lines = [f".model {model}"]
    lines.append(".inputs" + ("" if not pi_names else " " + " ".join(pi_names)))
    lines.append(".outputs" + ("" if not out_names else " " + " ".join(out_names)))
    lines.extend(latch_lines)
    if const_needed:
        lines.append(f".names {net_name(CONST_NET)}")
    lines.extend(cover_blocks)
    lines.append(".end")
    return ("\n".join(lines) + "\n").encode("utf-8")
