"""Reader for the ASCII AIGER format ("aag").

Accepts the header `aag M I L O A` with M == I + L + A, the input /
latch / output / AND sections, and an optional symbol table (`i<k>`,
`l<k>`, `o<k>` lines) terminated by an optional comment section after a
`c` line. AIGER variable k becomes net k, so literal 2k+1 is the
complemented edge of net k. AND definitions may appear in any order;
nodes are stored in canonical topological order. Binary "aig" files are
rejected.

Output naming: an output with symbol `s` is recorded under that name,
and `s` is also attached to the driving net when the edge is positive
and the net unnamed. Without a symbol the output is named after its net
when the edge is positive and the net is named, otherwise `o<k>`.
"""

from __future__ import annotations

from .errors import CycleError, ParseError
from .netlist import Latch, Netlist, lit_is_neg, lit_net


def _decode(data) -> str:
    if isinstance(data, (bytes, bytearray)):
        try:
            return data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not valid UTF-8 text: {exc}") from None
    return data


def _parse_uint(token: str, what: str, line: int) -> int:
    if not token.isdigit():
        raise ParseError(f"{what} must be a non-negative integer, got {token!r}", line)
    return int(token)


def parse_aiger(data, name: str = "top") -> Netlist:
    """Parse ASCII AIGER text (str or bytes) into a Netlist."""
    lines = _decode(data).splitlines()
    if not lines:
        raise ParseError("empty input", 1)

    header = lines[0].split()
    if not header:
        raise ParseError("missing header", 1)
    if header[0] == "aig":
        raise ParseError("binary AIGER is not supported; convert to ASCII 'aag'", 1)
    if header[0] != "aag" or len(header) != 6:
        raise ParseError("malformed header, expected 'aag M I L O A'", 1)
    m, n_in, n_latch, n_out, n_and = (_parse_uint(t, "header count", 1) for t in header[1:])
    if m != n_in + n_latch + n_and:
        raise ParseError(f"inconsistent header: M={m} but I+L+A={n_in + n_latch + n_and}", 1)

    body_len = n_in + n_latch + n_out + n_and
    if len(lines) - 1 < body_len:
        raise ParseError(f"unexpected end of file: expected {body_len} definition lines", len(lines))

    max_lit = 2 * m + 1
    defined_line: dict[int, int] = {}  # var -> line number, for error reporting

    def check_lit(lit: int, what: str, line: int) -> int:
        if lit > max_lit:
            raise ParseError(f"{what} literal {lit} out of range (max {max_lit})", line)
        return lit

    def define_var(lit: int, what: str, line: int) -> int:
        if lit & 1 or lit == 0:
            raise ParseError(f"{what} must be a positive even literal, got {lit}", line)
        var = lit >> 1
        if var in defined_line:
            raise ParseError(f"duplicate definition of variable {var}", line)
        defined_line[var] = line
        return var

    pos = 1
    inputs: list[int] = []
    for _ in range(n_in):
        lineno = pos + 1
        tokens = lines[pos].split()
        pos += 1
        if len(tokens) != 1:
            raise ParseError("input line must hold a single literal", lineno)
        lit = check_lit(_parse_uint(tokens[0], "input", lineno), "input", lineno)
        inputs.append(define_var(lit, "input", lineno))

    latch_specs: list[tuple[int, int, int]] = []  # (state var, next lit, init)
    for _ in range(n_latch):
        lineno = pos + 1
        tokens = lines[pos].split()
        pos += 1
        if len(tokens) not in (2, 3):
            raise ParseError("latch line must be '<state> <next> [<init>]'", lineno)
        state_lit = check_lit(_parse_uint(tokens[0], "latch state", lineno), "latch state", lineno)
        next_lit = check_lit(_parse_uint(tokens[1], "latch next", lineno), "latch next", lineno)
        init = _parse_uint(tokens[2], "latch init", lineno) if len(tokens) == 3 else 0
        if init not in (0, 1):
            raise ParseError(f"unsupported latch init {init} (only 0 and 1)", lineno)
        var = define_var(state_lit, "latch state", lineno)
        latch_specs.append((var, next_lit, init))

    output_lits: list[int] = []
    for _ in range(n_out):
        lineno = pos + 1
        tokens = lines[pos].split()
        pos += 1
        if len(tokens) != 1:
            raise ParseError("output line must hold a single literal", lineno)
        output_lits.append(check_lit(_parse_uint(tokens[0], "output", lineno), "output", lineno))

    and_defs: list[tuple[int, int, int]] = []
    and_line: dict[int, int] = {}
    for _ in range(n_and):
        lineno = pos + 1
        tokens = lines[pos].split()
        pos += 1
        if len(tokens) != 3:
            raise ParseError("AND line must be '<lhs> <rhs0> <rhs1>'", lineno)
        lhs = check_lit(_parse_uint(tokens[0], "AND output", lineno), "AND output", lineno)
        rhs0 = check_lit(_parse_uint(tokens[1], "AND fanin", lineno), "AND fanin", lineno)
        rhs1 = check_lit(_parse_uint(tokens[2], "AND fanin", lineno), "AND fanin", lineno)
        var = define_var(lhs, "AND output", lineno)
        and_defs.append((var, rhs0, rhs1))
        and_line[var] = lineno

    missing = [v for v in range(1, m + 1) if v not in defined_line]
    if missing:
        raise ParseError(f"variable {missing[0]} is never defined (header claims M={m})")

    # symbol table and optional comment section
    in_syms: dict[int, str] = {}
    latch_syms: dict[int, str] = {}
    out_syms: dict[int, str] = {}
    net_symbols: set[str] = set()
    for offset, raw in enumerate(lines[pos:], start=pos + 1):
        if raw.startswith("c") and (raw == "c" or raw[1].isspace()):
            break
        if not raw.strip():
            continue
        tag, _, rest = raw.partition(" ")
        symbol = rest.strip()
        if len(tag) < 2 or tag[0] not in "ilo" or not tag[1:].isdigit() or not symbol:
            raise ParseError(f"malformed symbol table entry {raw!r}", offset)
        if any(ch.isspace() for ch in symbol):
            raise ParseError(f"symbol {symbol!r} contains whitespace", offset)
        index = int(tag[1:])
        table, count = {"i": (in_syms, n_in), "l": (latch_syms, n_latch), "o": (out_syms, n_out)}[tag[0]]
        if index >= count:
            raise ParseError(f"symbol index {tag} out of range", offset)
        if index in table:
            raise ParseError(f"duplicate symbol entry {tag}", offset)
        if tag[0] in "il":
            if symbol in net_symbols:
                raise ParseError(f"duplicate name {symbol!r}", offset)
            net_symbols.add(symbol)
        table[index] = symbol

    names: dict[int, str] = {}
    taken: set[str] = set()

    def attach(net: int, symbol: str) -> None:
        if net not in names and symbol not in taken:
            names[net] = symbol
            taken.add(symbol)

    for k, net in enumerate(inputs):
        if k in in_syms:
            attach(net, in_syms[k])
    for k, (state, _, _) in enumerate(latch_specs):
        if k in latch_syms:
            attach(state, latch_syms[k])

    outputs: list[tuple[int, str]] = []
    for k, lit in enumerate(output_lits):
        net = lit_net(lit)
        if k in out_syms:
            oname = out_syms[k]
            if not lit_is_neg(lit):
                attach(net, oname)
        elif not lit_is_neg(lit) and net in names:
            oname = names[net]
        else:
            oname = f"o{k}"
        outputs.append((lit, oname))

    latches = [Latch(data=nxt, state=state, init=init) for state, nxt, init in latch_specs]
    try:
        return Netlist(
            name=name,
            inputs=inputs,
            and_defs=and_defs,
            outputs=outputs,
            latches=latches,
            names=names,
        )
    except CycleError as exc:
        raise ParseError(f"combinational cycle through net {exc.net}", and_line.get(exc.net)) from None
