import pytest

from lutflow import ParseError, lit_is_neg, lit_net, parse_aiger


def test_two_input_and():
    n = parse_aiger("aag 3 2 0 1 1\n2\n4\n6\n6 2 4\n")
    assert len(n.inputs) == 2
    assert len(n.and_nodes) == 1
    (lit, _), = n.outputs
    assert lit_net(lit) == 3 and not lit_is_neg(lit)
    out, l0, l1 = n.and_nodes[0]
    assert (out, l0, l1) == (3, 2, 4)


def test_constant_false_output():
    n = parse_aiger("aag 0 0 0 1 0\n0\n")
    (lit, _), = n.outputs
    assert lit == 0
    assert n.num_nets == 1


def test_complemented_output():
    n = parse_aiger("aag 1 1 0 1 0\n2\n3\n")
    (lit, _), = n.outputs
    assert lit_net(lit) == 1
    assert lit_is_neg(lit)


def test_symbol_table_names():
    text = "aag 3 2 0 1 1\n2\n4\n6\n6 2 4\ni0 a\ni1 b\no0 y\nc\nsome comment\n"
    n = parse_aiger(text)
    assert n.names[1] == "a"
    assert n.names[2] == "b"
    assert n.outputs[0][1] == "y"
    assert n.names[3] == "y"  # positive output symbol attaches to the net


def test_unnamed_output_gets_positional_name():
    n = parse_aiger("aag 1 1 0 2 0\n2\n2\n3\ni0 x\n")
    assert n.outputs[0][1] == "x"  # positive edge of a named net
    assert n.outputs[1][1] == "o1"  # complemented edge falls back


def test_latches_with_init():
    n = parse_aiger("aag 1 0 1 1 0\n2 3 1\n2\nl0 r\n")
    (la,) = n.latches
    assert la.state == 1
    assert la.data == 3
    assert la.init == 1
    assert n.names[1] == "r"


def test_out_of_order_ands_are_sorted():
    # net 3 depends on net 2, defined after it
    n = parse_aiger("aag 3 1 0 1 2\n2\n6\n6 4 2\n4 2 2\n")
    assert [out for out, _, _ in n.and_nodes] == [2, 3]


def test_binary_format_rejected():
    with pytest.raises(ParseError, match="binary"):
        parse_aiger("aig 0 0 0 0 0\n")


@pytest.mark.parametrize(
    "text,match",
    [
        ("", "empty"),
        ("aag 1 1 0 0\n2\n", "malformed header"),
        ("aag x 1 0 0 0\n2\n", "header count"),
        ("aag 2 1 0 0 0\n2\n", "inconsistent header"),
        ("aag 1 1 0 1 0\n2\n9\n", "out of range"),
        ("aag 1 1 0 1 0\n3\n2\n", "even literal"),
        ("aag 2 2 0 0 0\n2\n2\n", "duplicate definition"),
        ("aag 2 1 0 0 1\n2\n4 2\n", "AND line"),
        ("aag 1 1 0 0 0\n2\nz9 name\n", "symbol"),
        ("aag 1 1 0 0 0\n2\ni4 name\n", "out of range"),
        ("aag 1 1 0 0 0\n2\ni0 a\ni0 b\n", "duplicate symbol"),
        ("aag 2 2 0 0 0\n2\n4\ni0 a\ni1 a\n", "duplicate name"),
        ("aag 1 1 0 1 0\n2\n", "unexpected end"),
        ("aag 1 0 1 0 0\n2 2 2\n", "unsupported latch init"),
    ],
)
def test_parse_errors(text, match):
    with pytest.raises(ParseError, match=match):
        parse_aiger(text)


def test_cycle_detected_with_line_number():
    text = "aag 3 1 0 1 2\n2\n6\n4 6 2\n6 4 2\n"
    with pytest.raises(ParseError, match="cycle") as exc:
        parse_aiger(text)
    assert exc.value.line in (3, 4, 5)


def test_error_lines_reported():
    with pytest.raises(ParseError) as exc:
        parse_aiger("aag 1 1 0 1 0\n2\n9\n")
    assert exc.value.line == 3


def test_whitespace_symbol_rejected():
    with pytest.raises(ParseError, match="whitespace"):
        parse_aiger("aag 1 1 0 0 0\n2\ni0 a b\n")


def test_crlf_tolerated():
    n = parse_aiger(b"aag 3 2 0 1 1\r\n2\r\n4\r\n6\r\n6 2 4\r\n")
    assert len(n.and_nodes) == 1
