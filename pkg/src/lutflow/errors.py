"""Exception types shared across the package."""

from __future__ import annotations


class LutflowError(Exception):
    """Base class for all errors raised by this package."""


class NetlistError(LutflowError):
    """Invalid netlist structure or metadata."""


class CycleError(NetlistError):
    """Combinational cycle. `net` identifies one net on the cycle."""

    def __init__(self, message: str, net: int):
        super().__init__(message)
        self.net = net


class ParseError(LutflowError):
    """Malformed input file. Carries a 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class StimulusError(ParseError):
    """Bad stimulus file, or stimulus that does not fit the netlist."""


class DumpFormatError(ParseError):
    """Malformed activity dump."""


class EmitError(LutflowError):
    """Netlist cannot be serialized (for example, a name collision)."""
