"""Exception hierarchy for the workbench."""


class WorkbenchError(Exception):
    """Base class for all workbench errors."""


class CodeError(WorkbenchError, ValueError):
    """Invalid parity-check matrix, word length mismatch or oversized enumeration."""


class AlistParseError(CodeError):
    """Malformed alist input."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class ChannelError(WorkbenchError, ValueError):
    """Invalid channel parameters."""


class ParameterError(WorkbenchError, ValueError):
    """Decoder or experiment parameters violate their invariants."""


class DecoderNotFoundError(WorkbenchError, KeyError):
    """No loaded decoder plugin serves the requested id."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "decoder not found"
