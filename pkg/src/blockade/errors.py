"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes: parse problems exit 2, precondition
violations exit 3 and a failed ``ContractViolated`` check exits 1.
"""


class BlockadeError(Exception):
    pass


class InputError(BlockadeError, ValueError):
    """Malformed or inconsistent input (unknown vertex, bad element, ...)."""


class ParseError(InputError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnsupportedInstance(InputError):
    pass


class SizeGuardExceeded(InputError):
    pass


class PreconditionViolated(BlockadeError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ContractViolated(BlockadeError):
    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class IllegalInput(BlockadeError):
    """The cutoff loop got stuck; ``witness`` is a nonempty illegal edge set."""

    def __init__(self, witness):
        super().__init__(f"edge set is illegal; witness {sorted(witness)}")
        self.witness = frozenset(witness)


class FeasibilityViolated(BlockadeError):
    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node
