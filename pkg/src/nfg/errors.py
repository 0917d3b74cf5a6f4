"""Exception types shared across the package."""


class NfgError(Exception):
    """Base class for all library errors."""


class GraphError(NfgError):
    """Malformed graph construction: duplicate ids, dangling references,
    or tensor shapes that disagree with the declared ports."""


class ContractError(NfgError):
    """An operation was invoked outside its stated contract."""


class ValidationError(NfgError):
    """A graph that must be normal failed validation."""

    def __init__(self, violations):
        self.violations = tuple(violations)
        detail = "; ".join(str(v) for v in self.violations)
        super().__init__(f"graph is not a valid normal factor graph: {detail}")


class CyclicGraphError(NfgError):
    """The sum-product schedule requires a cycle-free graph."""


class DisconnectedError(NfgError):
    """The sum-product schedule requires a connected graph."""


class ZeroMessageError(NfgError):
    """A flooding update produced an all-zero message that cannot be
    normalized."""


class NotIdentityError(NfgError):
    """A factor chain claimed to be a scalar multiple of the identity is
    not one."""


class SingularEdgeError(NfgError):
    """A loop-series edge has a vanishing message determinant."""


class DocumentError(NfgError):
    """A graph document failed to parse or violates the document schema.

    ``location`` is a JSON path (or "line L, column C" for syntax errors)
    identifying where the problem sits.
    """

    def __init__(self, location, message):
        self.location = location
        super().__init__(f"{location}: {message}")
