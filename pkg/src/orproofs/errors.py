"""Exception hierarchy.

Contract violations and malformed data raise; a well-formed proof that
simply does not verify yields ``False`` from the verifier instead.
"""


class OrProofError(Exception):
    """Base class for every error raised by this package."""


class EmptyInput(OrProofError, ValueError):
    pass


class IndexOutOfRange(OrProofError, IndexError):
    pass


class BackendMismatch(OrProofError):
    pass


class EmptyAggregation(OrProofError, ValueError):
    pass


class UnknownConstituent(OrProofError):
    """A constituent proof's descriptor is absent from the transcript."""


class InvalidConstituent(UnknownConstituent):
    """A constituent proof carries an authenticator the context did not issue."""


class TreeMismatch(OrProofError, ValueError):
    pass


class MalformedAux(OrProofError, ValueError):
    pass


class ArityMismatch(OrProofError, ValueError):
    pass


class UnboundAtom(OrProofError, KeyError):
    def __init__(self, name):
        super().__init__(name)
        self.name = name

    def __str__(self):
        return f"unbound atom {self.name!r}"


class ShapeMismatch(OrProofError, ValueError):
    pass


class ExprSyntaxError(OrProofError, ValueError):
    """Parse failure with a 1-based position and the offending token."""

    def __init__(self, message, line, column, token):
        self.line = line
        self.column = column
        self.token = token
        super().__init__(f"{message} at line {line}, column {column} (token {token!r})")


class InvalidParams(OrProofError, ValueError):
    pass


class ScaleExceeded(OrProofError, ValueError):
    pass


class FormatError(OrProofError, ValueError):
    """Base for decoding failures of the binary file formats."""


class BadMagic(FormatError):
    pass


class UnsupportedVersion(FormatError):
    pass


class Truncated(FormatError):
    pass


class IntegrityError(FormatError):
    pass


class DuplicateDescriptor(FormatError):
    pass
