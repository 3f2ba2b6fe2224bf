"""Exception hierarchy shared by all ssz modules."""


class SSZError(Exception):
    """Base class for every error raised by ssz."""


class InvalidInputError(SSZError, ValueError):
    pass


class NotAModularFormError(SSZError):
    """The q-series is inconsistent with a level-1 form of the tagged weight."""


class InternalConsistencyError(SSZError):
    """A structural invariant failed; indicates a data or math bug."""


class UnsupportedIndexError(SSZError):
    pass


class UnsupportedDiscriminantError(SSZError):
    pass


class EigenformNotFoundError(SSZError):
    pass


class InsufficientOperatorsError(SSZError):
    pass


class SearchFailureError(SSZError):
    pass


class ParseError(SSZError):
    def __init__(self, msg, line=None):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line is not None else msg)


class ValidationError(SSZError):
    pass
