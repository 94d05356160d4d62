"""Exception hierarchy. Every error is a ``ValueError`` so generic callers can
catch the family at once; the CLI maps each class to its own exit code."""


class R2Error(ValueError):
    pass


class SeriesTooShort(R2Error):
    pass


class NonFiniteInput(R2Error):
    pass


class LengthMismatch(R2Error):
    pass


class ZeroVarianceTargets(R2Error):
    pass


class InvalidSpec(R2Error):
    pass


class SingularFit(R2Error):
    pass


class EmptyTrainingSet(R2Error):
    pass


class CsvError(R2Error):
    """Malformed CSV input. ``line`` is 1-based when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MissingColumn(CsvError):
    pass
