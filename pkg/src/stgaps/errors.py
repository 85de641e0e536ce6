"""Exception hierarchy. Every domain failure derives from ``StgapsError`` so the
CLI can map it to exit code 1."""


class StgapsError(Exception):
    pass


class CapacityError(StgapsError):
    """Requested size exceeds a configured cap."""


class UnsupportedFormError(StgapsError):
    pass


class CoefficientParseError(StgapsError):
    def __init__(self, lineno, message):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class DataIntegrityError(StgapsError):
    pass


class CoverageError(StgapsError):
    """A prime beyond the coefficient/angle table was needed."""


class DegeneracyError(StgapsError):
    pass


class ParameterError(StgapsError):
    pass


class CacheError(StgapsError):
    pass
