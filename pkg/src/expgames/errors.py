"""Exception types shared across the package."""


class EvaluationError(ValueError):
    """A formula could not be evaluated (unbound symbol, value off the scale)."""


class CapExceeded(RuntimeError):
    """An enumeration would exceed its configured size cap."""

    def __init__(self, what, size, cap):
        super().__init__(f"{what}: {size} exceeds cap {cap} (pass a larger cap to override)")
        self.size = size
        self.cap = cap


class ParseError(ValueError):
    """Raised by the text parsers; carries a list of :class:`Diagnostic`."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        first = self.diagnostics[0].message if self.diagnostics else "parse error"
        super().__init__(first)


class SolverError(RuntimeError):
    """An external solver ran but did not answer sat, unsat or unknown."""
