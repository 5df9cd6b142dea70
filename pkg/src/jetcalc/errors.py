"""Exception types shared across the package."""


class JetCalcError(Exception):
    """Base class for all jetcalc errors."""


class UndeclaredIdentifier(JetCalcError):
    pass


class DerivativeCapExceeded(JetCalcError):
    pass


class SubstitutionCycle(JetCalcError):
    pass


class ExprError(JetCalcError):
    """Result not representable in the term algebra (e.g. 1/(u+1))."""


class ShapeMismatch(JetCalcError):
    pass


class BudgetExceeded(JetCalcError):
    """Configured S-polynomial budget exhausted before completion."""


class UnsupportedRegime(JetCalcError):
    """System outside the m <= r < n + m window the criterion covers."""


class ParseError(JetCalcError):
    def __init__(self, message, line, column, expected=None):
        self.message = message
        self.line = line
        self.column = column
        self.expected = expected
        loc = f"line {line}, column {column}"
        hint = f" (expected {expected})" if expected else ""
        super().__init__(f"{message} at {loc}{hint}")
