"""Exception hierarchy.

Two families matter to callers: :class:`ValidationError` for malformed input
(CLI exit code 1) and :class:`MathDegeneracy` for points where a formula is
genuinely undefined (CLI exit code 2).
"""


class NullFlatError(Exception):
    """Base class for every error raised by this package."""

    code = "NullFlatError"

    def to_dict(self):
        return {"code": self.code, "message": str(self)}


class ValidationError(NullFlatError, ValueError):
    """Input does not satisfy a documented precondition or schema."""

    code = "ValidationError"

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field

    def to_dict(self):
        d = super().to_dict()
        if self.field is not None:
            d["field"] = self.field
        return d


class JetOrderError(ValidationError):
    code = "JetOrderError"


class SignatureMismatch(ValidationError):
    code = "SignatureMismatch"


class MathDegeneracy(NullFlatError, ArithmeticError):
    """A formula is undefined at a specific parameter value."""

    code = "MathDegeneracy"

    def __init__(self, message, tau=None, index=None):
        super().__init__(message)
        self.tau = None if tau is None else float(tau)
        self.index = None if index is None else int(index)

    def to_dict(self):
        d = super().to_dict()
        d["tau"] = self.tau
        if self.index is not None:
            d["index"] = self.index
        return d


class NonPositiveRadicand(MathDegeneracy):
    code = "NonPositiveRadicand"


class DegenerateDelta(MathDegeneracy):
    code = "DegenerateDelta"


class DegenerateGerm(MathDegeneracy):
    code = "DegenerateGerm"


class SigmaNotMonotone(MathDegeneracy):
    code = "SigmaNotMonotone"


class DegenerateInterval(ValidationError):
    code = "DegenerateInterval"


class IdenticallyDegenerate(MathDegeneracy):
    """An inversion denominator is the zero polynomial."""

    code = "IdenticallyDegenerate"
