"""Exception types shared across the package."""


class MatrixValidationError(ValueError):
    """Base for rejections of a candidate parameter matrix."""


class NotPseudoOrthogonal(MatrixValidationError):
    """The metric condition fails: transpose(L) @ eta @ L != eta."""


class NotOrthochronous(MatrixValidationError):
    """The bottom-right entry is below 1."""


class PreconditionError(ValueError):
    """A mathematical precondition of the requested operation fails."""


class NonGenericMatrix(PreconditionError):
    """A formula needs matrix entries that are zero here."""


class ModeError(ValueError):
    """Operation invoked under the wrong scalar mode."""


class NonConvergence(RuntimeError):
    """An adaptively truncated sum hit the shell cap without settling."""
