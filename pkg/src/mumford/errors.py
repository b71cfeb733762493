"""Error taxonomy shared by every module.

Each class carries a short ``code`` that the command line surfaces in its
JSON error payloads.
"""


class MumfordError(Exception):
    code = "error"


class InvalidInput(MumfordError, ValueError):
    code = "invalid_input"


class InsufficientPrecision(MumfordError, ArithmeticError):
    code = "insufficient_precision"


class DivisionByZeroToPrecision(InsufficientPrecision, ZeroDivisionError):
    code = "division_by_zero_to_precision"


class FieldMismatch(MumfordError, ValueError):
    code = "field_mismatch"


class ExtensionRequired(MumfordError):
    code = "extension_required"


class FixesInfinity(MumfordError):
    code = "fixes_infinity"


class CoincidentPoints(MumfordError, ValueError):
    code = "coincident_points"


class DegenerateTuple(MumfordError, ValueError):
    code = "degenerate_tuple"


class SharedEnd(MumfordError):
    code = "shared_end"


class BoundViolated(MumfordError):
    code = "bound_violated"


class NotFiniteOrder(MumfordError):
    code = "not_finite_order"


class InvalidRamification(MumfordError, ValueError):
    code = "invalid_ramification"


class NonGenerating(MumfordError, ValueError):
    code = "non_generating"


class NonFreeKernel(MumfordError, ValueError):
    code = "non_free_kernel"


class OddTermCount(MumfordError, ValueError):
    code = "odd_term_count"
