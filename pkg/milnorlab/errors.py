"""
Error hierarchy for milnorlab.

Every failure raised by the library derives from MilnorLabError. The CLI maps
the three families onto exit codes through exit_code_for():

    InputError        -> 1  (bad expression, unknown variable, malformed job)
    PreconditionError -> 2  (a formula does not apply to the input)
    ComputationError  -> 3  (the computation could not reach a decision)
"""
from typing import Optional, Sequence

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_PRECONDITION = 2
EXIT_INCONCLUSIVE = 3


class MilnorLabError(Exception):
    """Base class for all library errors."""

    exit_code = EXIT_INPUT


# ---------------------------------------------------------------- input

class InputError(MilnorLabError, ValueError):
    exit_code = EXIT_INPUT


class ParseError(InputError):
    """Syntax error in a polynomial expression, annotated with a position."""

    def __init__(self, message: str, text: str, position: int):
        self.text = text
        self.position = position
        pointer = " " * position + "^"
        super().__init__(f"{message} at position {position}\n  {text}\n  {pointer}")


class UnknownVariableError(InputError):
    pass


class VariableMismatchError(InputError):
    pass


class BatchFileError(InputError):
    pass


# --------------------------------------------------------- preconditions

class PreconditionError(MilnorLabError, ValueError):
    exit_code = EXIT_PRECONDITION


class NonConvenientError(PreconditionError):
    pass


class ConstantTermError(PreconditionError):
    pass


class DegenerateFaceError(PreconditionError):
    """A face polynomial has a repeated factor."""

    def __init__(self, message: str, face: Optional[Sequence[int]] = None):
        self.face = tuple(face) if face is not None else None
        super().__init__(message)


class PairDegeneracyError(DegenerateFaceError):
    pass


class MultiplicityConditionError(PreconditionError):
    """The Newton multiplicity condition fails; carries the witness weight."""

    def __init__(self, witness: Sequence[int]):
        self.witness = tuple(witness)
        shown = ",".join(str(c) for c in self.witness)
        super().__init__(f"Newton multiplicity condition violated; witness P=({shown})")


class CommonFactorError(PreconditionError):
    pass


class HomogeneityError(PreconditionError):
    pass


class EqualDegreeError(PreconditionError):
    pass


class SupportTooLargeError(PreconditionError):
    pass


class DimensionError(PreconditionError):
    pass


# ---------------------------------------------------------- computation

class ComputationError(MilnorLabError, ArithmeticError):
    exit_code = EXIT_INCONCLUSIVE


class TruncationError(ComputationError):
    pass


class RootFindingError(ComputationError):
    pass


class BranchSeparationError(ComputationError):
    def __init__(self, message: str, depth: int):
        self.depth = depth
        super().__init__(f"{message} (recursion depth {depth})")


class SelectionError(ComputationError):
    pass


class RadiusError(ComputationError):
    pass


# ------------------------------------------------------------- bug trap

class InconsistencyError(MilnorLabError):
    """Two independent computations of the same quantity disagree."""

    exit_code = EXIT_INPUT


def exit_code_for(exc: BaseException) -> int:
    """Exit code for an exception escaping a job."""
    if isinstance(exc, MilnorLabError):
        return exc.exit_code
    return EXIT_INPUT
