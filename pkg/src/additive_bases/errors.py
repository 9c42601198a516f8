"""Exception hierarchy shared by every module of the package."""

from typing import Optional, Tuple


class AdditiveBasesError(Exception):
    """Base class for errors raised by additive-bases."""


class InvalidParameterError(AdditiveBasesError, ValueError):
    """A parameter or input violates an operation's precondition."""


class InvalidInstanceError(AdditiveBasesError, ValueError):
    """A basis instance is malformed or cannot be solved on its ground set."""


class InvalidWitnessError(AdditiveBasesError, ValueError):
    """A supplied basis does not cover the targets it is claimed to cover."""

    def __init__(self, message: str, failing_element=None):
        super().__init__(message)
        self.failing_element = failing_element


class InputFormatError(AdditiveBasesError, ValueError):
    """An input file or scalar string could not be parsed."""


class GuardError(AdditiveBasesError, ValueError):
    """A run was refused because its configuration exceeds a guard."""


class ConstructionError(AdditiveBasesError, RuntimeError):
    """A construction could not produce the object its argument promises."""


class BudgetExhaustedError(AdditiveBasesError, RuntimeError):
    """The search ran out of nodes before proving optimality."""

    def __init__(
        self,
        message: str,
        best_size: Optional[int] = None,
        best_witness: Optional[Tuple] = None,
        nodes: int = 0,
    ):
        super().__init__(message)
        self.best_size = best_size
        self.best_witness = best_witness
        self.nodes = nodes
