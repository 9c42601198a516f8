"""
Exact rational scalars and exact linear algebra over the rationals.

Every scalar in the package is a ``fractions.Fraction``; nothing here ever
touches floating point. Matrices are small, dense and immutable, and row
reduction is plain Gauss-Jordan elimination with exact pivots.
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor
from typing import Annotated, Any, Iterable, List, Optional, Sequence, Tuple

from pydantic_core import core_schema

from .errors import InputFormatError


Rational = Fraction

_SCALAR_PATTERN = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*([+-]?\d+)\s*)?$")


def reduce(p: int, q: int) -> Fraction:
    """
    Build the canonical fraction p/q.

    Args:
        p: Numerator
        q: Denominator, non-zero

    Returns:
        The fraction in lowest terms with a positive denominator

    Raises:
        ZeroDivisionError: If q is zero
    """
    if isinstance(p, bool) or isinstance(q, bool) or not isinstance(p, int) or not isinstance(q, int):
        raise TypeError(f"reduce expects integers, got {p!r} and {q!r}")
    if q == 0:
        raise ZeroDivisionError(f"Rational with zero denominator: {p}/0")
    return Fraction(p, q)


def floor_ceil(x: Fraction) -> Tuple[int, int]:
    """Return (floor(x), ceil(x)); both equal x when x is integral."""
    return floor(x), ceil(x)


def fractional_part(x: Fraction) -> Fraction:
    """Return x - floor(x), which always lies in [0, 1)."""
    return x - floor(x)


def is_integral(x: Fraction) -> bool:
    return Fraction(x).denominator == 1


def parse_rational(value: Any) -> Fraction:
    """
    Parse a scalar from its textual form or from a number.

    Accepts ``Fraction`` and ``int`` values as they are, and strings of the
    form ``"12"``, ``"-3"`` or ``"p/q"``; the result is always canonical.

    Args:
        value: The value to parse

    Returns:
        The parsed fraction

    Raises:
        InputFormatError: If the value is not a recognizable scalar
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InputFormatError(f"Not a rational scalar: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        match = _SCALAR_PATTERN.match(value)
        if not match:
            raise InputFormatError(f"Not a rational scalar: {value!r}")
        numerator = int(match.group(1))
        denominator = int(match.group(2)) if match.group(2) is not None else 1
        if denominator == 0:
            raise InputFormatError(f"Zero denominator in scalar: {value!r}")
        return Fraction(numerator, denominator)
    raise InputFormatError(f"Not a rational scalar: {value!r}")


def format_rational(x: Fraction) -> str:
    """Render a scalar as ``"n"`` when integral and ``"p/q"`` otherwise."""
    return str(Fraction(x))


class _RationalPydanticAnnotation:
    """Lets pydantic models carry exact fractions as scalar strings."""

    @classmethod
    def __get_pydantic_core_schema__(cls, source_type, handler):
        return core_schema.no_info_plain_validator_function(
            parse_rational,
            serialization=core_schema.plain_serializer_function_ser_schema(format_rational),
        )


Scalar = Annotated[Fraction, _RationalPydanticAnnotation]


@dataclass(frozen=True)
class RationalMatrix:
    """Dense rows-by-cols matrix of fractions stored row-major."""

    rows: int
    cols: int
    entries: Tuple[Fraction, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("Matrix dimensions must be non-negative")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"Matrix of shape {self.rows}x{self.cols} needs {self.rows * self.cols} entries, "
                f"got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Any]], cols: Optional[int] = None) -> "RationalMatrix":
        """
        Build a matrix from a list of rows.

        Args:
            rows: Row vectors; every row must have the same length
            cols: Column count, required only when ``rows`` is empty

        Returns:
            The matrix
        """
        rows = [tuple(parse_rational(v) for v in row) for row in rows]
        if rows:
            width = len(rows[0])
            if any(len(row) != width for row in rows):
                raise ValueError("All rows must have the same length")
            if cols is not None and cols != width:
                raise ValueError(f"Rows have {width} columns, expected {cols}")
        else:
            width = cols or 0
        return cls(len(rows), width, tuple(v for row in rows for v in row))

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls.from_rows([[1 if i == j else 0 for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls(rows, cols, tuple(Fraction(0) for _ in range(rows * cols)))

    def __getitem__(self, index: Tuple[int, int]) -> Fraction:
        i, j = index
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Tuple[Fraction, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> List[List[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix.from_rows(
            [[self[i, j] for i in range(self.rows)] for j in range(self.cols)],
            cols=self.rows,
        )

    def multiply_vector(self, x: Sequence[Fraction]) -> Tuple[Fraction, ...]:
        if len(x) != self.cols:
            raise ValueError(f"Vector of length {len(x)} does not match {self.cols} columns")
        return tuple(sum((a * b for a, b in zip(self.row(i), x)), Fraction(0)) for i in range(self.rows))


def _rref_in_place(rows: List[List[Fraction]], cols: int) -> List[int]:
    """Gauss-Jordan elimination on a list of rows; returns the pivot columns."""
    pivots: List[int] = []
    pivot_row = 0
    for col in range(cols):
        if pivot_row >= len(rows):
            break
        source = next((r for r in range(pivot_row, len(rows)) if rows[r][col] != 0), None)
        if source is None:
            continue
        rows[pivot_row], rows[source] = rows[source], rows[pivot_row]
        pivot = rows[pivot_row][col]
        rows[pivot_row] = [v / pivot for v in rows[pivot_row]]
        for r in range(len(rows)):
            if r != pivot_row and rows[r][col] != 0:
                factor = rows[r][col]
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[pivot_row])]
        pivots.append(col)
        pivot_row += 1
    return pivots


def row_echelon(matrix: RationalMatrix) -> Tuple[RationalMatrix, List[int]]:
    """
    Compute the reduced row echelon form of a matrix.

    Args:
        matrix: The matrix to reduce

    Returns:
        Tuple of (reduced matrix, ordered pivot columns); the rank is the
        number of pivots
    """
    rows = matrix.to_rows()
    pivots = _rref_in_place(rows, matrix.cols)
    return RationalMatrix.from_rows(rows, cols=matrix.cols), pivots


def rank(matrix: RationalMatrix) -> int:
    return len(row_echelon(matrix)[1])


def solve_linear(matrix: RationalMatrix, b: Sequence[Any]) -> Optional[Tuple[Fraction, ...]]:
    """
    Find a solution of matrix * x = b, with every free variable set to 0.

    Args:
        matrix: Coefficient matrix
        b: Right-hand side, one entry per row

    Returns:
        A solution vector, or None when the system is inconsistent
    """
    if len(b) != matrix.rows:
        raise ValueError(f"Right-hand side has {len(b)} entries, matrix has {matrix.rows} rows")

    augmented = [row + [parse_rational(v)] for row, v in zip(matrix.to_rows(), b)]
    pivots = _rref_in_place(augmented, matrix.cols + 1)
    if matrix.cols in pivots:
        return None

    solution = [Fraction(0)] * matrix.cols
    for row_index, col in enumerate(pivots):
        solution[col] = augmented[row_index][matrix.cols]
    return tuple(solution)


def kernel(matrix: RationalMatrix) -> List[Tuple[Fraction, ...]]:
    """
    Return a basis of the null space {x : matrix * x = 0}.

    One basis vector per free column: that column is 1, the other free
    columns are 0 and the pivot columns are read off the reduced form.
    """
    reduced, pivots = row_echelon(matrix)
    pivot_set = set(pivots)
    basis = []
    for free in range(matrix.cols):
        if free in pivot_set:
            continue
        vector = [Fraction(0)] * matrix.cols
        vector[free] = Fraction(1)
        for row_index, col in enumerate(pivots):
            vector[col] = -reduced[row_index, free]
        basis.append(tuple(vector))
    return basis


def as_vector(values: Iterable[Any]) -> Tuple[Fraction, ...]:
    return tuple(parse_rational(v) for v in values)
