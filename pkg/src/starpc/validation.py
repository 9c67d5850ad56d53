"""Input validation helpers shared by the estimators."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .algebra import GF, FieldElement, FieldSpec, Matrix
from .codes import LinearCode
from .exceptions import ConfigurationError, FieldMismatchError
from .polyspace import QuerySpace


def check_field(field, default: FieldSpec | None = None) -> FieldSpec:
    """Accept a FieldSpec, a field order, or a ``{p, m, modulus}`` dict."""
    if field is None:
        if default is None:
            raise ConfigurationError("a field is required")
        return default
    if isinstance(field, FieldSpec):
        return field
    if isinstance(field, (int, np.integer)):
        return GF(int(field))
    if isinstance(field, dict):
        return FieldSpec.from_dict(field)
    raise TypeError(f"cannot interpret {field!r} as a finite field")


def check_data_matrix(X, field: FieldSpec, n_rows: int | None = None, n_cols: int | None = None) -> Matrix:
    """Coerce ``X`` (Matrix, nested rows, or integer array) to an M x K Matrix over ``field``.

    A flat sequence is read as a single column.
    """
    if isinstance(X, Matrix):
        if X.field != field:
            if X.field.p == field.p and X.field.is_prime_field:
                X = X.embed(field)
            else:
                raise FieldMismatchError(f"data lives in {X.field!r}, expected {field!r}")
    else:
        if isinstance(X, np.ndarray):
            X = X.tolist()
        rows = list(X)
        if rows and not isinstance(rows[0], (list, tuple, np.ndarray)):
            rows = [[v] for v in rows]
        X = Matrix(field, rows)
    if n_rows is not None and X.n_rows != n_rows:
        raise ValueError(f"data matrix has {X.n_rows} rows, expected M = {n_rows}")
    if n_cols is not None and X.n_cols != n_cols:
        raise ValueError(f"data matrix has {X.n_cols} columns, expected K = {n_cols}")
    if X.n_rows == 0:
        raise ValueError("data matrix is empty")
    return X


def check_functions(Phi, space: QuerySpace) -> list:
    """Every function must lie in the public query space."""
    if not isinstance(Phi, (list, tuple)):
        Phi = [Phi]
    if not Phi:
        raise ValueError("need at least one function to evaluate")
    for i, phi in enumerate(Phi):
        try:
            space.coordinates(phi)
        except (TypeError, ValueError) as exc:
            raise ValueError(f"function {i + 1} is not in the query space: {exc}") from exc
    return list(Phi)


def check_code(C, N: int | None = None, field: FieldSpec | None = None, name: str = "code") -> LinearCode:
    if not isinstance(C, LinearCode):
        raise TypeError(f"{name} must be a LinearCode, got {type(C).__name__}")
    if N is not None and C.N != N:
        raise ConfigurationError(f"{name} has length {C.N}, expected {N}")
    if field is not None and C.field != field:
        raise FieldMismatchError(f"{name} is over {C.field!r}, expected {field!r}")
    return C


def as_elements(values: Sequence, field: FieldSpec) -> list[FieldElement]:
    return [FieldElement(field, field.check(v)) for v in values]
