# MIT License

# Copyright (c) 2023 Izhar Ahmad

# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:

# The above copyright notice and this permission notice shall be included in all
# copies or substantial portions of the Software.

# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
# SOFTWARE.

from __future__ import annotations

from typing import TYPE_CHECKING, Optional, Dict, Any, Union, List
from marshmallow import ValidationError as SchemaValidationError
from common.constants import ERROR_HINTS, ERROR_NAMES, EXIT_CODES
from common import utils

if TYPE_CHECKING:
    from models.network import ValidationReport

__all__ = (
    'LapisFlowError',
    'UsageError',
    'ModelValidationError',
    'NumericalError',
    'MatrixOverflowError',
    'ConvergenceError',
    'SingularMatrixError',
    'StepSizeError',
    'UnstableModelError',
    'FormulaRegimeError',
    'InfeasibleQueryError',
    'MonotonicityError',
)


class LapisFlowError(Exception):
    """Base class for all errors raised by the library.

    The command line front end turns these into process exit codes and
    a JSON error document on standard error.

    Attributes
    ----------
    exit_code: :class:`int`
        The process exit code.
    messages: List[:class:`str`]
        The error messages.
    hint: Optional[:class:`str`]
        The optional hint, if any.
    error_code: :class:`int`
        The numeric error code, see ``common.constants.ERROR_CODES``.
    """
    default_exit_code: int = EXIT_CODES['NUMERIC_FAILURE']
    default_error_code: str = 'UNSPECIFIED_ERROR'

    def __init__(
            self,
            message: Union[str, List[Any], Dict[str, Any]],
            *,
            hint: Optional[str] = None,
            error_code: Optional[Union[int, str]] = None,
            exit_code: Optional[int] = None,
        ) -> None:

        if error_code is None:
            error_code = self.default_error_code
        if isinstance(error_code, str):
            error_code = utils.get_error_code(error_code)

        if hint is None:
            name = ERROR_NAMES.get(error_code)
            if name:
                hint = ERROR_HINTS.get(name)

        self.exit_code = self.default_exit_code if exit_code is None else exit_code
        self.messages = [message] if isinstance(message, str) else message
        self.hint = hint
        self.error_code = error_code

        super().__init__(message)

    def to_dict(self) -> Dict[str, Any]:
        """Returns the dictionary for the exception."""
        ret: Dict[str, Any] = {
            'error': True,
            'error_code': self.error_code,
            'messages': self.messages,
        }

        if self.hint is not None:
            ret.setdefault('hint', self.hint)

        return ret


class UsageError(LapisFlowError):
    default_exit_code = EXIT_CODES['USAGE']
    default_error_code = 'USAGE_ERROR'


class ModelValidationError(LapisFlowError):
    """Raised when a model or a model file is not well formed.

    Attributes
    ----------
    report: Optional[:class:`models.network.ValidationReport`]
        The report of violations, when the error comes from ``validate()``.
    """
    default_exit_code = EXIT_CODES['MODEL_INVALID']
    default_error_code = 'VALIDATION_ERROR'

    def __init__(
            self,
            message: Union[str, List[Any], Dict[str, Any]],
            *,
            report: Optional[ValidationReport] = None,
            error_code: Optional[Union[int, str]] = None,
            hint: Optional[str] = None,
        ) -> None:

        super().__init__(message, error_code=error_code, hint=hint)
        self.report = report

    @classmethod
    def from_report(cls, report: ValidationReport) -> ModelValidationError:
        return cls(list(report.violations), report=report)

    @classmethod
    def from_external_exc(cls, exc: SchemaValidationError) -> ModelValidationError:
        """Constructs the error from a marshmallow ``ValidationError``.

        Nested field errors are flattened into ``path: message`` strings.
        """
        return cls(_flatten_messages(exc.messages), error_code='SCHEMA_ERROR')


class NumericalError(LapisFlowError):
    pass


class MatrixOverflowError(NumericalError):
    default_error_code = 'MATRIX_OVERFLOW'


class ConvergenceError(NumericalError):
    default_error_code = 'NO_CONVERGENCE'


class SingularMatrixError(NumericalError):
    default_error_code = 'SINGULAR_MATRIX'


class StepSizeError(NumericalError):
    default_error_code = 'STEP_SIZE_UNDERFLOW'


class UnstableModelError(NumericalError):
    """Raised when a stationary quantity is requested from a model whose
    spectral abscissa is not negative.

    Attributes
    ----------
    omega: :class:`float`
        The spectral abscissa of the mean dynamics.
    """
    default_error_code = 'UNSTABLE_MODEL'

    def __init__(self, omega: float, message: Optional[str] = None) -> None:
        if message is None:
            message = f'model is not stable: spectral abscissa {omega!r} is not negative'
        super().__init__(message)
        self.omega = omega

    def to_dict(self) -> Dict[str, Any]:
        ret = super().to_dict()
        ret['omega'] = self.omega
        return ret


class FormulaRegimeError(NumericalError):
    default_error_code = 'OUTSIDE_FORMULA_REGIME'


class InfeasibleQueryError(NumericalError):
    default_error_code = 'EMPTY_FEASIBLE_SET'


class MonotonicityError(NumericalError):
    default_error_code = 'NOT_MONOTONE'
    default_exit_code = EXIT_CODES['USAGE']


def _flatten_messages(messages: Any, prefix: str = '') -> List[str]:
    if isinstance(messages, dict):
        out: List[str] = []
        for key, value in messages.items():
            path = f'{prefix}.{key}' if prefix else str(key)
            out.extend(_flatten_messages(value, path))
        return out
    if isinstance(messages, list):
        out = []
        for value in messages:
            out.extend(_flatten_messages(value, prefix))
        return out

    return [f'{prefix}: {messages}' if prefix else str(messages)]
