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

from typing import Optional, Dict, Any
from dataclasses import dataclass
from common.constants import MARGINAL_OMEGA
from models.assembly import AssembledSystem
from numerics.linalg import spectral_abscissa

import logging

__all__ = (
    'StabilityVerdict',
    'stability',
)

_log = logging.getLogger(__name__)


@dataclass(frozen=True)
class StabilityVerdict:
    """Whether a network is ergodic, judged by the spectral abscissa of
    the mean dynamics.

    Attributes
    ----------
    omega: :class:`float`
        The spectral abscissa of M + A.
    stable: :class:`bool`
        True if and only if omega is negative.
    note: Optional[:class:`str`]
        Set to ``'marginal'`` when ``|omega| < 1e-7``.
    """
    omega: float
    stable: bool
    note: Optional[str] = None

    @property
    def marginal(self) -> bool:
        return self.note == 'marginal'

    @property
    def usable(self) -> bool:
        """Stable with a margin; searches treat marginal verdicts as unstable."""
        return self.stable and not self.marginal

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {'omega': self.omega, 'stable': self.stable}
        if self.note is not None:
            out['note'] = self.note
        return out


def stability(sys: AssembledSystem) -> StabilityVerdict:
    """Computes the stability verdict of an assembled system."""
    omega = spectral_abscissa(sys.drift)
    note = None
    if abs(omega) < MARGINAL_OMEGA:
        note = 'marginal'
        _log.warning('spectral abscissa %.3e is within %.0e of zero', omega, MARGINAL_OMEGA)

    return StabilityVerdict(omega=omega, stable=omega < 0, note=note)
