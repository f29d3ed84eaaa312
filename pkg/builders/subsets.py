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

from typing import FrozenSet, Tuple, Dict, Iterable
from itertools import combinations

__all__ = (
    'ordered_subsets',
    'subset_positions',
    'subset_label',
    'indicator',
)

Subset = FrozenSet[int]


def ordered_subsets(size: int, *, include_empty: bool = True) -> Tuple[Subset, ...]:
    """All subsets of {0, ..., size - 1}, largest first.

    The full set comes first, then subsets by decreasing cardinality,
    lexicographically within one cardinality. For ``size = 2`` this is
    ``{0, 1}, {0}, {1}, {}``.
    """
    smallest = 0 if include_empty else 1
    return tuple(
        frozenset(combo)
        for k in range(size, smallest - 1, -1)
        for combo in combinations(range(size), k)
    )


def subset_positions(subsets: Iterable[Subset]) -> Dict[Subset, int]:
    return {subset: position for position, subset in enumerate(subsets)}


def subset_label(prefix: str, subset: Subset) -> str:
    """``prefix{1,2}`` with 1-based members."""
    return prefix + '{' + ','.join(str(k + 1) for k in sorted(subset)) + '}'


def indicator(member: int, subset: Subset) -> float:
    return 1.0 if member in subset else 0.0
