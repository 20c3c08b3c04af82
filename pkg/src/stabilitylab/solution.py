from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable


@dataclass(frozen=True)
class SolutionPoint:
    """A parameter-space point in canonical form plus its objective value.

    Two equal solutions always have equal ``encoding``; that is what clouds
    deduplicate on.
    """

    encoding: Hashable
    objective_value: float
