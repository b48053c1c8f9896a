"""Shared description of one-step-move search spaces.

A state assigns one image point (by index) to every slot.  Slots are map
arguments or path positions; the constraints below carve out the continuous,
constraint-satisfying states, and a move replaces a state by another state
that is pointwise equal-or-adjacent.  Reachability under such moves is
exactly homotopy, so both backends answer graph questions about this space.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

State = tuple[int, ...]


class SearchBudgetExceeded(RuntimeError):
    """Raised when a search would visit more states than its node budget."""


@dataclass(frozen=True, eq=False)
class SearchProblem:
    n_slots: int
    n_points: int
    neighbors: tuple[tuple[int, ...], ...]
    adjacent_slots: tuple[tuple[int, int], ...]
    equal_slots: tuple[tuple[int, int], ...] = ()
    pinned: tuple[int, ...] = ()
    forbidden_pairs: tuple[tuple[int, int, int], ...] = ()
    forbidden_fn: Callable[[State], bool] | None = None
    exempt_state: State | None = None

    def __post_init__(self) -> None:
        if self.pinned and len(self.pinned) != self.n_slots:
            raise ValueError("pinned must list one entry per slot")

    @property
    def pins(self) -> tuple[int, ...]:
        return self.pinned if self.pinned else tuple([-1] * self.n_slots)


@dataclass
class SearchOutcome:
    found: State | None
    witness: list[State] | None
    visited_count: int
    saturated: bool
    excluded_starts: int
    bound_attained: bool
    _contains: Callable[[State], bool] = field(repr=False, default=lambda s: False)

    def contains(self, state: State) -> bool:
        return self._contains(state)


def adjacency_ok(problem: SearchProblem, a: int, b: int) -> bool:
    return a == b or b in problem.neighbors[a]


def state_valid(problem: SearchProblem, state: State, *, ignore_forbidden: bool = False) -> bool:
    """Whether a state satisfies pins, continuity, equality, and forbiddenness."""
    if len(state) != problem.n_slots:
        return False
    pins = problem.pins
    for i, v in enumerate(state):
        if not 0 <= v < problem.n_points:
            return False
        if pins[i] >= 0 and v != pins[i]:
            return False
    for i, j in problem.adjacent_slots:
        if not adjacency_ok(problem, state[i], state[j]):
            return False
    for i, j in problem.equal_slots:
        if state[i] != state[j]:
            return False
    if ignore_forbidden:
        return True
    return not state_forbidden(problem, state)


def state_forbidden(problem: SearchProblem, state: State) -> bool:
    if problem.exempt_state is not None and state == problem.exempt_state:
        return False
    for i, j, p in problem.forbidden_pairs:
        if state[i] == p and state[j] == p:
            return True
    if problem.forbidden_fn is not None and problem.forbidden_fn(state):
        return True
    return False
