"""Search backend selection: compiled kernel when importable, else pure Python.

Both backends implement identical semantics over `SearchProblem`; the kernel
packs states into machine words and is the one to use on large loop spaces.
Set DIGHOM_BACKEND=pure (or call set_backend) to force the fallback.
"""

from __future__ import annotations

import os
from typing import Sequence

from .problem import (
    SearchBudgetExceeded,
    SearchOutcome,
    SearchProblem,
    State,
    state_forbidden,
    state_valid,
)
from . import pure

try:
    from dighom import _kernel
except ImportError:  # pragma: no cover - depends on the build
    _kernel = None

_DEFAULT = "pure"
if _kernel is not None and os.environ.get("DIGHOM_BACKEND", "") != "pure":
    _DEFAULT = "compiled"
_backend = _DEFAULT


def available_backends() -> tuple[str, ...]:
    return ("compiled", "pure") if _kernel is not None else ("pure",)


def get_backend() -> str:
    return _backend


def set_backend(name: str) -> None:
    global _backend
    if name not in available_backends():
        raise ValueError(f"backend {name!r} not available (have {available_backends()})")
    _backend = name


def kernel_supports(problem: SearchProblem) -> bool:
    if _kernel is None:
        return False
    return (
        problem.n_slots <= _kernel.KERNEL_MAX_SLOTS
        and problem.n_points <= _kernel.KERNEL_MAX_POINTS
        and problem.forbidden_fn is None
        and max(len(nb) for nb in problem.neighbors) < _kernel.KERNEL_MAX_POINTS
    )


def successors(problem: SearchProblem, state: State, *, single_moves: bool = False):
    return pure.successors(problem, state, single_moves=single_moves)


def run_search(
    problem: SearchProblem,
    starts: Sequence[State],
    targets: Sequence[State] | None = None,
    *,
    mode: str = "bfs",
    heuristic_costs: Sequence[Sequence[int]] | None = None,
    single_moves: bool = False,
    max_nodes: int | None = None,
    want_witness: bool = True,
    watch_pair: tuple[int, int] | None = None,
    backend: str | None = None,
) -> SearchOutcome:
    """Reachability from starts, stopping at a target state or saturating."""
    chosen = backend or _backend
    if chosen == "compiled" and not kernel_supports(problem):
        chosen = "pure"
    if chosen == "pure":
        return pure.run_search(
            problem,
            starts,
            targets,
            mode=mode,
            heuristic_costs=heuristic_costs,
            single_moves=single_moves,
            max_nodes=max_nodes,
            want_witness=want_witness,
            watch_pair=watch_pair,
        )

    for s in starts:
        if not state_valid(problem, s, ignore_forbidden=True):
            raise ValueError(f"start state {s} violates the space constraints")
    clean = [s for s in starts if not state_forbidden(problem, s)]
    excluded = len(starts) - len(clean)
    found, witness, count, saturated, bound_attained, visited = _kernel.run(
        problem.n_slots,
        problem.n_points,
        problem.neighbors,
        problem.adjacent_slots,
        problem.equal_slots,
        problem.pins,
        problem.forbidden_pairs,
        problem.exempt_state,
        clean,
        list(targets) if targets is not None else None,
        mode,
        heuristic_costs,
        single_moves,
        max_nodes,
        want_witness,
        watch_pair,
    )
    return SearchOutcome(
        found=found,
        witness=witness,
        visited_count=count,
        saturated=saturated,
        excluded_starts=excluded,
        bound_attained=bound_attained,
        _contains=visited.contains,
    )


__all__ = [
    "SearchBudgetExceeded",
    "SearchOutcome",
    "SearchProblem",
    "available_backends",
    "get_backend",
    "kernel_supports",
    "run_search",
    "set_backend",
    "state_forbidden",
    "state_valid",
    "successors",
]
