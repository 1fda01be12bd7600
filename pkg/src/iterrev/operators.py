"""Iterated revision operators on ranked epistemic states.

Every operator maps ``(state, input)`` to a :class:`RevisionOutcome` holding
both the successor state and the belief of the revision.  Revising by an
unsatisfiable input leaves the state alone and yields the empty belief (the
compliant operators all follow this convention; ``stubborn`` does not).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Union

from .epistemic import EpistemicState, belief_set, canonicalize, min_mask
from .logic import VocabularyMismatch, WorldSet


@dataclass(frozen=True)
class RevisionOutcome:
    state: EpistemicState
    belief: WorldSet


Operator = Callable[[EpistemicState, WorldSet], RevisionOutcome]


def _check(s: EpistemicState, mu: WorldSet) -> None:
    if s.n != mu.n:
        raise VocabularyMismatch(f"state over {s.n} atoms, input over {mu.n}")


def _unsatisfiable(s: EpistemicState, mu: WorldSet) -> RevisionOutcome:
    return RevisionOutcome(s, WorldSet(0, s.n))


def revise_natural(s: EpistemicState, mu: WorldSet) -> RevisionOutcome:
    """Promote the most plausible ``mu``-worlds to rank 0; all else keeps its relative order."""
    _check(s, mu)
    if not mu.mask:
        return _unsatisfiable(s, mu)
    best = min_mask(s, mu.mask)
    ranks = [0 if best >> w & 1 else r + 1 for w, r in enumerate(s.ranks)]
    return RevisionOutcome(canonicalize(ranks), WorldSet(best, s.n))


def revise_lexicographic(s: EpistemicState, mu: WorldSet) -> RevisionOutcome:
    """Put every ``mu``-world strictly below every other world, keeping order inside each block."""
    _check(s, mu)
    if not mu.mask:
        return _unsatisfiable(s, mu)
    offset = max(s.ranks) + 1
    ranks = [r if mu.mask >> w & 1 else r + offset for w, r in enumerate(s.ranks)]
    return RevisionOutcome(canonicalize(ranks), WorldSet(min_mask(s, mu.mask), s.n))


def revise_flat(s: EpistemicState, mu: WorldSet) -> RevisionOutcome:
    """Believe the minimal ``mu``-worlds and forget every other distinction.

    Single revisions behave like the compliant operators; iterated ones do not.
    """
    _check(s, mu)
    if not mu.mask:
        return _unsatisfiable(s, mu)
    best = min_mask(s, mu.mask)
    ranks = [0 if best >> w & 1 else 1 for w in range(len(s.ranks))]
    return RevisionOutcome(canonicalize(ranks), WorldSet(best, s.n))


def revise_stubborn(s: EpistemicState, mu: WorldSet) -> RevisionOutcome:
    """Ignore the input entirely."""
    _check(s, mu)
    return RevisionOutcome(s, belief_set(s))


OPERATORS: dict[str, Operator] = {
    "natural": revise_natural,
    "lexicographic": revise_lexicographic,
    "flat": revise_flat,
    "stubborn": revise_stubborn,
}


def register_operator(name: str, op: Operator) -> None:
    if name in OPERATORS:
        raise ValueError(f"operator {name!r} already registered")
    OPERATORS[name] = op


def get_operator(op: Union[str, Operator]) -> Operator:
    if callable(op):
        return op
    try:
        return OPERATORS[op]
    except KeyError:
        raise KeyError(f"unknown operator {op!r}; known: {', '.join(OPERATORS)}") from None


def apply_sequence(
    op: Union[str, Operator], s: EpistemicState, inputs: Iterable[WorldSet]
) -> RevisionOutcome:
    """Revise ``s`` by each input in turn; the last outcome is returned."""
    fn = get_operator(op)
    outcome = None
    for mu in inputs:
        outcome = fn(s, mu)
        s = outcome.state
    if outcome is None:
        raise ValueError("apply_sequence needs at least one input")
    return outcome
