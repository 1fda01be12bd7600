"""Epistemic states as normalized rankings of worlds.

A state assigns each of the ``2**n`` worlds a natural-number rank; lower is
more plausible.  Ranks are kept normalized (the ranks in use are exactly
``0..max``), so two states are equal iff they induce the same total preorder.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator, Sequence

from .logic import MAX_ATOMS, WorldSet, VocabularyMismatch

MAX_EXHAUSTIVE_ATOMS = 3


class EnumerationTooLarge(ValueError):
    pass


def _is_normalized(ranks: Sequence[int]) -> bool:
    used = set(ranks)
    return used == set(range(len(used)))


@dataclass(frozen=True, slots=True)
class EpistemicState:
    ranks: tuple[int, ...]
    n: int

    def __post_init__(self):
        ranks = tuple(self.ranks)
        object.__setattr__(self, "ranks", ranks)
        if not 1 <= self.n <= MAX_ATOMS:
            raise ValueError(f"n must be in 1..{MAX_ATOMS}, got {self.n}")
        if len(ranks) != 1 << self.n:
            raise ValueError(f"expected {1 << self.n} ranks for n={self.n}, got {len(ranks)}")
        if any(not isinstance(r, int) or r < 0 for r in ranks):
            raise ValueError(f"ranks must be natural numbers: {ranks}")
        if not _is_normalized(ranks):
            raise ValueError(f"ranks {ranks} are not normalized; use canonicalize()")

    @classmethod
    def _trusted(cls, ranks: tuple[int, ...], n: int) -> "EpistemicState":
        # skips validation; callers guarantee a normalized tuple of length 2**n
        s = object.__new__(cls)
        object.__setattr__(s, "ranks", ranks)
        object.__setattr__(s, "n", n)
        return s

    @classmethod
    def parse(cls, text: str) -> "EpistemicState":
        """Read a comma-separated rank list in world-index order, e.g. ``"0,1,1,2"``.

        The list must already be normalized.
        """
        try:
            ranks = tuple(int(tok) for tok in text.split(","))
        except ValueError:
            raise ValueError(f"bad rank list {text!r}") from None
        return cls(ranks, _log2(len(ranks)))

    @property
    def num_levels(self) -> int:
        return max(self.ranks) + 1

    def __str__(self) -> str:
        return ",".join(map(str, self.ranks))


def _log2(length: int) -> int:
    n = length.bit_length() - 1
    if length < 2 or 1 << n != length or n > MAX_ATOMS:
        raise ValueError(f"rank list length must be 2**n with 1 <= n <= {MAX_ATOMS}, got {length}")
    return n


def canonicalize(raw: Sequence[int]) -> EpistemicState:
    """Relabel ``raw`` order-preservingly onto ``0..max`` without gaps."""
    raw = tuple(raw)
    n = _log2(len(raw))
    if any(r < 0 for r in raw):
        raise ValueError(f"ranks must be natural numbers: {raw}")
    relabel = {r: i for i, r in enumerate(sorted(set(raw)))}
    return EpistemicState._trusted(tuple(relabel[r] for r in raw), n)


def belief_set(s: EpistemicState) -> WorldSet:
    """Worlds of rank 0.  Never empty."""
    return WorldSet(belief_mask(s), s.n)


def belief_mask(s: EpistemicState) -> int:
    m = 0
    for w, r in enumerate(s.ranks):
        if r == 0:
            m |= 1 << w
    return m


def min_mask(s: EpistemicState, sel: int) -> int:
    """Integer core of :func:`min_worlds`."""
    best = None
    out = 0
    for w, r in enumerate(s.ranks):
        if sel >> w & 1:
            if best is None or r < best:
                best, out = r, 1 << w
            elif r == best:
                out |= 1 << w
    return out


def min_worlds(s: EpistemicState, sel: WorldSet) -> WorldSet:
    """The most plausible worlds of ``sel``; empty iff ``sel`` is."""
    if sel.n != s.n:
        raise VocabularyMismatch(f"state over {s.n} atoms, selection over {sel.n}")
    return WorldSet(min_mask(s, sel.mask), s.n)


def _weak_orders(m: int) -> list[tuple[int, ...]]:
    # Build weak orders on m items by inserting item k into every weak order on
    # items 0..k-1: either into one of the existing levels, or as a new
    # singleton level in one of the gaps (shifting the levels above it).
    orders: list[tuple[int, ...]] = [()]
    for _ in range(m):
        nxt = []
        for prev in orders:
            k = max(prev) + 1 if prev else 0
            for level in range(k):
                nxt.append(prev + (level,))
            for gap in range(k + 1):
                shift = tuple(r + (r >= gap) for r in range(k))
                nxt.append(tuple(map(shift.__getitem__, prev)) + (gap,))
        orders = nxt
    return orders


def enumerate_states(n: int) -> Iterator[EpistemicState]:
    """Every normalized ranking over ``2**n`` worlds, once each, in a fixed order."""
    if not 1 <= n <= MAX_EXHAUSTIVE_ATOMS:
        raise EnumerationTooLarge(
            f"exhaustive enumeration supports 1 <= n <= {MAX_EXHAUSTIVE_ATOMS}, got {n}"
        )
    trusted = EpistemicState._trusted
    return (trusted(r, n) for r in _weak_orders(1 << n))


def random_state(n: int, rng: int | random.Random | None = None) -> EpistemicState:
    """Draw a state by ranking each world uniformly in ``0..2**n-1`` and normalizing.

    ``rng`` is a seed or a ``random.Random``; a seed gives the same state every
    time.  Every normalized state has positive probability.
    """
    if not 1 <= n <= MAX_ATOMS:
        raise ValueError(f"n must be in 1..{MAX_ATOMS}, got {n}")
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    size = 1 << n
    return canonicalize([rng.randrange(size) for _ in range(size)])
