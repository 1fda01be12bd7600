"""Instance-level encodings of the single-step and iterated revision postulates.

Every property is a predicate over a state ``S`` and one or two input masks
(``mu``, plus ``phi`` or ``alpha``).  ``B(X)`` denotes the belief mask of an
outcome, and ``S*mu*alpha`` revision by ``mu`` followed by ``alpha``.

=========  ==========================================================
R1         ``B(S*mu) <= mu``
R2         if ``B(S) & mu`` nonempty then ``B(S*mu) == B(S) & mu``
R3         if ``mu`` nonempty then ``B(S*mu)`` nonempty
R4         equal inputs give equal beliefs (syntax irrelevance)
R5         ``B(S*mu) & phi <= B(S*(mu & phi))``
R6         if ``B(S*mu) & phi`` nonempty then ``B(S*(mu & phi)) <= B(S*mu) & phi``
C1         if ``alpha <= mu`` then ``B(S*mu*alpha) == B(S*alpha)``
C2         if ``alpha & mu`` empty then ``B(S*mu*alpha) == B(S*alpha)``
C3         if ``B(S*alpha) <= mu`` then ``B(S*mu*alpha) <= mu``
C4         if ``B(S*alpha) & mu`` nonempty then ``B(S*mu*alpha) & mu`` nonempty
LEMMA1     if ``B(S*mu) <= phi`` then ``B(S*mu) == B(S*(mu & phi))``
STARSTAR   if ``B(S*alpha) <= mu`` then ``B(S*mu*alpha) == B(S*alpha)``
=========  ==========================================================

Formulas are identified with their model sets, so quantifying over formulas
means quantifying over all ``2**(2**n)`` masks.  R4 therefore cannot fail for
a pure operator; its check re-invokes the operator on freshly built equal
inputs and compares, which only catches impure operators.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence, Union

from .epistemic import (
    MAX_EXHAUSTIVE_ATOMS,
    EpistemicState,
    belief_mask,
    enumerate_states,
    min_mask,
    random_state,
)
from .logic import VocabularyMismatch, WorldSet, full_mask
from .operators import (
    OPERATORS,
    Operator,
    apply_sequence,
    get_operator,
    revise_lexicographic,
    revise_natural,
)

VIOLATION_LIMIT = 100

POSTULATE_IDS = (
    "R1", "R2", "R3", "R4", "R5", "R6",
    "C1", "C2", "C3", "C4",
    "LEMMA1", "STARSTAR",
)
R_GROUP = ("R1", "R2", "R3", "R4", "R5", "R6")

# name of the second formula variable, or None for single-formula properties
SECOND_VARIABLE = {
    "R1": None, "R2": None, "R3": None, "R4": None,
    "R5": "phi", "R6": "phi", "LEMMA1": "phi",
    "C1": "alpha", "C2": "alpha", "C3": "alpha", "C4": "alpha", "STARSTAR": "alpha",
}


class UnknownPostulate(KeyError):
    pass


# -- evaluation contexts -----------------------------------------------------


class _Cached:
    """Memoized single-step revision over integer masks."""

    def __init__(self, op: Operator, n: int):
        self.op = op
        self.n = n
        self.steps: dict[tuple[tuple[int, ...], int], tuple[EpistemicState, int]] = {}

    def step(self, s: EpistemicState, mu: int) -> tuple[EpistemicState, int]:
        key = (s.ranks, mu)
        hit = self.steps.get(key)
        if hit is None:
            out = self.op(s, WorldSet(mu, self.n))
            hit = self.steps[key] = (out.state, out.belief.mask)
        return hit

    def seq(self, s: EpistemicState, *inputs: int) -> int:
        belief = 0
        for mu in inputs:
            s, belief = self.step(s, mu)
        return belief

    def fresh(self, s: EpistemicState, mu: int) -> int:
        copy = EpistemicState(tuple(s.ranks), s.n)
        return self.op(copy, WorldSet(int(mu), self.n)).belief.mask


class _Public:
    """Uncached evaluation through :func:`apply_sequence`; used for replay and traces."""

    def __init__(self, op: Union[str, Operator], n: int):
        self.op = op
        self.n = n

    def seq(self, s: EpistemicState, *inputs: int) -> int:
        return apply_sequence(self.op, s, [WorldSet(m, self.n) for m in inputs]).belief.mask

    def fresh(self, s: EpistemicState, mu: int) -> int:
        copy = EpistemicState(tuple(s.ranks), s.n)
        return apply_sequence(self.op, copy, [WorldSet(int(mu), self.n)]).belief.mask


# -- instance predicates -----------------------------------------------------
# Each returns None when the instance holds, else (lhs, rhs, narrative).

Violation = Optional[tuple[int, int, str]]


def _r1(ctx, s, mu, _x) -> Violation:
    b = ctx.seq(s, mu)
    if b & ~mu:
        return b, mu, "B(S*mu) is not contained in mu"
    return None


def _r2(ctx, s, mu, _x) -> Violation:
    both = belief_mask(s) & mu
    if both:
        b = ctx.seq(s, mu)
        if b != both:
            return b, both, "B(S) & mu is consistent but B(S*mu) differs from it"
    return None


def _r3(ctx, s, mu, _x) -> Violation:
    if mu:
        b = ctx.seq(s, mu)
        if not b:
            return b, mu, "mu is satisfiable but B(S*mu) is empty"
    return None


def _r4(ctx, s, mu, _x) -> Violation:
    b = ctx.seq(s, mu)
    again = ctx.fresh(s, mu)
    if b != again:
        return b, again, "revising equal state by equal input gave different beliefs"
    return None


def _r5(ctx, s, mu, phi) -> Violation:
    lhs = ctx.seq(s, mu) & phi
    rhs = ctx.seq(s, mu & phi)
    if lhs & ~rhs:
        return lhs, rhs, "B(S*mu) & phi is not contained in B(S*(mu & phi))"
    return None


def _r6(ctx, s, mu, phi) -> Violation:
    both = ctx.seq(s, mu) & phi
    if both:
        lhs = ctx.seq(s, mu & phi)
        if lhs & ~both:
            return lhs, both, "B(S*mu) & phi is consistent but B(S*(mu & phi)) is not contained in it"
    return None


def _c1(ctx, s, mu, alpha) -> Violation:
    if not alpha & ~mu:
        lhs, rhs = ctx.seq(s, mu, alpha), ctx.seq(s, alpha)
        if lhs != rhs:
            return lhs, rhs, "alpha entails mu but B(S*mu*alpha) differs from B(S*alpha)"
    return None


def _c2(ctx, s, mu, alpha) -> Violation:
    if not alpha & mu:
        lhs, rhs = ctx.seq(s, mu, alpha), ctx.seq(s, alpha)
        if lhs != rhs:
            return lhs, rhs, "alpha contradicts mu but B(S*mu*alpha) differs from B(S*alpha)"
    return None


def _c3(ctx, s, mu, alpha) -> Violation:
    if not ctx.seq(s, alpha) & ~mu:
        lhs = ctx.seq(s, mu, alpha)
        if lhs & ~mu:
            return lhs, mu, "B(S*alpha) entails mu but B(S*mu*alpha) does not"
    return None


def _c4(ctx, s, mu, alpha) -> Violation:
    if ctx.seq(s, alpha) & mu:
        lhs = ctx.seq(s, mu, alpha)
        if not lhs & mu:
            return lhs, mu, "B(S*alpha) is consistent with mu but B(S*mu*alpha) is not"
    return None


def _lemma1(ctx, s, mu, phi) -> Violation:
    b = ctx.seq(s, mu)
    if not b & ~phi:
        rhs = ctx.seq(s, mu & phi)
        if rhs != b:
            return b, rhs, "B(S*mu) entails phi but B(S*(mu & phi)) differs from B(S*mu)"
    return None


def _starstar(ctx, s, mu, alpha) -> Violation:
    rhs = ctx.seq(s, alpha)
    if not rhs & ~mu:
        lhs = ctx.seq(s, mu, alpha)
        if lhs != rhs:
            return lhs, rhs, "B(S*alpha) entails mu but B(S*mu*alpha) differs from B(S*alpha)"
    return None


PREDICATES: dict[str, Callable] = {
    "R1": _r1, "R2": _r2, "R3": _r3, "R4": _r4, "R5": _r5, "R6": _r6,
    "C1": _c1, "C2": _c2, "C3": _c3, "C4": _c4,
    "LEMMA1": _lemma1, "STARSTAR": _starstar,
}


def _postulate(pid: str) -> str:
    pid = pid.upper()
    if pid not in PREDICATES:
        raise UnknownPostulate(f"unknown postulate {pid!r}; known: {', '.join(POSTULATE_IDS)}")
    return pid


# -- reports -------------------------------------------------------------------


@dataclass(frozen=True)
class Counterexample:
    state: tuple[int, ...]
    mu: int
    lhs: int
    rhs: int
    narrative: str
    alpha: Optional[int] = None
    phi: Optional[int] = None

    @property
    def second(self) -> Optional[int]:
        return self.alpha if self.alpha is not None else self.phi

    def sort_key(self) -> tuple:
        """Smaller witnesses first: fewer rank levels, then smaller inputs."""
        x = self.second or 0
        return (
            len(set(self.state)),
            bin(self.mu).count("1"),
            bin(x).count("1"),
            self.state,
            self.mu,
            x,
        )

    def to_dict(self) -> dict:
        d: dict = {"state": list(self.state), "mu": self.mu}
        if self.alpha is not None:
            d["alpha"] = self.alpha
        if self.phi is not None:
            d["phi"] = self.phi
        d.update(lhs=self.lhs, rhs=self.rhs, narrative=self.narrative)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Counterexample":
        return cls(
            state=tuple(d["state"]), mu=d["mu"], lhs=d["lhs"], rhs=d["rhs"],
            narrative=d["narrative"], alpha=d.get("alpha"), phi=d.get("phi"),
        )


@dataclass
class CheckReport:
    operator: str
    postulate: str
    n: int
    mode: str
    instances_checked: int
    violations: list[Counterexample]
    violations_total: int
    seed: Optional[int] = None
    samples: Optional[int] = None

    @property
    def holds(self) -> bool:
        return self.violations_total == 0

    @property
    def witness(self) -> Optional[Counterexample]:
        return self.violations[0] if self.violations else None

    def to_dict(self) -> dict:
        d: dict = {
            "operator": self.operator,
            "postulate": self.postulate,
            "n": self.n,
            "mode": self.mode,
        }
        if self.seed is not None:
            d["seed"] = self.seed
        if self.samples is not None:
            d["samples"] = self.samples
        d["instances_checked"] = self.instances_checked
        d["violations"] = [v.to_dict() for v in self.violations]
        d["violations_total"] = self.violations_total
        return d


# JSON Schema for one report, as emitted by CheckReport.to_dict
REPORT_SCHEMA = {
    "type": "object",
    "required": ["operator", "postulate", "n", "mode", "instances_checked", "violations", "violations_total"],
    "additionalProperties": False,
    "properties": {
        "operator": {"type": "string"},
        "postulate": {"enum": list(POSTULATE_IDS)},
        "n": {"type": "integer", "minimum": 1, "maximum": 6},
        "mode": {"enum": ["exhaustive", "random"]},
        "seed": {"type": "integer"},
        "samples": {"type": "integer", "minimum": 1},
        "instances_checked": {"type": "integer", "minimum": 0},
        "violations_total": {"type": "integer", "minimum": 0},
        "violations": {
            "type": "array",
            "maxItems": VIOLATION_LIMIT,
            "items": {
                "type": "object",
                "required": ["state", "mu", "lhs", "rhs", "narrative"],
                "additionalProperties": False,
                "properties": {
                    "state": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                    "mu": {"type": "integer", "minimum": 0},
                    "alpha": {"type": "integer", "minimum": 0},
                    "phi": {"type": "integer", "minimum": 0},
                    "lhs": {"type": "integer", "minimum": 0},
                    "rhs": {"type": "integer", "minimum": 0},
                    "narrative": {"type": "string"},
                },
            },
        },
    },
}


def operator_name(op: Union[str, Operator]) -> str:
    if isinstance(op, str):
        get_operator(op)
        return op
    for name, fn in OPERATORS.items():
        if fn is op:
            return name
    return getattr(op, "__name__", repr(op))


class _Collector:
    """Keeps the smallest violations under ``sort_key`` plus a running total."""

    def __init__(self, limit: int = VIOLATION_LIMIT):
        self.limit = limit
        self.items: list[Counterexample] = []
        self.total = 0

    def add(self, cex: Counterexample) -> None:
        self.total += 1
        self.items.append(cex)
        if len(self.items) > 4 * self.limit:
            self._trim()

    def _trim(self) -> None:
        self.items.sort(key=Counterexample.sort_key)
        del self.items[self.limit:]

    def merge(self, items: Iterable[Counterexample], total: int) -> None:
        self.items.extend(items)
        self.total += total
        self._trim()

    def result(self) -> list[Counterexample]:
        self._trim()
        return self.items


def _make_cex(pid, ranks, mu, x, found) -> Counterexample:
    lhs, rhs, narrative = found
    second = SECOND_VARIABLE[pid]
    return Counterexample(
        state=ranks, mu=mu, lhs=lhs, rhs=rhs, narrative=narrative,
        alpha=x if second == "alpha" else None,
        phi=x if second == "phi" else None,
    )


def _check_states(op, pid: str, n: int, state_ranks: Sequence[tuple[int, ...]]):
    """Exhaustive scan of every input mask for the given states."""
    ctx = _Cached(get_operator(op), n)
    pred = PREDICATES[pid]
    masks = range(full_mask(n) + 1)
    two = SECOND_VARIABLE[pid] is not None
    out = _Collector()
    count = 0
    for ranks in state_ranks:
        s = EpistemicState._trusted(ranks, n)
        for mu in masks:
            if two:
                for x in masks:
                    found = pred(ctx, s, mu, x)
                    if found is not None:
                        out.add(_make_cex(pid, ranks, mu, x, found))
                count += len(masks)
            else:
                found = pred(ctx, s, mu, None)
                if found is not None:
                    out.add(_make_cex(pid, ranks, mu, None, found))
                count += 1
    return count, out.result(), out.total


def _check_instances(op, pid: str, n: int, instances: Sequence[tuple[tuple[int, ...], int, Optional[int]]]):
    ctx = _Cached(get_operator(op), n)
    pred = PREDICATES[pid]
    out = _Collector()
    for ranks, mu, x in instances:
        found = pred(ctx, EpistemicState._trusted(ranks, n), mu, x)
        if found is not None:
            out.add(_make_cex(pid, ranks, mu, x, found))
    return len(instances), out.result(), out.total


def _chunks(items: list, parts: int) -> list[list]:
    size = max(1, -(-len(items) // parts))
    return [items[i:i + size] for i in range(0, len(items), size)]


def _run(fn, op, pid, n, items, workers):
    if workers <= 1 or len(items) < 2:
        return [fn(op, pid, n, items)]
    chunks = _chunks(items, workers * 4)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, [op] * len(chunks), [pid] * len(chunks), [n] * len(chunks), chunks))


def sample_instances(pid: str, n: int, samples: int, seed: int):
    """The seeded random instances a random-mode check of ``pid`` runs over."""
    rng = random.Random(seed)
    top = full_mask(n) + 1
    two = SECOND_VARIABLE[_postulate(pid)] is not None
    out = []
    for _ in range(samples):
        s = random_state(n, rng)
        mu = rng.randrange(top)
        x = rng.randrange(top) if two else None
        out.append((s.ranks, mu, x))
    return out


def check_postulate(
    op: Union[str, Operator],
    postulate: str,
    n: int,
    *,
    samples: Optional[int] = None,
    seed: Optional[int] = None,
    workers: int = 1,
) -> CheckReport:
    """Check one property for an operator over ``n`` atoms.

    Without ``samples`` every state and every input mask is checked, which is
    only allowed for ``n <= 3``.  With ``samples`` that many seeded random
    instances are drawn; ``seed`` is then required.  The report does not
    depend on ``workers``.
    """
    pid = _postulate(postulate)
    name = operator_name(op)
    if samples is None:
        if seed is not None:
            raise ValueError("seed given without samples")
        if not 1 <= n <= MAX_EXHAUSTIVE_ATOMS:
            raise ValueError(f"exhaustive checking supports 1 <= n <= {MAX_EXHAUSTIVE_ATOMS}, got {n}")
        items = [s.ranks for s in enumerate_states(n)]
        parts = _run(_check_states, op, pid, n, items, workers)
        mode = "exhaustive"
    else:
        if seed is None:
            raise ValueError("random mode needs a seed")
        if samples < 1:
            raise ValueError("samples must be positive")
        items = sample_instances(pid, n, samples, seed)
        parts = _run(_check_instances, op, pid, n, items, workers)
        mode = "random"
    merged = _Collector()
    count = 0
    for c, vs, total in parts:
        count += c
        merged.merge(vs, total)
    return CheckReport(
        operator=name, postulate=pid, n=n, mode=mode, instances_checked=count,
        violations=merged.result(), violations_total=merged.total,
        seed=seed, samples=samples,
    )


def check_lemma1(op, n: int, **mode) -> CheckReport:
    return check_postulate(op, "LEMMA1", n, **mode)


def check_star_star(op, n: int, **mode) -> CheckReport:
    return check_postulate(op, "STARSTAR", n, **mode)


def check_instance(op, postulate: str, state: EpistemicState, mu: int, x: Optional[int] = None) -> Optional[Counterexample]:
    """Evaluate one instance through the public operator interface."""
    pid = _postulate(postulate)
    found = PREDICATES[pid](_Public(op, state.n), state, mu, x)
    if found is None:
        return None
    return _make_cex(pid, state.ranks, mu, x, found)


def replay(op, postulate: str, cex: Counterexample) -> bool:
    """True iff ``cex`` is still a violation with exactly the recorded sides."""
    state = EpistemicState(cex.state, (len(cex.state)).bit_length() - 1)
    again = check_instance(op, postulate, state, cex.mu, cex.second)
    return again is not None and (again.lhs, again.rhs) == (cex.lhs, cex.rhs)


def mine_counterexamples(
    op: Union[str, Operator],
    postulates: Iterable[str],
    n: int,
    budget: int = 100_000,
    *,
    seed: int = 0,
    workers: int = 1,
) -> list[CheckReport]:
    """Search for a smallest violation of each property.

    Up to two atoms the whole domain is scanned; beyond that ``budget``
    seeded random instances are tried.  Each returned report lists at most
    one violation, the minimal one found, while ``violations_total`` keeps
    the full count.
    """
    if budget <= 0:
        raise ValueError("budget must be positive")
    reports = []
    for pid in postulates:
        if n <= 2:
            rep = check_postulate(op, pid, n, workers=workers)
        else:
            rep = check_postulate(op, pid, n, samples=budget, seed=seed, workers=workers)
        rep.violations = rep.violations[:1]
        reports.append(rep)
    return reports


# -- proof replay ------------------------------------------------------------


@dataclass(frozen=True)
class TraceStep:
    name: str
    claim: str
    relation: str  # "entails" or "equivalent"
    lhs: int
    rhs: int
    justification: str = ""

    @property
    def holds(self) -> bool:
        if self.relation == "entails":
            return self.lhs & ~self.rhs == 0
        return self.lhs == self.rhs

    def to_dict(self) -> dict:
        return {
            "step": self.name, "claim": self.claim, "relation": self.relation,
            "lhs": self.lhs, "rhs": self.rhs, "justification": self.justification,
            "holds": self.holds,
        }


@dataclass
class TraceReport:
    operator: str
    state: tuple[int, ...]
    inputs: dict[str, int]
    hypothesis: TraceStep
    steps: list[TraceStep] = field(default_factory=list)
    conclusion: Optional[TraceStep] = None

    @property
    def applicable(self) -> bool:
        return self.hypothesis.holds

    @property
    def failures(self) -> list[TraceStep]:
        return [st for st in self.steps + [self.conclusion] if not st.holds]

    @property
    def holds(self) -> bool:
        return not self.applicable or not self.failures

    def to_dict(self) -> dict:
        return {
            "operator": self.operator,
            "state": list(self.state),
            **self.inputs,
            "applicable": self.applicable,
            "hypothesis": self.hypothesis.to_dict(),
            "steps": [st.to_dict() for st in self.steps],
            "conclusion": self.conclusion.to_dict(),
        }


def _masks(s: EpistemicState, *sets: Union[WorldSet, int]) -> list[int]:
    out = []
    for w in sets:
        if isinstance(w, WorldSet):
            if w.n != s.n:
                raise VocabularyMismatch(f"state over {s.n} atoms, input over {w.n}")
            out.append(w.mask)
        else:
            out.append(WorldSet(w, s.n).mask)
    return out


def proof_trace(op, s: EpistemicState, mu: Union[WorldSet, int], alpha: Union[WorldSet, int]) -> TraceReport:
    """Evaluate each link of the derivation of STARSTAR from LEMMA1, C1 and C3.

    Under the hypothesis ``B(S*alpha) <= mu`` the chain is

    1. ``B(S*alpha) == B(S*(alpha & mu))``          by LEMMA1 at S
    2. ``B(S*(alpha & mu)) == B(S*mu*(alpha & mu))`` by C1
    3. ``B(S*mu*alpha) <= mu``                      by C3
    4. ``B(S*mu*alpha) == B(S*mu*(alpha & mu))``     by LEMMA1 at S*mu

    and the conclusion ``B(S*alpha) == B(S*mu*alpha)`` follows from 1, 2, 4.
    """
    mu, alpha = _masks(s, mu, alpha)
    ctx = _Public(op, s.n)
    both = alpha & mu
    b_alpha = ctx.seq(s, alpha)
    b_both = ctx.seq(s, both)
    b_mu_both = ctx.seq(s, mu, both)
    b_mu_alpha = ctx.seq(s, mu, alpha)
    return TraceReport(
        operator=operator_name(op),
        state=s.ranks,
        inputs={"mu": mu, "alpha": alpha},
        hypothesis=TraceStep("hypothesis", "B(S*alpha) |= mu", "entails", b_alpha, mu),
        steps=[
            TraceStep("step1", "B(S*alpha) == B(S*(alpha & mu))", "equivalent",
                      b_alpha, b_both, "LEMMA1 at S with phi = mu"),
            TraceStep("step2", "B(S*(alpha & mu)) == B(S*mu*(alpha & mu))", "equivalent",
                      b_both, b_mu_both, "C1, since alpha & mu |= mu"),
            TraceStep("step3", "B(S*mu*alpha) |= mu", "entails",
                      b_mu_alpha, mu, "C3 from the hypothesis"),
            TraceStep("step4", "B(S*mu*alpha) == B(S*mu*(alpha & mu))", "equivalent",
                      b_mu_alpha, b_mu_both, "LEMMA1 at S*mu with phi = mu, using step 3"),
        ],
        conclusion=TraceStep("conclusion", "B(S*alpha) == B(S*mu*alpha)", "equivalent",
                             b_alpha, b_mu_alpha, "steps 1, 2 and 4"),
    )


def lemma1_trace(op, s: EpistemicState, mu: Union[WorldSet, int], phi: Union[WorldSet, int]) -> TraceReport:
    """Evaluate the derivation of LEMMA1 from the R-group on one instance.

    Both directions of the equivalence are established separately; the second
    direction branches on whether ``B(S*mu)`` is satisfiable.
    """
    mu, phi = _masks(s, mu, phi)
    ctx = _Public(op, s.n)
    b_mu = ctx.seq(s, mu)
    b_conj = ctx.seq(s, mu & phi)
    steps = [
        TraceStep("expand", "B(S*mu) |= B(S*mu) & phi", "entails", b_mu, b_mu & phi,
                  "from the hypothesis"),
        TraceStep("r5", "B(S*mu) & phi |= B(S*(mu & phi))", "entails", b_mu & phi, b_conj, "R5"),
        TraceStep("forward", "B(S*mu) |= B(S*(mu & phi))", "entails", b_mu, b_conj,
                  "transitivity of the two previous steps"),
    ]
    if b_mu:
        steps += [
            TraceStep("r6", "B(S*(mu & phi)) |= B(S*mu) & phi", "entails", b_conj, b_mu & phi,
                      "R6, B(S*mu) & phi being satisfiable"),
            TraceStep("backward", "B(S*(mu & phi)) |= B(S*mu)", "entails", b_conj, b_mu,
                      "weakening the previous step"),
        ]
    else:
        steps += [
            TraceStep("r3", "mu |= F", "entails", mu, 0, "R3, B(S*mu) being unsatisfiable"),
            TraceStep("r1", "B(S*(mu & phi)) |= F", "entails", b_conj, 0, "R1, mu & phi being unsatisfiable"),
            TraceStep("backward", "B(S*(mu & phi)) |= B(S*mu)", "entails", b_conj, b_mu,
                      "the empty set entails everything"),
        ]
    return TraceReport(
        operator=operator_name(op),
        state=s.ranks,
        inputs={"mu": mu, "phi": phi},
        hypothesis=TraceStep("hypothesis", "B(S*mu) |= phi", "entails", b_mu, phi),
        steps=steps,
        conclusion=TraceStep("conclusion", "B(S*mu) == B(S*(mu & phi))", "equivalent", b_mu, b_conj),
    )


# -- probing the theorem beyond the shipped operators ------------------------


@dataclass
class TableCheck:
    """Outcome of :func:`random_table_check`."""

    tables: int
    instances: int
    locally_compliant: int  # instances where C1 and C3 held at every revision point used
    premise_held: int  # ... and additionally B(S*alpha) <= mu
    tables_compliant: int  # tables satisfying C1 and C3 on all input pairs
    violations: list[tuple[tuple[int, ...], int, int]]
    table_violations: int  # compliant tables that nonetheless broke STARSTAR somewhere


def random_table_check(n: int = 2, tables: int = 1000, seed: int = 0) -> TableCheck:
    """Test the C1 + C3 => STARSTAR implication on randomly built one-state operators.

    Each table fixes a state ``S`` and chooses a successor state for every
    input ``mu``: the natural or lexicographic successor, or a uniformly random
    state.  All beliefs are the minimal worlds of the input in the state being
    revised, so the R-group (and hence LEMMA1) holds at every step by
    construction.  For every pair ``(mu, alpha)`` where C1 at
    ``(S, mu, alpha & mu)`` and C3 at ``(S, mu, alpha)`` hold, STARSTAR at
    ``(S, mu, alpha)`` must hold as well.
    """
    rng = random.Random(seed)
    top = full_mask(n) + 1
    out = TableCheck(tables, 0, 0, 0, 0, [], 0)
    for _ in range(tables):
        s = random_state(n, rng)
        succ = []
        for mu in range(top):
            pick = rng.randrange(3)
            if pick == 0:
                succ.append(revise_natural(s, WorldSet(mu, n)).state)
            elif pick == 1:
                succ.append(revise_lexicographic(s, WorldSet(mu, n)).state)
            else:
                succ.append(random_state(n, rng))
        compliant = True
        broken = False
        for mu in range(top):
            after = succ[mu]
            for alpha in range(top):
                out.instances += 1
                b_alpha = min_mask(s, alpha)
                both = alpha & mu
                c1 = min_mask(after, both) == min_mask(s, both)
                premise = not b_alpha & ~mu
                b_mu_alpha = min_mask(after, alpha)
                c3 = not premise or not b_mu_alpha & ~mu
                # C1 also quantifies over alpha itself when alpha <= mu
                c1_here = bool(alpha & ~mu) or b_mu_alpha == b_alpha
                if not (c1 and c1_here and c3):
                    compliant = False
                    continue
                out.locally_compliant += 1
                if premise:
                    out.premise_held += 1
                    if b_mu_alpha != b_alpha:
                        out.violations.append((s.ranks, mu, alpha))
                        broken = True
        if compliant:
            out.tables_compliant += 1
            if broken:
                out.table_violations += 1
    return out
