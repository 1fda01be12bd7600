"""Iterated belief revision over finite propositional logic."""

from .epistemic import (
    EpistemicState,
    belief_set,
    canonicalize,
    enumerate_states,
    min_worlds,
    random_state,
)
from .logic import (
    Vocabulary,
    WorldSet,
    entails,
    equivalent,
    formula_mask,
    models,
    parse_formula,
    pretty_print,
)
from .operators import (
    OPERATORS,
    RevisionOutcome,
    apply_sequence,
    register_operator,
    revise_flat,
    revise_lexicographic,
    revise_natural,
    revise_stubborn,
)
from .postulates import (
    POSTULATE_IDS,
    CheckReport,
    Counterexample,
    TraceReport,
    check_lemma1,
    check_postulate,
    check_star_star,
    mine_counterexamples,
    proof_trace,
    replay,
)

__version__ = "0.1.0"
