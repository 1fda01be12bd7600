import json

import jsonschema
import pytest

from iterrev.epistemic import belief_set, canonicalize, enumerate_states
from iterrev.logic import Vocabulary, WorldSet, formula_mask
from iterrev.operators import OPERATORS, apply_sequence
from iterrev.postulates import (
    POSTULATE_IDS, R_GROUP, REPORT_SCHEMA, SECOND_VARIABLE, Counterexample, UnknownPostulate,
    check_instance, check_lemma1, check_postulate, check_star_star, lemma1_trace,
    mine_counterexamples, proof_trace, random_table_check, replay, sample_instances,
)

PQ = Vocabulary(("p", "q"))


def naive_holds(op, pid, s, mu, x):
    """Direct reading of each property, one apply_sequence call per term."""
    n = s.n

    def B(*inputs):
        return apply_sequence(op, s, [WorldSet(m, n) for m in inputs]).belief.mask

    def sub(a, b):
        return a & ~b == 0

    bel = belief_set(s).mask
    if pid == "R1":
        return sub(B(mu), mu)
    if pid == "R2":
        return not (bel & mu) or B(mu) == bel & mu
    if pid == "R3":
        return not mu or B(mu) != 0
    if pid == "R4":
        return B(mu) == B(mu)
    if pid == "R5":
        return sub(B(mu) & x, B(mu & x))
    if pid == "R6":
        return not (B(mu) & x) or sub(B(mu & x), B(mu) & x)
    if pid == "C1":
        return not sub(x, mu) or B(mu, x) == B(x)
    if pid == "C2":
        return bool(x & mu) or B(mu, x) == B(x)
    if pid == "C3":
        return not sub(B(x), mu) or sub(B(mu, x), mu)
    if pid == "C4":
        return not (B(x) & mu) or bool(B(mu, x) & mu)
    if pid == "LEMMA1":
        return not sub(B(mu), x) or B(mu) == B(mu & x)
    if pid == "STARSTAR":
        return not sub(B(x), mu) or B(mu, x) == B(x)
    raise KeyError(pid)


def naive_count(op, pid, n):
    top = 2 ** (2 ** n)
    seconds = range(top) if SECOND_VARIABLE[pid] else [None]
    bad = 0
    for s in enumerate_states(n):
        for mu in range(top):
            for x in seconds:
                bad += not naive_holds(op, pid, s, mu, x)
    return bad


class TestDomains:
    @pytest.mark.parametrize("pid", POSTULATE_IDS)
    def test_exhaustive_counts_n2(self, pid):
        rep = check_postulate("natural", pid, 2)
        assert rep.instances_checked == (19_200 if SECOND_VARIABLE[pid] else 1_200)
        assert rep.mode == "exhaustive"

    def test_counts_n1(self):
        assert check_postulate("natural", "R1", 1).instances_checked == 3 * 4
        assert check_postulate("natural", "C1", 1).instances_checked == 3 * 16


class TestAgainstNaiveChecker:
    @pytest.mark.parametrize("op", list(OPERATORS))
    @pytest.mark.parametrize("pid", POSTULATE_IDS)
    def test_n1(self, op, pid):
        assert check_postulate(op, pid, 1).violations_total == naive_count(op, pid, 1)

    @pytest.mark.parametrize("op, pid", [
        ("flat", "C1"), ("flat", "C3"), ("flat", "STARSTAR"), ("stubborn", "R6"),
    ])
    def test_n2(self, op, pid):
        assert check_postulate(op, pid, 2).violations_total == naive_count(op, pid, 2)


class TestExamples:
    def test_natural_c1(self):
        rep = check_postulate("natural", "C1", 2)
        assert (rep.instances_checked, rep.violations_total) == (19_200, 0)

    def test_flat_c1_witness(self):
        rep = check_postulate("flat", "C1", 2)
        assert not rep.holds
        cex = check_instance("flat", "C1", canonicalize([0, 1, 2, 3]), 0b1111, 0b1010)
        assert (cex.lhs, cex.rhs) == (0b1010, 0b0010)

    def test_stubborn_r1(self):
        assert not check_postulate("stubborn", "R1", 2).holds
        cex = check_instance("stubborn", "R1", canonicalize([0, 1, 1, 2]), 0b1010)
        assert cex.lhs == 0b0001

    def test_stubborn_unsatisfiable_input_flagged(self):
        assert check_instance("stubborn", "R1", canonicalize([0, 1, 1, 2]), 0) is not None

    def test_natural_c3(self):
        assert check_postulate("natural", "C3", 2).holds

    @pytest.mark.parametrize("op", ["natural", "flat"])
    def test_lemma1(self, op):
        rep = check_lemma1(op, 2)
        assert rep.postulate == "LEMMA1" and rep.violations_total == 0

    def test_lemma1_instance(self):
        s = canonicalize([0, 1, 1, 2])
        mu, phi = formula_mask("p", PQ).mask, formula_mask("~q", PQ).mask
        assert phi == 0b0011
        assert apply_sequence("natural", s, [WorldSet(mu, 2)]).belief.mask == 0b0010
        assert apply_sequence("natural", s, [WorldSet(mu & phi, 2)]).belief.mask == 0b0010
        assert check_instance("natural", "LEMMA1", s, mu, phi) is None

    @pytest.mark.parametrize("op", ["natural", "lexicographic"])
    def test_star_star_compliant(self, op):
        rep = check_star_star(op, 2)
        assert (rep.instances_checked, rep.violations_total) == (19_200, 0)

    def test_star_star_flat(self):
        assert not check_star_star("flat", 2).holds
        cex = check_instance("flat", "STARSTAR", canonicalize([0, 1, 2, 3]), 0b1111, 0b1010)
        assert (cex.lhs, cex.rhs) == (0b1010, 0b0010)


class TestSeparation:
    def test_flat_passes_r_group_and_lemma1_but_not_c1_starstar(self):
        for pid in R_GROUP + ("LEMMA1",):
            assert check_postulate("flat", pid, 2).holds, pid
        for pid in ("C1", "STARSTAR"):
            assert not check_postulate("flat", pid, 2).holds, pid

    def test_theorem_over_registry(self):
        hypotheses = ("R1", "R2", "R3", "R5", "R6", "C1", "C3")
        for op in OPERATORS:
            if all(check_postulate(op, pid, 2).holds for pid in hypotheses):
                assert check_star_star(op, 2).holds, op

    def test_random_tables(self):
        res = random_table_check(n=2, tables=1000, seed=0)
        assert res.instances == 1000 * 256
        assert res.violations == [] and res.table_violations == 0
        # non-vacuous: the implication was exercised many times
        assert res.premise_held > 10_000
        assert res.tables_compliant > 0


class TestReports:
    @pytest.mark.parametrize("op, pid", [("flat", "C1"), ("flat", "STARSTAR"), ("flat", "C3"),
                                         ("stubborn", "R1"), ("stubborn", "R2"), ("stubborn", "R6")])
    def test_every_violation_replays(self, op, pid):
        rep = check_postulate(op, pid, 2)
        assert rep.violations
        for cex in rep.violations:
            assert replay(op, pid, cex)

    def test_replay_rejects_forged(self):
        cex = check_postulate("flat", "C1", 2).witness
        forged = Counterexample(cex.state, cex.mu, cex.rhs, cex.lhs, cex.narrative, alpha=cex.alpha)
        assert not replay("flat", "C1", forged)

    def test_truncation(self):
        rep = check_postulate("stubborn", "R6", 2)
        assert rep.violations_total > 100 and len(rep.violations) == 100
        keys = [v.sort_key() for v in rep.violations]
        assert keys == sorted(keys)

    def test_schema(self):
        for rep in (check_postulate("flat", "C1", 2),
                    check_postulate("natural", "R2", 3, samples=200, seed=3),
                    check_postulate("stubborn", "LEMMA1", 2)):
            d = rep.to_dict()
            jsonschema.validate(d, REPORT_SCHEMA)
            assert list(d)[:4] == ["operator", "postulate", "n", "mode"]
            for v in rep.violations:
                assert Counterexample.from_dict(v.to_dict()) == v

    def test_random_mode_fields(self):
        rep = check_postulate("natural", "STARSTAR", 3, samples=500, seed=11)
        d = rep.to_dict()
        assert (d["mode"], d["seed"], d["samples"], d["instances_checked"]) == ("random", 11, 500, 500)
        assert len(sample_instances("STARSTAR", 3, 500, 11)) == 500

    def test_deterministic_across_workers(self):
        one = json.dumps(check_postulate("flat", "STARSTAR", 2, workers=1).to_dict())
        two = json.dumps(check_postulate("flat", "STARSTAR", 2, workers=2).to_dict())
        assert one == two
        one = json.dumps(check_postulate("flat", "C1", 3, samples=3000, seed=5, workers=1).to_dict())
        two = json.dumps(check_postulate("flat", "C1", 3, samples=3000, seed=5, workers=3).to_dict())
        assert one == two

    @pytest.mark.parametrize("kwargs, exc", [
        ({"postulate": "R7", "n": 2}, UnknownPostulate),
        ({"postulate": "R1", "n": 4}, ValueError),
        ({"postulate": "R1", "n": 2, "seed": 1}, ValueError),
        ({"postulate": "R1", "n": 2, "samples": 10}, ValueError),
    ])
    def test_errors(self, kwargs, exc):
        with pytest.raises(exc):
            check_postulate("natural", **kwargs)

    def test_unknown_operator(self):
        with pytest.raises(KeyError):
            check_postulate("restrained", "R1", 2)


class TestMining:
    def test_flat(self):
        reps = mine_counterexamples("flat", ["C1", "STARSTAR"], 2)
        assert [r.postulate for r in reps] == ["C1", "STARSTAR"]
        for rep in reps:
            assert len(rep.violations) == 1
            assert replay("flat", rep.postulate, rep.witness)

    def test_witness_is_minimal(self):
        rep = mine_counterexamples("flat", ["C1"], 2)[0]
        everything = []
        for s in enumerate_states(2):
            for mu in range(16):
                for a in range(16):
                    cex = check_instance("flat", "C1", s, mu, a)
                    if cex is not None:
                        everything.append(cex)
        assert len(everything) == rep.violations_total
        assert rep.witness == min(everything, key=Counterexample.sort_key)
        assert len(set(rep.witness.state)) == 3

    def test_natural_clean(self):
        assert all(r.holds for r in mine_counterexamples("natural", POSTULATE_IDS, 2))

    def test_stubborn_n1(self):
        rep, = mine_counterexamples("stubborn", ["R1"], 1)
        assert len(rep.witness.state) == 2
        assert replay("stubborn", "R1", rep.witness)

    def test_random_above_two_atoms(self):
        rep, = mine_counterexamples("flat", ["STARSTAR"], 3, budget=2000, seed=1)
        assert rep.mode == "random" and rep.samples == 2000
        assert replay("flat", "STARSTAR", rep.witness)

    def test_budget(self):
        with pytest.raises(ValueError):
            mine_counterexamples("flat", ["C1"], 2, budget=0)


class TestProofTrace:
    def test_top_instance(self):
        tr = proof_trace("natural", canonicalize([0, 1, 1, 2]), 0b1111, 0b1010)
        assert tr.applicable and len(tr.steps) == 4
        assert all(st.holds for st in tr.steps) and tr.conclusion.holds

    def test_hand_instance(self):
        tr = proof_trace("natural", canonicalize([0, 1, 1, 2]), WorldSet(0b0011, 2), WorldSet(0b1011, 2))
        assert tr.hypothesis.lhs == 0b0001 and tr.applicable
        assert not tr.failures

    def test_flat_localizes_c1(self):
        tr = proof_trace("flat", canonicalize([0, 1, 2, 3]), 0b1111, 0b1010)
        assert [st.name for st in tr.failures] == ["step2", "conclusion"]
        assert "C1" in tr.steps[1].justification

    def test_inapplicable(self):
        # B(S*alpha) = world 0, not inside mu = p
        tr = proof_trace("natural", canonicalize([0, 1, 1, 2]), 0b1010, 0b1111)
        assert not tr.applicable and tr.holds

    def test_exhaustive_natural(self):
        for s in enumerate_states(2):
            for mu in range(16):
                for a in range(16):
                    tr = proof_trace("natural", s, mu, a)
                    if tr.applicable:
                        assert not tr.failures

    def test_mismatched_n(self):
        with pytest.raises(ValueError):
            proof_trace("natural", canonicalize([0, 1, 1, 2]), WorldSet(1, 3), WorldSet(1, 2))


class TestLemma1Trace:
    @pytest.mark.parametrize("op", ["natural", "lexicographic", "flat"])
    def test_all_steps_hold_when_applicable(self, op):
        for s in enumerate_states(2):
            for mu in range(16):
                for phi in range(16):
                    tr = lemma1_trace(op, s, mu, phi)
                    if tr.applicable:
                        assert not tr.failures, (s, mu, phi)

    def test_unsatisfiable_branch(self):
        tr = lemma1_trace("natural", canonicalize([0, 1, 1, 2]), 0, 0b0011)
        assert [st.name for st in tr.steps] == ["expand", "r5", "forward", "r3", "r1", "backward"]
        assert not tr.failures

    def test_localizes_r6(self):
        def small_inputs_believed_whole(s, mu):
            out = OPERATORS["natural"](s, mu)
            if len(mu) <= 2:
                return type(out)(out.state, mu)
            return out

        s = canonicalize([0, 1, 1, 2])
        tr = lemma1_trace(small_inputs_believed_whole, s, 0b1111, 0b0011)
        assert tr.applicable
        assert [st.name for st in tr.failures] == ["r6", "backward", "conclusion"]
        assert check_instance(small_inputs_believed_whole, "R6", s, 0b1111, 0b0011) is not None
