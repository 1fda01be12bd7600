"""Command-line front end.

Exit status: 0 when every requested property holds, 1 when at least one
violation was found (reports are still written), 2 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence, TextIO

from .epistemic import MAX_EXHAUSTIVE_ATOMS, EpistemicState, enumerate_states
from .logic import FormulaSyntaxError, UnknownAtom, Vocabulary, formula_mask
from .operators import OPERATORS
from .postulates import (
    POSTULATE_IDS,
    CheckReport,
    TraceReport,
    check_postulate,
    lemma1_trace,
    mine_counterexamples,
    proof_trace,
)

WORLD_HELP = (
    "Worlds are numbered by the --vocab order: atom j is true in world i iff "
    "bit j of i is 1.  States are comma-separated ranks in world order, e.g. "
    "0,1,1,2.  Formulas use ~ & | -> <-> (also ! ¬ ∧ ∨ → ↔) and the constants "
    "T/F; -> and <-> group to the right."
)
UNSAT_NOTE = (
    "note: revising by an unsatisfiable input keeps the state and yields the "
    "empty belief; instances with empty inputs rely on this convention"
)


class UsageError(Exception):
    pass


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--vocab", required=True, help="comma-separated atoms, e.g. p,q (at most 6)")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--out", help="also write the JSON report to this path")

    ops = argparse.ArgumentParser(add_help=False)
    ops.add_argument("--operator", default="natural", help=f"one of {', '.join(OPERATORS)}")
    ops.add_argument("--workers", type=int, default=os.cpu_count() or 1,
                     help="worker processes for checking (default: all CPUs)")

    parser = argparse.ArgumentParser(
        prog="iterrev",
        description="Check iterated belief revision postulates on ranked epistemic states.",
        epilog=WORLD_HELP,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", parents=[common, ops], help="check postulates", epilog=WORLD_HELP)
    check.add_argument("--postulates", default="all", help=f"comma list from {','.join(POSTULATE_IDS)} or 'all'")
    check.add_argument("--exhaustive", action="store_true", help=f"all states and inputs (at most {MAX_EXHAUSTIVE_ATOMS} atoms)")
    check.add_argument("--samples", type=int, help="number of seeded random instances")
    check.add_argument("--seed", type=int, help="seed for --samples")

    mine = sub.add_parser("mine", parents=[common, ops], help="find minimal counterexamples", epilog=WORLD_HELP)
    mine.add_argument("--postulates", default="all")
    mine.add_argument("--budget", type=int, default=100_000, help="random instances per property above 2 atoms")
    mine.add_argument("--seed", type=int, default=0)

    trace = sub.add_parser("trace", parents=[common, ops], help="replay a derivation on one instance", epilog=WORLD_HELP)
    trace.add_argument("--state", required=True, help="rank list, e.g. 0,1,1,2")
    trace.add_argument("--mu", required=True, help="formula")
    group = trace.add_mutually_exclusive_group(required=True)
    group.add_argument("--alpha", help="formula; replays the STARSTAR derivation")
    group.add_argument("--phi", help="formula; replays the LEMMA1 derivation")

    enum = sub.add_parser("enumerate", parents=[common], help="list every epistemic state", epilog=WORLD_HELP)
    enum.add_argument("--count", action="store_true", help="print only the number of states")
    return parser


def _postulate_list(text: str) -> list[str]:
    if text.strip().lower() == "all":
        return list(POSTULATE_IDS)
    ids = [t.strip().upper() for t in text.split(",") if t.strip()]
    for pid in ids:
        if pid not in POSTULATE_IDS:
            raise UsageError(f"unknown postulate {pid!r}; choose from {', '.join(POSTULATE_IDS)} or 'all'")
    if not ids:
        raise UsageError("empty --postulates list")
    return ids


def _bits(mask: int, n: int) -> str:
    return format(mask, f"#0{(1 << n) + 2}b")


def _render_witness(rep: CheckReport) -> str:
    w = rep.witness
    n = rep.n
    parts = [f"state={','.join(map(str, w.state))}", f"mu={_bits(w.mu, n)}"]
    if w.alpha is not None:
        parts.append(f"alpha={_bits(w.alpha, n)}")
    if w.phi is not None:
        parts.append(f"phi={_bits(w.phi, n)}")
    parts += [f"lhs={_bits(w.lhs, n)}", f"rhs={_bits(w.rhs, n)}"]
    return " ".join(parts) + f" ({w.narrative})"


def _render_reports(reports: list[CheckReport], out: TextIO) -> None:
    first = reports[0]
    mode = first.mode if first.mode == "exhaustive" else f"random samples={first.samples} seed={first.seed}"
    print(f"operator={first.operator} n={first.n} mode={mode}", file=out)
    print(f"{'postulate':<10} {'instances':>10} {'violations':>10}  result", file=out)
    for rep in reports:
        line = f"{rep.postulate:<10} {rep.instances_checked:>10} {rep.violations_total:>10}  "
        line += "HOLDS" if rep.holds else "FAILS"
        print(line, file=out)
        if not rep.holds:
            print(f"  witness: {_render_witness(rep)}", file=out)
    print(UNSAT_NOTE, file=out)


def _render_trace(tr: TraceReport, n: int, out: TextIO) -> None:
    inputs = " ".join(f"{k}={_bits(v, n)}" for k, v in tr.inputs.items())
    print(f"operator={tr.operator} state={','.join(map(str, tr.state))} {inputs}", file=out)
    h = tr.hypothesis
    print(f"hypothesis  {h.claim}: {'HOLDS' if h.holds else 'FAILS'}", file=out)
    if not tr.applicable:
        print("hypothesis fails; the derivation does not apply to this instance", file=out)
    for st in tr.steps + [tr.conclusion]:
        verdict = "HOLDS" if st.holds else "FAILS"
        why = f"  [{st.justification}]" if st.justification else ""
        print(f"{st.name:<11} {st.claim}: {verdict} (lhs={_bits(st.lhs, n)} rhs={_bits(st.rhs, n)}){why}", file=out)
    first, second = tr.inputs.values()
    if not (first and second and first & second):
        print(UNSAT_NOTE, file=out)


def _emit(payload, args, out: TextIO) -> None:
    text = json.dumps(payload, indent=2, ensure_ascii=False) + "\n"
    if args.format == "json":
        out.write(text)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _mode_kwargs(args, n: int) -> dict:
    if args.samples is not None:
        if args.exhaustive:
            raise UsageError("--exhaustive and --samples are mutually exclusive")
        if args.seed is None:
            raise UsageError("--samples requires --seed")
        if args.samples < 1:
            raise UsageError(f"--samples must be positive, got {args.samples}")
        return {"samples": args.samples, "seed": args.seed}
    if args.seed is not None:
        raise UsageError("--seed only applies with --samples")
    if n > MAX_EXHAUSTIVE_ATOMS:
        raise UsageError(f"--exhaustive supports at most {MAX_EXHAUSTIVE_ATOMS} atoms; use --samples/--seed")
    return {}


def _run(args, out: TextIO) -> int:
    vocab = Vocabulary.parse(args.vocab)
    n = vocab.n
    if getattr(args, "operator", None) is not None and args.operator not in OPERATORS:
        raise UsageError(f"unknown operator {args.operator!r}; choose from {', '.join(OPERATORS)}")
    workers = max(1, getattr(args, "workers", 1))

    if args.command == "enumerate":
        if n > MAX_EXHAUSTIVE_ATOMS:
            raise UsageError(f"enumeration supports at most {MAX_EXHAUSTIVE_ATOMS} atoms")
        states = [s.ranks for s in enumerate_states(n)]
        if args.format == "text":
            if args.count:
                print(len(states), file=out)
            else:
                for r in states:
                    print(",".join(map(str, r)), file=out)
        _emit({"n": n, "count": len(states)} if args.count else [list(r) for r in states], args, out)
        return 0

    if args.command == "trace":
        state = EpistemicState.parse(args.state)
        if state.n != n:
            raise UsageError(f"--state has {len(state.ranks)} ranks but --vocab has {1 << n} worlds")
        mu = formula_mask(args.mu, vocab)
        if args.alpha is not None:
            tr = proof_trace(args.operator, state, mu, formula_mask(args.alpha, vocab))
        else:
            tr = lemma1_trace(args.operator, state, mu, formula_mask(args.phi, vocab))
        if args.format == "text":
            _render_trace(tr, n, out)
        _emit(tr.to_dict(), args, out)
        return 0 if tr.holds else 1

    ids = _postulate_list(args.postulates)
    if args.command == "check":
        kwargs = _mode_kwargs(args, n)
        reports = [check_postulate(args.operator, pid, n, workers=workers, **kwargs) for pid in ids]
    else:
        if args.budget < 1:
            raise UsageError(f"--budget must be positive, got {args.budget}")
        reports = mine_counterexamples(args.operator, ids, n, args.budget, seed=args.seed, workers=workers)
    if args.format == "text":
        _render_reports(reports, out)
    _emit([r.to_dict() for r in reports], args, out)
    return 1 if any(r.violations_total for r in reports) else 0


def run_cli(argv: Optional[Sequence[str]] = None, out: TextIO = None, err: TextIO = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        return _run(args, out)
    except FormulaSyntaxError as exc:
        print(f"iterrev: formula error {exc}", file=err)
        print(f"  {exc.text}\n  {' ' * exc.position}^", file=err)
    except UnknownAtom as exc:
        print(f"iterrev: {exc} (vocabulary: {args.vocab})", file=err)
    except (UsageError, ValueError) as exc:
        print(f"iterrev: {exc}", file=err)
    return 2


def main() -> None:
    sys.exit(run_cli())
