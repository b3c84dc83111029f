"""Command line interface.

Exit codes: 0 expressible (or success), 1 not expressible (or a failed
self-test), 2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import sys

from .decider import DEFAULT_GAME_DEPTH, decide, decide_all, analyze
from .efgame import game_operators, strategy_trace, spoiler_wins
from .gcma import DEFAULT_MAX_SUB, build_gcma, fig1_automaton, trim
from .looplang import DEFAULT_MAX_SEMIGROUP, testability_report
from .ltl import Alphabet, LtlError, UPWord, parse, to_nnf
from .quotient import left_congruence, quotient

EXIT_YES, EXIT_NO, EXIT_ERROR = 0, 1, 2


def _positive(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _nonnegative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ltlfrag", description="Decide membership of LTL formulas "
                                "in temporal-logic fragments.")
    sub = p.add_subparsers(dest="command", required=True)

    def inputs(sp):
        sp.add_argument("--alphabet", help="comma-separated letters, e.g. a,b")
        src = sp.add_mutually_exclusive_group()
        src.add_argument("--formula", help="formula text")
        src.add_argument("--file", help="batch file: 'alphabet: a,b' header, one formula per line")
        sp.add_argument("--max-sub", type=_positive, default=DEFAULT_MAX_SUB,
                        help="largest number of subformulas to expand (default %(default)s)")

    def decider_opts(sp):
        sp.add_argument("--fragment", default="all",
                        help="operator set such as X, F, SF, XF, U, or 'all' (default)")
        sp.add_argument("--max-semigroup", type=_positive, default=DEFAULT_MAX_SEMIGROUP)
        sp.add_argument("--game-depth", type=_nonnegative, default=DEFAULT_GAME_DEPTH)
        sp.add_argument("--all-reasons", action="store_true",
                        help="report every failed condition instead of the first")

    check = sub.add_parser("check", help="decide expressibility")
    inputs(check)
    decider_opts(check)
    check.add_argument("--emit", choices=["json", "text"], default="json")

    show = sub.add_parser("show", help="export the automaton, quotient or loop-language report")
    inputs(show)
    show.add_argument("--fixture", choices=["fig1"], help="use a built-in automaton")
    show.add_argument("--object", choices=["tableau", "automaton", "quotient", "partition", "loops"],
                      default="automaton", help="what to export (default: trimmed automaton)")
    show.add_argument("--emit", choices=["json", "dot", "text"], default="dot")
    show.add_argument("--max-semigroup", type=_positive, default=DEFAULT_MAX_SEMIGROUP)

    wit = sub.add_parser("witness", help="word pair for a negative verdict")
    inputs(wit)
    decider_opts(wit)
    wit.add_argument("--emit", choices=["json", "text"], default="json")

    game = sub.add_parser("efgame", help="solve an Ehrenfeucht-Fraisse game on two lassos")
    game.add_argument("words", nargs=2, help="words written x(y), e.g. ab(b)")
    game.add_argument("--alphabet", help="needed only for multi-character letters")
    game.add_argument("--fragment", default="X,F", help="moves: subset of X, F, SF (default X,F)")
    game.add_argument("--game-depth", type=_nonnegative, default=DEFAULT_GAME_DEPTH)
    game.add_argument("--emit", choices=["json", "text"], default="json")

    st = sub.add_parser("selftest", help="bounded oracle checks on random formulas")
    st.add_argument("--seed", type=int, default=0)
    st.add_argument("--count", type=_nonnegative, default=40, help="number of random formulas")
    st.add_argument("--depth", type=_nonnegative, default=2,
                    help="temporal operators per random formula")
    st.add_argument("--alphabet", default="a,b")
    st.add_argument("--inject-fault", action="store_true",
                    help="also check a deliberately broken automaton (must fail)")
    st.add_argument("--emit", choices=["json", "text"], default="json")
    return p


class UsageError(Exception):
    pass


def _read_inputs(args) -> tuple[Alphabet, list[str]]:
    alphabet = Alphabet.parse(args.alphabet) if args.alphabet else None
    if args.file:
        with open(args.file, encoding="utf-8") as fh:
            lines = [ln.strip() for ln in fh]
        formulas = []
        for ln in lines:
            if not ln or ln.startswith("#"):
                continue
            if ln.lower().startswith("alphabet:"):
                header = Alphabet.parse(ln.split(":", 1)[1])
                if alphabet is not None and alphabet != header:
                    raise UsageError(f"--alphabet {','.join(alphabet)} conflicts with file header")
                alphabet = header
                continue
            formulas.append(ln)
    elif args.formula is not None:
        formulas = [args.formula]
    else:
        raise UsageError("give --formula or --file")
    if alphabet is None:
        raise UsageError("no alphabet: pass --alphabet or an 'alphabet:' header line")
    return alphabet, formulas


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False)


def _verdicts(args, alphabet, text):
    opts = dict(max_semigroup=args.max_semigroup, game_depth=args.game_depth,
                all_reasons=args.all_reasons)
    an = analyze(text, alphabet, args.max_sub)
    if args.fragment.strip().lower() == "all":
        return list(decide_all(None, analysis=an, **opts).values())
    return [decide(None, args.fragment, analysis=an, **opts)]


def cmd_check(args, out) -> int:
    alphabet, formulas = _read_inputs(args)
    results = []
    for text in formulas:
        results.extend(_verdicts(args, alphabet, text))
    if args.emit == "json":
        payload = results[0].to_dict() if len(results) == 1 else [v.to_dict() for v in results]
        print(_dump(payload), file=out)
    else:
        for v in results:
            line = f"{v.formula}\t{v.fragment}\t{'yes' if v.expressible else 'no'}"
            if v.reasons:
                line += "\t" + "; ".join(_reason_text(r) for r in v.reasons)
            print(line, file=out)
    return EXIT_YES if all(v.expressible for v in results) else EXIT_NO


def _reason_text(reason: dict) -> str:
    d = reason["detail"]
    if reason["kind"] == "pattern":
        words = ", ".join(f"{k}={v}" for k, v in d["words"].items())
        return f"{d['pattern']}({words})"
    cex = d.get("counterexample")
    if cex:
        return f"{d['property']}: {cex['w1']} vs {cex['w2']}"
    return f"{d['property']} fails for class {d.get('class')}"


def cmd_witness(args, out) -> int:
    alphabet, formulas = _read_inputs(args)
    rows = []
    for text in formulas:
        for v in _verdicts(args, alphabet, text):
            if v.expressible:
                continue
            pair = v.witness.to_dict() if v.witness else None
            if pair is None:
                for r in v.reasons:
                    if r["detail"].get("witness"):
                        pair = r["detail"]["witness"]
                        break
            rows.append({"formula": v.formula, "fragment": str(v.fragment), "witness": pair})
    if args.emit == "json":
        print(_dump(rows[0] if len(rows) == 1 else rows), file=out)
    else:
        for r in rows:
            w = r["witness"]
            desc = f"{w['w1']} vs {w['w2']} ({w['relation']})" if w else "no word pair"
            print(f"{r['formula']}\t{r['fragment']}\t{desc}", file=out)
    return EXIT_NO if rows else EXIT_YES


def cmd_show(args, out) -> int:
    if args.fixture == "fig1":
        A = fig1_automaton()
        raw = A
    else:
        alphabet, formulas = _read_inputs(args)
        if len(formulas) != 1:
            raise UsageError("show takes exactly one formula")
        raw = build_gcma(to_nnf(parse(formulas[0], alphabet), alphabet), alphabet, args.max_sub)
        A = trim(raw)
    if args.object == "tableau":
        obj = raw
    elif args.object == "automaton":
        obj = A
    else:
        P = left_congruence(A)
        if args.object == "partition":
            obj = P
        elif args.object == "quotient":
            obj = quotient(A, P)
        else:
            obj = testability_report(A, P, args.max_semigroup)
    if args.emit == "dot":
        if not hasattr(obj, "to_dot"):
            raise UsageError(f"no DOT export for {args.object}")
        out.write(obj.to_dot())
    else:
        print(_dump(obj.to_dict()), file=out)
    return EXIT_YES


def cmd_efgame(args, out) -> int:
    alphabet = Alphabet.parse(args.alphabet) if args.alphabet else None
    u, v = (UPWord.parse(w, alphabet) for w in args.words)
    ops = game_operators(args.fragment)
    wins = spoiler_wins(u, v, ops, args.game_depth)
    trace = strategy_trace(u, v, ops, args.game_depth) if wins else []
    result = {"w1": str(u), "w2": str(v), "moves": sorted(ops), "rounds": args.game_depth,
              "spoiler_wins": wins, "strategy_trace": trace}
    if args.emit == "json":
        print(_dump(result), file=out)
    else:
        print(f"{'Spoiler' if wins else 'Duplicator'} wins", file=out)
        for step in trace:
            print(f"  {step['move']} -> {step['positions']} {step['letters']}", file=out)
    return EXIT_YES


def cmd_selftest(args, out) -> int:
    from .selftest import run_selftest
    report = run_selftest(args.seed, args.count, args.depth, Alphabet.parse(args.alphabet),
                          args.inject_fault)
    if args.emit == "json":
        print(_dump(report.to_dict()), file=out)
    else:
        print(f"{'ok' if report.ok else 'FAILED'}: {report.checked}", file=out)
        for f in report.failures:
            print(f"  {f}", file=out)
    return EXIT_YES if report.ok else EXIT_NO


COMMANDS = {"check": cmd_check, "show": cmd_show, "witness": cmd_witness,
            "efgame": cmd_efgame, "selftest": cmd_selftest}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_YES
    try:
        return COMMANDS[args.command](args, out)
    except (LtlError, UsageError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
