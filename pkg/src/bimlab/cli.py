"""Command-line surface.

Exit status: 0 on success, 1 when a checked property is violated (mismatch,
refuted bound, non-functional machine), 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import random
import sys
from itertools import product
from pathlib import Path

from .bimachine import Bimachine
from .construct import to_bimachine
from .errors import (
    BimlabError,
    ExperimentError,
    NonFunctionalError,
)
from .instances import InstanceParams, handcrafted_bimachine, instance_transducer, oracle
from .lowerbound import (
    BoundRespected,
    Mismatch,
    SoundnessAlarm,
    refute,
    render_csv,
    run_experiment,
)
from .textfmt import (
    emit_bimachine,
    emit_transducer,
    load_machine,
    parse_bimachine,
    parse_transducer,
    word_from_text,
    word_to_text,
)
from .transducer import Transducer, check_functional, remove_input_epsilons, trim


def _params(args) -> InstanceParams:
    return InstanceParams(args.k, args.n)


def cmd_instance(args) -> int:
    t = instance_transducer(_params(args), merged=not args.unmerged)
    Path(args.out).write_text(emit_transducer(t), encoding="utf-8")
    return 0


def cmd_construct(args) -> int:
    if args.method == "handcrafted":
        if args.k is None or args.n is None:
            print("error: --method handcrafted needs --k and --n", file=sys.stderr)
            return 2
        machine = handcrafted_bimachine(_params(args))
    else:
        if args.infile is None:
            print("error: --method generic needs --in", file=sys.stderr)
            return 2
        t = parse_transducer(Path(args.infile).read_text(encoding="utf-8"))
        machine = to_bimachine(trim(remove_input_epsilons(t)))
    if args.reduce:
        machine = machine.reduce()
    Path(args.out).write_text(emit_bimachine(machine), encoding="utf-8")
    return 0


def cmd_eval(args) -> int:
    machine = load_machine(Path(args.machine).read_text(encoding="utf-8"))
    word = word_from_text(args.word)
    out = machine.evaluate(word)
    print(word_to_text(out) if out is not None else "UNDEFINED")
    return 0


def cmd_functional(args) -> int:
    t = parse_transducer(Path(args.infile).read_text(encoding="utf-8"))
    if t.has_input_epsilons:
        t = trim(remove_input_epsilons(t))
    report = check_functional(t)
    if report.functional:
        print("FUNCTIONAL")
        return 0
    print(
        f"NON-FUNCTIONAL witness={word_to_text(report.witness)} "
        f"outputs={word_to_text(report.outputs[0])},{word_to_text(report.outputs[1])}"
    )
    return 1


def _evaluator(machine):
    if isinstance(machine, (Transducer, Bimachine)):
        return machine.evaluate
    raise TypeError("unsupported machine")


def cmd_equiv(args) -> int:
    a = load_machine(Path(args.a).read_text(encoding="utf-8"))
    b = load_machine(Path(args.b).read_text(encoding="utf-8"))
    alphabet = a.input_alphabet
    if b.input_alphabet.symbols != alphabet.symbols:
        print("error: machines have different input alphabets", file=sys.stderr)
        return 2
    sides = [("a", _evaluator(a)), ("b", _evaluator(b))]
    if args.oracle:
        k_text, n_text = args.oracle.split(",", 1)
        params = InstanceParams(int(k_text), int(n_text))
        if params.alphabet.symbols != alphabet.symbols:
            print("error: oracle alphabet differs from the machines", file=sys.stderr)
            return 2
        sides.append(("oracle", lambda w: oracle(params, w)))

    def check(word) -> bool:
        results = [(name, fn(word)) for name, fn in sides]
        if len({out for _, out in results}) > 1:
            shown = " ".join(
                f"{name}={word_to_text(out) if out is not None else 'UNDEFINED'}"
                for name, out in results
            )
            print(f"MISMATCH word={word_to_text(word)} {shown}")
            return False
        return True

    tested = 0
    for length in range(args.max_len + 1):
        for word in product(alphabet.symbols, repeat=length):
            tested += 1
            if not check(word):
                return 1
    rng = random.Random(args.seed)
    for _ in range(args.samples):
        length = rng.randint(args.max_len + 1, 2 * args.max_len + 2)
        word = tuple(rng.choice(alphabet.symbols) for _ in range(length))
        tested += 1
        if not check(word):
            return 1
    print(f"EQUIVALENT(tested={tested})")
    return 0


def cmd_refute(args) -> int:
    machine = parse_bimachine(Path(args.machine).read_text(encoding="utf-8"))
    verdict = refute(machine, _params(args))
    if isinstance(verdict, BoundRespected):
        print(
            f"BOUND-RESPECTED certified-left={str(verdict.left_certified).lower()} "
            f"certified-right={str(verdict.right_certified).lower()}"
        )
        return 0
    if isinstance(verdict, Mismatch):
        actual = word_to_text(verdict.actual) if verdict.actual is not None else "UNDEFINED"
        print(
            f"MISMATCH word={word_to_text(verdict.word)} "
            f"expected={word_to_text(verdict.expected)} actual={actual}"
        )
        return 1
    assert isinstance(verdict, SoundnessAlarm)
    print("SOUNDNESS-ALARM machine cannot be equivalent to the reference function")
    return 1


def cmd_experiment(args) -> int:
    grid = [(k, n) for k in range(2, args.kmax + 1) for n in range(1, args.nmax + 1)]
    rows = run_experiment(grid, seed=args.seed, measure_timings=args.timings)
    Path(args.csv).write_text(render_csv(rows), encoding="utf-8")
    print(f"wrote {len(rows)} rows to {args.csv}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bimlab",
        description="Transducer/bimachine laboratory for the hard instance family.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("instance", help="write an instance transducer")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--unmerged", action="store_true",
                   help="keep separate heads and tails (2k(n+1) states)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_instance)

    p = sub.add_parser("construct", help="build a bimachine")
    p.add_argument("--in", dest="infile", help="transducer file (generic method)")
    p.add_argument("--method", choices=("generic", "handcrafted"), required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--reduce", action="store_true", help="reduce before writing")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("eval", help="evaluate a machine on one word")
    p.add_argument("--machine", required=True)
    p.add_argument("--word", required=True, help="`.`-joined tokens; '-' for empty")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("functional", help="decide functionality of a transducer")
    p.add_argument("--in", dest="infile", required=True)
    p.set_defaults(func=cmd_functional)

    p = sub.add_parser("equiv", help="compare two machines (and optionally the "
                                     "reference function) on enumerated words")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--oracle", help="k,n of the reference function")
    p.add_argument("--max-len", type=int, default=6)
    p.add_argument("--samples", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("refute", help="collision search plus candidate words")
    p.add_argument("--machine", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_refute)

    p = sub.add_parser("experiment", help="run the grid and write the CSV report")
    p.add_argument("--kmax", type=int, required=True)
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--csv", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--timings", action="store_true",
                   help="record real elapsed_ms (breaks byte-determinism)")
    p.set_defaults(func=cmd_experiment)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NonFunctionalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ExperimentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (BimlabError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
