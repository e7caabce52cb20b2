"""Pigeonhole collision search over the instance word sets, the candidate-word
refuter for undersized bimachines, the blow-up exponent constant, and the
experiment grid with its CSV report.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass
from typing import Iterable, Sequence

from .bimachine import Bimachine
from .construct import to_bimachine
from .errors import ConsistencyError, ExperimentError, ResourceLimitError
from .fsm import Word
from .instances import InstanceParams, handcrafted_bimachine, instance_transducer, oracle
from .transducer import check_functional, remove_input_epsilons, trim


@dataclass(frozen=True)
class FoolingPair:
    """Two distinct probe words driven to the same automaton state.

    Left pairs run forward from the left start state over first-half words of
    length n and decompose at the first differing position; right pairs run
    the reversed words from the right start state and decompose at the last
    differing position, so ``common`` is a shared prefix on the left side and
    a shared suffix on the right side.
    """

    side: str  # "left" or "right"
    word1: Word
    word2: Word
    collision_state: int
    common: Word
    symbol1: str
    symbol2: str
    residue1: Word
    residue2: Word


def _decompose_left(w1: Word, w2: Word, state: int) -> FoolingPair:
    d = 0
    while w1[d] == w2[d]:
        d += 1
    return FoolingPair("left", w1, w2, state, w1[:d], w1[d], w2[d], w1[d + 1 :], w2[d + 1 :])


def _decompose_right(w1: Word, w2: Word, state: int) -> FoolingPair:
    d = len(w1) - 1
    while w1[d] == w2[d]:
        d -= 1
    return FoolingPair("right", w1, w2, state, w1[d + 1 :], w1[d], w2[d], w1[:d], w2[:d])


def find_collisions(
    b: Bimachine, params: InstanceParams, cap: int = 10**6
) -> tuple[FoolingPair | None, FoolingPair | None]:
    """Scan all k^n probe words per side in lexicographic order and report the
    first collision on each, or None for a side whose images are pairwise
    distinct (which certifies that side has at least k^n states)."""
    if params.k**params.n > cap:
        raise ResourceLimitError(
            f"{params.k}^{params.n} probe words exceed the cap of {cap}"
        )
    left_pair = None
    seen: dict[int, Word] = {}
    for tup in itertools.product(params.first_half, repeat=params.n):
        state = b.left.run(tup)
        if state in seen:
            left_pair = _decompose_left(seen[state], tup, state)
            break
        seen[state] = tup
    right_pair = None
    seen = {}
    for tup in itertools.product(params.second_half, repeat=params.n):
        state = b.right.run(reversed(tup))
        if state in seen:
            right_pair = _decompose_right(seen[state], tup, state)
            break
        seen[state] = tup
    return left_pair, right_pair


@dataclass(frozen=True)
class CandidateWords:
    """The three probe words built from a pair of collisions, with the outputs
    the reference function assigns to them."""

    words: tuple[Word, Word, Word]
    expected: tuple[Word, Word, Word]


def build_candidates(
    left_pair: FoolingPair, right_pair: FoolingPair, params: InstanceParams
) -> CandidateWords:
    """Pad each collision pair to a full block and cross-combine.

    The first blocks a1/a2 extend the colliding left words by the fixed word
    symbol1^|common|, so both still drive the left automaton to the same
    state while naming different output symbols; the second blocks b3/b4
    prepend symbol1^|common| to the colliding right words symmetrically. Any
    machine equivalent to the reference function must then get one of
    a1+b3, a2+b3, a1+b4 wrong, because it cannot tell them apart where it
    matters. All expectations are verified against the reference function.
    """
    pad1 = (left_pair.symbol1,) * len(left_pair.common)
    a1 = left_pair.word1 + pad1
    a2 = left_pair.word2 + pad1
    pad2 = (right_pair.symbol1,) * len(right_pair.common)
    b3 = pad2 + right_pair.word1
    b4 = pad2 + right_pair.word2
    words = (a1 + b3, a2 + b3, a1 + b4)
    expected = (
        (right_pair.symbol1, left_pair.symbol1),
        (right_pair.symbol1, left_pair.symbol2),
        (right_pair.symbol2, left_pair.symbol1),
    )
    for word, want in zip(words, expected):
        got = oracle(params, word)
        if got != want:
            raise ConsistencyError(
                f"candidate {'.'.join(word)} expected {want} but the reference "
                f"function gives {got}"
            )
    return CandidateWords(words, expected)


@dataclass(frozen=True)
class BoundRespected:
    """No usable collision pair: at least one side is certified >= k^n."""

    left_pair: FoolingPair | None
    right_pair: FoolingPair | None

    @property
    def left_certified(self) -> bool:
        return self.left_pair is None

    @property
    def right_certified(self) -> bool:
        return self.right_pair is None


@dataclass(frozen=True)
class Mismatch:
    """The machine disagrees with the reference function on ``word``."""

    word: Word
    expected: Word
    actual: Word | None


@dataclass(frozen=True)
class SoundnessAlarm:
    """Both sides collide yet all three candidates match: the machine cannot
    be equivalent to the reference function, or there is a bug."""

    candidates: CandidateWords


Verdict = BoundRespected | Mismatch | SoundnessAlarm


def refute(b: Bimachine, params: InstanceParams, cap: int = 10**6) -> Verdict:
    """Collision search plus the three-candidate evaluation."""
    left_pair, right_pair = find_collisions(b, params, cap=cap)
    if left_pair is None or right_pair is None:
        return BoundRespected(left_pair, right_pair)
    candidates = build_candidates(left_pair, right_pair, params)
    for word, want in zip(candidates.words, candidates.expected):
        got = b.evaluate(word)
        if got != want:
            return Mismatch(word, want, got)
    return SoundnessAlarm(candidates)


def exponent_constant(k: int) -> tuple[float, bool]:
    """The per-k exponent log2(k)/(2k) of the state blow-up bound, and a check
    that k = 3 maximizes it over k in 2..64."""
    if k < 2:
        raise ValueError("k must be at least 2")
    c3 = math.log2(3) / 6
    argmax_ok = all(c3 >= math.log2(m) / (2 * m) for m in range(2, 65))
    return math.log2(k) / (2 * k), argmax_ok


CSV_HEADER = (
    "k,n,construction,transducer_states,left_states,right_states,"
    "total_states,lower_bound,elapsed_ms,ratio"
)


@dataclass(frozen=True)
class ExperimentRow:
    k: int
    n: int
    construction: str
    transducer_states: int
    left_states: int
    right_states: int
    total_states: int
    lower_bound: int
    elapsed_ms: int

    @property
    def ratio(self) -> float:
        return self.total_states / (self.k**self.n)

    def csv_line(self) -> str:
        return (
            f"{self.k},{self.n},{self.construction},{self.transducer_states},"
            f"{self.left_states},{self.right_states},{self.total_states},"
            f"{self.lower_bound},{self.elapsed_ms},{self.ratio:.4f}"
        )


def render_csv(rows: Iterable[ExperimentRow]) -> str:
    return "\n".join([CSV_HEADER, *(row.csv_line() for row in rows)]) + "\n"


def _spot_check(
    machine: Bimachine,
    params: InstanceParams,
    seed: int,
    tag: str,
    exhaustive_word_cap: int,
    sample_count: int,
) -> None:
    tokens = params.alphabet.symbols
    budget = exhaustive_word_cap
    for length in range(0, 2 * params.n + 3):
        block = len(tokens) ** length
        if block > budget:
            break
        budget -= block
        for word in itertools.product(tokens, repeat=length):
            if machine.evaluate(word) != oracle(params, word):
                raise ExperimentError(
                    f"cell k={params.k} n={params.n} {tag}: mismatch on "
                    f"{'.'.join(word) or '-'}"
                )
    rng = random.Random(f"{seed}:{params.k}:{params.n}:{tag}")
    for _ in range(sample_count):
        word = tuple(
            rng.choice(tokens) for _ in range(rng.randint(0, 4 * params.n))
        )
        if machine.evaluate(word) != oracle(params, word):
            raise ExperimentError(
                f"cell k={params.k} n={params.n} {tag}: mismatch on "
                f"{'.'.join(word) or '-'}"
            )


def run_experiment(
    grid: Sequence[tuple[int, int]],
    constructions: Sequence[str] = ("generic", "handcrafted"),
    seed: int = 0,
    generic_max_k: int = 3,
    generic_max_n: int = 3,
    handcrafted_max_n: int = 4,
    list_state_cap: int = 10**5,
    exhaustive_word_cap: int = 10**5,
    sample_count: int = 2000,
    measure_timings: bool = False,
) -> list[ExperimentRow]:
    """Per cell: generate, strip epsilons, trim, verify functionality, build
    each construction, reduce, spot-check against the reference function, and
    assert the state bounds. Rows come out ordered by (k, n, construction).

    Cells outside the per-construction budget are skipped for that
    construction. ``elapsed_ms`` is reported as 0 unless ``measure_timings``
    is set, keeping the CSV byte-deterministic for a fixed seed.
    """
    for name in constructions:
        if name not in ("generic", "handcrafted"):
            raise ValueError(f"unknown construction {name!r}")
    rows: list[ExperimentRow] = []
    for k, n in sorted(set(grid)):
        params = InstanceParams(k, n)
        generated = instance_transducer(params, merged=True)
        prepared = trim(remove_input_epsilons(generated))
        report = check_functional(prepared)
        if not report.functional:
            raise ExperimentError(
                f"cell k={k} n={n}: instance transducer is not functional "
                f"(witness {'.'.join(report.witness)})"
            )
        for tag in sorted(constructions):
            started = time.perf_counter()
            if tag == "generic":
                if k > generic_max_k or n > generic_max_n:
                    continue
                try:
                    machine = to_bimachine(prepared, state_cap=list_state_cap)
                except ResourceLimitError:
                    continue
            else:
                if n > handcrafted_max_n:
                    continue
                machine = handcrafted_bimachine(params)
            reduced = machine.reduce()
            _spot_check(reduced, params, seed, tag, exhaustive_word_cap, sample_count)
            bound = k**n + 1
            left, right = reduced.left.state_count, reduced.right.state_count
            if max(left, right) < k**n or left + right < bound:
                raise ExperimentError(
                    f"cell k={k} n={n} {tag}: state counts L={left} R={right} "
                    f"fall below the bound {bound}"
                )
            elapsed = int((time.perf_counter() - started) * 1000) if measure_timings else 0
            rows.append(
                ExperimentRow(
                    k=k,
                    n=n,
                    construction=tag,
                    transducer_states=generated.state_count,
                    left_states=left,
                    right_states=right,
                    total_states=left + right,
                    lower_bound=bound,
                    elapsed_ms=elapsed,
                )
            )
    return rows
