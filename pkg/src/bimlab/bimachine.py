"""Bimachines: a left-to-right DFA, a right-to-left DFA, and a partial output
table indexed by (left state, letter, right state).

The output table is stored sparsely; an absent triple means undefined, and
that partiality is what carves out the domain of the represented function.
The empty word gets its own explicit output slot so that machines whose
function is undefined at the empty word can say so.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .fsm import Alphabet, Dfa, Word, moore_reduce

_ABSENT = object()


@dataclass(frozen=True)
class Bimachine:
    left: Dfa
    right: Dfa
    psi: dict[tuple[int, str, int], Word]
    empty_word_output: Word | None
    output_alphabet: Alphabet

    def __post_init__(self):
        object.__setattr__(
            self, "psi", {(l, a, r): tuple(out) for (l, a, r), out in self.psi.items()}
        )
        if self.empty_word_output is not None:
            object.__setattr__(self, "empty_word_output", tuple(self.empty_word_output))

    @property
    def input_alphabet(self) -> Alphabet:
        return self.left.alphabet

    @property
    def total_states(self) -> int:
        return self.left.state_count + self.right.state_count

    def psi_star(self, left_state: int, word: Iterable[str], right_state: int) -> Word | None:
        """Generalized output between a left and a right context state.

        Unfolds from the right: the last letter is looked up against
        ``right_state`` directly, earlier letters against the right state
        advanced over the reversed suffix behind them. Undefined as soon as
        one lookup is undefined.
        """
        word = tuple(word)
        prefix = [left_state]
        for tok in word:
            prefix.append(self.left.step(prefix[-1], tok))
        parts: list[Word] = []
        r = right_state
        for i in range(len(word) - 1, -1, -1):
            piece = self.psi.get((prefix[i], word[i], r), _ABSENT)
            if piece is _ABSENT:
                return None
            parts.append(piece)
            r = self.right.step(r, word[i])
        return tuple(tok for piece in reversed(parts) for tok in piece)

    def evaluate(self, word: Iterable[str]) -> Word | None:
        """The represented function, with the empty word handled by its flag."""
        word = tuple(word)
        if not word:
            return self.empty_word_output
        return self.psi_star(self.left.start, word, self.right.start)

    def validate(self) -> list[str]:
        """Diagnostics for structural problems; an empty list means valid."""
        problems: list[str] = []
        if self.left.alphabet.symbols != self.right.alphabet.symbols:
            problems.append("alphabet-mismatch: left and right automata disagree")
        for side, dfa in (("left", self.left), ("right", self.right)):
            if len(dfa.delta) != dfa.state_count:
                problems.append(f"totality: {side} delta has {len(dfa.delta)} rows "
                                f"for {dfa.state_count} states")
                continue
            for q, row in enumerate(dfa.delta):
                if len(row) != len(dfa.alphabet):
                    missing = len(dfa.alphabet) - len(row)
                    problems.append(
                        f"totality: {side} state {q} is missing {missing} transitions"
                    )
                else:
                    for tok, target in zip(dfa.alphabet.symbols, row):
                        if not 0 <= target < dfa.state_count:
                            problems.append(
                                f"totality: {side} delta({q},{tok}) targets "
                                f"unknown state {target}"
                            )
        for (l, a, r), out in sorted(self.psi.items()):
            if not 0 <= l < self.left.state_count:
                problems.append(f"psi: unknown left state {l}")
            if not 0 <= r < self.right.state_count:
                problems.append(f"psi: unknown right state {r}")
            if a not in self.left.alphabet:
                problems.append(f"psi: unknown input symbol {a!r}")
            for tok in out:
                if tok not in self.output_alphabet:
                    problems.append(f"psi: output token {tok!r} not in output alphabet")
        if self.empty_word_output is not None:
            for tok in self.empty_word_output:
                if tok not in self.output_alphabet:
                    problems.append(
                        f"empty-word output token {tok!r} not in output alphabet"
                    )
        return problems

    def _left_rows(self) -> list[tuple]:
        syms = self.left.alphabet.symbols
        nr = self.right.state_count
        return [
            tuple(self.psi.get((l, a, r)) for a in syms for r in range(nr))
            for l in range(self.left.state_count)
        ]

    def _right_rows(self) -> list[tuple]:
        syms = self.left.alphabet.symbols
        nl = self.left.state_count
        return [
            tuple(self.psi.get((l, a, r)) for a in syms for l in range(nl))
            for r in range(self.right.state_count)
        ]

    def reduce(self) -> "Bimachine":
        """Merge states indistinguishable by their output rows and transitions,
        left side first, then the right side with recomputed rows.

        The represented function is unchanged. One pass per side reaches the
        fixpoint: merging one side never changes row-distinguishability on the
        other, because merged states have literally identical rows.
        """
        return self._reduce_left()._reduce_right()

    def _reduce_left(self) -> "Bimachine":
        reduced, block = moore_reduce(self.left, self._left_rows())
        psi: dict[tuple[int, str, int], Word] = {}
        for (l, a, r), out in self.psi.items():
            key = (block[l], a, r)
            if key in psi and psi[key] != out:
                raise AssertionError("internal: merged left states disagree on psi")
            psi[key] = out
        return Bimachine(reduced, self.right, psi, self.empty_word_output,
                         self.output_alphabet)

    def _reduce_right(self) -> "Bimachine":
        reduced, block = moore_reduce(self.right, self._right_rows())
        psi: dict[tuple[int, str, int], Word] = {}
        for (l, a, r), out in self.psi.items():
            key = (l, a, block[r])
            if key in psi and psi[key] != out:
                raise AssertionError("internal: merged right states disagree on psi")
            psi[key] = out
        return Bimachine(self.left, reduced, psi, self.empty_word_output,
                         self.output_alphabet)
