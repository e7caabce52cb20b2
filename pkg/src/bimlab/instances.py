"""The hard instance family.

For parameters (k, n) the alphabet is {1, ..., 2k}; a word is in the domain
exactly when it is a nonempty block over the first half {1..k} followed by a
nonempty block over the second half {k+1..2k}, both of length at least n. The
output pairs the n-th symbol of the second block with the symbol of the first
block that is followed by exactly n-1 block symbols, in that order.

The module provides the direct-definition reference semantics, a transducer
generator whose state count is exactly 2k(n+1) (or 2kn+2 with the shared
head and tail), and a sliding-window bimachine of size Θ(k^n).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .bimachine import Bimachine
from .fsm import Alphabet, Dfa, Word
from .transducer import Arc, Transducer


@dataclass(frozen=True)
class InstanceParams:
    k: int
    n: int

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("k must be at least 2")
        if self.n < 1:
            raise ValueError("n must be at least 1")

    @property
    def alphabet(self) -> Alphabet:
        return Alphabet(tuple(str(i) for i in range(1, 2 * self.k + 1)))

    @property
    def first_half(self) -> tuple[str, ...]:
        return tuple(str(i) for i in range(1, self.k + 1))

    @property
    def second_half(self) -> tuple[str, ...]:
        return tuple(str(i) for i in range(self.k + 1, 2 * self.k + 1))


def oracle(params: InstanceParams, word: Iterable[str]) -> Word | None:
    """Reference semantics straight from the definition; the single source of
    truth every machine is tested against."""
    word = params.alphabet.check_word(word)
    first = set(params.first_half)
    split = 0
    while split < len(word) and word[split] in first:
        split += 1
    block1, block2 = word[:split], word[split:]
    if any(tok in first for tok in block2):
        return None
    if len(block1) < params.n or len(block2) < params.n:
        return None
    return (block2[params.n - 1], block1[-params.n])


def instance_transducer(params: InstanceParams, merged: bool = True) -> Transducer:
    """Generate the instance transducer in its bridge form.

    One head chain per first-half symbol i (self-loop on the first half, then
    i, then n-1 first-half steps) and one tail chain per second-half symbol j
    (n-1 second-half steps, then j, then a second-half self-loop); an
    epsilon-input bridge from the end of each head chain to the start of each
    tail chain emits the output pair (j, i). ``merged`` shares a single head
    and a single tail across chains: exactly 2kn+2 states instead of 2k(n+1).
    """
    k, n = params.k, params.n
    sigma = params.alphabet
    first, second = params.first_half, params.second_half
    arcs: list[Arc] = []

    if merged:
        head = 0
        chain1 = {(i, d): 1 + i * n + (d - 1) for i in range(k) for d in range(1, n + 1)}
        chain2 = {(j, d): 1 + k * n + j * n + (d - 1) for j in range(k) for d in range(1, n + 1)}
        tail = 2 * k * n + 1
        count = 2 * k * n + 2
        heads = {i: head for i in range(k)}
        tails = {j: tail for j in range(k)}
        initial, final = frozenset({head}), frozenset({tail})
    else:
        # Chain i occupies states [i*(n+1), (i+1)*(n+1)); tails follow.
        heads = {i: i * (n + 1) for i in range(k)}
        chain1 = {(i, d): i * (n + 1) + d for i in range(k) for d in range(1, n + 1)}
        base = k * (n + 1)
        chain2 = {(j, d): base + j * (n + 1) + (d - 1) for j in range(k) for d in range(1, n + 1)}
        tails = {j: base + j * (n + 1) + n for j in range(k)}
        count = 2 * k * (n + 1)
        initial = frozenset(heads.values())
        final = frozenset(tails.values())

    for i in range(k):
        for tok in first:
            arcs.append(Arc(heads[i], tok, (), heads[i]))
        arcs.append(Arc(heads[i], first[i], (), chain1[(i, 1)]))
        for d in range(1, n):
            for tok in first:
                arcs.append(Arc(chain1[(i, d)], tok, (), chain1[(i, d + 1)]))
    for j in range(k):
        for d in range(1, n):
            for tok in second:
                arcs.append(Arc(chain2[(j, d)], tok, (), chain2[(j, d + 1)]))
        arcs.append(Arc(chain2[(j, n)], second[j], (), tails[j]))
        for tok in second:
            arcs.append(Arc(tails[j], tok, (), tails[j]))
    for i in range(k):
        for j in range(k):
            arcs.append(Arc(chain1[(i, n)], None, (second[j], first[i]), chain2[(j, 1)]))

    return Transducer(sigma, sigma, count, initial, final, tuple(arcs))


def _window_dfa(alphabet, start_state, step):
    """Breadth-first DFA build over opaque state descriptions."""
    ids = {start_state: 0}
    order = [start_state]
    rows = []
    pos = 0
    while pos < len(order):
        state = order[pos]
        pos += 1
        row = []
        for tok in alphabet.symbols:
            nxt = step(state, tok)
            if nxt not in ids:
                ids[nxt] = len(order)
                order.append(nxt)
            row.append(ids[nxt])
        rows.append(tuple(row))
    return Dfa(alphabet, len(order), 0, tuple(rows)), tuple(order)


def handcrafted_bimachine(params: InstanceParams) -> Bimachine:
    """Sliding-window bimachine for the instance family.

    Left automaton: inside the first block, remember the window of the last
    <= n first-half symbols; one state for "inside the second block"; dead on
    a first-half symbol after the second block started. Right automaton
    (reading the word reversed): remember the window of the last <= n
    second-half symbols read; on crossing into the first block keep only
    whether the block behind was long enough; dead on a second-half symbol
    after crossing. The only nonempty outputs sit on the block boundary,
    where both windows are long enough to name the output pair.
    """
    k, n = params.k, params.n
    sigma = params.alphabet
    first = set(params.first_half)

    def left_step(state, tok):
        if state[0] == "first":
            if tok in first:
                return ("first", (state[1] + (tok,))[-n:])
            return ("second",)
        if state[0] == "second":
            return ("second",) if tok not in first else ("dead",)
        return ("dead",)

    def right_step(state, tok):
        if state[0] == "tail":
            if tok not in first:
                return ("tail", (state[1] + (tok,))[-n:])
            return ("crossed", len(state[1]) >= n)
        if state[0] == "crossed":
            return state if tok in first else ("dead",)
        return ("dead",)

    left, left_states = _window_dfa(sigma, ("first", ()), left_step)
    right, right_states = _window_dfa(sigma, ("tail", ()), right_step)

    def output(ls, tok, rs) -> Word | None:
        if ls[0] == "first":
            if tok in first:
                if rs == ("crossed", True):
                    return ()
                if rs[0] == "tail" and len(rs[1]) == n:
                    return ()
                return None
            if len(ls[1]) == n and rs[0] == "tail" and len(rs[1]) >= n - 1:
                i = ls[1][0]
                j = tok if n == 1 else rs[1][len(rs[1]) - (n - 1)]
                return (j, i)
            return None
        if ls[0] == "second" and tok not in first and rs[0] == "tail":
            return ()
        return None

    psi: dict[tuple[int, str, int], Word] = {}
    for l_id, ls in enumerate(left_states):
        for tok in sigma.symbols:
            for r_id, rs in enumerate(right_states):
                value = output(ls, tok, rs)
                if value is not None:
                    psi[(l_id, tok, r_id)] = value

    return Bimachine(left, right, psi, None, sigma)
