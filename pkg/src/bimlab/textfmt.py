"""Line-oriented text formats for transducers and bimachines.

Both formats are versioned (`transducer v1`, `bimachine v1`), UTF-8 with LF
line endings, and emit in canonical order so that parse/emit round-trips are
byte-stable. Words are `.`-joined tokens; `-` stands for the empty word and,
in arc input position, for an epsilon input.
"""

from __future__ import annotations

from .bimachine import Bimachine
from .errors import FormatError
from .fsm import Alphabet, Dfa, Word
from .transducer import Arc, Transducer


def word_from_text(text: str) -> Word:
    """Parse a `.`-joined token word; '' and '-' denote the empty word."""
    if text in ("", "-"):
        return ()
    parts = tuple(text.split("."))
    if any(not p for p in parts):
        raise ValueError(f"malformed word {text!r}")
    return parts


def word_to_text(word: Word) -> str:
    return ".".join(word) if word else "-"


def _lines(text: str):
    """Yield (line_no, fields) for nonblank lines, with comments stripped."""
    for line_no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            yield line_no, body.split()


class _Parser:
    def __init__(self, text: str):
        self.items = list(_lines(text))
        self.pos = 0

    def peek(self):
        return self.items[self.pos] if self.pos < len(self.items) else None

    def next(self, expect: str | None = None):
        item = self.peek()
        if item is None:
            raise FormatError(0, f"unexpected end of file (wanted {expect})")
        self.pos += 1
        if expect is not None and item[1][0] != expect:
            raise FormatError(item[0], f"expected {expect!r}, got {item[1][0]!r}")
        return item


def _parse_int(line_no: int, text: str, what: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise FormatError(line_no, f"bad {what} {text!r}") from None


def _parse_state(line_no: int, text: str, count: int, what: str) -> int:
    value = _parse_int(line_no, text, what)
    if not 0 <= value < count:
        raise FormatError(line_no, f"{what} {value} out of range (states {count})")
    return value


def _parse_word(line_no: int, text: str, alphabet: Alphabet, what: str) -> Word:
    try:
        word = word_from_text(text)
    except ValueError as exc:
        raise FormatError(line_no, str(exc)) from None
    for tok in word:
        if tok not in alphabet:
            raise FormatError(line_no, f"unknown {what} token {tok!r}")
    return word


def _parse_alphabet(line_no: int, tokens: list[str]) -> Alphabet:
    try:
        return Alphabet(tuple(tokens))
    except ValueError as exc:
        raise FormatError(line_no, str(exc)) from None


def emit_transducer(t: Transducer) -> str:
    lines = ["transducer v1"]
    lines.append("alphabet " + " ".join(t.input_alphabet.symbols))
    lines.append("oalphabet " + " ".join(t.output_alphabet.symbols))
    lines.append(f"states {t.state_count}")
    lines.append(("initial " + " ".join(map(str, sorted(t.initial)))).rstrip())
    lines.append(("final " + " ".join(map(str, sorted(t.final)))).rstrip())
    for arc in t.arcs:
        inp = arc.inp if arc.inp is not None else "-"
        lines.append(f"arc {arc.src} {arc.dst} {inp} {word_to_text(arc.out)}")
    return "\n".join(lines) + "\n"


def parse_transducer(text: str) -> Transducer:
    parser = _Parser(text)
    line_no, fields = parser.next()
    if fields != ["transducer", "v1"]:
        raise FormatError(line_no, "expected header 'transducer v1'")
    line_no, fields = parser.next("alphabet")
    alphabet = _parse_alphabet(line_no, fields[1:])
    oalphabet = alphabet
    item = parser.peek()
    if item and item[1][0] == "oalphabet":
        line_no, fields = parser.next()
        oalphabet = _parse_alphabet(line_no, fields[1:])
    line_no, fields = parser.next("states")
    if len(fields) != 2:
        raise FormatError(line_no, "expected 'states <count>'")
    count = _parse_int(line_no, fields[1], "state count")
    line_no, fields = parser.next("initial")
    initial = frozenset(_parse_state(line_no, f, count, "initial state") for f in fields[1:])
    line_no, fields = parser.next("final")
    final = frozenset(_parse_state(line_no, f, count, "final state") for f in fields[1:])
    arcs = []
    while parser.peek() is not None:
        line_no, fields = parser.next("arc")
        if len(fields) != 5:
            raise FormatError(line_no, "expected 'arc <src> <dst> <in> <out>'")
        src = _parse_state(line_no, fields[1], count, "arc source")
        dst = _parse_state(line_no, fields[2], count, "arc target")
        if fields[3] == "-":
            inp = None
        else:
            inp = fields[3]
            if inp not in alphabet:
                raise FormatError(line_no, f"unknown input token {inp!r}")
        out = _parse_word(line_no, fields[4], oalphabet, "output")
        arcs.append(Arc(src, inp, out, dst))
    return Transducer(alphabet, oalphabet, count, initial, final, tuple(arcs))


def emit_bimachine(b: Bimachine) -> str:
    alphabet = b.left.alphabet
    lines = ["bimachine v1"]
    lines.append("alphabet " + " ".join(alphabet.symbols))
    lines.append("oalphabet " + " ".join(b.output_alphabet.symbols))
    lines.append(f"left states {b.left.state_count} start {b.left.start}")
    for state in range(b.left.state_count):
        for pos, tok in enumerate(alphabet.symbols):
            lines.append(f"larc {state} {tok} {b.left.delta[state][pos]}")
    lines.append(f"right states {b.right.state_count} start {b.right.start}")
    for state in range(b.right.state_count):
        for pos, tok in enumerate(alphabet.symbols):
            lines.append(f"rarc {state} {tok} {b.right.delta[state][pos]}")
    if b.empty_word_output is not None:
        lines.append(f"epsout {word_to_text(b.empty_word_output)}")
    index = {tok: pos for pos, tok in enumerate(alphabet.symbols)}
    for (l, tok, r) in sorted(b.psi, key=lambda key: (key[0], index[key[1]], key[2])):
        lines.append(f"psi {l} {tok} {r} {word_to_text(b.psi[(l, tok, r)])}")
    return "\n".join(lines) + "\n"


def _parse_side(parser: _Parser, side: str, alphabet: Alphabet, arc_word: str) -> Dfa:
    line_no, fields = parser.next(side)
    if len(fields) != 5 or fields[1] != "states" or fields[3] != "start":
        raise FormatError(line_no, f"expected '{side} states <count> start <id>'")
    count = _parse_int(line_no, fields[2], "state count")
    start = _parse_state(line_no, fields[4], count, "start state")
    delta: dict[tuple[int, str], int] = {}
    while True:
        item = parser.peek()
        if not item or item[1][0] != arc_word:
            break
        line_no, fields = parser.next()
        if len(fields) != 4:
            raise FormatError(line_no, f"expected '{arc_word} <state> <token> <state>'")
        src = _parse_state(line_no, fields[1], count, "arc source")
        tok = fields[2]
        if tok not in alphabet:
            raise FormatError(line_no, f"unknown token {tok!r}")
        dst = _parse_state(line_no, fields[3], count, "arc target")
        if (src, tok) in delta:
            raise FormatError(line_no, f"duplicate transition ({src}, {tok})")
        delta[(src, tok)] = dst
    for state in range(count):
        for tok in alphabet.symbols:
            if (state, tok) not in delta:
                raise FormatError(
                    item[0] if item else 0,
                    f"{side} automaton is not total: missing ({state}, {tok})",
                )
    rows = tuple(
        tuple(delta[(state, tok)] for tok in alphabet.symbols) for state in range(count)
    )
    return Dfa(alphabet, count, start, rows)


def parse_bimachine(text: str) -> Bimachine:
    parser = _Parser(text)
    line_no, fields = parser.next()
    if fields != ["bimachine", "v1"]:
        raise FormatError(line_no, "expected header 'bimachine v1'")
    line_no, fields = parser.next("alphabet")
    alphabet = _parse_alphabet(line_no, fields[1:])
    line_no, fields = parser.next("oalphabet")
    oalphabet = _parse_alphabet(line_no, fields[1:])
    left = _parse_side(parser, "left", alphabet, "larc")
    right = _parse_side(parser, "right", alphabet, "rarc")
    empty_out: Word | None = None
    item = parser.peek()
    if item and item[1][0] == "epsout":
        line_no, fields = parser.next()
        if len(fields) != 2:
            raise FormatError(line_no, "expected 'epsout <word>'")
        empty_out = _parse_word(line_no, fields[1], oalphabet, "output")
    psi: dict[tuple[int, str, int], Word] = {}
    while parser.peek() is not None:
        line_no, fields = parser.next("psi")
        if len(fields) != 5:
            raise FormatError(line_no, "expected 'psi <left> <token> <right> <out>'")
        l = _parse_state(line_no, fields[1], left.state_count, "left state")
        tok = fields[2]
        if tok not in alphabet:
            raise FormatError(line_no, f"unknown token {tok!r}")
        r = _parse_state(line_no, fields[3], right.state_count, "right state")
        if (l, tok, r) in psi:
            raise FormatError(line_no, f"duplicate psi entry ({l}, {tok}, {r})")
        psi[(l, tok, r)] = _parse_word(line_no, fields[4], oalphabet, "output")
    return Bimachine(left, right, psi, empty_out, oalphabet)


def load_machine(text: str) -> Transducer | Bimachine:
    """Dispatch on the header line."""
    for line_no, fields in _lines(text):
        if fields[0] == "transducer":
            return parse_transducer(text)
        if fields[0] == "bimachine":
            return parse_bimachine(text)
        raise FormatError(line_no, f"unknown machine kind {fields[0]!r}")
    raise FormatError(0, "empty machine file")
