"""Generic bimachine construction from a trimmed, letter-input, functional
transducer: co-accessible-subset right automaton, priority-list left
automaton, first-match output selection.
"""

from __future__ import annotations

from .bimachine import Bimachine
from .errors import NonFunctionalError, PreconditionError, ResourceLimitError
from .fsm import Dfa, Word, reverse, subset_construction
from .transducer import Transducer, _letter_arcs, check_functional, is_trim


def build_right_automaton(t: Transducer) -> tuple[Dfa, tuple[frozenset[int], ...]]:
    """Determinize the reversed input projection, starting from the final
    states. After reading a reversed suffix the automaton sits on exactly the
    set of states that can still consume that suffix and accept."""
    if t.has_input_epsilons:
        raise PreconditionError("right automaton needs a letter-input machine")
    return subset_construction(reverse(t.input_projection()))


def build_left_automaton(
    t: Transducer, state_cap: int | None = None
) -> tuple[Dfa, tuple[tuple[int, ...], ...]]:
    """Priority-list determinization of the forward run.

    A state is the ordered list of transducer states reachable on the prefix
    read so far: parents expand in list order, their arcs in canonical order,
    and duplicates keep the earliest occurrence. That order is what makes
    first-match output selection trace a single accepting path. The empty
    list is the dead sink. Worst case is factorial; ``state_cap`` aborts
    oversized builds.
    """
    if t.has_input_epsilons:
        raise PreconditionError("left automaton needs a letter-input machine")
    arcs = _letter_arcs(t)
    start = tuple(sorted(t.initial))
    ids: dict[tuple[int, ...], int] = {start: 0}
    order: list[tuple[int, ...]] = [start]
    rows: list[list[int]] = []
    pos = 0
    while pos < len(order):
        lst = order[pos]
        pos += 1
        row = []
        for tok in t.input_alphabet.symbols:
            expanded: list[int] = []
            seen: set[int] = set()
            for p in lst:
                for _, d in arcs.get((p, tok), ()):
                    if d not in seen:
                        seen.add(d)
                        expanded.append(d)
            target = tuple(expanded)
            if target not in ids:
                ids[target] = len(order)
                order.append(target)
                if state_cap is not None and len(order) > state_cap:
                    raise ResourceLimitError(
                        f"left automaton exceeded {state_cap} states"
                    )
            row.append(ids[target])
        rows.append(row)
    if () not in ids:
        sink = len(order)
        order.append(())
        rows.append([sink] * len(t.input_alphabet))
    dfa = Dfa(t.input_alphabet, len(order), 0, tuple(tuple(r) for r in rows))
    return dfa, tuple(order)


def build_psi(
    t: Transducer,
    left_lists: tuple[tuple[int, ...], ...],
    right_subsets: tuple[frozenset[int], ...],
) -> dict[tuple[int, str, int], Word]:
    """First match wins: scan the priority list, each state's arcs in
    canonical order, and emit the first transition landing in the
    co-accessible subset. No matching transition means undefined."""
    arcs = _letter_arcs(t)
    psi: dict[tuple[int, str, int], Word] = {}
    for l_id, lst in enumerate(left_lists):
        for tok in t.input_alphabet.symbols:
            candidates = [
                (d, w) for p in lst for (w, d) in arcs.get((p, tok), ())
            ]
            if not candidates:
                continue
            for r_id, subset in enumerate(right_subsets):
                for d, w in candidates:
                    if d in subset:
                        psi[(l_id, tok, r_id)] = w
                        break
    return psi


def to_bimachine(t: Transducer, state_cap: int | None = None) -> Bimachine:
    """Assemble the equivalent bimachine for a trimmed, letter-input,
    functional transducer; the result computes the same partial function.

    The empty word maps to the empty output exactly when some initial state
    is final, and is undefined otherwise.
    """
    if t.has_input_epsilons:
        raise PreconditionError("run remove_input_epsilons before construction")
    if not is_trim(t):
        raise PreconditionError("run trim before construction")
    report = check_functional(t)
    if not report.functional:
        raise NonFunctionalError(report.witness, *report.outputs)
    left, lists = build_left_automaton(t, state_cap=state_cap)
    right, subsets = build_right_automaton(t)
    psi = build_psi(t, lists, subsets)
    empty_out: Word | None = () if t.initial & t.final else None
    return Bimachine(left, right, psi, empty_out, t.output_alphabet)
