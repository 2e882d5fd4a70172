"""Finite automata with output reading base-k digits, plus a text format.

A Dfao maps n >= 0 to the output of the state reached after feeding the
base-k digits of n in the automaton's digit order (least or most
significant first).  n = 0 is the empty digit string and stays on the
initial state.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable


class DfaoParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


def digits_lsd(n: int, k: int) -> list[int]:
    """Base-k digits of n, least significant first; empty for n = 0."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    out = []
    while n:
        n, d = divmod(n, k)
        out.append(d)
    return out


def digits_msd(n: int, k: int) -> list[int]:
    """Base-k digits of n, most significant first; empty for n = 0."""
    out = digits_lsd(n, k)
    out.reverse()
    return out


@dataclass(frozen=True)
class Dfao:
    k: int
    outputs: tuple[int, ...]
    transitions: tuple[tuple[int, ...], ...]  # transitions[state][digit] -> state
    initial: int = 0
    digit_order: str = "lsd"

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("base must be >= 2")
        if self.digit_order not in ("lsd", "msd"):
            raise ValueError("digit_order must be 'lsd' or 'msd'")
        n = len(self.outputs)
        if n == 0:
            raise ValueError("automaton needs at least one state")
        if len(self.transitions) != n:
            raise ValueError("one transition row per state required")
        if not 0 <= self.initial < n:
            raise ValueError("initial state out of range")
        for q, row in enumerate(self.transitions):
            if len(row) != self.k:
                raise ValueError(f"state {q}: transition row must cover digits 0..{self.k - 1}")
            for tgt in row:
                if not 0 <= tgt < n:
                    raise ValueError(f"state {q}: transition target {tgt} out of range")

    @property
    def n_states(self) -> int:
        return len(self.outputs)

    def run(self, word: Iterable[int]) -> int:
        """State after feeding `word` (digits in feed order) from the initial state."""
        q = self.initial
        k = self.k
        trans = self.transitions
        for d in word:
            if not 0 <= d < k:
                raise ValueError(f"digit {d} out of range for base {k}")
            q = trans[q][d]
        return q

    def eval(self, n: int) -> int:
        """Output after reading the canonical base-k digits of n."""
        if n < 0:
            raise ValueError("n must be nonnegative")
        k = self.k
        trans = self.transitions
        q = self.initial
        if self.digit_order == "lsd":
            while n:
                n, d = divmod(n, k)
                q = trans[q][d]
        else:
            for d in digits_msd(n, k):
                q = trans[q][d]
        return self.outputs[q]


@dataclass(frozen=True)
class ReachSet:
    depth: int
    states: frozenset[int]


def reach_sets(dfao: Dfao, max_depth: int) -> list[ReachSet]:
    """States reachable by exactly t digit symbols, for t = 0..max_depth.

    Set-valued BFS: S_0 = {initial}, S_{t+1} = image of S_t under every
    digit, so the cost is O(max_depth * |Q| * k) rather than k**max_depth.
    Only lsd-first automata are accepted: the reach-set construction is
    read off the low-order digits first.
    """
    if dfao.digit_order != "lsd":
        raise ValueError("reach sets require an lsd-first automaton; got msd-first")
    if max_depth < 0:
        raise ValueError("max_depth must be >= 0")
    out = [ReachSet(0, frozenset({dfao.initial}))]
    cur = out[0].states
    digits = range(dfao.k)
    for t in range(1, max_depth + 1):
        cur = frozenset(dfao.transitions[q][d] for q in cur for d in digits)
        out.append(ReachSet(t, cur))
    return out


def parse(text: str) -> Dfao:
    """Parse the automaton text format.

        base <k> <lsd|msd>
        state <id> <output>        # first state line is the initial state
        trans <from> <digit> <to>

    '#' starts a comment.  State ids are distinct nonnegative integers; the
    transition table must be total.
    """
    base: tuple[int, str] | None = None
    state_order: list[int] = []
    outputs: dict[int, int] = {}
    trans: dict[tuple[int, int], int] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind = parts[0]
        if kind == "base":
            if base is not None:
                raise DfaoParseError("duplicate base line", lineno)
            if len(parts) != 3 or parts[2] not in ("lsd", "msd"):
                raise DfaoParseError("expected 'base <k> <lsd|msd>'", lineno)
            k = _int_field(parts[1], "base", lineno)
            if k < 2:
                raise DfaoParseError("base must be >= 2", lineno)
            base = (k, parts[2])
        elif kind == "state":
            if len(parts) != 3:
                raise DfaoParseError("expected 'state <id> <output>'", lineno)
            sid = _int_field(parts[1], "state id", lineno)
            if sid < 0:
                raise DfaoParseError("state id must be nonnegative", lineno)
            if sid in outputs:
                raise DfaoParseError(f"duplicate state {sid}", lineno)
            outputs[sid] = _int_field(parts[2], "output", lineno)
            state_order.append(sid)
        elif kind == "trans":
            if base is None:
                raise DfaoParseError("trans before base line", lineno)
            if len(parts) != 4:
                raise DfaoParseError("expected 'trans <from> <digit> <to>'", lineno)
            src = _int_field(parts[1], "source state", lineno)
            d = _int_field(parts[2], "digit", lineno)
            tgt = _int_field(parts[3], "target state", lineno)
            if not 0 <= d < base[0]:
                raise DfaoParseError(f"digit {d} out of range for base {base[0]}", lineno)
            if (src, d) in trans:
                raise DfaoParseError(f"duplicate transition ({src},{d})", lineno)
            trans[(src, d)] = tgt
        else:
            raise DfaoParseError(f"unknown directive {kind!r}", lineno)

    if base is None:
        raise DfaoParseError("missing base line")
    if not state_order:
        raise DfaoParseError("no states declared")
    k, order = base
    index = {sid: i for i, sid in enumerate(state_order)}
    for (src, d), tgt in trans.items():
        if src not in index:
            raise DfaoParseError(f"transition from undeclared state {src}")
        if tgt not in index:
            raise DfaoParseError(f"transition to undeclared state {tgt}")
    rows = []
    for sid in state_order:
        row = []
        for d in range(k):
            if (sid, d) not in trans:
                raise DfaoParseError(f"transition ({sid},{d}) undefined")
            row.append(index[trans[(sid, d)]])
        rows.append(tuple(row))
    return Dfao(
        k=k,
        outputs=tuple(outputs[sid] for sid in state_order),
        transitions=tuple(rows),
        initial=0,
        digit_order=order,
    )


def serialize(dfao: Dfao) -> str:
    """Canonical text form; parse(serialize(d)) reproduces d's behaviour.

    States are renumbered so the initial state is listed first (the format
    has no explicit initial marker).
    """
    n = dfao.n_states
    order = [dfao.initial] + [q for q in range(n) if q != dfao.initial]
    new = {q: i for i, q in enumerate(order)}
    lines = [f"base {dfao.k} {dfao.digit_order}"]
    for q in order:
        lines.append(f"state {new[q]} {dfao.outputs[q]}")
    for q in order:
        for d in range(dfao.k):
            lines.append(f"trans {new[q]} {d} {new[dfao.transitions[q][d]]}")
    return "\n".join(lines) + "\n"


def _int_field(token: str, what: str, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise DfaoParseError(f"bad {what}: {token!r}", lineno) from None


def thue_morse_dfao() -> Dfao:
    """Two-state parity-of-ones automaton: output = (number of 1 bits) mod 2."""
    return Dfao(k=2, outputs=(0, 1), transitions=((0, 1), (1, 0)))


def digit_sum_mod_dfao(k: int = 2, m: int = 3) -> Dfao:
    """m-state automaton computing (base-k digit sum of n) mod m."""
    if m < 1:
        raise ValueError("modulus must be >= 1")
    trans = tuple(tuple((q + d) % m for d in range(k)) for q in range(m))
    return Dfao(k=k, outputs=tuple(range(m)), transitions=trans)


def adjacent_ones_parity_dfao() -> Dfao:
    """Parity of the number of adjacent 1-bit pairs in the binary digits of n.

    Four states track (previous digit, parity so far); reading order does
    not matter because the set of adjacent positions does not.
    """
    rows = []
    outputs = []
    for idx in range(4):
        par, prev = divmod(idx, 2)
        outputs.append(par)
        rows.append(tuple(2 * (par ^ (prev & d)) + d for d in (0, 1)))
    return Dfao(k=2, outputs=tuple(outputs), transitions=tuple(rows))
