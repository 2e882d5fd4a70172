"""Two-track automata over pairs of base-k digit strings read in parallel.

Both numbers are rendered most significant digit first and the shorter
representation is left-padded with zeros; (0, 0) is the empty word.
Transitions are partial: a missing pair transition is an implicit,
non-accepting dead state.

Ships the two hand-built recognizers for the pairs (n, g(n)) with
g(0) = 1 and g(n) = 1 + k**floor_log(k, n) otherwise (whose base-k value
always looks like 1 0...0 1), an equality recognizer, plus finite-scale
verification drivers and a one-sided growth screen.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .corpus import eval_g, floor_log, growth_exponent
from .dfao import digits_msd
from .recsolve import (
    COUNTEREXAMPLE,
    VERIFIED,
    Certificate,
    Oracle,
    _chunk_spans,
    _first_failure,
)

NOT_SYNCHRONIZED = "not_synchronized"
POSSIBLY_SYNCHRONIZED = "possibly_synchronized"


class SyncParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


@dataclass(frozen=True)
class SyncDfa:
    k: int
    n_states: int
    initial: int
    accepting: frozenset[int]
    transitions: dict[tuple[int, int, int], int]  # (state, d1, d2) -> state

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("base must be >= 2")
        if not 0 <= self.initial < self.n_states:
            raise ValueError("initial state out of range")
        for q in self.accepting:
            if not 0 <= q < self.n_states:
                raise ValueError("accepting state out of range")
        for (q, d1, d2), tgt in self.transitions.items():
            if not (0 <= q < self.n_states and 0 <= tgt < self.n_states):
                raise ValueError("transition state out of range")
            if not (0 <= d1 < self.k and 0 <= d2 < self.k):
                raise ValueError("transition digit out of range")

    def run_pairs(self, pairs) -> bool:
        """Acceptance after feeding digit pairs; missing transitions reject."""
        q = self.initial
        k = self.k
        trans = self.transitions
        for d1, d2 in pairs:
            if not (0 <= d1 < k and 0 <= d2 < k):
                raise ValueError(f"digit pair ({d1},{d2}) out of range for base {k}")
            nxt = trans.get((q, d1, d2))
            if nxt is None:
                return False
            q = nxt
        return q in self.accepting


def pair_word(k: int, n: int, m: int) -> list[tuple[int, int]]:
    """msd digit pairs of (n, m), shorter track left-padded with zeros."""
    if n < 0 or m < 0:
        raise ValueError("pair components must be nonnegative")
    dn = digits_msd(n, k)
    dm = digits_msd(m, k)
    width = max(len(dn), len(dm))
    dn = [0] * (width - len(dn)) + dn
    dm = [0] * (width - len(dm)) + dm
    return list(zip(dn, dm))


def accepts(dfa: SyncDfa, n: int, m: int) -> bool:
    """Does the machine accept the parallel base-k representation of (n, m)?"""
    return dfa.run_pairs(pair_word(dfa.k, n, m))


def build_fig2() -> SyncDfa:
    """Four-state recognizer for pairs (n, g(n)) in base 2 (g as above).

    (0,1) and (1,2) travel the lower branch through state 3; every n with a
    two-digit-or-longer representation takes [1,1] into state 1, loops there
    while the value track reads its run of zeros, and exits to state 2 on
    the value's final 1.
    """
    t = {
        (0, 0, 0): 0,
        (0, 1, 1): 1,
        (0, 0, 1): 3,
        (1, 0, 0): 1,
        (1, 1, 0): 1,
        (1, 0, 1): 2,
        (1, 1, 1): 2,
        (3, 1, 0): 2,
    }
    return SyncDfa(k=2, n_states=4, initial=0, accepting=frozenset({2, 3}), transitions=t)


def build_figk(k: int) -> SyncDfa:
    """Three-state recognizer for pairs (n, g(n)) in base k, k > 2.

    Single-digit n go straight to the accepting state ((0,1) and (a,2) for
    0 < a < k); longer n enter state 1 on [a,1], loop on [a,0], and exit on
    [a,1].
    """
    if k <= 2:
        raise ValueError("this construction requires k > 2")
    t: dict[tuple[int, int, int], int] = {(0, 0, 0): 0, (0, 0, 1): 2}
    for a in range(1, k):
        t[(0, a, 1)] = 1
        t[(0, a, 2)] = 2
    for a in range(k):
        t[(1, a, 0)] = 1
        t[(1, a, 1)] = 2
    return SyncDfa(k=k, n_states=3, initial=0, accepting=frozenset({2}), transitions=t)


def build_identity(k: int = 2) -> SyncDfa:
    """One-state recognizer for pairs (n, n)."""
    t = {(0, d, d): 0 for d in range(k)}
    return SyncDfa(k=k, n_states=1, initial=0, accepting=frozenset({0}), transitions=t)


def _negatives(m_true: int, count: int, seed: int, n: int) -> list[int]:
    """Deterministic per-(seed, n) values != m_true: structured offenders
    first (off-by-one, zero, doubling), then seeded random fill."""
    cands: list[int] = []
    for c in (m_true + 1, m_true - 1, 0, 2 * m_true):
        if c >= 0 and c != m_true and c not in cands:
            cands.append(c)
    if len(cands) < count:
        rng = random.Random(f"{seed}:{n}")
        span = max(4, 2 * m_true + 17)
        while len(cands) < count:
            c = rng.randrange(span)
            if c != m_true and c not in cands:
                cands.append(c)
    return cands[:count]


def _verify_sync_chunk(payload) -> dict | None:
    dfa, oracle, negatives_per_n, seed, lo, hi = payload
    for n in range(lo, hi + 1):
        m = oracle(n)
        if not accepts(dfa, n, m):
            return {"n": n, "m": str(m), "kind": "positive_rejected"}
        for neg in _negatives(m, negatives_per_n, seed, n):
            if accepts(dfa, n, neg):
                return {"n": n, "m": str(neg), "kind": "negative_accepted"}
    return None


def verify_sync(
    dfa: SyncDfa,
    oracle: Oracle,
    n_max: int,
    negatives_per_n: int = 4,
    seed: int = 0,
    jobs: int = 1,
) -> Certificate:
    """accepts(n, oracle(n)) must hold and accepts(n, m) must fail on
    `negatives_per_n` sampled m != oracle(n), for every 0 <= n <= n_max."""
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    if negatives_per_n < 0:
        raise ValueError("negatives_per_n must be >= 0")
    claim = {
        "kind": "verify_sync",
        "n_max": n_max,
        "negatives_per_n": negatives_per_n,
        "seed": seed,
    }
    spans = _chunk_spans(0, n_max, jobs)
    witness = _first_failure(
        _verify_sync_chunk,
        [(dfa, oracle, negatives_per_n, seed, a, b) for a, b in spans],
        jobs,
    )
    if witness is None:
        return Certificate(claim, VERIFIED, (0, n_max))
    return Certificate(claim, COUNTEREXAMPLE, (0, n_max), witness)


def repr_pattern_check(k: int, n_max: int) -> Certificate:
    """For every n with a base-k representation of length >= 2 up to n_max,
    the value 1 + k**floor_log(k, n) must read 1 0...0 1 (same length)."""
    if k < 2:
        raise ValueError("base must be >= 2")
    if n_max < k:
        raise ValueError("n_max must be >= k so a length-2 representation occurs")
    claim = {"kind": "repr_pattern", "k": k, "n_max": n_max}
    for n in range(k, n_max + 1):
        length = floor_log(k, n) + 1
        expect = [1] + [0] * (length - 2) + [1]
        got = digits_msd(eval_g(k, k, n), k)
        if got != expect:
            return Certificate(
                claim, COUNTEREXAMPLE, (k, n_max),
                {"n": n, "digits": got, "expected": expect},
            )
    return Certificate(claim, VERIFIED, (k, n_max))


@dataclass(frozen=True)
class GrowthScreen:
    status: str  # NOT_SYNCHRONIZED or POSSIBLY_SYNCHRONIZED
    exponent: float
    depth: int
    margin: float


def sync_growth_screen(
    oracle: Oracle, k: int, depth: int, margin: float = 0.1
) -> GrowthScreen:
    """One-sided screen: growth beyond linear rules out a two-track
    recognizer for the graph (which forces O(n) growth); at or below
    linear nothing is claimed."""
    if depth < 6:
        raise ValueError("depth must be >= 6")
    exponent = growth_exponent(oracle, k, depth)
    status = NOT_SYNCHRONIZED if exponent > 1 + margin else POSSIBLY_SYNCHRONIZED
    return GrowthScreen(status, exponent, depth, margin)


def serialize(dfa: SyncDfa) -> str:
    """Text form shared with the single-track format: `base <k> pair`, state
    lines carrying 1/0 for accepting, transitions `trans <q> <d1>,<d2> <to>`."""
    n = dfa.n_states
    order = [dfa.initial] + [q for q in range(n) if q != dfa.initial]
    new = {q: i for i, q in enumerate(order)}
    lines = [f"base {dfa.k} pair"]
    for q in order:
        lines.append(f"state {new[q]} {1 if q in dfa.accepting else 0}")
    for (q, d1, d2), tgt in sorted(
        dfa.transitions.items(), key=lambda item: (new[item[0][0]], item[0][1], item[0][2])
    ):
        lines.append(f"trans {new[q]} {d1},{d2} {new[tgt]}")
    return "\n".join(lines) + "\n"


def parse(text: str) -> SyncDfa:
    """Inverse of serialize; transitions may be partial but not duplicated."""
    base: int | None = None
    state_order: list[int] = []
    accepting: set[int] = set()
    flags: dict[int, int] = {}
    trans: dict[tuple[int, int, int], int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "base":
            if base is not None:
                raise SyncParseError("duplicate base line", lineno)
            if len(parts) != 3 or parts[2] != "pair":
                raise SyncParseError("expected 'base <k> pair'", lineno)
            base = int(parts[1])
            if base < 2:
                raise SyncParseError("base must be >= 2", lineno)
        elif parts[0] == "state":
            if len(parts) != 3:
                raise SyncParseError("expected 'state <id> <0|1>'", lineno)
            sid = int(parts[1])
            if sid in flags:
                raise SyncParseError(f"duplicate state {sid}", lineno)
            flag = int(parts[2])
            if flag not in (0, 1):
                raise SyncParseError("accepting flag must be 0 or 1", lineno)
            flags[sid] = flag
            state_order.append(sid)
        elif parts[0] == "trans":
            if base is None:
                raise SyncParseError("trans before base line", lineno)
            if len(parts) != 4 or "," not in parts[2]:
                raise SyncParseError("expected 'trans <from> <d1>,<d2> <to>'", lineno)
            src = int(parts[1])
            d1_s, d2_s = parts[2].split(",", 1)
            d1, d2 = int(d1_s), int(d2_s)
            tgt = int(parts[3])
            if not (0 <= d1 < base and 0 <= d2 < base):
                raise SyncParseError(f"digit pair ({d1},{d2}) out of range", lineno)
            if (src, d1, d2) in trans:
                raise SyncParseError(f"duplicate transition ({src},{d1},{d2})", lineno)
            trans[(src, d1, d2)] = tgt
        else:
            raise SyncParseError(f"unknown directive {parts[0]!r}", lineno)
    if base is None:
        raise SyncParseError("missing base line")
    if not state_order:
        raise SyncParseError("no states declared")
    index = {sid: i for i, sid in enumerate(state_order)}
    for (src, d1, d2), tgt in trans.items():
        if src not in index or tgt not in index:
            raise SyncParseError(f"transition ({src},{d1},{d2}) references undeclared state")
    accepting = frozenset(index[sid] for sid, flag in flags.items() if flag)
    return SyncDfa(
        k=base,
        n_states=len(state_order),
        initial=0,
        accepting=accepting,
        transitions={
            (index[src], d1, d2): index[tgt] for (src, d1, d2), tgt in trans.items()
        },
    )
