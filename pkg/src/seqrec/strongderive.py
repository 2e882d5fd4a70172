"""Derive exact subsequence equalities from an lsd-first automaton.

If the states reachable in exactly t symbols form a subset of those
reachable in exactly r < t symbols, every depth-t residue b has some
depth-r residue a with f(k**t n + b) = f(k**r n + a) for all n: both
digit prefixes land on the same state, after which n's digits drive the
automaton identically.  That family of equalities is a unit-coefficient
recursion scheme with n0 = 0, L = 0, U = k**r.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .dfao import Dfao, digits_lsd, reach_sets
from .recsolve import (
    COUNTEREXAMPLE,
    VERIFIED,
    Certificate,
    Oracle,
    RecursionScheme,
    _chunk_spans,
    _first_failure,
)
from fractions import Fraction


@dataclass(frozen=True)
class SubsequenceMapping:
    k: int
    r: int
    t: int
    mapping: tuple[int, ...]  # residue b in [0, k**t) -> a in [0, k**r)

    def __post_init__(self):
        if not 0 <= self.r < self.t:
            raise ValueError("need 0 <= r < t")
        if len(self.mapping) != self.k**self.t:
            raise ValueError("mapping must cover every residue b in [0, k**t)")
        kr = self.k**self.r
        for b, a in enumerate(self.mapping):
            if not 0 <= a < kr:
                raise ValueError(f"image of residue {b} out of [0, k**r)")


def find_rt(dfao: Dfao) -> tuple[int, int]:
    """Smallest t, then smallest r < t, with reach(t) a subset of reach(r).

    Pigeonhole over the 2**|Q| possible reach sets guarantees such a pair
    with t <= 2**|Q| + 1.
    """
    if dfao.digit_order != "lsd":
        raise ValueError("derivation requires an lsd-first automaton")
    limit = 2**dfao.n_states + 1
    sets = [rs.states for rs in reach_sets(dfao, limit)]
    for t in range(1, limit + 1):
        for r in range(t):
            if sets[t] <= sets[r]:
                return (r, t)
    raise RuntimeError("unreachable: reach sets repeat within 2**|Q| + 1 depths")


def _padded_word(value: int, k: int, length: int) -> list[int]:
    word = digits_lsd(value, k)
    word.extend([0] * (length - len(word)))
    return word


def derive_mapping(dfao: Dfao, r: int, t: int) -> SubsequenceMapping:
    """Map each depth-t residue to the smallest depth-r residue reaching the
    same state (reading length-padded lsd digit words)."""
    if dfao.digit_order != "lsd":
        raise ValueError("derivation requires an lsd-first automaton")
    if not 0 <= r < t:
        raise ValueError("need 0 <= r < t")
    k = dfao.k
    state_to_a: dict[int, int] = {}
    for a in range(k**r):
        q = dfao.run(_padded_word(a, k, r))
        state_to_a.setdefault(q, a)
    mapping = []
    for b in range(k**t):
        q = dfao.run(_padded_word(b, k, t))
        if q not in state_to_a:
            raise ValueError(
                f"depth-{t} reach set is not contained in depth-{r}: "
                f"state {q} (residue {b}) has no depth-{r} word"
            )
        mapping.append(state_to_a[q])
    return SubsequenceMapping(k=k, r=r, t=t, mapping=tuple(mapping))


def _verify_mapping_chunk(payload) -> dict | None:
    oracle, mapping, lo, hi = payload
    k = mapping.k
    kt = k**mapping.t
    kr = k**mapping.r
    images = mapping.mapping
    for n in range(lo, hi + 1):
        base_t = kt * n
        base_r = kr * n
        for b in range(kt):
            lhs = oracle(base_t + b)
            rhs = oracle(base_r + images[b])
            if lhs != rhs:
                return {"n": n, "b": b, "a": images[b], "lhs": str(lhs), "rhs": str(rhs)}
    return None


def verify_mapping(
    oracle: Oracle, mapping: SubsequenceMapping, n_max: int, jobs: int = 1
) -> Certificate:
    """Check f(k**t n + b) = f(k**r n + map(b)) exactly for 0 <= n <= n_max."""
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    claim = {"kind": "verify_mapping", "mapping": mapping_to_obj(mapping)}
    spans = _chunk_spans(0, n_max, jobs)
    witness = _first_failure(
        _verify_mapping_chunk, [(oracle, mapping, a, b) for a, b in spans], jobs
    )
    if witness is None:
        return Certificate(claim, VERIFIED, (0, n_max))
    return Certificate(claim, COUNTEREXAMPLE, (0, n_max), witness)


def mapping_to_scheme(mapping: SubsequenceMapping) -> RecursionScheme:
    """Unit-coefficient scheme: coefficient 1 at a = map(b), 0 elsewhere.

    n0 = 0, L = 0, U = k**r <= k**t, so the result is always strong.
    """
    kr = mapping.k**mapping.r
    zero = Fraction(0)
    one = Fraction(1)
    rows = []
    for a in mapping.mapping:
        row = [zero] * kr
        row[a] = one
        rows.append(tuple(row))
    return RecursionScheme(
        k=mapping.k,
        r=mapping.r,
        t=mapping.t,
        L=0,
        U=kr,
        n0=0,
        coeffs=tuple(rows),
    )


def mapping_to_obj(mapping: SubsequenceMapping) -> dict:
    return {
        "k": mapping.k,
        "r": mapping.r,
        "t": mapping.t,
        "map": {str(b): a for b, a in enumerate(mapping.mapping)},
    }


def mapping_from_obj(obj: dict) -> SubsequenceMapping:
    kt = int(obj["k"]) ** int(obj["t"])
    return SubsequenceMapping(
        k=int(obj["k"]),
        r=int(obj["r"]),
        t=int(obj["t"]),
        mapping=tuple(int(obj["map"][str(b)]) for b in range(kt)),
    )


def loads_mapping(text: str) -> SubsequenceMapping:
    return mapping_from_obj(json.loads(text))
