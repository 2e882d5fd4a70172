"""Window recursion schemes over base-k subsequences.

A scheme asserts, for every residue 0 <= b < k**t and every n >= n0,

    f(k**t n + b) = sum_{L <= a < U} coeffs[b][a - L] * f(k**r n + a).

This module fits such schemes from sampled values with exact rational
solving, verifies them exactly over a range, searches bounded shape space,
and carries the two refutation procedures for the floor-log power family.
Outcomes travel as machine-readable certificates.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Union

from .corpus import floor_log
from .ratlin import Affine, Inconsistent, LinearSystem, Unique, solve_exact

Oracle = Callable[[int], int]

VERIFIED = "verified"
COUNTEREXAMPLE = "counterexample"
NO_SOLUTION = "no_solution"
EXHAUSTED = "exhausted"


@dataclass(frozen=True)
class RecursionScheme:
    k: int
    r: int
    t: int
    L: int
    U: int
    n0: int
    coeffs: tuple[tuple[Fraction, ...], ...]  # indexed by residue b
    # generator offsets whose coefficient was a free variable pinned to 0
    pinned: tuple[tuple[int, tuple[int, ...]], ...] = field(default=(), compare=False)

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("k must be >= 2")
        if not 0 <= self.r < self.t:
            raise ValueError("need 0 <= r < t")
        if self.L >= self.U:
            raise ValueError("need L < U")
        if self.n0 < 0:
            raise ValueError("n0 must be >= 0")
        if self.k**self.r * self.n0 + self.L < 0:
            raise ValueError("n0 too small: generator index k**r * n0 + L is negative")
        if len(self.coeffs) != self.k**self.t:
            raise ValueError("one coefficient row per residue b in [0, k**t) required")
        w = self.U - self.L
        for b, row in enumerate(self.coeffs):
            if len(row) != w:
                raise ValueError(f"residue {b}: expected {w} coefficients")

    @property
    def width(self) -> int:
        return self.U - self.L

    @property
    def is_strong(self) -> bool:
        """n0 = 0, L >= 0 and U <= k**t."""
        return self.n0 == 0 and self.L >= 0 and self.U <= self.k**self.t


@dataclass(frozen=True)
class Certificate:
    """Machine-checkable outcome of a verification, refutation, or search."""

    claim: dict
    status: str
    checked_range: tuple[int, int] | None = None
    witness: dict | None = None
    scheme: RecursionScheme | None = None

    @property
    def ok(self) -> bool:
        return self.status == VERIFIED


FitResult = Union[RecursionScheme, Certificate]


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def _bounds(range_spec) -> tuple[int, int]:
    """Accept (lo, hi) inclusive or a range object."""
    if isinstance(range_spec, range):
        if len(range_spec) == 0:
            raise ValueError("empty range")
        return range_spec[0], range_spec[-1]
    lo, hi = range_spec
    return int(lo), int(hi)


def _cached(oracle: Oracle, cache: dict | None) -> Oracle:
    if cache is None:
        cache = {}

    def f(m: int) -> int:
        v = cache.get(m)
        if v is None:
            v = oracle(m)
            cache[m] = v
        return v

    return f


def fit(
    oracle: Oracle,
    k: int,
    r: int,
    t: int,
    L: int,
    U: int,
    n0: int = 0,
    train_range=(0, 40),
    cache: dict | None = None,
) -> FitResult:
    """Solve for one coefficient row per residue from sampled values.

    Builds, for each residue b, the exact linear system over all usable n
    in train_range and solves it.  Returns the RecursionScheme when every
    residue admits an exact solution (free variables pinned to 0 and
    recorded on the scheme), otherwise a no-solution Certificate whose
    witness names the residue and the sample rows that cannot be combined
    consistently.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    if not 0 <= r < t:
        raise ValueError("need 0 <= r < t")
    if L >= U:
        raise ValueError("need L < U")
    kt, kr = k**t, k**r
    # with L < 0 the scheme only makes sense once every generator index is
    # nonnegative, so the effective n0 may be larger than requested
    n_min = max(n0, _ceil_div(-L, kr)) if L < 0 else n0
    lo, hi = _bounds(train_range)
    ns = [n for n in range(lo, hi + 1) if n >= n_min]
    width = U - L
    if len(ns) < width + 2:
        raise ValueError(
            f"train range provides {len(ns)} usable samples; need at least {width + 2}"
        )
    f = _cached(oracle, cache)
    claim = {
        "kind": "fit",
        "k": k, "r": r, "t": t, "L": L, "U": U, "n0": n_min,
        "train_range": [ns[0], ns[-1]],
    }
    rows_coeffs = [[f(kr * n + a) for a in range(L, U)] for n in ns]
    coeff_rows: list[tuple[Fraction, ...]] = []
    pinned: list[tuple[int, tuple[int, ...]]] = []
    for b in range(kt):
        system = LinearSystem.build(
            ((rows_coeffs[i], f(kt * n + b)) for i, n in enumerate(ns)), width
        )
        res = solve_exact(system)
        if isinstance(res, Inconsistent):
            return Certificate(
                claim=claim,
                status=NO_SOLUTION,
                checked_range=(ns[0], ns[-1]),
                witness={
                    "b": b,
                    "inconsistent_sample_n": [ns[i] for i in res.witness_rows],
                },
            )
        if isinstance(res, Unique):
            coeff_rows.append(res.solution)
        else:
            coeff_rows.append(res.particular)
            pinned.append((b, tuple(L + c for c in res.free_cols)))
    return RecursionScheme(
        k=k, r=r, t=t, L=L, U=U, n0=n_min,
        coeffs=tuple(coeff_rows), pinned=tuple(pinned),
    )


def _coeff_terms(scheme: RecursionScheme) -> list[list[tuple[int, object]]]:
    """Per residue: (generator index, coefficient) with zeros dropped and
    integer-valued rationals demoted to int for speed."""
    out = []
    for row in scheme.coeffs:
        terms = []
        for i, c in enumerate(row):
            if c != 0:
                terms.append((i, int(c) if c.denominator == 1 else c))
        out.append(terms)
    return out


def _verify_scheme_chunk(payload) -> dict | None:
    oracle, scheme, lo, hi = payload
    kt = scheme.k**scheme.t
    kr = scheme.k**scheme.r
    offsets = range(scheme.L, scheme.U)
    rows = _coeff_terms(scheme)
    for n in range(lo, hi + 1):
        base_r = kr * n
        gens = [oracle(base_r + a) for a in offsets]
        base_t = kt * n
        for b in range(kt):
            rhs = sum(c * gens[i] for i, c in rows[b])
            lhs = oracle(base_t + b)
            if rhs != lhs:
                return {"n": n, "b": b, "lhs": str(lhs), "rhs": str(rhs)}
    return None


def _chunk_spans(lo: int, hi: int, jobs: int) -> list[tuple[int, int]]:
    total = hi - lo + 1
    parts = max(1, min(total, jobs * 4))
    size = _ceil_div(total, parts)
    spans = []
    start = lo
    while start <= hi:
        end = min(start + size - 1, hi)
        spans.append((start, end))
        start = end + 1
    return spans


def _first_failure(chunk_fn, payloads, jobs: int) -> dict | None:
    """Earliest chunk's failure wins, so the outcome does not depend on jobs."""
    if jobs <= 1 or len(payloads) <= 1:
        for p in payloads:
            w = chunk_fn(p)
            if w is not None:
                return w
        return None
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        for w in ex.map(chunk_fn, payloads):
            if w is not None:
                return w
    return None


def verify(
    oracle: Oracle,
    scheme: RecursionScheme,
    verify_range=(0, 10000),
    jobs: int = 1,
) -> Certificate:
    """Check the scheme's equation exactly at every (n, b) in range.

    Returns Verified, or the first counterexample in lexicographic (n, b)
    order.  An empty effective range verifies vacuously (flagged).
    """
    lo, hi = _bounds(verify_range)
    n_start = max(lo, scheme.n0)
    claim = {
        "kind": "verify",
        "scheme": scheme_to_obj(scheme),
        "requested_range": [lo, hi],
    }
    if n_start > hi:
        return Certificate(claim | {"vacuous": True}, VERIFIED, None)
    spans = _chunk_spans(n_start, hi, jobs)
    witness = _first_failure(
        _verify_scheme_chunk, [(oracle, scheme, a, b) for a, b in spans], jobs
    )
    if witness is None:
        return Certificate(claim, VERIFIED, (n_start, hi))
    return Certificate(claim, COUNTEREXAMPLE, (n_start, hi), witness)


def search(
    oracle: Oracle,
    k: int,
    max_t: int = 3,
    max_band: int = 8,
    n0_candidates: tuple[int, ...] = (0, 1),
    verify_range=(0, 10000),
    jobs: int = 1,
) -> Certificate:
    """Enumerate candidate shapes in increasing cost and return the first
    fit+verified scheme, else an exhaustion certificate.

    Cost order: t ascending, then window width ascending, then L descending
    from 0 (windows starting above 0 are sub-windows of an L = 0 window and
    add nothing), then r ascending, then n0.  For L < 0, n0 is raised to the
    least value keeping every generator index nonnegative.
    """
    if max_t < 1:
        raise ValueError("max_t must be >= 1")
    if max_band < 1:
        raise ValueError("max_band must be >= 1")
    claim = {
        "kind": "search",
        "k": k,
        "max_t": max_t,
        "max_band": max_band,
        "verify_range": list(_bounds(verify_range)),
    }
    tried = 0
    cache: dict[int, int] = {}
    for t in range(1, max_t + 1):
        for width in range(1, max_band + 1):
            for L in range(0, -max_band - 1, -1):
                U = L + width
                for r in range(t):
                    seen_n0 = set()
                    for n0 in n0_candidates:
                        eff_n0 = max(n0, _ceil_div(-L, k**r)) if L < 0 else n0
                        if eff_n0 in seen_n0:
                            continue
                        seen_n0.add(eff_n0)
                        train_hi = eff_n0 + max(32, 4 * width + 16)
                        tried += 1
                        got = fit(
                            oracle, k, r, t, L, U,
                            n0=eff_n0, train_range=(0, train_hi), cache=cache,
                        )
                        if isinstance(got, Certificate):
                            continue
                        cert = verify(oracle, got, verify_range, jobs=jobs)
                        if cert.status == VERIFIED:
                            return Certificate(
                                claim | {"candidates_tried": tried},
                                VERIFIED,
                                cert.checked_range,
                                scheme=got,
                            )
    return Certificate(claim | {"candidates_tried": tried}, EXHAUSTED, None)


def refute_g_strong(k: int, ell: int, r: int, t: int) -> Certificate:
    """Two-sample refutation for the floor-log power family, window [0, k**r).

    Within a level the generators collapse pairwise to the two sequences at
    offsets 0 and 1, so any claimed relation forces a single aggregate
    coefficient c0 + c1.  Sampling at n = 1 and n = k pins it to two exact
    ratios that differ whenever r < t.
    """
    if k < 2 or ell < 2:
        raise ValueError("k and ell must be >= 2")
    if not 0 <= r < t:
        raise ValueError("need 0 <= r < t")
    lhs1, fac1 = ell**t + 1, ell**r + 1
    lhs2, fac2 = ell ** (t + 1) + 1, ell ** (r + 1) + 1
    system = LinearSystem.build([([fac1], lhs1), ([fac2], lhs2)], 1)
    res = solve_exact(system)
    if not isinstance(res, Inconsistent):
        raise RuntimeError("two-sample system unexpectedly consistent")
    ratio1 = Fraction(lhs1, fac1)
    ratio2 = Fraction(lhs2, fac2)
    return Certificate(
        claim={
            "kind": "refute_strong",
            "family": "g",
            "k": k, "ell": ell, "r": r, "t": t,
            "window": [0, k**r],
        },
        status=NO_SOLUTION,
        witness={
            "n_samples": [1, k],
            "equations": [
                {"lhs": str(lhs1), "factor": str(fac1)},
                {"lhs": str(lhs2), "factor": str(fac2)},
            ],
            "ratio_at_n1": [str(ratio1.numerator), str(ratio1.denominator)],
            "ratio_at_n2": [str(ratio2.numerator), str(ratio2.denominator)],
            "ratios_equal": ratio1 == ratio2,
        },
    )


def refute_g_general(k: int, ell: int, r: int, t: int, L: int, U: int) -> Certificate:
    """Refutation for arbitrary windows [L, U) on the floor-log power family.

    Takes the least s >= 1 with k**(r+s-1) >= max(-L, U); at the samples
    n1 = k**(s-1)(k+1) and n2 = k**s(k+1) every generator index lands in a
    single power block, so the relation collapses to an aggregate
    coefficient c with

        ell**(t+s) + 1   = (ell**(r+s) + 1) c
        ell**(t+s+1) + 1 = (ell**(r+s+1) + 1) c.

    Scaling the first by ell and subtracting gives (ell-1) = (ell-1) c, so
    c = 1; subtracting them directly then needs (ell-1) ell**(t+s) =
    (ell-1) ell**(r+s), impossible for r < t.
    """
    if k < 2 or ell < 2:
        raise ValueError("k and ell must be >= 2")
    if not 0 <= r < t:
        raise ValueError("need 0 <= r < t")
    if L >= U:
        raise ValueError("need L < U")
    bound = max(-L, U)
    s = 1
    while k ** (r + s - 1) < bound:
        s += 1
    n1 = k ** (s - 1) * (k + 1)
    n2 = k**s * (k + 1)
    kr = k**r
    for n, level in ((n1, r + s), (n2, r + s + 1)):
        for a in range(L, U):
            if floor_log(k, kr * n + a) != level:
                raise RuntimeError(f"sample n={n} does not isolate a power block")
    lhs1, fac1 = ell ** (t + s) + 1, ell ** (r + s) + 1
    lhs2, fac2 = ell ** (t + s + 1) + 1, ell ** (r + s + 1) + 1
    system = LinearSystem.build([([fac1], lhs1), ([fac2], lhs2)], 1)
    res = solve_exact(system)
    if not isinstance(res, Inconsistent):
        raise RuntimeError("aggregate system unexpectedly consistent")
    contradiction_lhs = (ell - 1) * ell ** (t + s)
    contradiction_rhs = (ell - 1) * ell ** (r + s)
    return Certificate(
        claim={
            "kind": "refute_general",
            "family": "g",
            "k": k, "ell": ell, "r": r, "t": t, "L": L, "U": U,
        },
        status=NO_SOLUTION,
        witness={
            "s": s,
            "n_samples": [str(n1), str(n2)],
            "generator_levels": [r + s, r + s + 1],
            "equations": [
                {"lhs": str(lhs1), "factor": str(fac1)},
                {"lhs": str(lhs2), "factor": str(fac2)},
            ],
            "scaled_difference": {
                "lhs": str(ell - 1),
                "factor": str(ell - 1),
                "aggregate_coefficient": "1",
            },
            "contradiction": {
                "lhs": str(contradiction_lhs),
                "rhs": str(contradiction_rhs),
                "equal": contradiction_lhs == contradiction_rhs,
            },
        },
    )


# ---------------------------------------------------------------------------
# JSON serialization.  Rationals travel as ["num", "den"] decimal strings;
# witness values that may be huge travel as decimal strings too.

def scheme_to_obj(scheme: RecursionScheme) -> dict:
    return {
        "k": scheme.k,
        "r": scheme.r,
        "t": scheme.t,
        "L": scheme.L,
        "U": scheme.U,
        "n0": scheme.n0,
        "coeffs": {
            str(b): [[str(c.numerator), str(c.denominator)] for c in row]
            for b, row in enumerate(scheme.coeffs)
        },
    }


def scheme_from_obj(obj: dict) -> RecursionScheme:
    kt = int(obj["k"]) ** int(obj["t"])
    coeffs = []
    for b in range(kt):
        row = obj["coeffs"][str(b)]
        coeffs.append(tuple(Fraction(int(num), int(den)) for num, den in row))
    return RecursionScheme(
        k=int(obj["k"]),
        r=int(obj["r"]),
        t=int(obj["t"]),
        L=int(obj["L"]),
        U=int(obj["U"]),
        n0=int(obj["n0"]),
        coeffs=tuple(coeffs),
    )


def certificate_to_obj(cert: Certificate) -> dict:
    return {
        "claim": cert.claim,
        "status": cert.status,
        "range": list(cert.checked_range) if cert.checked_range else None,
        "witness": cert.witness,
    }


def document(cert: Certificate, scheme: RecursionScheme | None = None) -> dict:
    """The {"scheme": ..., "certificate": ...} output contract."""
    use = scheme if scheme is not None else cert.scheme
    return {
        "scheme": scheme_to_obj(use) if use is not None else None,
        "certificate": certificate_to_obj(cert),
    }


def dumps_document(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def load_scheme(text: str) -> RecursionScheme:
    """Read a scheme from a JSON document ({"scheme": ...} or bare object)."""
    obj = json.loads(text)
    if "scheme" in obj and isinstance(obj["scheme"], dict):
        obj = obj["scheme"]
    return scheme_from_obj(obj)
