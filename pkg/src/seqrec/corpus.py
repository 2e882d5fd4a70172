"""Built-in integer sequence oracles behind one uniform interface.

All oracles are total on n >= 0, deterministic, and exact (Python ints).
The one floating-point routine is growth_exponent, which feeds only the
one-sided synchronization growth screen.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

from .windowcount import DistinctWindowCounter


def floor_log(k: int, n: int) -> int:
    """Largest s with k**s <= n, by integer comparison only (no float log)."""
    if k < 2:
        raise ValueError("base must be >= 2")
    if n < 1:
        raise ValueError("n must be >= 1")
    s, p = 0, k
    while p <= n:
        p *= k
        s += 1
    return s


def eval_g(k: int, ell: int, n: int) -> int:
    """1 for n = 0, else 1 + ell**floor_log(k, n).

    The value jumps at each power of k and is constant in between; with
    ell != k it grows like n**(log ell / log k).
    """
    if k < 2 or ell < 2:
        raise ValueError("k and ell must be >= 2")
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return 1
    return 1 + ell ** floor_log(k, n)


def eval_s(k: int, n: int) -> int:
    """Sum of the base-k digits of n."""
    if k < 2:
        raise ValueError("base must be >= 2")
    if n < 0:
        raise ValueError("n must be >= 0")
    total = 0
    while n:
        n, d = divmod(n, k)
        total += d
    return total


def tm(n: int) -> int:
    """Thue-Morse bit: parity of the number of 1s in the binary digits of n."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return n.bit_count() & 1


def tm_prefix(length: int) -> bytes:
    """First `length` letters of the Thue-Morse word as 0/1 bytes."""
    word = bytearray(b"\x00")
    while len(word) < length:
        word.extend(b ^ 1 for b in word)
    return bytes(word[:length])


_TM_WINDOWS = DistinctWindowCounter(tm_prefix)


def tm_factor_complexity(n: int) -> int:
    """Number of distinct length-n blocks occurring in the Thue-Morse word.

    Counted from finite prefixes: distinct length-n windows of the prefix
    of length C*n, with C doubled from 16 until one doubling leaves the
    count unchanged.  No closed-form recurrence is consulted, so the value
    can serve as an independent oracle for fitted recursions.  n = 0 counts
    the empty block: 1.
    """
    return _TM_WINDOWS.count(n)


def warm_factor_complexity(n_max: int) -> None:
    """Precompute tm_factor_complexity for all n <= n_max in one batch."""
    _TM_WINDOWS.ensure(n_max)


_H_MEMO: dict[int, int] = {0: 0}


def eval_h(n: int) -> int:
    """Three-branch base-3 recursion:

        h(0) = 0
        h(n) = h(n // 3) + (n // 3) % 2    if n % 3 is 0 or 2
        h(n) = h(n // 9) + 1               if n % 3 == 1

    Memoized top-down.  The values coincide with the 3-adic valuation of
    the central Delannoy numbers (spot-checked in the test suite).
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    memo = _H_MEMO
    got = memo.get(n)
    if got is not None:
        return got
    stack = [n]
    while stack:
        m = stack[-1]
        if m in memo:
            stack.pop()
            continue
        sub = m // 9 if m % 3 == 1 else m // 3
        prev = memo.get(sub)
        if prev is None:
            stack.append(sub)
            continue
        memo[m] = prev + 1 if m % 3 == 1 else prev + (m // 3) % 2
        stack.pop()
    return memo[n]


def delannoy(n: int) -> int:
    """Central Delannoy number: sum over i of C(n,i) * C(n+i,i), exactly."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return sum(math.comb(n, i) * math.comb(n + i, i) for i in range(n + 1))


def padic_valuation(p: int, m: int) -> int:
    """Largest e with p**e dividing m; m must be >= 1."""
    if p < 2:
        raise ValueError("p must be >= 2")
    if m < 1:
        raise ValueError("valuation undefined for m < 1")
    e = 0
    while m % p == 0:
        m //= p
        e += 1
    return e


def identity(n: int) -> int:
    if n < 0:
        raise ValueError("n must be >= 0")
    return n


def growth_exponent(oracle: Callable[[int], int], k: int, depth: int) -> float:
    """Least-squares slope of log(oracle(k**j)) against j*log(k), j = 2..depth.

    The only floating-point computation in the package; used solely as a
    one-sided screen (a slope well above 1 rules out linear growth).
    """
    if k < 2:
        raise ValueError("base must be >= 2")
    if depth < 4:
        raise ValueError("depth must be >= 4")
    logk = math.log(k)
    xs, ys = [], []
    for j in range(2, depth + 1):
        v = oracle(k**j)
        if v <= 0:
            raise ValueError(f"oracle must be positive at k**{j} for the growth fit")
        xs.append(j * logk)
        ys.append(math.log(v))
    n = len(xs)
    mx = sum(xs) / n
    my = sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    return sxy / sxx


@dataclass(frozen=True)
class SequenceOracle:
    """A named total map n -> int together with its parameter set."""

    name: str
    params: tuple[tuple[str, int], ...]
    fn: Callable[[int], int] = field(compare=False, repr=False)

    def __call__(self, n: int) -> int:
        return self.fn(n)

    def __reduce__(self):
        # pickles by registry lookup so oracles cross process boundaries
        return (_restore_oracle, (self.name, self.params))

    def label(self) -> str:
        if not self.params:
            return self.name
        inner = ",".join(f"{k}={v}" for k, v in self.params)
        return f"{self.name}({inner})"


def _restore_oracle(name: str, params: tuple[tuple[str, int], ...]) -> SequenceOracle:
    return make_oracle(name, **dict(params))


_REGISTRY: dict[str, tuple[tuple[str, ...], Callable[..., Callable[[int], int]]]] = {
    "g": (("k", "ell"), lambda k, ell: lambda n: eval_g(k, ell, n)),
    "s": (("k",), lambda k: lambda n: eval_s(k, n)),
    "tm": ((), lambda: tm),
    "tmfc": ((), lambda: tm_factor_complexity),
    "h": ((), lambda: eval_h),
    "d": ((), lambda: delannoy),
    "id": ((), lambda: identity),
}


def oracle_names() -> list[str]:
    return sorted(_REGISTRY)


def make_oracle(name: str, **params: int) -> SequenceOracle:
    """Build a registered oracle; raises ValueError on unknown names or params."""
    if name not in _REGISTRY:
        raise ValueError(f"unknown sequence {name!r}; known: {', '.join(oracle_names())}")
    required, factory = _REGISTRY[name]
    missing = [p for p in required if p not in params]
    if missing:
        raise ValueError(f"sequence {name!r} needs parameters: {', '.join(missing)}")
    extra = [p for p in params if p not in required]
    if extra:
        raise ValueError(f"sequence {name!r} does not take: {', '.join(extra)}")
    fn = factory(**{p: params[p] for p in required})
    # fail fast on bad parameter values (e.g. k < 2)
    fn(0)
    return SequenceOracle(name, tuple((p, params[p]) for p in required), fn)


def check_within_level_collapse(
    k: int, ell: int, t: int, n_max: int
) -> dict | None:
    """Check g(k**t n + b) = (1 - ell**j) g(k**t n) + ell**j g(k**t n + 1)
    for all 0 <= j < t, k**j <= b < k**(j+1), 0 <= n <= n_max.

    Returns None when every instance holds, else the first failing instance.
    """
    kt = k**t
    for n in range(n_max + 1):
        g0 = eval_g(k, ell, kt * n)
        g1 = eval_g(k, ell, kt * n + 1)
        for j in range(t):
            lj = ell**j
            rhs = (1 - lj) * g0 + lj * g1
            for b in range(k**j, k ** (j + 1)):
                lhs = eval_g(k, ell, kt * n + b)
                if lhs != rhs:
                    return {"n": n, "j": j, "b": b, "lhs": lhs, "rhs": rhs}
    return None


def check_two_level_reduction(
    k: int,
    ell: int,
    n_max: int,
    a_values: list[int] | None = None,
    b_values: list[int] | None = None,
) -> dict | None:
    """Check the three exact reductions of g at modulus k**2:

        g(k^2 n)     = -ell g(n) + (ell + 1) g(kn)
        g(k^2 n + a) = -ell g(n) + ell g(kn) + g(kn + 1)      for 1 <= a < k
        g(k^2 n + b) = -ell g(n) + g(kn) + ell g(kn + 1)      for k <= b < k^2

    a_values / b_values restrict which offsets are sampled (defaults:
    exhaustive).  Returns None, or the first failing instance.
    """
    if a_values is None:
        a_values = list(range(1, k))
    if b_values is None:
        b_values = list(range(k, k * k))
    kk = k * k
    for n in range(n_max + 1):
        gn = eval_g(k, ell, n)
        gkn = eval_g(k, ell, k * n)
        gkn1 = eval_g(k, ell, k * n + 1)
        lhs0 = eval_g(k, ell, kk * n)
        if lhs0 != -ell * gn + (ell + 1) * gkn:
            return {"eq": 1, "n": n, "lhs": lhs0}
        rhs_a = -ell * gn + ell * gkn + gkn1
        for a in a_values:
            if eval_g(k, ell, kk * n + a) != rhs_a:
                return {"eq": 2, "n": n, "a": a, "rhs": rhs_a}
        rhs_b = -ell * gn + gkn + ell * gkn1
        for b in b_values:
            if eval_g(k, ell, kk * n + b) != rhs_b:
                return {"eq": 3, "n": n, "b": b, "rhs": rhs_b}
    return None
