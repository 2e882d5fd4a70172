"""Distinct fixed-length window counts over prefixes of an infinite 0/1 word.

The quantity served is: for a target length n >= 1, count the distinct
length-n windows in the prefix of length C*n, then double C (starting at
16) until one doubling leaves the count unchanged; report that stable
count.  For uniformly recurrent words the stable count is the number of
distinct length-n blocks of the whole infinite word.

Scanning each prefix per query would be quadratic over a batch of
queries.  Instead one online suffix-automaton pass records, for every
prefix length m, the least window length that is new at m: appending
character m creates exactly one previously-unseen window of every length
in [lo_m, m] (the suffixes longer than the longest earlier occurrence)
and none shorter, and state cloning never disturbs the per-length totals.
Hence

    count(prefix M, length n) = #{m <= M : lo_m <= n} - (n - 1)

and the C*n-prefix counts for every n collapse to one cumulative
histogram of max(ceil(m/C), lo_m).
"""

from __future__ import annotations

from typing import Callable

import numpy as np

_START_FACTOR = 16
_MIN_CAP = 1024


class _Sam:
    """Online suffix automaton over a 0/1 word; binary alphabet only."""

    __slots__ = ("length", "link", "t0", "t1", "last")

    def __init__(self):
        self.length = [0]
        self.link = [-1]
        self.t0 = [-1]
        self.t1 = [-1]
        self.last = 0

    def extend(self, chunk: bytes) -> list[int]:
        """Append characters; return lo_m for each new prefix length m."""
        length, link, t0, t1 = self.length, self.link, self.t0, self.t1
        last = self.last
        floors = []
        for ch in chunk:
            trans = t1 if ch else t0
            cur = len(length)
            length.append(length[last] + 1)
            link.append(-1)
            t0.append(-1)
            t1.append(-1)
            p = last
            while p != -1 and trans[p] == -1:
                trans[p] = cur
                p = link[p]
            if p == -1:
                link[cur] = 0
            else:
                q = trans[p]
                if length[p] + 1 == length[q]:
                    link[cur] = q
                else:
                    clone = len(length)
                    length.append(length[p] + 1)
                    link.append(link[q])
                    t0.append(t0[q])
                    t1.append(t1[q])
                    while p != -1 and trans[p] == q:
                        trans[p] = clone
                        p = link[p]
                    link[q] = clone
                    link[cur] = clone
            last = cur
            floors.append(length[link[cur]] + 1)
        self.last = last
        return floors


def new_window_floors(word: bytes) -> list[int]:
    """lo_m for m = 1..len(word): least window length new at prefix length m."""
    return _Sam().extend(word)


class DistinctWindowCounter:
    """Stable distinct-window counts for an infinite 0/1 word.

    `prefix_fn(length)` must return the word's prefix of that length as
    bytes with values in {0, 1}.  One suffix automaton is shared by all
    queries and only ever extended, so a batch of queries up to n costs
    O(32 n) amortized.
    """

    def __init__(self, prefix_fn: Callable[[int], bytes]):
        self._prefix_fn = prefix_fn
        self._sam = _Sam()
        self._floors: list[int] = []
        self._lo: np.ndarray | None = None  # np mirror of _floors
        self._cap = 0  # counts known for all n <= _cap
        self._values: np.ndarray | None = None

    def count(self, n: int) -> int:
        """Distinct length-n windows, stable under prefix doubling; count(0) = 1."""
        if n < 0:
            raise ValueError("window length must be >= 0")
        if n == 0:
            return 1
        if n > self._cap:
            self.ensure(n)
        return int(self._values[n])

    def ensure(self, n_max: int) -> None:
        """Precompute counts for every n <= n_max."""
        if n_max <= self._cap:
            return
        cap = max(2 * self._cap, n_max, _MIN_CAP)
        self._extend_word(2 * _START_FACTOR * cap)
        lo = self._lo
        m_count = 2 * _START_FACTOR * cap
        m_idx = np.arange(1, m_count + 1, dtype=np.int64)
        t16 = self._prefix_counts(lo, m_idx, _START_FACTOR, cap)
        t32 = self._prefix_counts(lo, m_idx, 2 * _START_FACTOR, cap)
        values = t16.copy()
        values[0] = 1
        unstable = np.nonzero(t16 != t32)[0]
        for n in unstable:
            if n >= 1:
                values[n] = self._count_by_doubling(int(n), int(t32[n]))
        self._values = values
        self._cap = cap

    def _prefix_counts(self, lo: np.ndarray, m_idx: np.ndarray, factor: int, cap: int) -> np.ndarray:
        # key_m = max(ceil(m/factor), lo_m); then
        # count(factor*n, n) = #{m : key_m <= n} - (n - 1)
        limit = factor * cap
        key = np.maximum(-(-m_idx[:limit] // factor), lo[:limit])
        np.minimum(key, cap + 1, out=key)
        hist = np.bincount(key, minlength=cap + 2)
        cum = np.cumsum(hist)
        n = np.arange(0, cap + 1, dtype=np.int64)
        return cum[n] - (n - 1)

    def _count_by_doubling(self, n: int, last: int) -> int:
        # continue doubling past 32n until one doubling is a fixed point
        factor = 4 * _START_FACTOR
        while True:
            cur = self._count_in_prefix(factor * n, n)
            if cur == last:
                return cur
            last = cur
            factor *= 2

    def _count_in_prefix(self, m: int, n: int) -> int:
        self._extend_word(m)
        return max(0, int(np.count_nonzero(self._lo[:m] <= n)) - (n - 1))

    def _extend_word(self, target_len: int) -> None:
        have = len(self._floors)
        if target_len <= have:
            return
        word = self._prefix_fn(target_len)
        if len(word) < target_len:
            raise ValueError("prefix_fn returned a shorter prefix than requested")
        self._floors.extend(self._sam.extend(word[have:target_len]))
        self._lo = np.asarray(self._floors, dtype=np.int64)
