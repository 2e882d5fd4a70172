"""Independent reference computations used only to check the library.

These deliberately take different routes than the code under test:
fraction-free integer elimination for rank/consistency, bit tricks for the
word oracles, and explicit window sets for factor counts.
"""

from __future__ import annotations


def bareiss_rank(mat: list[list[int]]) -> int:
    """Rank of an integer matrix by fraction-free (Bareiss) elimination."""
    m = [row[:] for row in mat]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    prev = 1
    r = 0
    for c in range(cols):
        pr = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if pr is None:
            continue
        if pr != r:
            m[r], m[pr] = m[pr], m[r]
        for i in range(r + 1, rows):
            for j in range(c + 1, cols):
                m[i][j] = (m[i][j] * m[r][c] - m[i][c] * m[r][j]) // prev
            m[i][c] = 0
        prev = m[r][c]
        r += 1
        if r == rows:
            break
    return r


def classify_int_system(mat: list[list[int]], rhs: list[int], n: int) -> str:
    """'unique' | 'affine' | 'inconsistent' via two Bareiss ranks."""
    rank_a = bareiss_rank(mat) if mat else 0
    rank_aug = bareiss_rank([row + [b] for row, b in zip(mat, rhs)]) if mat else 0
    if rank_aug > rank_a:
        return "inconsistent"
    return "unique" if rank_a == n else "affine"


def parity_of_ones(n: int) -> int:
    return bin(n).count("1") % 2


def adjacent_ones_parity(n: int) -> int:
    return (n & (n >> 1)).bit_count() & 1


def digit_sum(k: int, n: int) -> int:
    total = 0
    while n:
        n, d = divmod(n, k)
        total += d
    return total


def distinct_windows(word: bytes, prefix_len: int, n: int) -> int:
    """Number of distinct length-n slices of word[:prefix_len], by a set."""
    if n == 0:
        return 1
    prefix = word[:prefix_len]
    return len({prefix[i : i + n] for i in range(len(prefix) - n + 1)})


def stable_window_count(word: bytes, n: int) -> int:
    """Reference doubling scan: count in prefix 16n, double until stable."""
    if n == 0:
        return 1
    factor = 16
    prev = distinct_windows(word, factor * n, n)
    while True:
        factor *= 2
        cur = distinct_windows(word, factor * n, n)
        if cur == prev:
            return cur
        prev = cur
