import random

from seqrec.windowcount import DistinctWindowCounter, new_window_floors

from oracles import distinct_windows, stable_window_count


def brute_floors(word: bytes) -> list[int]:
    # lo_m = least window length that gains a new distinct window at prefix m
    out = []
    seen_by_len: dict[int, set] = {}
    for m in range(1, len(word) + 1):
        prefix = word[:m]
        lo = None
        for n in range(1, m + 1):
            bucket = seen_by_len.setdefault(n, set())
            w = prefix[m - n : m]
            if w not in bucket:
                bucket.add(w)
                if lo is None:
                    lo = n
        # the new windows at step m are exactly the suffix lengths >= lo
        out.append(lo if lo is not None else m + 1)
    return out


def test_floors_match_brute_force_on_random_words():
    rng = random.Random(0)
    for _ in range(30):
        word = bytes(rng.randrange(2) for _ in range(rng.randrange(1, 60)))
        assert new_window_floors(word) == brute_floors(word)


def test_floor_counts_reconstruct_distinct_window_counts():
    rng = random.Random(1)
    for _ in range(20):
        word = bytes(rng.randrange(2) for _ in range(40))
        lo = new_window_floors(word)
        for m in range(1, len(word) + 1):
            for n in range(1, m + 1):
                viaformula = sum(1 for j in range(m) if lo[j] <= n) - (n - 1)
                assert viaformula == distinct_windows(word, m, n)


PERIODIC = bytes([0, 1, 1, 0] * 4096)


def _periodic_prefix(length: int) -> bytes:
    reps = -(-length // 4)
    return bytes([0, 1, 1, 0] * reps)[:length]


def test_counter_matches_reference_scan_on_periodic_word():
    counter = DistinctWindowCounter(_periodic_prefix)
    full = _periodic_prefix(1 << 16)
    for n in list(range(13)) + [50, 107]:
        assert counter.count(n) == stable_window_count(full, n)


def test_counter_zero_length_window():
    counter = DistinctWindowCounter(_periodic_prefix)
    assert counter.count(0) == 1


def _late_one_prefix(length: int) -> bytes:
    # all zeros except a single 1 at index 20: the length-1 count is not
    # settled until the prefix reaches past that position
    word = bytearray(length)
    if length > 20:
        word[20] = 1
    return bytes(word)


def test_counter_keeps_doubling_until_stable():
    counter = DistinctWindowCounter(_late_one_prefix)
    full = _late_one_prefix(1 << 16)
    for n in (1, 2, 3, 5):
        assert counter.count(n) == stable_window_count(full, n)
    assert counter.count(1) == 2


def test_counter_grows_on_demand():
    counter = DistinctWindowCounter(_periodic_prefix)
    first = counter.count(3)
    bigger = counter.count(2000)
    assert counter.count(3) == first
    assert bigger == stable_window_count(_periodic_prefix(1 << 17), 2000)
