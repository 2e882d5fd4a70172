import json
import random
from fractions import Fraction

import pytest

from seqrec import corpus, recsolve
from seqrec.recsolve import (
    COUNTEREXAMPLE,
    EXHAUSTED,
    NO_SOLUTION,
    VERIFIED,
    Certificate,
    RecursionScheme,
    certificate_to_obj,
    document,
    dumps_document,
    fit,
    load_scheme,
    refute_g_general,
    refute_g_strong,
    scheme_from_obj,
    scheme_to_obj,
    search,
    verify,
)


def unit_scheme(k, r, t, images, n0=0):
    kr = k**r
    rows = []
    for a in images:
        row = [Fraction(0)] * kr
        row[a] = Fraction(1)
        rows.append(tuple(row))
    return RecursionScheme(k=k, r=r, t=t, L=0, U=kr, n0=n0, coeffs=tuple(rows))


def test_fit_identity_sequence():
    got = fit(corpus.identity, 2, 1, 2, 0, 2, train_range=(0, 12))
    assert isinstance(got, RecursionScheme)
    cert = verify(corpus.identity, got, (0, 500))
    assert cert.status == VERIFIED
    # the generators 2n and 2n+1 are independent, so the rows are forced
    assert got.coeffs[0] == (Fraction(2), Fraction(0))
    assert got.coeffs[1] == (Fraction(1), Fraction(1))
    assert got.is_strong


def test_fit_rejects_degenerate_parameters():
    with pytest.raises(ValueError):
        fit(corpus.identity, 2, 2, 2, 0, 2)
    with pytest.raises(ValueError):
        fit(corpus.identity, 2, 1, 2, 3, 3)
    with pytest.raises(ValueError, match="usable samples"):
        fit(corpus.identity, 2, 1, 2, 0, 2, train_range=(0, 2))


def test_fit_g_family_no_solution_with_witness():
    g = corpus.make_oracle("g", k=2, ell=3)
    got = fit(g, 2, 1, 2, 0, 2, train_range=(0, 32))
    assert isinstance(got, Certificate)
    assert got.status == NO_SOLUTION
    assert got.witness["b"] == 0
    rows = got.witness["inconsistent_sample_n"]
    assert rows and all(0 <= n <= 32 for n in rows)


def test_fit_negative_window_needs_shifted_start():
    # L = -1 at r = 0 forces the first usable sample to n = 1
    seq = corpus.identity
    got = fit(seq, 2, 0, 1, -1, 1, n0=0, train_range=(0, 20))
    assert isinstance(got, RecursionScheme)
    assert verify(seq, got, (1, 200)).status == VERIFIED


def test_scheme_validation():
    with pytest.raises(ValueError, match="n0 too small"):
        RecursionScheme(2, 0, 1, -2, 0, 0, ((Fraction(1), Fraction(0)),) * 2)
    with pytest.raises(ValueError, match="one coefficient row"):
        RecursionScheme(2, 1, 2, 0, 2, 0, ((Fraction(1), Fraction(0)),))


def test_is_strong_predicate():
    strong = unit_scheme(2, 1, 2, (0, 1, 1, 0))
    assert strong.is_strong
    assert not unit_scheme(2, 1, 2, (0, 1, 1, 0), n0=1).is_strong
    wide = RecursionScheme(
        2, 1, 2, -1, 1, 1, tuple((Fraction(0), Fraction(1)) for _ in range(4))
    )
    assert not wide.is_strong  # L < 0
    tall = RecursionScheme(
        2, 1, 2, 0, 5, 0, tuple((Fraction(1),) + (Fraction(0),) * 4 for _ in range(4))
    )
    assert not tall.is_strong  # U > k**t


def test_verify_counterexample_is_lexicographically_first():
    scheme = unit_scheme(2, 1, 2, (0, 1, 1, 0))
    bad = unit_scheme(2, 1, 2, (0, 0, 1, 0))  # wrong image for b = 1
    assert verify(corpus.tm, scheme, (0, 2000)).status == VERIFIED
    cert = verify(corpus.tm, bad, (0, 2000))
    assert cert.status == COUNTEREXAMPLE
    assert (cert.witness["n"], cert.witness["b"]) == (0, 1)
    assert cert.witness["lhs"] == "1" and cert.witness["rhs"] == "0"


def test_verify_vacuous_range():
    scheme = unit_scheme(2, 1, 2, (0, 1, 1, 0), n0=10)
    cert = verify(corpus.tm, scheme, (0, 5))
    assert cert.status == VERIFIED
    assert cert.claim.get("vacuous") is True
    assert cert.checked_range is None


def test_verify_jobs_independent():
    scheme = unit_scheme(2, 1, 2, (0, 1, 1, 0))
    seq = corpus.make_oracle("tm")
    assert verify(seq, scheme, (0, 3000), jobs=1) == verify(seq, scheme, (0, 3000), jobs=2)
    bad = unit_scheme(2, 1, 2, (0, 0, 1, 0))
    assert verify(seq, bad, (0, 3000), jobs=1) == verify(seq, bad, (0, 3000), jobs=2)


def test_search_digit_sum_strong():
    s2 = corpus.make_oracle("s", k=2)
    cert = search(s2, 2, max_t=2, max_band=4, verify_range=(0, 2000))
    assert cert.status == VERIFIED
    assert cert.scheme.is_strong
    assert (cert.scheme.r, cert.scheme.t) == (1, 2)
    assert cert.scheme.coeffs[3] == (Fraction(-1), Fraction(2))


def test_search_thue_morse_strong():
    cert = search(corpus.make_oracle("tm"), 2, max_t=2, max_band=4, verify_range=(0, 2000))
    assert cert.status == VERIFIED
    assert cert.scheme.is_strong
    assert cert.scheme.t <= 2


def test_search_g_exhausted():
    g = corpus.make_oracle("g", k=2, ell=3)
    cert = search(g, 2, max_t=2, max_band=4, verify_range=(0, 2000))
    assert cert.status == EXHAUSTED
    assert cert.scheme is None
    assert cert.claim["candidates_tried"] > 0


def test_refute_strong_examples():
    cert = refute_g_strong(2, 3, 1, 2)
    assert cert.status == NO_SOLUTION
    assert cert.witness["ratio_at_n1"] == ["5", "2"]  # 10/4 reduced
    assert cert.witness["ratio_at_n2"] == ["14", "5"]  # 28/10 reduced
    assert cert.witness["ratios_equal"] is False
    assert refute_g_strong(3, 2, 1, 3).status == NO_SOLUTION
    with pytest.raises(ValueError):
        refute_g_strong(2, 3, 2, 2)


def test_refute_general_follows_the_two_sample_plan():
    cert = refute_g_general(2, 3, 1, 2, -4, 4)
    assert cert.status == NO_SOLUTION
    w = cert.witness
    # smallest s with 2**(1+s-1) >= max(4, 4) is s = 2
    assert w["s"] == 2
    assert w["n_samples"] == ["6", "12"]
    assert w["generator_levels"] == [3, 4]
    assert w["scaled_difference"]["aggregate_coefficient"] == "1"
    assert w["contradiction"]["equal"] is False
    assert int(w["contradiction"]["lhs"]) == 2 * 3 ** (2 + 2)
    assert int(w["contradiction"]["rhs"]) == 2 * 3 ** (1 + 2)


def test_refute_general_subsumes_strong_window():
    assert refute_g_general(2, 3, 1, 2, 0, 2).status == NO_SOLUTION


def test_refute_general_parameter_errors():
    with pytest.raises(ValueError):
        refute_g_general(2, 3, 2, 2, 0, 2)
    with pytest.raises(ValueError):
        refute_g_general(2, 3, 1, 2, 4, 4)


def test_refutation_and_fit_agree_on_g():
    # wherever the two-sample plan refutes, sampling those n must refute too
    for k, ell in ((2, 3), (3, 2)):
        oracle = corpus.make_oracle("g", k=k, ell=ell)
        for t in (1, 2, 3):
            for r in range(t):
                for L, U in ((-4, 4), (0, 2)):
                    cert = refute_g_general(k, ell, r, t, L, U)
                    assert cert.status == NO_SOLUTION
                    n2 = int(cert.witness["n_samples"][1])
                    got = fit(
                        oracle, k, r, t, L, U,
                        train_range=(0, n2 + U - L + 2),
                    )
                    assert isinstance(got, Certificate)
                    assert got.status == NO_SOLUTION


def test_fit_then_verify_soundness_randomized():
    rng = random.Random(0)
    returned = 0
    for _ in range(500):
        a = rng.randrange(-3, 4)
        b = rng.randrange(-3, 4)
        c = rng.randrange(-3, 4)
        period = rng.randrange(1, 4)
        bump = rng.randrange(-2, 3)

        def seq(n, a=a, b=b, c=c, period=period, bump=bump):
            return a * n * n + b * n + c + bump * (n % period == 0)

        k = rng.choice((2, 3))
        t = rng.choice((1, 2))
        r = rng.randrange(t)
        width = rng.randrange(1, 4)
        L = rng.choice((0, 0, -1))
        train = (0, width + 8 + rng.randrange(8))
        try:
            got = fit(seq, k, r, t, L, L + width, train_range=train)
        except ValueError:
            continue
        if isinstance(got, RecursionScheme):
            returned += 1
            assert verify(seq, got, train).status == VERIFIED
    assert returned > 50  # the property must actually have been exercised


def test_scheme_json_round_trip():
    scheme = RecursionScheme(
        2, 1, 2, -1, 2, 1,
        tuple(
            (Fraction(1, 3), Fraction(-2), Fraction(0)) for _ in range(4)
        ),
    )
    obj = scheme_to_obj(scheme)
    assert obj["coeffs"]["0"][0] == ["1", "3"]
    back = scheme_from_obj(json.loads(json.dumps(obj)))
    assert back == scheme


def test_document_round_trip_and_load():
    g = corpus.make_oracle("g", k=2, ell=3)
    scheme = unit_scheme(2, 1, 2, (0, 1, 1, 0))
    cert = verify(corpus.tm, scheme, (0, 50))
    doc = document(cert, scheme)
    text = dumps_document(doc)
    assert load_scheme(text) == scheme
    parsed = json.loads(text)
    assert parsed["certificate"]["status"] == VERIFIED
    assert parsed["certificate"]["range"] == [0, 50]


def test_certificate_obj_shape():
    cert = refute_g_strong(2, 3, 1, 2)
    obj = certificate_to_obj(cert)
    assert set(obj) == {"claim", "status", "range", "witness"}
    assert obj["status"] == NO_SOLUTION
