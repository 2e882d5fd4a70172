"""Command-line surface: sequence evaluation, scheme fitting/verification,
bounded search, refutations, subsequence-equality derivation, two-track
verification, and a per-sequence evidence report.

Exit codes: 0 verified / scheme found, 1 counterexample / no solution /
exhausted, 2 usage error.  Certificates are JSON on stdout (or --out);
human-oriented one-liners go to stderr.  Ranges are inclusive `lo..hi`.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys

from . import corpus, dfao, recsolve, strongderive, syncverify
from .recsolve import (
    EXHAUSTED,
    NO_SOLUTION,
    VERIFIED,
    Certificate,
    certificate_to_obj,
    document,
    dumps_document,
    scheme_to_obj,
)


class UsageError(ValueError):
    pass


def parse_range(spec: str) -> tuple[int, int]:
    """`lo..hi` (inclusive) or a single integer."""
    if ".." in spec:
        lo_s, hi_s = spec.split("..", 1)
        try:
            lo, hi = int(lo_s), int(hi_s)
        except ValueError:
            raise UsageError(f"malformed range {spec!r}; expected lo..hi") from None
        if lo > hi:
            raise UsageError(f"empty range {spec!r}")
        return lo, hi
    try:
        n = int(spec)
    except ValueError:
        raise UsageError(f"malformed range {spec!r}; expected lo..hi or an integer") from None
    return n, n


def _oracle_from_args(args) -> corpus.SequenceOracle:
    if not getattr(args, "seq", None):
        raise UsageError("--seq is required")
    name = args.seq
    if name not in corpus.oracle_names():
        raise UsageError(
            f"unknown sequence {name!r}; known: {', '.join(corpus.oracle_names())}"
        )
    required = {"g": ("k", "ell"), "s": ("k",)}.get(name, ())
    params = {}
    for p in required:
        v = getattr(args, p, None)
        if v is None:
            raise UsageError(f"sequence {name!r} needs --{p}")
        params[p] = v
    try:
        return corpus.make_oracle(name, **params)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


_DEFAULT_BASE = {"tm": 2, "tmfc": 2, "id": 2, "h": 3}


def _base_k(args, oracle: corpus.SequenceOracle) -> int:
    if getattr(args, "k", None) is not None:
        return args.k
    params = dict(oracle.params)
    if "k" in params:
        return params["k"]
    if oracle.name in _DEFAULT_BASE:
        return _DEFAULT_BASE[oracle.name]
    raise UsageError(f"--k is required for sequence {oracle.name!r}")


def _emit(args, doc: dict, note: str) -> None:
    text = dumps_document(doc)
    out = getattr(args, "out", None)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
        print(f"{note} -> {out}", file=sys.stderr)
    else:
        sys.stdout.write(text)
        print(note, file=sys.stderr)


def _exit_code(cert: Certificate) -> int:
    return 0 if cert.status == VERIFIED else 1


def cmd_eval(args) -> int:
    lo, hi = parse_range(args.n)
    if lo < 0:
        raise UsageError("n must be nonnegative")
    if args.dfao:
        with open(args.dfao) as fh:
            machine = dfao.parse(fh.read())
        values = ((n, machine.eval(n)) for n in range(lo, hi + 1))
    else:
        oracle = _oracle_from_args(args)
        values = ((n, oracle(n)) for n in range(lo, hi + 1))
    out = sys.stdout
    for n, v in values:
        out.write(f"{n} {v}\n")
    return 0


def cmd_fit(args) -> int:
    oracle = _oracle_from_args(args)
    k = _base_k(args, oracle)
    train = parse_range(args.train)
    verify_range = parse_range(args.verify)
    got = recsolve.fit(
        oracle, k, args.r, args.t, args.L, args.U, n0=args.n0, train_range=train
    )
    if isinstance(got, Certificate):
        _emit(args, document(got), f"no solution: residue b={got.witness['b']}")
        return _exit_code(got)
    cert = recsolve.verify(oracle, got, verify_range, jobs=args.jobs)
    extra = {
        "fit_train_range": list(train),
        "pinned_free_generators": {str(b): list(offs) for b, offs in got.pinned},
    }
    cert = dataclasses.replace(cert, claim=cert.claim | extra)
    _emit(args, document(cert, got), f"fit {cert.status} on n in {verify_range}")
    return _exit_code(cert)


def cmd_verify(args) -> int:
    oracle = _oracle_from_args(args)
    with open(args.scheme) as fh:
        scheme = recsolve.load_scheme(fh.read())
    verify_range = parse_range(args.verify)
    cert = recsolve.verify(oracle, scheme, verify_range, jobs=args.jobs)
    _emit(args, document(cert, scheme), f"verify {cert.status}")
    return _exit_code(cert)


def cmd_search(args) -> int:
    oracle = _oracle_from_args(args)
    k = _base_k(args, oracle)
    verify_range = parse_range(args.verify)
    cert = recsolve.search(
        oracle, k, max_t=args.max_t, max_band=args.max_band,
        verify_range=verify_range, jobs=args.jobs,
    )
    note = (
        f"found scheme r={cert.scheme.r} t={cert.scheme.t} strong={cert.scheme.is_strong}"
        if cert.scheme is not None
        else "search exhausted"
    )
    _emit(args, document(cert), note)
    return _exit_code(cert)


def cmd_refute(args) -> int:
    if args.family != "g":
        raise UsageError("only --family g has refutation procedures")
    try:
        if args.L is None and args.U is None:
            cert = recsolve.refute_g_strong(args.k, args.ell, args.r, args.t)
        elif args.L is not None and args.U is not None:
            cert = recsolve.refute_g_general(args.k, args.ell, args.r, args.t, args.L, args.U)
        else:
            raise UsageError("--L and --U must be given together")
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit(args, document(cert), f"refutation: {cert.status}")
    return _exit_code(cert)


def cmd_derive_strong(args) -> int:
    with open(args.dfao) as fh:
        machine = dfao.parse(fh.read())
    try:
        r, t = strongderive.find_rt(machine)
        mapping = strongderive.derive_mapping(machine, r, t)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    cert = strongderive.verify_mapping(machine.eval, mapping, args.verify_n, jobs=args.jobs)
    scheme = strongderive.mapping_to_scheme(mapping)
    doc = {
        "mapping": strongderive.mapping_to_obj(mapping),
        "scheme": scheme_to_obj(scheme),
        "certificate": certificate_to_obj(cert),
    }
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    sys.stdout.write(text)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(json.dumps(strongderive.mapping_to_obj(mapping), indent=2, sort_keys=True) + "\n")
        print(f"mapping -> {args.out}", file=sys.stderr)
    print(f"derive-strong (r,t)=({r},{t}) {cert.status}", file=sys.stderr)
    return _exit_code(cert)


def cmd_sync_verify(args) -> int:
    if args.machine == "fig2":
        if args.k != 2:
            raise UsageError("machine fig2 is the base-2 recognizer; use --k 2")
        machine = syncverify.build_fig2()
    elif args.machine == "figk":
        if args.k <= 2:
            raise UsageError("machine figk needs --k greater than 2")
        machine = syncverify.build_figk(args.k)
    else:
        raise UsageError("machine must be fig2 or figk")
    oracle = corpus.make_oracle("g", k=args.k, ell=args.k)
    cert = syncverify.verify_sync(
        machine, oracle, args.n_max,
        negatives_per_n=args.negatives, seed=args.seed, jobs=args.jobs,
    )
    _emit(args, {"certificate": certificate_to_obj(cert)}, f"sync-verify {cert.status}")
    return _exit_code(cert)


def cmd_report(args) -> int:
    oracle = _oracle_from_args(args)
    base = _base_k(args, oracle)
    params = dict(oracle.params)
    ev: dict = {
        "oracle": {"name": oracle.name, "params": params},
        "base_k": base,
        "note": "finite-scale evidence only; no class membership is asserted or denied",
    }

    mx = max(oracle(n) for n in range(args.bound_n + 1))
    ev["bounded"] = {"n_max": args.bound_n, "max_value": str(mx)}

    machine = None
    machine_name = None
    if oracle.name == "g" and params.get("k") == params.get("ell"):
        machine = syncverify.build_fig2() if base == 2 else syncverify.build_figk(base)
        machine_name = "fig2" if base == 2 else "figk"
    elif oracle.name == "id":
        machine = syncverify.build_identity(base)
        machine_name = "identity"
    if machine is not None:
        cert = syncverify.verify_sync(
            machine, oracle, args.sync_n,
            negatives_per_n=args.negatives, seed=args.seed, jobs=args.jobs,
        )
        ev["synchronized"] = {
            "evidence": "machine_verified" if cert.ok else "machine_counterexample",
            "machine": machine_name,
            "certificate": certificate_to_obj(cert),
        }
    else:
        screen = syncverify.sync_growth_screen(oracle, base, args.growth_depth)
        screen_obj = {
            "status": screen.status,
            "exponent": round(screen.exponent, 6),
            "depth": screen.depth,
        }
        if screen.status == syncverify.NOT_SYNCHRONIZED:
            ev["synchronized"] = {"evidence": "growth_screen"} | screen_obj
        else:
            ev["synchronized"] = {"evidence": "not_established", "growth_screen": screen_obj}

    cert = recsolve.search(
        oracle, base, max_t=args.max_t, max_band=args.max_band,
        verify_range=(0, args.search_verify_n), jobs=args.jobs,
    )
    found = cert.status == VERIFIED
    ev["recursive_scheme"] = {
        "found": found,
        "strong": cert.scheme.is_strong if found else None,
        "scheme": scheme_to_obj(cert.scheme) if found else None,
        "search": certificate_to_obj(cert),
    }

    if oracle.name == "g":
        failure = corpus.check_two_level_reduction(params["k"], params["ell"], args.regular_n)
        ev["regular"] = {
            "evidence": "two_level_reduction_identities",
            "n_max": args.regular_n,
            "verified": failure is None,
        }
    elif found:
        ev["regular"] = {"evidence": "via_recursive_scheme", "verified": True}
    else:
        ev["regular"] = {"evidence": "not_established"}

    _emit(args, ev, f"report for {oracle.label()}")
    return 0


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="write the JSON document here instead of stdout")
    p.add_argument(
        "--jobs",
        type=int,
        default=int(os.environ.get("SEQREC_JOBS", "1")),
        help="parallel verification workers (default: SEQREC_JOBS or 1)",
    )
    p.add_argument("--seed", type=int, default=0, help="seed for negative sampling")


def _add_oracle_opts(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seq", help="sequence name: " + ", ".join(corpus.oracle_names()))
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--ell", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="seqrec",
        description="exact recursion-structure toolkit for base-k integer sequences",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="print `n value` lines for a sequence or automaton")
    _add_oracle_opts(p)
    p.add_argument("--dfao", help="evaluate this automaton file instead of --seq")
    p.add_argument("--n", required=True, help="range lo..hi or single n")
    _add_common(p)
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("fit", help="fit a recursion scheme from samples, then verify it")
    _add_oracle_opts(p)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--U", type=int, required=True)
    p.add_argument("--n0", type=int, default=0)
    p.add_argument("--train", required=True, help="training range lo..hi")
    p.add_argument("--verify", default="0..10000", help="verification range lo..hi")
    _add_common(p)
    p.set_defaults(fn=cmd_fit)

    p = sub.add_parser("verify", help="verify a scheme JSON file against a sequence")
    _add_oracle_opts(p)
    p.add_argument("--scheme", required=True, help="scheme JSON file")
    p.add_argument("--verify", default="0..10000", help="verification range lo..hi")
    _add_common(p)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("search", help="bounded search for a verified scheme")
    _add_oracle_opts(p)
    p.add_argument("--max-t", type=int, default=3)
    p.add_argument("--max-band", type=int, default=8)
    p.add_argument("--verify", default="0..10000")
    _add_common(p)
    p.set_defaults(fn=cmd_search)

    p = sub.add_parser("refute", help="exact refutation for the floor-log power family")
    p.add_argument("--family", required=True, choices=["g"])
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--L", type=int, default=None)
    p.add_argument("--U", type=int, default=None)
    _add_common(p)
    p.set_defaults(fn=cmd_refute)

    p = sub.add_parser(
        "derive-strong",
        help="derive subsequence equalities from an lsd-first automaton",
    )
    p.add_argument("--dfao", required=True)
    p.add_argument("--verify-n", type=int, default=100000)
    _add_common(p)
    p.set_defaults(fn=cmd_derive_strong)

    p = sub.add_parser("sync-verify", help="verify a two-track recognizer against its sequence")
    p.add_argument("--machine", required=True, choices=["fig2", "figk"])
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n-max", type=int, default=10000)
    p.add_argument("--negatives", type=int, default=4)
    _add_common(p)
    p.set_defaults(fn=cmd_sync_verify)

    p = sub.add_parser("report", help="finite-scale classification evidence for a sequence")
    _add_oracle_opts(p)
    p.add_argument("--bound-n", type=int, default=100000)
    p.add_argument("--sync-n", type=int, default=10000)
    p.add_argument("--negatives", type=int, default=4)
    p.add_argument("--max-t", type=int, default=2)
    p.add_argument("--max-band", type=int, default=4)
    p.add_argument("--search-verify-n", type=int, default=10000)
    p.add_argument("--regular-n", type=int, default=2000)
    p.add_argument("--growth-depth", type=int, default=12)
    _add_common(p)
    p.set_defaults(fn=cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"seqrec: error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"seqrec: error: {exc}", file=sys.stderr)
        return 2
    except (dfao.DfaoParseError, syncverify.SyncParseError) as exc:
        print(f"seqrec: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
