"""Command-line front end: evaluate tail bounds, roundtrip codecs, run
simulators, and run the canned suites.

Exit codes: 0 ok, 1 usage error, 2 bound or roundtrip violation.
Numbers are printed with 17 significant digits; identical invocations with
the same seed produce byte-identical JSON apart from the wall_ms field.
"""

from __future__ import annotations

import argparse
import math
import sys
from fractions import Fraction
from itertools import permutations, product

from . import bitcodes, bounds, experiments, witnesses
from .bitcodes import BitReader, BitString
from .ledger import TailBound, nonuniform_tail, uniform_tail


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# Output formatting.


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "null"
    if isinstance(value, float):
        if math.isinf(value):
            return '"inf"' if value > 0 else '"-inf"'
        if math.isnan(value):
            return '"nan"'
        return format(value, ".17g")
    if isinstance(value, int):
        return str(value)
    if isinstance(value, Fraction):
        return f'"{value}"'
    return '"' + str(value).replace("\\", "\\\\").replace('"', '\\"') + '"'


def dumps(obj, indent: int = 0) -> str:
    """Deterministic JSON with floats at 17 significant digits."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{inner}"{k}": {dumps(v, indent + 1)}' for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [inner + dumps(v, indent + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    return _fmt(obj)


def flatten(obj, prefix: str = "") -> dict:
    out: dict = {}
    if isinstance(obj, dict):
        for k, v in obj.items():
            out.update(flatten(v, f"{prefix}{k}."))
    elif isinstance(obj, (list, tuple)):
        for i, v in enumerate(obj):
            out.update(flatten(v, f"{prefix}{i}."))
    else:
        out[prefix[:-1]] = obj
    return out


def _csv_cell(value) -> str:
    if isinstance(value, float):
        return format(value, ".17g")
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return ""
    s = str(value)
    if any(ch in s for ch in ",\"\n"):
        s = '"' + s.replace('"', '""') + '"'
    return s


def to_csv(obj: dict) -> str:
    flat = flatten(obj)
    header = ",".join(flat.keys())
    row = ",".join(_csv_cell(v) for v in flat.values())
    return header + "\n" + row + "\n"


def _emit(obj: dict, fmt: str, out_path: str | None) -> None:
    text = to_csv(obj) if fmt == "csv" else dumps(obj) + "\n"
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# Parameter parsing.


def _coerce(text: str):
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def parse_params(tokens: list[str]) -> tuple[dict, list]:
    """Split tokens into key=value params and bare positional arguments."""
    params: dict = {}
    positional: list = []
    for tok in tokens:
        if "=" in tok:
            key, _, value = tok.partition("=")
            params[key] = _coerce(value)
        else:
            positional.append(tok)
    return params, positional


def _pop(params: dict, key: str, default=None, required: bool = False):
    if key in params:
        return params.pop(key)
    if required:
        raise UsageError(f"missing required parameter {key}=...")
    return default


def _reject_unknown(params: dict) -> None:
    if params:
        raise UsageError(f"unknown parameters: {', '.join(sorted(params))}")


# ---------------------------------------------------------------------------
# bound subcommand.


def _bound_runs(p):
    return bounds.runs_threshold(int(_pop(p, "n", required=True)),
                                 float(_pop(p, "s", required=True)))


def _bound_ramsey(p):
    return bounds.ramsey_threshold(int(_pop(p, "n", required=True)),
                                   float(_pop(p, "s", 2.0)))


def _bound_ramsey_intro(p):
    return bounds.ramsey_intro_variant(int(_pop(p, "n", required=True)))


def _bound_urns(p):
    return bounds.urns_threshold(int(_pop(p, "n", required=True)),
                                 float(_pop(p, "s", required=True)))


def _bound_linear_probing(p):
    return bounds.linear_probing_threshold(float(_pop(p, "c", required=True)),
                                           float(_pop(p, "s", 2.0)))


def _bound_cuckoo(p):
    return bounds.cuckoo_tails(int(_pop(p, "n", required=True)),
                               float(_pop(p, "s", 20.0)),
                               k1=float(_pop(p, "k1", 4.0)),
                               k2=float(_pop(p, "k2", 1.0)))


def _bound_two_choice(p):
    return bounds.two_choice_thresholds(int(_pop(p, "n", required=True)),
                                        float(_pop(p, "c", required=True)),
                                        float(_pop(p, "s", 2.0)),
                                        k=float(_pop(p, "k", 0.0)),
                                        d=float(_pop(p, "d", 3.0)))


def _bound_expander(p):
    return bounds.expander_savings(int(_pop(p, "n", required=True)),
                                   int(_pop(p, "k", required=True)),
                                   o1=float(_pop(p, "o1", 0.0)))


def _bound_inversions(p):
    return bounds.inversions_tail(int(_pop(p, "n", required=True)),
                                  float(_pop(p, "alpha", required=True)),
                                  k_log=float(_pop(p, "k_log", 0.0)))


def _bound_records(p):
    return bounds.records_tail(int(_pop(p, "n", required=True)),
                               float(_pop(p, "c", required=True)),
                               k_loglog=float(_pop(p, "k_loglog", 0.0)))


def _bound_chernoff_basic(p):
    return bounds.chernoff_basic(int(_pop(p, "n", required=True)),
                                 float(_pop(p, "eps", required=True)))


def _bound_chernoff_kl(p):
    return bounds.chernoff_kl(int(_pop(p, "n", required=True)),
                              float(_pop(p, "p", required=True)),
                              float(_pop(p, "eps", required=True)))


def _bound_percolation(p):
    return bounds.percolation_cycle_tail(int(_pop(p, "n", required=True)),
                                         float(_pop(p, "p", required=True)),
                                         float(_pop(p, "s", 4.0)))


def _bound_triangles_down(p):
    return bounds.triangle_bounds(int(_pop(p, "n", 200)),
                                  float(_pop(p, "c", required=True)),
                                  k=float(_pop(p, "k", 1.0)))


def _bound_moser(p):
    return bounds.moser_tail(int(_pop(p, "m", required=True)),
                             float(_pop(p, "s", required=True)))


def _bound_uniform(p):
    return uniform_tail(float(_pop(p, "universe_log2", required=True)),
                        float(_pop(p, "code_length", required=True)))


def _bound_nonuniform(p):
    return nonuniform_tail(float(_pop(p, "log_inv_px", required=True)),
                           float(_pop(p, "code_length", required=True)))


BOUNDS = {
    "runs": _bound_runs,
    "ramsey": _bound_ramsey,
    "ramsey-intro": _bound_ramsey_intro,
    "urns": _bound_urns,
    "linear-probing": _bound_linear_probing,
    "cuckoo": _bound_cuckoo,
    "two-choice": _bound_two_choice,
    "expander": _bound_expander,
    "inversions": _bound_inversions,
    "records": _bound_records,
    "chernoff-basic": _bound_chernoff_basic,
    "chernoff-kl": _bound_chernoff_kl,
    "percolation": _bound_percolation,
    "triangles-down": _bound_triangles_down,
    "moser": _bound_moser,
    "uniform": _bound_uniform,
    "nonuniform": _bound_nonuniform,
}


def cmd_bound(args) -> int:
    params, positional = parse_params(args.tokens)
    if positional:
        raise UsageError(f"unexpected arguments: {positional}")
    if args.theorem not in BOUNDS:
        raise UsageError(
            f"unknown theorem {args.theorem!r}; valid: {', '.join(sorted(BOUNDS))}"
        )
    try:
        tb: TailBound = BOUNDS[args.theorem](params)
    except (ValueError, TypeError) as exc:
        raise UsageError(str(exc)) from exc
    _reject_unknown(params)
    _emit(tb.to_dict(), args.format, args.out)
    return 0


# ---------------------------------------------------------------------------
# codec subcommand.


def _int_codec_roundtrip(codec_id: str, lo: int, hi: int) -> int:
    encode, read = bitcodes.CODECS[codec_id]
    failures = 0
    for i in range(lo, hi + 1):
        r = BitReader(encode(i))
        if read(r) != i or r.remaining:
            failures += 1
    return failures


def _runs_roundtrip(n: int, t: int) -> tuple[int, int]:
    domain = failures = 0
    for x in range(1 << n):
        bits = format(x, f"0{n}b")
        if witnesses.first_run_start(bits, t) is None:
            continue
        domain += 1
        c = witnesses.runs_encode(bits, t)
        if witnesses.runs_decode(c, n, t).bits != bits or \
                len(c) != witnesses.runs_codeword_length(n, t):
            failures += 1
    return domain, failures


def _urns_roundtrip(n: int, t: int) -> tuple[int, int]:
    domain = failures = 0
    for b in product(range(n), repeat=n):
        counts = [0] * n
        for u in b:
            counts[u] += 1
        if max(counts) < t:
            continue
        domain += 1
        c = witnesses.urns_encode(b, t)
        if witnesses.urns_decode(c, n, t) != b or \
                len(c) != witnesses.urns_codeword_length(n, t):
            failures += 1
    return domain, failures


def _clique_roundtrip(n: int, t: int) -> tuple[int, int]:
    e = math.comb(n, 2)
    domain = failures = 0
    for graph in range(1 << e):
        bits = format(graph, f"0{e}b")
        found = witnesses.find_clique_or_is(bits, n, t)
        if found is None:
            continue
        domain += 1
        flag, verts = found
        c = witnesses.clique_encode(bits, n, t, verts, flag)
        dflag, dadj, dverts = witnesses.clique_decode(c, n, t)
        if (dflag, dadj.bits, dverts) != (flag, bits, tuple(sorted(verts))) or \
                len(c) != witnesses.clique_codeword_length(n, t):
            failures += 1
    return domain, failures


def _inssort_roundtrip(n: int) -> tuple[int, int]:
    domain = failures = 0
    for sigma in permutations(range(1, n + 1)):
        domain += 1
        c = witnesses.inssort_encode(sigma)
        if witnesses.inssort_decode(c, n) != sigma:
            failures += 1
    return domain, failures


def cmd_codec(args) -> int:
    params, positional = parse_params(args.tokens)
    cid, mode = args.codec, args.mode
    report: dict = {"codec": cid, "mode": mode}
    if cid in bitcodes.CODECS:
        encode, read = bitcodes.CODECS[cid]
        if mode == "encode":
            if not positional:
                raise UsageError("encode needs a value")
            print(encode(int(positional[0])).bits)
            return 0
        if mode == "decode":
            if not positional:
                raise UsageError("decode needs a bit string")
            r = BitReader(positional[0])
            print(read(r))
            r.expect_end()
            return 0
        if mode == "roundtrip-exhaustive":
            lo = int(_pop(params, "lo", 1))
            hi = int(_pop(params, "hi", 65536))
            _reject_unknown(params)
            failures = _int_codec_roundtrip(cid, lo, hi)
            report.update(domain_size=hi - lo + 1, failures=failures)
        elif mode == "roundtrip-random":
            trials = int(_pop(params, "trials", args.trials or 1000))
            _reject_unknown(params)
            import numpy as np

            g = np.random.default_rng(args.seed)
            failures = 0
            for _ in range(trials):
                i = int(g.integers(1, 1 << 32))
                r = BitReader(encode(i))
                if read(r) != i or r.remaining:
                    failures += 1
            report.update(domain_size=trials, failures=failures)
        else:
            raise UsageError(f"unknown mode {mode!r}")
    elif cid in ("runs", "urns", "clique", "inssort"):
        if mode != "roundtrip-exhaustive":
            raise UsageError(f"codec {cid!r} supports roundtrip-exhaustive only")
        if cid == "runs":
            n = int(_pop(params, "n", required=True))
            t = int(_pop(params, "t", required=True))
            if n > 20:
                raise UsageError("exhaustive runs roundtrip requires n <= 20")
            domain, failures = _runs_roundtrip(n, t)
        elif cid == "urns":
            n = int(_pop(params, "n", required=True))
            t = int(_pop(params, "t", required=True))
            if n > 6:
                raise UsageError("exhaustive urns roundtrip requires n <= 6")
            domain, failures = _urns_roundtrip(n, t)
        elif cid == "clique":
            n = int(_pop(params, "n", required=True))
            t = int(_pop(params, "t", required=True))
            if n > 5:
                raise UsageError("exhaustive clique roundtrip requires n <= 5")
            domain, failures = _clique_roundtrip(n, t)
        else:
            n = int(_pop(params, "n", required=True))
            if n > 7:
                raise UsageError("exhaustive inssort roundtrip requires n <= 7")
            domain, failures = _inssort_roundtrip(n)
        _reject_unknown(params)
        report.update(domain_size=domain, failures=failures)
    else:
        valid = sorted(list(bitcodes.CODECS) + ["runs", "urns", "clique", "inssort"])
        raise UsageError(f"unknown codec {cid!r}; valid: {', '.join(valid)}")
    _emit(report, args.format, args.out)
    return 2 if report.get("failures") else 0


# ---------------------------------------------------------------------------
# experiment subcommand.


def _exp_runs(p, trials, seed):
    return experiments.sim_runs(int(_pop(p, "n", required=True)),
                                int(_pop(p, "t", required=True)), trials, seed)


def _exp_urns(p, trials, seed):
    return experiments.sim_urns(int(_pop(p, "n", required=True)),
                                int(_pop(p, "t", required=True)), trials, seed)


def _exp_linear_probing(p, trials, seed):
    return experiments.sim_linear_probing(
        int(_pop(p, "n", required=True)), float(_pop(p, "c", required=True)),
        trials or 10**4, seed, s=float(_pop(p, "s", 2.0)))


def _exp_cuckoo(p, trials, seed):
    maxloop = _pop(p, "maxloop")
    return experiments.sim_cuckoo(
        int(_pop(p, "n", required=True)),
        int(maxloop) if maxloop is not None else None,
        trials or 10**3, seed, s=float(_pop(p, "s", 20.0)))


def _exp_two_choice(p, trials, seed):
    return experiments.sim_two_choice(
        int(_pop(p, "n", required=True)), float(_pop(p, "c", required=True)),
        trials or 10**3, seed, s=float(_pop(p, "s", 2.0)),
        d=float(_pop(p, "d", 3.0)))


def _exp_expander(p, trials, seed):
    alpha = _pop(p, "alpha")
    return experiments.sim_expander(
        int(_pop(p, "n", required=True)),
        float(alpha) if alpha is not None else None,
        trials or 10**3, kmax=int(_pop(p, "kmax", 3)), rng=seed)


def _exp_permutation_stats(p, trials, seed):
    return experiments.sim_permutation_stats(
        int(_pop(p, "n", required=True)), trials or 10**4, seed,
        c_records=float(_pop(p, "c_records", 3.0)),
        c_bst=float(_pop(p, "c_bst", 9.943483)),
        alpha=float(_pop(p, "alpha", 0.05)))


def _exp_ramsey(p, trials, seed):
    mode_params = {}
    for key in ("s", "t"):
        if key in p:
            mode_params[key] = p.pop(key)
    return experiments.sim_gnp(int(_pop(p, "n", required=True)), "ramsey",
                               mode_params, trials, seed)


def _exp_triangles(p, trials, seed):
    return experiments.sim_gnp(int(_pop(p, "n", required=True)), "triangles",
                               {"c": float(_pop(p, "c", required=True))},
                               trials or 10**4, seed)


def _exp_percolation(p, trials, seed):
    max_len = _pop(p, "max_len")
    return experiments.sim_percolation(
        int(_pop(p, "root_n", required=True)), float(_pop(p, "p", required=True)),
        float(max_len) if max_len is not None else None,
        trials or 10**3, seed, s=float(_pop(p, "s", 4.0)))


def _exp_moser(p, trials, seed):
    return experiments.sim_moser(
        int(_pop(p, "k", required=True)), int(_pop(p, "m", required=True)),
        int(_pop(p, "r", required=True)), trials or 100, seed,
        s=float(_pop(p, "s", 30.0)))


EXPERIMENTS = {
    "runs": _exp_runs,
    "urns": _exp_urns,
    "linear-probing": _exp_linear_probing,
    "cuckoo": _exp_cuckoo,
    "two-choice": _exp_two_choice,
    "expander": _exp_expander,
    "permutation-stats": _exp_permutation_stats,
    "ramsey": _exp_ramsey,
    "triangles": _exp_triangles,
    "percolation": _exp_percolation,
    "moser": _exp_moser,
}


def cmd_experiment(args) -> int:
    params, positional = parse_params(args.tokens)
    if positional:
        raise UsageError(f"unexpected arguments: {positional}")
    if args.experiment not in EXPERIMENTS:
        raise UsageError(
            f"unknown experiment {args.experiment!r}; "
            f"valid: {', '.join(sorted(EXPERIMENTS))}"
        )
    trials = args.trials
    if "trials" in params:
        trials = int(params.pop("trials"))
    seed = args.seed
    if "seed" in params:
        seed = int(params.pop("seed"))
    try:
        report = EXPERIMENTS[args.experiment](params, trials, seed)
    except (ValueError, TypeError) as exc:
        raise UsageError(str(exc)) from exc
    _reject_unknown(params)
    _emit(report.to_dict(), args.format, args.out)
    return 2 if report.verdict == "fail" else 0


# ---------------------------------------------------------------------------
# suite subcommand.


def _suite_quick() -> list[tuple[str, bool, str]]:
    results = []
    failures = _int_codec_roundtrip("elias-gamma", 1, 4096)
    failures += _int_codec_roundtrip("elias-delta", 1, 4096)
    failures += _int_codec_roundtrip("elias-omega", 1, 4096)
    failures += _int_codec_roundtrip("unary", 0, 512)
    results.append(("integer-codecs", failures == 0, f"failures={failures}"))
    d, f = _runs_roundtrip(10, 4)
    results.append(("runs-roundtrip", f == 0, f"domain={d} failures={f}"))
    d, f = _inssort_roundtrip(5)
    results.append(("inssort-roundtrip", f == 0, f"domain={d} failures={f}"))
    for name, rep in [
        ("runs-mc", experiments.sim_runs(1024, 20, 2000, 1)),
        ("urns-mc", experiments.sim_urns(1024, 9, 2000, 1)),
        ("triangles-mc", experiments.sim_gnp(200, "triangles", {"c": 0.2}, 2000, 1)),
    ]:
        results.append((name, rep.verdict != "fail",
                        f"verdict={rep.verdict} p={rep.empirical_prob:.5f}"))
    return results


def _suite_acceptance() -> list[tuple[str, bool, str]]:
    results = list(_suite_quick())
    rep = experiments.sim_runs(1024, 20, 10**5, 42)
    results.append(("runs-mc-full", rep.verdict == "pass", f"verdict={rep.verdict}"))
    rep = experiments.sim_urns(1024, 9, 10**5, 42)
    results.append(("urns-mc-full", rep.verdict == "pass", f"verdict={rep.verdict}"))
    rep = experiments.sim_linear_probing(1000, 4.0, 10**4, 42, s=2.0)
    results.append(("linear-probing-mc", rep.verdict == "pass", f"verdict={rep.verdict}"))
    rep = experiments.sim_gnp(16, "ramsey", {"s": 2.0}, 10**4, 42)
    results.append(("ramsey-mc", rep.verdict == "pass", f"verdict={rep.verdict}"))
    rep = experiments.sim_gnp(200, "triangles", {"c": 0.2}, 10**4, 42)
    results.append(("triangles-mc-full", rep.verdict == "pass", f"verdict={rep.verdict}"))
    rep = experiments.sim_percolation(8, 0.25, None, 10**3, 42, s=4.0)
    results.append(("percolation-mc", rep.verdict == "pass", f"verdict={rep.verdict}"))
    rep = experiments.sim_moser(8, 32, 7, 100, 42, s=30.0)
    results.append(("moser-mc", rep.verdict == "pass" and rep.exceed_count == 0,
                    f"verdict={rep.verdict}"))
    rep = experiments.sim_permutation_stats(1024, 10**4, 42)
    results.append(("bst-height", rep.extras["bst_exceed"] == 0,
                    f"bst_exceed={rep.extras['bst_exceed']}"))
    rep = experiments.sim_expander(100, None, 10**3, 3, 42)
    oracle = rep.extras["k1_oracle_prob"]
    k1 = rep.extras["k1_empirical"]
    sigma = math.sqrt(max(oracle * (1 - oracle), 1e-12) / rep.trials)
    results.append(("expander-k1-oracle", abs(k1 - oracle) <= 3 * sigma + 1e-9,
                    f"empirical={k1:.5f} oracle={oracle:.5f}"))
    return results


def cmd_suite(args) -> int:
    if args.name == "quick":
        results = _suite_quick()
    elif args.name == "acceptance":
        results = _suite_acceptance()
    else:
        raise UsageError(f"unknown suite {args.name!r}; valid: quick, acceptance")
    all_ok = True
    for name, ok, detail in results:
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
        all_ok = all_ok and ok
    print(f"{'OK' if all_ok else 'FAILED'} ({len(results)} checks)")
    return 0 if all_ok else 2


# ---------------------------------------------------------------------------
# Entry point.


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="encbound",
        description="Tail bounds, prefix-free codecs, and simulators.",
    )
    parser.add_argument("--trials", type=int, default=None,
                        help="trial count (omit for exhaustive mode where supported)")
    parser.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    parser.add_argument("--format", choices=["json", "csv"], default="json")
    parser.add_argument("--out", default=None, help="write the report to a file")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", help="evaluate a tail-bound calculator")
    p.add_argument("theorem")
    p.add_argument("tokens", nargs="*", metavar="key=value")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("codec", help="roundtrip or run a codec")
    p.add_argument("codec")
    p.add_argument("mode", choices=["roundtrip-exhaustive", "roundtrip-random",
                                    "encode", "decode"])
    p.add_argument("tokens", nargs="*", metavar="key=value|arg")
    p.set_defaults(func=cmd_codec)

    p = sub.add_parser("experiment", help="run a simulator")
    p.add_argument("experiment")
    p.add_argument("tokens", nargs="*", metavar="key=value")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("suite", help="run a canned battery")
    p.add_argument("name")
    p.set_defaults(func=cmd_suite)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
