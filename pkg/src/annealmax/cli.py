"""Command-line front end.

Exit codes: 0 success, 1 tolerance or verification failure, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from . import __version__
from .anneal import (
    TIGHT_A,
    Alg1Config,
    beta_fixed_point_unconstrained,
    fixed_point_residual_unconstrained,
    random_baseline,
    run_alg1,
    solve_beta_unconstrained,
    verify_tight_trajectory,
)
from .anneal_matroid import (
    START_T,
    START_VALUE,
    Alg2Config,
    fixed_point_residual_matroid,
    phi_max_matroid,
    run_alg2,
    solve_beta_matroid,
)
from .hardness import (
    build_base_instance,
    build_cardinality_instance,
    build_instance1,
    build_instance2,
    exponent_check,
    gap_base_ell,
    gap_cardinality,
    gap_instance1,
    gap_instance2,
    min_gap_cardinality,
    min_gap_instance2,
)
from .matroid import ConvexCombination, Matroid, MatroidError, matroid_from_dict
from .multilinear import EvalMode, F_eval, F_monte_carlo, mix_point
from .oracle import brute_force_max, lemma_suite
from .rounding import merge_round
from .setfn import EXHAUSTIVE_N, SetFunction, SetFunctionError, from_dict, random_instance, tight_example, to_mask, to_set

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
SIG = 12


class UsageError(Exception):
    pass


def fmt(v) -> str:
    """12 significant digits, the numeric format of every CSV cell."""
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    return f"{float(v):.{SIG}g}"


def _round_json(obj):
    if isinstance(obj, float):
        return float(f"{obj:.{SIG}g}") if math.isfinite(obj) else None
    if isinstance(obj, np.floating):
        return _round_json(float(obj))
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, dict):
        return {k: _round_json(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_json(v) for v in obj]
    return obj


def emit_json(obj, out=None):
    text = json.dumps(_round_json(obj), sort_keys=True, indent=2)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


@dataclass
class RunManifest:
    command: str
    config: dict
    seed: int
    instance_digest: str | None
    tool_version: str = __version__
    wall_clock: float = 0.0

    def to_dict(self) -> dict:
        return asdict(self)


def default_seed() -> int:
    raw = os.environ.get("ANNEALMAX_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"ANNEALMAX_SEED must be an integer, got {raw!r}")


# -- instance I/O ------------------------------------------------------------------------------


def load_instance(path: str) -> tuple[SetFunction, Matroid | None, dict]:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise UsageError(f"cannot read instance {path}: {e}")
    if not isinstance(data, dict) or "n" not in data:
        raise UsageError(f"{path}: instance must be a JSON object with an 'n' field")
    try:
        f = from_dict(data)
        m = matroid_from_dict(data["matroid"], f.n) if data.get("matroid") else None
    except (SetFunctionError, MatroidError, KeyError, TypeError, ValueError) as e:
        raise UsageError(f"{path}: malformed instance: {e}")
    return f, m, data


def digest(data: dict) -> str:
    return hashlib.sha256(json.dumps(data, sort_keys=True).encode()).hexdigest()[:16]


def _mode(args) -> EvalMode:
    return EvalMode(args.mode, args.samples, args.seed)


def _parse_set(text: str, n: int) -> int:
    text = text.strip()
    if not text:
        return 0
    try:
        return to_mask([int(t) for t in text.split(",")], n)
    except (ValueError, SetFunctionError) as e:
        raise UsageError(f"bad set {text!r}: {e}")


def _parse_point(text: str, n: int) -> np.ndarray:
    try:
        x = np.array([float(t) for t in text.split(",")])
    except ValueError as e:
        raise UsageError(f"bad point {text!r}: {e}")
    if x.size != n or np.any(x < 0) or np.any(x > 1):
        raise UsageError(f"point must have {n} coordinates in [0, 1]")
    return x


# -- subcommands -------------------------------------------------------------------------------


def cmd_eval(args) -> int:
    f, _, _ = load_instance(args.instance)
    if args.set is not None:
        emit_json({"set": sorted(to_set(_parse_set(args.set, f.n))), "value": f.value(_parse_set(args.set, f.n))})
        return EXIT_OK
    if args.point is not None:
        x = _parse_point(args.point, f.n)
    elif args.mix is not None:
        x = mix_point(_parse_set(args.mix, f.n), args.p, f.n)
    else:
        raise UsageError("eval needs --set, --point or --mix")
    mode = _mode(args)
    try:
        if mode.resolve(f) == "monte-carlo":
            v, se = F_monte_carlo(f, x, mode.samples, mode.seed)
            emit_json({"point": x.tolist(), "F": v, "stderr": se, "mode": "monte-carlo"})
        else:
            emit_json({"point": x.tolist(), "F": F_eval(f, x, mode), "mode": mode.resolve(f)})
    except SetFunctionError as e:
        raise UsageError(str(e))
    return EXIT_OK


def _write_csv(path, header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(v) if isinstance(v, (float, int, np.floating, np.integer)) else v for v in r])
    if path == "-":
        sys.stdout.write(buf.getvalue())
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())


def _opt_for(f, matroid):
    if f.n > EXHAUSTIVE_N:
        return None
    return brute_force_max(f, matroid).opt


def cmd_solve(args) -> int:
    f, inst_matroid, data = load_instance(args.instance)
    matroid = inst_matroid
    if args.matroid:
        try:
            matroid = matroid_from_dict(json.loads(args.matroid), f.n)
        except (json.JSONDecodeError, MatroidError, KeyError) as e:
            raise UsageError(f"bad --matroid: {e}")
    alg = args.alg
    if alg == "anneal2" and matroid is None:
        raise UsageError("anneal2 needs a matroid (in the instance or via --matroid)")
    if alg != "anneal2" and (args.N is not None):
        raise UsageError("--N only applies to anneal2")
    mode = _mode(args)
    t0 = time.perf_counter()
    trace_header, trace_rows, plot = None, [], []
    constraint = matroid if alg == "anneal2" else None
    config: dict
    if alg in ("anneal1", "baseline-ls-p"):
        if alg == "anneal1":
            cfg = Alg1Config(delta=args.delta or 0.01, mode=mode, seed=args.seed)
        else:
            cfg = Alg1Config.frozen_at(args.p, mode=mode, seed=args.seed)
        tr = run_alg1(f, cfg)
        best, witness = tr.best_value, tr.best_set
        trace_header = ["p", "F", "f_A", "f_Acomp", "best"]
        trace_rows = [(r.p, r.F, r.f_A, r.f_Acomp, r.best) for r in tr.records]
        plot = [(r.p, r.F) for r in tr.records]
        config = {"alg": alg, "delta": cfg.delta, "p_start": cfg.p_start, "p_end": cfg.p_end, "ls_eps": cfg.ls_eps}
    elif alg == "anneal2":
        N = args.N
        if args.delta is not None:
            inv = round(1 / args.delta)
            if N is not None and N != inv:
                raise UsageError("--N and --delta disagree (need delta * N = 1)")
            N = inv
        cfg2 = Alg2Config(N=N, mode=mode, seed=args.seed)
        try:
            N_used = cfg2.resolve_N(f.n)
        except ValueError as e:
            raise UsageError(str(e))
        res = run_alg2(f, matroid, cfg2)
        best, witness = res.best_value, res.best_set
        trace_header = ["t", "F", "best_complementary", "matching_weight"]
        trace_rows = [(r.t, r.F, r.best_complementary, r.matching_weight) for r in res.records]
        plot = [(r.t, r.F) for r in res.records]
        config = {"alg": alg, "N": N_used, "matroid": matroid.to_dict(), "violations": res.violations}
    elif alg == "baseline-random":
        best, witness = random_baseline(f, args.seed)
        config = {"alg": alg}
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown algorithm {alg}")
    config["mode"] = mode.resolve(f)
    opt = None if args.no_brute_force else _opt_for(f, constraint)
    summary = {
        "best_value": best,
        "witness": sorted(to_set(witness)),
        "opt": opt,
        "ratio_vs_bruteforce": (best / opt if opt else None) if opt is not None else None,
    }
    manifest = RunManifest("solve", config, args.seed, digest(data), wall_clock=time.perf_counter() - t0)
    summary["manifest"] = manifest.to_dict()
    if args.trace and trace_header:
        _write_csv(args.trace, trace_header, trace_rows)
    if args.emit_plot_data:
        _write_csv(args.emit_plot_data, ["x", "y"], plot)
    emit_json(summary, args.summary)
    if alg == "anneal2" and config["violations"]:
        return EXIT_FAIL
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.tight or not args.instance:
        rep = verify_tight_trajectory()
        for c in rep.checks:
            print(f"{'PASS' if c.passed else 'FAIL'} {c.name} {c.detail}".rstrip())
        print(f"ratio {rep.best_along_trajectory:g}/{rep.opt:g} = {rep.ratio:.6f}")
        ok = rep.ok
        if not args.instance:
            return EXIT_OK if ok else EXIT_FAIL
    else:
        ok = True
    f, matroid, _ = load_instance(args.instance)
    if f.n > 10:
        raise UsageError("verify runs brute force and is limited to n <= 10")
    seeds = tuple(range(args.seed, args.seed + args.seeds))
    rep = lemma_suite(f, matroid, seeds=seeds)
    for line in rep.lines():
        print(line)
    return EXIT_OK if (ok and rep.ok) else EXIT_FAIL


def _write_hard_instance(args):
    k = args.k
    if k is None:
        raise UsageError("--write-instance needs a finite --k")
    alpha = 0.5 if args.alpha is None else args.alpha
    if args.instance == "one":
        f, m = build_instance1(k)
    elif args.instance == "two":
        f, m = build_instance2(k, alpha)
    elif args.instance == "cardinality":
        f, m = build_cardinality_instance(k, alpha)
    else:
        f, m = build_base_instance(args.ell, k)
    try:
        d = f.to_dict()
        d["matroid"] = m.to_dict()
    except SetFunctionError as e:
        raise UsageError(str(e))
    with open(args.write_instance, "w", encoding="utf-8") as fh:
        json.dump(d, fh, sort_keys=True)


def cmd_gap(args) -> int:
    k = args.k
    if args.write_instance:
        _write_hard_instance(args)
    if args.instance == "one":
        rep = gap_instance1(k)
    elif args.instance == "base":
        rep = gap_base_ell(args.ell, k)
    elif args.instance == "two":
        if args.alpha is None:
            a, _ = min_gap_instance2(k)
            rep = gap_instance2(a, k)
            rep.method = "closed-form inner, golden-section over alpha"
        else:
            rep = gap_instance2(args.alpha, k)
    else:
        if args.alpha is None:
            a, _ = min_gap_cardinality(k)
            rep = gap_cardinality(a, k)
            rep.method = "golden-section over z and alpha"
        else:
            rep = gap_cardinality(args.alpha, k)
    emit_json(rep.to_dict())
    return EXIT_OK


def cmd_round(args) -> int:
    f, matroid, _ = load_instance(args.instance)
    if matroid is None:
        raise UsageError("round needs a matroid in the instance")
    try:
        with open(args.combination, encoding="utf-8") as fh:
            cc = ConvexCombination.from_dict(json.load(fh))
    except (OSError, json.JSONDecodeError, KeyError, MatroidError, SetFunctionError) as e:
        raise UsageError(f"cannot read combination: {e}")
    if cc.n != f.n:
        raise UsageError("combination and instance disagree on n")
    try:
        S, log = merge_round(f, matroid, cc)
    except MatroidError as e:
        raise UsageError(f"invalid combination: {e}")
    Fx = F_eval(f, cc.point())
    emit_json(
        {
            "set": sorted(to_set(S)),
            "value": f.value(S),
            "F_input": Fx,
            "steps": [
                {"pair": [sorted(to_set(a)) for a in st.pair], "exchanges": len(st.exchanges),
                 "F_before": st.F_before, "F_after": st.F_after}
                for st in log
            ],
        }
    )
    return EXIT_OK if f.value(S) >= Fx - 1e-9 else EXIT_FAIL


@dataclass
class Row:
    name: str
    computed: float | str
    reference: float | str
    check: str  # human-readable criterion
    passed: bool


def reproduce_rows() -> list[Row]:
    rows: list[Row] = []

    def close(name, v, ref, tol):
        rows.append(Row(name, v, ref, f"|diff| <= {tol:g}", abs(v - ref) <= tol))

    b = solve_beta_unconstrained()
    close("beta-unconstrained", b, 0.41068, 5e-6)
    rows.append(Row("beta-unconstrained-above-0.41", b, 0.41, "> 0.41", b > 0.41))
    res = fixed_point_residual_unconstrained(b)
    rows.append(Row("beta-unconstrained-residual", res, 0.0, "|residual| <= 1e-6", abs(res) <= 1e-6))
    bf = beta_fixed_point_unconstrained()
    rows.append(Row("beta-unconstrained-fixed-point", bf, 0.41, "> 0.41", bf > 0.41))

    bm = solve_beta_matroid()
    close("beta-matroid", bm, 0.32557, 5e-5)
    rows.append(Row("beta-matroid-above-0.325", bm, 0.325, "> 0.325", bm > 0.325))
    rm = fixed_point_residual_matroid(bm)
    rows.append(Row("beta-matroid-residual", rm, 0.0, "|residual| <= 1e-6", abs(rm) <= 1e-6))
    close("matroid-t0", START_T, 0.381966, 1e-6)
    close("matroid-v0", START_VALUE, 0.309, 1e-3)
    close("matroid-argmax-t", phi_max_matroid(START_T, START_VALUE, bm)[0], 0.53, 0.01)

    rep = verify_tight_trajectory()
    close("tight-opt", rep.opt, 35.0, 0.0)
    fa = F_eval(tight_example(), mix_point(TIGHT_A, 0.75, 8))
    close("tight-F-three-quarters", fa, 16.25, 0.0)
    close("tight-best", rep.best_along_trajectory, 17.0, 0.0)
    close("tight-ratio", rep.ratio, 17 / 35, 1e-12)
    rows.append(Row("tight-trajectory-checks", "all" if rep.ok else "failed", "all", "every check passes", rep.ok))

    close("gap-one", gap_instance1().gap_value, 0.393469, 1e-6)
    a2, g2 = min_gap_instance2()
    close("gap-two", g2, 0.4773, 5e-4)
    close("alpha-two", a2, 0.3513, 5e-3)
    ac, gc = min_gap_cardinality()
    close("gap-card", gc, 0.49098, 5e-4)
    close("alpha-card", ac, 0.15, 1e-2)
    for ell in range(2, 6):
        close(f"gap-base-ell-{ell}", gap_base_ell(ell).gap_value, 1 - math.exp(-1 / ell), 1e-6)
    ex = exponent_check()
    rows.append(Row("instance-two-exponent", ex.supported, "exp(-1/2)", "nearest limit", ex.supported == "exp(-1/2)"))
    return rows


def cmd_reproduce(args) -> int:
    rows = reproduce_rows()
    if args.row:
        rows = [r for r in rows if r.name in args.row]
        if not rows:
            raise UsageError(f"no such row: {', '.join(args.row)}")
    width = max(len(r.name) for r in rows)
    bad = 0
    for r in rows:
        c = r.computed if isinstance(r.computed, str) else fmt(r.computed)
        ref = r.reference if isinstance(r.reference, str) else fmt(r.reference)
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.name:<{width}}  computed={c:<16} reference={ref:<12} {r.check}")
        if not r.passed:
            bad += 1
            if not isinstance(r.computed, str):
                print(f"      diff = {fmt(float(r.computed) - float(r.reference))}")
    return EXIT_OK if bad == 0 else EXIT_FAIL


# -- bench -------------------------------------------------------------------------------------

BENCH_HEADER = ["instance", "alg", "value", "opt", "ratio", "time"]
BENCH_ALGS = ("anneal1", "anneal2", "baseline-random", "baseline-ls-p")


def corpus(kind: str, n: int, count: int, seed: int):
    """(name, oracle) pairs; ``mixed`` alternates digraph cuts and coverage."""
    out = []
    for s in range(seed, seed + count):
        if kind == "mixed":
            k = "digraph-cut" if s % 2 == 0 else "coverage"
        elif kind in ("random-digraph", "digraph-cut"):
            k = "digraph-cut"
        elif kind in ("random-coverage", "coverage"):
            k = "coverage"
        else:
            raise UsageError(f"unknown corpus {kind!r}")
        density = 0.4 if k == "digraph-cut" else 0.3
        out.append((f"{k}-n{n}-s{s}", random_instance(k, n, density, (1, 10), seed=s)))
    return out


def _bench_one(job):
    name, f, alg, seed, delta, rank = job
    t0 = time.perf_counter()
    matroid = None
    if alg == "anneal1":
        v = run_alg1(f, Alg1Config(delta=delta, seed=seed)).best_value
    elif alg == "baseline-ls-p":
        v = run_alg1(f, Alg1Config.frozen_at(2 / 3, seed=seed)).best_value
    elif alg == "baseline-random":
        v = random_baseline(f, seed)[0]
    else:
        from .matroid import UniformMatroid

        matroid = UniformMatroid(f.n, rank)
        v = run_alg2(f, matroid, Alg2Config(N=f.n * f.n, seed=seed)).best_value
    dt = time.perf_counter() - t0
    opt = brute_force_max(f, matroid).opt if f.n <= EXHAUSTIVE_N else float("nan")
    ratio = v / opt if opt and math.isfinite(opt) else (1.0 if opt == 0 else float("nan"))
    return (name, alg, v, opt, ratio, dt)


def run_bench(kind, n, count, algs, seed, delta=0.01, rank=None, workers=1):
    for a in algs:
        if a not in BENCH_ALGS:
            raise UsageError(f"unknown algorithm {a!r}")
    rank = rank if rank is not None else max(1, n // 2)
    jobs = [(name, f, a, seed, delta, rank) for name, f in corpus(kind, n, count, seed) for a in algs]
    if workers > 1 and jobs:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            rows = list(ex.map(_bench_one, jobs))
    else:
        rows = [_bench_one(j) for j in jobs]
    rows.sort(key=lambda r: (r[0], r[1]))
    agg = {}
    for a in algs:
        rs = [r[4] for r in rows if r[1] == a and math.isfinite(r[4])]
        agg[a] = {"min_ratio": min(rs) if rs else None, "mean_ratio": float(np.mean(rs)) if rs else None, "runs": len(rs)}
    return rows, agg


def cmd_bench(args) -> int:
    seed = args.seed
    algs = [a.strip() for a in args.algs.split(",") if a.strip()]
    if args.n > EXHAUSTIVE_N:
        raise UsageError("bench computes ratios by brute force and needs n <= 20")
    rows, agg = run_bench(args.corpus, args.n, args.count, algs, seed, args.delta, args.rank, args.workers)
    _write_csv(args.out, BENCH_HEADER, rows)
    manifest = RunManifest(
        "bench",
        {"corpus": args.corpus, "n": args.n, "count": args.count, "algs": algs, "delta": args.delta},
        seed,
        None,
    )
    print(json.dumps(_round_json({"aggregate": agg, "manifest": manifest.to_dict()}), sort_keys=True), file=sys.stderr)
    return EXIT_OK


# -- parser ------------------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser(seed: int) -> argparse.ArgumentParser:
    p = _Parser(prog="annealmax", description="Simulated annealing for submodular maximization.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def eval_flags(sp):
        sp.add_argument("--mode", default="auto", choices=["auto", "closed-form", "exact", "monte-carlo"])
        sp.add_argument("--samples", type=int, default=10_000)
        sp.add_argument("--seed", type=int, default=seed)

    e = sub.add_parser("eval", help="evaluate f(S) or F(x)")
    e.add_argument("instance")
    g = e.add_mutually_exclusive_group()
    g.add_argument("--set", help="comma-separated elements")
    g.add_argument("--point", help="comma-separated coordinates")
    g.add_argument("--mix", help="set A for the point x_p(A)")
    e.add_argument("--p", type=float, default=0.5)
    eval_flags(e)
    e.set_defaults(fn=cmd_eval)

    s = sub.add_parser("solve", help="run an algorithm on an instance file")
    s.add_argument("instance")
    s.add_argument("--alg", default="anneal1", choices=list(BENCH_ALGS))
    s.add_argument("--delta", type=float)
    s.add_argument("--N", type=int)
    s.add_argument("--p", type=float, default=2 / 3, help="temperature for baseline-ls-p")
    s.add_argument("--matroid", help='JSON, e.g. {"kind": "uniform", "k": 2}')
    s.add_argument("--trace", help="CSV trace path ('-' for stdout)")
    s.add_argument("--summary", help="JSON summary path (default stdout)")
    s.add_argument("--emit-plot-data", help="write x,y series to this path")
    s.add_argument("--no-brute-force", action="store_true")
    eval_flags(s)
    s.set_defaults(fn=cmd_solve)

    v = sub.add_parser("verify", help="run the lemma checks (default: the 8-vertex trajectory)")
    v.add_argument("instance", nargs="?")
    v.add_argument("--tight", action="store_true", help="also verify the 8-vertex trajectory")
    v.add_argument("--seeds", type=int, default=1)
    v.add_argument("--seed", type=int, default=seed)
    v.set_defaults(fn=cmd_verify)

    gp = sub.add_parser("gap", help="symmetry gap of a hard instance")
    gp.add_argument("--instance", required=True, choices=["one", "two", "cardinality", "base"])
    gp.add_argument("--k", type=int, help="tails per hyperedge (omit for the limit)")
    gp.add_argument("--alpha", type=float)
    gp.add_argument("--ell", type=int, default=2)
    gp.add_argument("--write-instance", help="also save the concrete instance (with its matroid) as JSON")
    gp.set_defaults(fn=cmd_gap)

    r = sub.add_parser("round", help="round a serialized convex combination")
    r.add_argument("instance")
    r.add_argument("combination")
    r.set_defaults(fn=cmd_round)

    rp = sub.add_parser("reproduce", help="headline constants next to their reference values")
    rp.add_argument("--row", action="append")
    rp.set_defaults(fn=cmd_reproduce)

    b = sub.add_parser("bench", help="ratio benchmark on a seeded corpus")
    b.add_argument("--corpus", default="random-digraph")
    b.add_argument("--n", type=int, default=8)
    b.add_argument("--count", type=int, default=20)
    b.add_argument("--algs", default="anneal1,baseline-random")
    b.add_argument("--delta", type=float, default=0.01)
    b.add_argument("--rank", type=int, help="uniform matroid rank for anneal2 (default n // 2)")
    b.add_argument("--workers", type=int, default=1)
    b.add_argument("--out", default="-")
    b.add_argument("--seed", type=int, default=seed)
    b.set_defaults(fn=cmd_bench)
    return p


def main(argv=None) -> int:
    try:
        seed = default_seed()
        args = build_parser(seed).parse_args(argv)
        if args.command == "gap" and args.k is not None and args.k < 1:
            raise UsageError("--k must be at least 1")
        return args.fn(args)
    except UsageError as e:
        print(f"annealmax: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:
        return int(e.code) if isinstance(e.code, int) else EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
