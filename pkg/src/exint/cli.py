"""Command-line entry point ``exint``.

Subcommands:

* ``check <suite|all>``: run certification checks and write a JSON report;
* ``emit {ness,transfer,charges,rblock}``: write one exact object as JSON;
* ``ness``, ``charges``, ``bethe``: builders with their own report.

Exit codes: 0 when every check passes, 1 on a failed or erroring check,
2 on malformed arguments.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import resource
import sys
from concurrent.futures import ProcessPoolExecutor, ThreadPoolExecutor
from concurrent.futures.process import BrokenProcessPool
from fractions import Fraction

from . import bethe, charges, hgen, mpa, ness, rmat
from .errors import ScalarParseError
from .report import PROVEN, Report, timed
from .scalar import Scalar, as_scalar, format_scalar, is_half_integer_pole, parse_scalar
from .spin import SpinMatrix

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


# --- argument helpers -------------------------------------------------------

def _scalar_arg(text: str) -> Scalar:
    try:
        return parse_scalar(text)
    except ScalarParseError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _natural(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a natural number, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a natural number, got {text!r}")
    return v


def _memory_cap(env=None) -> int | None:
    env = os.environ if env is None else env
    raw = env.get("EXINT_MAX_BYTES")
    return int(raw) if raw else None


def apply_memory_cap(cap: int | None = None) -> int | None:
    """Limit the address space of the current process to EXINT_MAX_BYTES."""
    cap = _memory_cap() if cap is None else cap
    if cap is not None:
        resource.setrlimit(resource.RLIMIT_AS, (cap, cap))
    return cap


def _run_capped(task, cap):
    try:
        with ProcessPoolExecutor(max_workers=1, initializer=apply_memory_cap, initargs=(cap,)) as pool:
            return pool.submit(_run_task, task).result()
    except (BrokenProcessPool, MemoryError):
        fn, kwargs = task
        return _error_entry(fn, kwargs, "MemoryCapExceeded", f"check exceeded EXINT_MAX_BYTES={cap}")


# --- sampling ---------------------------------------------------------------

def sample_rationals(rng: random.Random, count: int, avoid_poles=True, exclude=(), span: int = 9):
    """Seeded nonzero rationals p/q with |p|, q <= span, skipping half-integer poles."""
    out = []
    seen = set(as_scalar(x) for x in exclude)
    while len(out) < count:
        p = rng.randint(-span, span)
        q = rng.randint(1, span)
        x = Scalar(Fraction(p, q))
        if x.is_zero() or x in seen:
            continue
        if avoid_poles and is_half_integer_pole(x):
            continue
        seen.add(x)
        out.append(x)
    return out


def sample_pairs(rng, count, ok):
    """Seeded (lam, mu) pairs satisfying the predicate ``ok``."""
    out = []
    while len(out) < count:
        lam, mu = sample_rationals(rng, 2, avoid_poles=False)
        if ok(lam, mu):
            out.append((lam, mu))
    return out


def sample_triples(rng, count):
    """Seeded (lam, mu, eta) with every pairwise R-matrix defined."""
    out = []
    while len(out) < count:
        lam, mu, eta = sample_rationals(rng, 3, avoid_poles=False)
        if _r_pair_ok(lam, mu) and _r_pair_ok(lam, eta) and _r_pair_ok(mu, eta):
            out.append((lam, mu, eta))
    return out


def _r_pair_ok(lam, mu):
    x = (lam + mu) * Fraction(1, 2)
    return lam != mu and not is_half_integer_pole(x) and not is_half_integer_pole(lam) \
        and not is_half_integer_pole(mu)


# --- suites -----------------------------------------------------------------

SUITES = ("forms", "nullspace", "nilpotent", "rll", "rtt", "ybe", "rprops", "lemma1", "lemma2",
          "structure", "oracle", "commute", "tilde", "magnetization", "transpose", "shifts", "deps",
          "ness", "charges", "uwt", "bethe")


def _pick(args, name, default):
    v = getattr(args, name, None)
    return default if v is None else v


def plan_suite(suite: str, args) -> list:
    """Task list ``[(callable, kwargs)]`` for one suite under the given flags."""
    rng = random.Random(args.seed * 1009 + SUITES.index(suite))
    samples = args.samples
    n = _pick(args, "n", 4)
    amax = _pick(args, "alpha_max", 6)
    tasks = []
    if args.lam is not None:
        lam = args.lam
        mu = args.mu if args.mu is not None else sample_rationals(rng, 1, exclude=[lam])[0]
        pairs = [(lam, mu)]
    else:
        pairs = sample_pairs(rng, samples, _r_pair_ok)
    xs = [args.lam] if args.lam is not None else sample_rationals(rng, samples)

    if suite == "forms":
        tasks.append((hgen.check_forms, {"alpha_max": amax, "xs": xs}))
    elif suite == "nullspace":
        for x in xs:
            for a in range(1, amax + 1):
                tasks.append((hgen.check_null, {"alpha": a, "x": x}))
    elif suite == "nilpotent":
        tasks.append((hgen.check_nilpotent, {"alpha_max": amax, "xs": xs[:1]}))
    elif suite == "rll":
        for lam, mu in pairs:
            tasks.append((rmat.check_rll, {"lam": lam, "mu": mu, "alpha_max": amax}))
    elif suite == "rtt":
        for lam, mu in pairs:
            tasks.append((rmat.check_rtt, {"n": min(n, 3), "lam": lam, "mu": mu, "alpha_max": min(amax, 4)}))
    elif suite == "ybe":
        bmax = _pick(args, "beta_max", 5)
        if args.lam is not None and args.mu is not None and args.eta is not None:
            triples = [(args.lam, args.mu, args.eta)]
        else:
            triples = sample_triples(rng, samples)
        for lam, mu, eta in triples:
            tasks.append((rmat.check_ybe, {"lam": lam, "mu": mu, "eta": eta, "beta_max": bmax}))
    elif suite == "rprops":
        for lam, mu in pairs:
            tasks.append((rmat.check_r_properties, {"lam": lam, "mu": mu, "alpha_max": amax}))
    elif suite == "lemma1":
        for x in xs:
            tasks.append((rmat.check_lemma1, {"x": x, "alpha_max": amax}))
    elif suite == "lemma2":
        for x in xs:
            tasks.append((rmat.check_lemma2, {"x": x, "alpha_max": amax}))
    elif suite == "structure":
        for x in xs:
            tasks.append((mpa.check_transfer_structure, {"n": n, "lam": x}))
    elif suite == "oracle":
        for x in xs:
            tasks.append((mpa.check_engine_oracle, {"n": min(n, 4), "lam": x}))
    elif suite == "commute":
        for lam, mu in pairs:
            tasks.append((mpa.check_commute, {"n": n, "lam": lam, "mu": mu}))
    elif suite == "tilde":
        for lam, mu in pairs:
            tasks.append((mpa.check_tilde_commute, {"n": min(n, 6), "lam": lam, "mu": mu}))
    elif suite == "magnetization":
        for x in xs:
            for k_out, k_in in ((0, 1), (1, 0), (1, 1), (0, 2)):
                tasks.append((mpa.check_magnetization, {"n": n, "k_out": k_out, "k_in": k_in, "lam": x}))
    elif suite == "transpose":
        for x in xs:
            tasks.append((mpa.check_transpose_relations, {"n": n, "lam": x}))
    elif suite == "shifts":
        for x in xs:
            tasks.append((mpa.check_shift_relations, {"n": n, "m": 0, "q": 1, "l": 1, "lam": x}))
            tasks.append((mpa.check_shift_relations, {"n": n, "m": 1, "q": 1, "l": 2, "lam": x}))
    elif suite == "deps":
        # the basis degenerates where 2*lam is an integer; sample away from those points
        lams = [x for x in xs if not _twice_integer(x)]
        while len(lams) < max(samples, 3):
            x = sample_rationals(rng, 1, exclude=lams)[0]
            if not _twice_integer(x):
                lams.append(x)
        tasks.append((check_dependencies, {"n": min(n, 4), "lam_samples": lams}))
    elif suite == "ness":
        eps_list = [args.epsilon] if args.epsilon is not None else [Scalar(Fraction(1, 2)), Scalar(1),
                                                                     Scalar(Fraction(3, 5))]
        for eps in eps_list:
            tasks.append((ness.check_ness, {"n": n, "epsilon": eps}))
            if n <= 5:
                tasks.append((ness.check_ness_oracle, {"n": n, "epsilon": eps}))
    elif suite == "charges":
        tasks.append((charges.check_charge_identities, {"n": n, "k_max": _pick(args, "kmax", 3)}))
    elif suite == "uwt":
        for lam, mu in pairs:
            tasks.append((bethe.check_uwt, {"n": min(n, 5), "lam": lam, "mu": mu}))
    elif suite == "bethe":
        lam = complex(args.lam) if args.lam is not None else 2j
        tasks.append((check_bethe_report, {"n": min(n, 4), "lam": lam}))
    else:
        raise ValueError(f"unknown suite {suite!r}")
    return tasks


def _twice_integer(x) -> bool:
    y = as_scalar(x) * 2
    return y.is_real and Fraction(y.re).denominator == 1


def check_dependencies(n, lam_samples) -> Report:
    rep = Report("deps", {"n": n, "lambda": [str(as_scalar(x)) for x in lam_samples]})
    table = {}
    for q in range(n + 1):
        try:
            res = mpa.discover_dependencies(n, q, lam_samples)
        except Exception as exc:  # RankDeficient / NoSolution become failures with a witness
            return rep.fail({"q": q, "error": type(exc).__name__, "message": str(exc)})
        table[str(q)] = {
            sign: {str(l): [[format_scalar(c) for c in row] for row in rows] for l, rows in res[sign].items()}
            for sign in "+-"
        }
    rep.details["coefficients"] = table
    return rep


def check_bethe_report(n, lam) -> Report:
    return bethe.check_bethe(n, lam)


def _run_task(task):
    fn, kwargs = task
    kwargs = dict(kwargs)
    with_timing = kwargs.pop("_timing", False)
    try:
        rep = Report("pending", {})
        with timed(rep):
            out = fn(**kwargs)
        out.millis = rep.millis if with_timing else 0.0
        return out.to_json()
    except Exception as exc:  # reported, never swallowed silently
        return _error_entry(fn, kwargs, type(exc).__name__, str(exc))


def _error_entry(fn, kwargs, error, message):
    name = getattr(fn, "__name__", "check").replace("check_", "")
    params = {k: str(v) for k, v in kwargs.items() if not k.startswith("_")}
    return {"check": name, "params": params, "status": "error", "label": PROVEN,
            "witness": {"error": error, "message": message}, "millis": 0.0}


def _config_json(args, suites):
    keys = ("n", "alpha_max", "beta_max", "lam", "mu", "eta", "epsilon", "kmax", "samples", "seed")
    cfg = {"suites": list(suites)}
    for k in keys:
        v = getattr(args, k, None)
        if v is not None:
            cfg[k] = format_scalar(v) if isinstance(v, Scalar) else v
    return cfg


def _sort_key(entry):
    return entry["check"], json.dumps(entry["params"], sort_keys=True)


def run_suite(args) -> tuple[int, dict]:
    suites = SUITES if args.suite == "all" else (args.suite,)
    tasks = []
    for s in suites:
        for fn, kw in plan_suite(s, args):
            kw = dict(kw)
            kw["_timing"] = args.timing
            tasks.append((fn, kw))
    cap = _memory_cap()
    if cap is not None:
        # GMP aborts on allocation failure, so capped checks run in their own process
        with ThreadPoolExecutor(max_workers=max(1, args.jobs)) as pool:
            results = list(pool.map(lambda t: _run_capped(t, cap), tasks))
    elif args.jobs and args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_run_task, tasks))
    else:
        results = [_run_task(t) for t in tasks]
    results.sort(key=_sort_key)
    passed = sum(r["status"] == "exact-pass" for r in results)
    failed = sum(r["status"] == "fail" for r in results)
    errors = sum(r["status"] == "error" for r in results)
    code = EXIT_OK if passed == len(results) else EXIT_FAIL
    report = {
        "suite": args.suite,
        "config": _config_json(args, suites),
        "checks": results,
        "summary": {"total": len(results), "passed": passed, "failed": failed, "errors": errors,
                    "exit_code": code},
    }
    return code, report


# --- emitters ---------------------------------------------------------------

def emit_artifact(kind: str, args) -> dict:
    obj = _build_artifact(kind, args)
    return {"kind": kind, **obj}


def _build_artifact(kind: str, args) -> dict:
    if kind == "ness":
        problem = ness.LindbladProblem(args.n, args.epsilon)
        rho, tr = ness.build_ness(problem)
        out = rho.to_json()
        out.update({"epsilon": format_scalar(problem.epsilon), "lambda": format_scalar(problem.lam),
                    "trace": format_scalar(tr)})
        return out
    if kind == "transfer":
        out = mpa.transfer(args.n, args.lam).to_json()
        out["lambda"] = format_scalar(args.lam)
        return out
    if kind == "charges":
        zs, _ = charges.charges(args.n, args.kmax)
        return {"n": args.n, "kmax": args.kmax, "charges": {str(k): z.to_json() for k, z in zs.items()}}
    if kind == "rblock":
        alpha = args.alpha if args.alpha is not None else _pick(args, "alpha_max", 3)
        return rmat.build_r(args.lam, args.mu, alpha).to_json()
    raise ValueError(kind)


def parse_artifact(obj: dict):
    """Rebuild the exact object behind an emitted JSON document."""
    kind = obj.get("kind")
    if kind in ("ness", "transfer"):
        return SpinMatrix.from_json(obj)
    if kind == "charges":
        return {int(k): SpinMatrix.from_json(z) for k, z in obj["charges"].items()}
    if kind == "rblock":
        return rmat.RMatrix.from_json(obj)
    raise ValueError(f"unknown artifact kind {kind!r}")


def reemit_artifact(obj: dict) -> dict:
    """parse then emit again; equal to ``obj`` when the round trip is lossless."""
    value = parse_artifact(obj)
    meta = {k: v for k, v in obj.items() if k not in ("n", "entries", "charges", "alpha_max", "blocks")}
    if isinstance(value, SpinMatrix):
        return {**{"kind": meta.pop("kind")}, **value.to_json(), **meta}
    if isinstance(value, dict):
        return {"kind": "charges", "n": obj["n"], "kmax": obj["kmax"],
                "charges": {str(k): z.to_json() for k, z in value.items()}}
    return {"kind": "rblock", **value.to_json()}


def _write(obj, out):
    text = json.dumps(obj, indent=2, sort_keys=False) + "\n"
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


# --- parser -----------------------------------------------------------------

def _common(p, *, lam_required=False):
    p.add_argument("--n", type=_natural)
    p.add_argument("--alpha-max", dest="alpha_max", type=_natural)
    p.add_argument("--beta-max", dest="beta_max", type=_natural)
    p.add_argument("--lambda", dest="lam", type=_scalar_arg, required=lam_required)
    p.add_argument("--mu", type=_scalar_arg)
    p.add_argument("--eta", type=_scalar_arg)
    p.add_argument("--epsilon", type=_scalar_arg)
    p.add_argument("--kmax", type=_natural)
    p.add_argument("--samples", type=_natural, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.add_argument("--jobs", type=_natural, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="exint", description="Exact certification of the exterior R-matrix, "
                                     "transfer matrices, NESS and charges of the boundary-driven XXX chain.")
    sub = parser.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("check", help="run a check suite")
    pc.add_argument("suite", choices=SUITES + ("all",))
    _common(pc)
    pc.add_argument("--timing", action="store_true", help="record wall-clock millis (reports stop being byte-stable)")

    pe = sub.add_parser("emit", help="write an exact object as JSON")
    pe.add_argument("kind", choices=("ness", "transfer", "charges", "rblock"))
    _common(pe)
    pe.add_argument("--alpha", type=_natural)

    pn = sub.add_parser("ness", help="build the NESS and certify stationarity")
    _common(pn)

    pz = sub.add_parser("charges", help="conserved charges and their identities")
    _common(pz)

    pb = sub.add_parser("bethe", help="single-particle rapidities and eigenvalues")
    _common(pb)
    pb.add_argument("--roots-only", action="store_true")
    pb.add_argument("--csv", help="also write roots and eigenvalues as flat CSV")
    return parser


def _need(args, parser, *names):
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        parser.error("missing required option(s): " + ", ".join("--" + m.replace("_", "-") for m in missing))


_SCALAR_FLAGS = ("--lambda", "--mu", "--eta", "--epsilon")


def _attach_negative_values(argv):
    """``--mu -3/7`` becomes ``--mu=-3/7`` so argparse does not read a flag."""
    out = []
    it = iter(argv)
    for tok in it:
        if tok in _SCALAR_FLAGS:
            nxt = next(it, None)
            if nxt is not None and nxt.startswith("-") and (nxt[1:2].isdigit() or nxt[1:2] == "i"):
                out.append(f"{tok}={nxt}")
                continue
            out.append(tok)
            if nxt is not None:
                out.append(nxt)
            continue
        out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_attach_negative_values(argv))
    if args.command != "check":
        apply_memory_cap()
    try:
        if args.command == "check":
            code, report = run_suite(args)
            _write(report, args.out)
            return code
        if args.command == "emit":
            required = {"ness": ("n", "epsilon"), "transfer": ("n", "lam"), "charges": ("n", "kmax"),
                        "rblock": ("lam", "mu")}[args.kind]
            _need(args, parser, *required)
            _write(emit_artifact(args.kind, args), args.out)
            return EXIT_OK
        if args.command == "ness":
            _need(args, parser, "n", "epsilon")
            rep = ness.check_ness(args.n, args.epsilon)
            obj = emit_artifact("ness", args)
            obj["residual_status"] = rep.status
            obj["report"] = rep.to_json()
            _write(obj, args.out)
            return EXIT_OK if rep.passed else EXIT_FAIL
        if args.command == "charges":
            _need(args, parser, "n", "kmax")
            rep = charges.check_charge_identities(args.n, args.kmax)
            obj = emit_artifact("charges", args)
            obj["report"] = rep.to_json()
            _write(obj, args.out)
            return EXIT_OK if rep.passed else EXIT_FAIL
        if args.command == "bethe":
            _need(args, parser, "n", "lam")
            return _bethe_command(args)
    except MemoryError:
        sys.stderr.write("exint: memory cap EXINT_MAX_BYTES exceeded\n")
        return EXIT_FAIL
    return EXIT_USAGE


def _bethe_command(args) -> int:
    lam = complex(args.lam)
    if args.roots_only:
        roots = bethe.solve_bethe(args.n, lam)
        obj = {"n": args.n, "lambda": format_scalar(args.lam),
               "roots": [{"xi": [z.real, z.imag], "residual": float(r)} for z, r in roots]}
        _write(obj, args.out)
        return EXIT_OK
    rep = bethe.check_bethe(args.n, lam)
    obj = {"n": args.n, "lambda": format_scalar(args.lam), "report": _floatify(rep.to_json())}
    _write(obj, args.out)
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write("xi_re,xi_im,residual,eig_re,eig_im,eigen_residual\n")
            for row in rep.details["roots"]:
                eig = row.get("eigenvalue", ["", ""])
                fh.write(f"{row['xi'][0]},{row['xi'][1]},{row['residual']},{eig[0]},{eig[1]},"
                         f"{row.get('eigen_residual', '')}\n")
    return EXIT_OK if rep.passed else EXIT_FAIL


def _floatify(obj):
    """numpy scalars to plain floats for json."""
    if isinstance(obj, dict):
        return {k: _floatify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_floatify(v) for v in obj]
    if hasattr(obj, "item") and not isinstance(obj, (str, bytes)):
        return obj.item()
    return obj


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
