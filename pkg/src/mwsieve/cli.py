"""Command-line front end.

    mwsieve sieve --level 53 --d -47 --primes 5,7,11
    mwsieve table --level 53 --dmax 100
    mwsieve localdata --level 53 --ell 7
    mwsieve find-points --level 53 --tmax 5
    mwsieve validate --level 53

Exit status: 0 on success, 1 when --require-contradiction was given and the
sieve left survivors, 2 on usage or data errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from typing import Any, Sequence, TextIO

from .arith import squarefree_range
from .cache import DiskStore
from .model import VALIDATION_PRIMES, CurveModelData, ModelError, builtin_model, load_model, validate_model
from .quadpoint import InconsistencyError, InsufficientDataError, compute_DN_detailed, identify_field
from .sieve import (
    CombinatorialExplosionError,
    Coset,
    LocalDataCache,
    SieveConfig,
    UnusablePrimeError,
    Verdict,
    run_sieve,
)

SCHEMA_ID = "mwsieve-report/1"
SURVIVOR_PREVIEW = 20

log = logging.getLogger("mwsieve")


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mwsieve", description="Mordell-Weil sieve for quadratic points on bielliptic X0(N).")
    ap.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--level", type=int, help="use the model file shipped for this N")
        src.add_argument("--model", help="path to a model JSON file")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--cache-dir", default=None, help="LocalData cache directory (default: $MWSIEVE_CACHE_DIR)")

    def sieving(p: argparse.ArgumentParser) -> None:
        p.add_argument("--prime-bound", type=int, default=1000)
        p.add_argument("--smoothness", type=int, default=7)
        p.add_argument("--max-residues", type=int, default=10**7)
        p.add_argument("--max-modulus", type=int, default=10**12)

    p = sub.add_parser("sieve", help="sieve a single d")
    common(p)
    sieving(p)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--primes", type=_int_list, default=None, help="explicit ordered prime list")
    p.add_argument("--require-contradiction", action="store_true", help="exit 1 unless a contradiction is reached")

    p = sub.add_parser("table", help="all squarefree |d| < dmax")
    common(p)
    sieving(p)
    p.add_argument("--dmax", type=int, default=100)
    p.add_argument("--tmax", type=int, default=5)
    p.add_argument("--budget", type=int, default=40, help="primes used for field identification")
    p.add_argument("--workers", type=int, default=None, help="threads for per-d sieving (default: CPU count)")

    p = sub.add_parser("localdata", help="inspect the local table at one prime")
    common(p)
    p.add_argument("--ell", type=int, required=True)

    p = sub.add_parser("find-points", help="identify fields of definition of psi^*(t R)")
    common(p)
    p.add_argument("--tmax", type=int, default=5)
    p.add_argument("--dmax", type=int, default=100)
    p.add_argument("--budget", type=int, default=40)

    p = sub.add_parser("validate", help="check a model file")
    common(p)
    p.add_argument("--primes", type=_int_list, default=None)
    return ap


def _load(args: argparse.Namespace) -> CurveModelData:
    model = builtin_model(args.level) if args.level is not None else load_model(args.model)
    if model.genus >= 6 and model.inverse_map is None:
        log.warning(
            "genus %d model without inverse map: fibres need a %d-dimensional scan per prime; "
            "consider a lower --prime-bound", model.genus, model.genus - 2,
        )
    return model


def _cache(args: argparse.Namespace) -> LocalDataCache:
    return LocalDataCache(DiskStore.from_env(args.cache_dir))


def _config(args: argparse.Namespace, **extra: Any) -> SieveConfig:
    return SieveConfig(
        prime_bound=getattr(args, "prime_bound", 1000),
        smoothness=getattr(args, "smoothness", 7),
        max_residue_count=getattr(args, "max_residues", 10**7),
        max_modulus=getattr(args, "max_modulus", 10**12),
        prime_budget=getattr(args, "budget", 40),
        cache_dir=args.cache_dir,
        output_format=args.format,
        **extra,
    )


def _survivor_summary(s) -> dict[str, Any] | None:
    if s is None:
        return None
    return {"modulus": s.modulus, "count": len(s), "smallest": s.tolist()[:SURVIVOR_PREVIEW]}


def verdict_json(v: Verdict) -> dict[str, Any]:
    return {
        "d": v.d,
        "verdict": v.label,
        "primes": list(v.primes),
        "primes_used": len(v.trace),
        "skipped_primes": list(v.skipped),
        "trace": [
            {
                "ell": s.ell,
                "splitting": s.splitting.value,
                "coset": s.coset.value,
                "G": s.G,
                "allowed": list(s.allowed),
                "modulus": s.modulus,
                "count": s.count,
            }
            for s in v.trace
        ],
        "survivors": _survivor_summary(v.survivors),
        "torsion_survivors": _survivor_summary(v.torsion_survivors),
    }


def verdict_text(v: Verdict, with_trace: bool = True) -> list[str]:
    lines = [f"X0({v.N}) over Q(sqrt({v.d}))"]
    if with_trace:
        lines += ["  " + s.describe() for s in v.trace]
    if v.skipped:
        lines.append(f"  skipped unusable primes: {','.join(map(str, v.skipped))}")
    for label, s in (("survivors", v.survivors), ("survivors [+Q]", v.torsion_survivors)):
        if s is not None and not s.is_empty():
            shown = ",".join(map(str, s.tolist()[:SURVIVOR_PREVIEW]))
            more = ",..." if len(s) > SURVIVOR_PREVIEW else ""
            lines.append(f"  {label}: {len(s)} residues mod {s.modulus}: m ≡ {shown}{more}")
    lines.append(f"verdict: {v.label}")
    return lines


def _cmd_sieve(args, out: TextIO) -> int:
    model = _load(args)
    v = run_sieve(model, args.d, _config(args, primes=args.primes), _cache(args))
    if args.format == "json":
        _emit_json(out, {"command": "sieve", "N": model.N, "d_input": args.d, **verdict_json(v)})
    else:
        out.write("\n".join(verdict_text(v)) + "\n")
    if args.require_contradiction and not v.contradiction:
        return 1
    return 0


def _cmd_table(args, out: TextIO) -> int:
    model = _load(args)
    workers = args.workers if args.workers is not None else (os.cpu_count() or 1)
    res = compute_DN_detailed(model, args.dmax, args.tmax, _config(args), _cache(args), workers)
    expected = list(model.expected_D) if model.expected_D is not None else None
    if args.format == "json":
        _emit_json(out, {
            "command": "table",
            "N": model.N,
            "dmax": args.dmax,
            "tmax": args.tmax,
            "D": res.D,
            "expected_D": expected,
            "matches_expected": None if expected is None else sorted(expected) == res.D,
            "fields_by_t": [{"coset": c, "t": t, "fields": f} for (c, t), f in res.by_t.items()],
            "rows": [
                {"d": v.d, "verdict": v.label, "primes_used": len(v.trace),
                 "last_prime": v.trace[-1].ell if v.trace else None,
                 "survivors": _survivor_summary(v.survivors),
                 "torsion_survivors": _survivor_summary(v.torsion_survivors)}
                for v in res.verdicts
            ],
        })
        return 0
    lines = [f"X0({model.N}), squarefree |d| < {args.dmax}, |t| <= {args.tmax}"]
    for (c, t), f in res.by_t.items():
        tag = "" if c == "base" else " + Q"
        lines.append(f"  psi^*({t} R{tag}): {'Q(sqrt(' + str(f[0]) + '))' if len(f) == 1 else f or 'no field with |d| < ' + str(args.dmax)}")
    for v in res.verdicts:
        last = v.trace[-1].ell if v.trace else "-"
        lines.append(f"  d={v.d:4d}  {v.label:13s}  primes={len(v.trace):3d}  last ℓ={last}")
    lines.append(f"D_{model.N} = {{{', '.join(map(str, res.D))}}}")
    if expected is not None:
        lines.append("matches expected: " + ("yes" if sorted(expected) == res.D else f"NO (expected {sorted(expected)})"))
    out.write("\n".join(lines) + "\n")
    return 0


def _cmd_localdata(args, out: TextIO) -> int:
    model = _load(args)
    if args.ell == 2 or (2 * model.N) % args.ell == 0:
        raise UsageError(f"ell={args.ell} divides 2N = {2 * model.N}")
    local = _cache(args).get(model, args.ell)
    if args.format == "json":
        _emit_json(out, {"command": "localdata", "N": model.N, **local.to_json()})
        return 0
    lines = [f"X0({model.N}) at ℓ={local.ell}: G={local.G}"]
    for k, c in enumerate(local.cases):
        extra = f"  [+Q: {local.cases_torsion[k].value}]" if local.cases_torsion is not None else ""
        lines.append(f"  m ≡ {k:3d}: {c.value}{extra}")
    out.write("\n".join(lines) + "\n")
    return 0


def _cmd_find_points(args, out: TextIO) -> int:
    model = _load(args)
    cache = _cache(args)
    candidates = squarefree_range(args.dmax)
    rows = []
    cosets = [Coset.BASE] + ([Coset.TORSION] if model.torsion is not None else [])
    for coset in cosets:
        for t in range(-args.tmax, args.tmax + 1):
            if t == 0 and coset is Coset.BASE:
                continue
            f = identify_field(model, t, candidates, args.budget, coset=coset, cache=cache)
            rows.append({"coset": coset.value, "t": t, "fields": f})
    if args.format == "json":
        _emit_json(out, {"command": "find-points", "N": model.N, "dmax": args.dmax, "tmax": args.tmax, "fibres": rows})
    else:
        lines = [f"X0({model.N}) fibres psi^*(t R), |t| <= {args.tmax}"]
        for r in rows:
            tag = "" if r["coset"] == "base" else " + Q"
            lines.append(f"  t={r['t']:3d}{tag}: {r['fields'] or '-'}")
        out.write("\n".join(lines) + "\n")
    return 0


def _cmd_validate(args, out: TextIO) -> int:
    model = _load(args)
    primes = args.primes or [p for p in VALIDATION_PRIMES if (2 * model.N) % p]
    rep = validate_model(model, primes)
    if args.format == "json":
        _emit_json(out, {
            "command": "validate", "N": model.N, "primes": rep.primes, "ok": rep.ok,
            "failures": rep.failures, "unusable": rep.unusable,
            "base_points": {str(k): v for k, v in rep.base_points.items()},
            "point_counts": {str(k): v for k, v in rep.point_counts.items()},
        })
    else:
        lines = [f"X0({model.N}) model {model.content_hash[:16]}"]
        for ell in rep.primes:
            lines.append(f"  ℓ={ell}: #C(F_ℓ)={rep.point_counts.get(ell)}, psi base points={rep.base_points.get(ell)}")
        lines += [f"  FAIL: {f}" for f in rep.failures]
        lines.append("ok" if rep.ok else "FAILED")
        out.write("\n".join(lines) + "\n")
    return 0 if rep.ok else 2


def _emit_json(out: TextIO, body: dict[str, Any]) -> None:
    out.write(json.dumps({"schema": SCHEMA_ID, **body}, indent=2, ensure_ascii=False) + "\n")


_COMMANDS = {
    "sieve": _cmd_sieve,
    "table": _cmd_table,
    "localdata": _cmd_localdata,
    "find-points": _cmd_find_points,
    "validate": _cmd_validate,
}


def run_command(argv: Sequence[str] | None = None, out: TextIO | None = None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        return _COMMANDS[args.command](args, out)
    except (ModelError, UsageError, InsufficientDataError, InconsistencyError,
            CombinatorialExplosionError, UnusablePrimeError, FileNotFoundError, ValueError) as exc:
        print(f"mwsieve: error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
