"""Command-line front end: figure-data grids, verification suite, exports.

Exit codes: 0 success, 1 verification failure, 2 usage/config error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import completeness, sampler, statistics, zeros
from .gseq import AuxFunction, Factorial, G1, GSequence, verify_mellin_link
from .specfun import QuadratureError
from .states import INFINITE, StateSpec, excitation_distribution, overlap


class ConfigError(ValueError):
    pass


def _load_config(path: str) -> dict[str, Any]:
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config root must be a JSON object")
    return cfg


def _sequence(cfg: dict[str, Any]) -> GSequence:
    try:
        return GSequence.from_json(cfg["sequence"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad sequence spec: {exc}") from exc


def _k(cfg: dict[str, Any]):
    k = cfg.get("k")
    if k == "inf":
        return INFINITE
    if isinstance(k, int) and k >= 0:
        return k
    raise ConfigError(f"k must be a nonnegative integer or 'inf', got {k!r}")


def _grid(spec: dict[str, Any], name: str) -> np.ndarray:
    try:
        lo, hi, pts = float(spec["min"]), float(spec["max"]), int(spec["points"])
        scale = spec.get("scale", "linear")
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad {name} grid: {exc}") from exc
    if pts < 1:
        raise ConfigError(f"{name} grid must have at least one point")
    if scale == "linear":
        return np.linspace(lo, hi, pts)
    if scale == "log":
        if lo <= 0:
            raise ConfigError(f"log-scaled {name} grid requires min > 0")
        return np.geomspace(lo, hi, pts)
    raise ConfigError(f"unknown grid scale {scale!r}")


def _write_rows(rows: list[dict], fieldnames: Sequence[str], out: str | None,
                fmt: str) -> None:
    if fmt == "csv":
        fh = open(out, "w", newline="") if out else sys.stdout
        try:
            writer = csv.DictWriter(fh, fieldnames=fieldnames)
            writer.writeheader()
            writer.writerows(rows)
        finally:
            if out:
                fh.close()
    elif fmt == "json":
        text = json.dumps(rows, indent=2)
        if out:
            Path(out).write_text(text + "\n")
        else:
            print(text)
    else:
        raise ConfigError(f"unknown format {fmt!r}")


def cmd_probs(cfg: dict[str, Any], out: str | None, fmt: str) -> int:
    seq = _sequence(cfg)
    k = _k(cfg)
    if k == INFINITE:
        raise ConfigError("probs requires a finite k")
    zgrid = _grid(cfg["z_grid"], "z") if "z_grid" in cfg else None
    if zgrid is None:
        raise ConfigError("probs requires a z_grid")
    n_lo, n_hi = cfg.get("n_range", [0, int(k)])
    rows = []
    for r in zgrid:
        dist = excitation_distribution(StateSpec(seq, k, complex(r)))
        for n in range(int(n_lo), int(n_hi) + 1):
            rows.append({"abs_z": float(r), "n": n, "p": float(dist.probs[n])})
    _write_rows(rows, ["abs_z", "n", "p"], out, fmt)
    return 0


def _swept_sequence(base: dict[str, Any], name: str, value: float) -> GSequence:
    spec = dict(base)
    spec[name] = value
    return GSequence.from_json(spec)


def cmd_mandel(cfg: dict[str, Any], out: str | None, fmt: str) -> int:
    k = _k(cfg)
    zgrid = _grid(cfg["z_grid"], "z")
    sweep = cfg.get("param_sweep")
    rows = []
    if sweep:
        pgrid = _grid(sweep, "parameter")
        pname = sweep["name"]
        for pval in pgrid:
            seq = _swept_sequence(cfg["sequence"], pname, float(pval))
            for r in zgrid:
                if r == 0:
                    continue
                rep = statistics.mandel_q(StateSpec(seq, k, complex(r)))
                rows.append({"param": float(pval), "abs_z": float(r), "q": rep.q})
    else:
        seq = _sequence(cfg)
        for r in zgrid:
            if r == 0:
                continue
            rep = statistics.mandel_q(StateSpec(seq, k, complex(r)))
            rows.append({"param": math.nan, "abs_z": float(r), "q": rep.q})
    _write_rows(rows, ["param", "abs_z", "q"], out, fmt)
    return 0


def cmd_corr(cfg: dict[str, Any], out: str | None, fmt: str) -> int:
    seq = _sequence(cfg)
    k = _k(cfg)
    zgrid = _grid(cfg["z_grid"], "z")
    rows = []
    for r in zgrid:
        if r == 0:
            continue
        g2 = statistics.correlation_g2(StateSpec(seq, k, complex(r)))
        rows.append({"abs_z": float(r), "g2": g2})
    _write_rows(rows, ["abs_z", "g2"], out, fmt)
    return 0


def cmd_zeros(cfg: dict[str, Any], out: str | None, fmt: str) -> int:
    seq = _sequence(cfg)
    k = _k(cfg)
    if k == INFINITE:
        raise ConfigError("zeros requires a finite k")
    rs = zeros.polynomial_roots(seq, int(k))
    rows = list(rs.to_csv_rows())
    _write_rows(rows, ["re", "im", "residual"], out, fmt)
    return 0


_WEIGHT_BUILDERS = {
    "canonical_truncated": lambda w, k: completeness.CanonicalTruncatedWeight(k=int(k)),
    "ml": lambda w, k: completeness.MLWeight(alpha=w["alpha"], beta=w["beta"], k=k),
    "wright": lambda w, k: completeness.WrightWeight(lam=w["lam"], mu=w["mu"], k=k),
    "general": lambda w, k: completeness.GeneralWeight(
        f=AuxFunction(nu=w.get("nu", 0.0), rho=w.get("rho", 1.0), w=w.get("w", 1.0)),
        seq=AuxFunction(nu=w.get("nu", 0.0), rho=w.get("rho", 1.0),
                        w=w.get("w", 1.0)).matching_sequence(),
        k=k),
}


def cmd_moments(cfg: dict[str, Any], out: str | None, fmt: str) -> int:
    wcfg = cfg.get("weight")
    if not isinstance(wcfg, dict) or "kind" not in wcfg:
        raise ConfigError("moments requires a weight object with a 'kind'")
    kind = wcfg["kind"]
    if kind not in _WEIGHT_BUILDERS:
        raise ConfigError(f"unknown weight kind {kind!r}")
    k = wcfg.get("k", "inf")
    k = INFINITE if k == "inf" else int(k)
    try:
        weight = _WEIGHT_BUILDERS[kind](wcfg, k)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad weight parameters: {exc}") from exc
    n_max = int(wcfg.get("n_max", 4))
    tol = float(cfg.get("tol", 1e-6))
    report = completeness.moment_check(weight, n_max, tol)
    rows = list(report.to_csv_rows())
    _write_rows(rows, ["kind", "n", "target", "value", "residual"], out, fmt)
    return 0


def cmd_sample(cfg: dict[str, Any], out: str | None, fmt: str,
               seed_override: int | None) -> int:
    seq = _sequence(cfg)
    k = _k(cfg)
    z = cfg.get("z", {"re": 1.0, "im": 0.0})
    n_samples = cfg.get("n_samples")
    if not isinstance(n_samples, int) or n_samples < 1:
        raise ConfigError("sample requires a positive integer n_samples")
    seed = seed_override if seed_override is not None else int(cfg.get("seed", 0))
    dist = excitation_distribution(StateSpec(seq, k, complex(z["re"], z["im"])))
    run = sampler.sample_counts(dist, n_samples, seed)
    payload = run.to_json()
    if fmt == "csv":
        rows = [{"n": n, "count": int(c)} for n, c in enumerate(run.counts)]
        _write_rows(rows, ["n", "count"], out, fmt)
    else:
        text = json.dumps(payload, indent=2)
        if out:
            Path(out).write_text(text + "\n")
        else:
            print(text)
    return 0


def run_verification_suite(tol_override: float | None = None) -> tuple[list[dict], bool]:
    """The consolidated cross-module check battery behind `tgcs verify`."""
    checks: list[dict] = []

    def record(name: str, residual: float, tol: float) -> None:
        checks.append({"check": name, "residual": residual, "tol": tol,
                       "passed": residual <= tol})

    def tol(default: float) -> float:
        return tol_override if tol_override is not None else default

    # completeness moments (cancelled integrands)
    for weight, n_max, t in [
        (completeness.MLWeight(1.0, 1.0, INFINITE), 4, 1e-8),
        (completeness.MLWeight(2.0, 1.0, 5), 4, 1e-8),
        (completeness.GeneralWeight(AuxFunction(1.0, 2.0, 1.0),
                                    G1(1.0, 2.0, 1.0), INFINITE), 4, 1e-6),
        (completeness.WrightWeight(1.0, 1.0, 4), 2, 1e-6),
    ]:
        try:
            report = completeness.moment_check(weight, n_max, tol(t))
            residual = report.max_residual
        except QuadratureError:
            residual = math.inf  # unattainable tolerance: count as a failure
        record(f"moments:{weight.label()}", residual, tol(t))

    # Mellin links g(n) = f^(n+1)
    for f, seq, name in [
        (AuxFunction(0.0, 1.0, 1.0), Factorial(), "factorial"),
        (AuxFunction(1.5, 0.8, 1.3), G1(1.5, 0.8, 1.3), "g1"),
    ]:
        rep = verify_mellin_link(f, seq, 8, tol(1e-6))
        record(f"mellin-link:{name}", rep.max_residual, tol(1e-6))

    # polynomial roots and orthogonal pairs
    from .gseq import MLGamma, WrightProduct
    for seq in [Factorial(), MLGamma(0.5, 0.5), WrightProduct(0.5, 0.5)]:
        rs = zeros.polynomial_roots(seq, 10)
        record(f"roots:{seq.to_json()['variant']}", float(np.max(rs.residuals)),
               tol(1e-9))
        a, b = zeros.orthogonal_pair(seq, 10, rs.roots[0], 1.0 + 0.0j)
        record(f"orthogonality:{seq.to_json()['variant']}",
               abs(overlap(a, b)), tol(1e-10))

    # Q: moment route vs closed forms
    rng = np.random.Generator(np.random.PCG64(2024))
    worst = 0.0
    for _ in range(20):
        from .states import random_state_spec
        spec = random_state_spec(rng, k_max=15, z_max=5.0, allow_infinite=False)
        if spec.z == 0 or spec.k < 1:
            continue
        q_m = statistics.mandel_q(spec).q
        q_c = statistics.mandel_q_closed_form(spec.seq, int(spec.k), spec.u)
        # both routes share a ~1e-16*(1+u) absolute cancellation floor; when
        # |Q| itself sits near that floor, compare against the floor instead
        worst = max(worst, abs(q_m - q_c) / max(abs(q_c), 1e-3 * (1.0 + spec.u)))
    record("q-cross-form", worst, tol(1e-10))

    # sampler agreement on a fixed-seed run
    spec = StateSpec(Factorial(), 50, 1.0 + 0.0j)
    q_true = statistics.mandel_q(spec).q
    run = sampler.sample_counts(excitation_distribution(spec), 1_000_000, seed=7)
    dev = abs(run.q_hat - q_true) / (4.0 * run.stderr_q)
    record("sampler-agreement", dev, tol(1.0))

    return checks, all(c["passed"] for c in checks)


def cmd_verify(cfg: dict[str, Any], out: str | None, fmt: str) -> int:
    tol_override = cfg.get("tol")
    checks, ok = run_verification_suite(
        float(tol_override) if tol_override is not None else None)
    for c in checks:
        status = "PASS" if c["passed"] else "FAIL"
        print(f"[{status}] {c['check']}: residual {c['residual']:.3e} "
              f"(tol {c['tol']:.1e})")
    if out:
        _write_rows(checks, ["check", "residual", "tol", "passed"], out, fmt)
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tgcs",
                                     description="Truncated generalized coherent states toolkit")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ["probs", "mandel", "corr", "verify", "zeros", "moments", "sample"]:
        p = sub.add_parser(name)
        p.add_argument("--config", required=(name != "verify"),
                       help="path to a JSON run configuration")
        p.add_argument("--out", default=None, help="output file (default stdout)")
        p.add_argument("--format", default="csv", choices=["csv", "json"])
        p.add_argument("--seed", type=int, default=None, help="PRNG seed override")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _load_config(args.config) if args.config else {}
        if args.command == "probs":
            return cmd_probs(cfg, args.out, args.format)
        if args.command == "mandel":
            return cmd_mandel(cfg, args.out, args.format)
        if args.command == "corr":
            return cmd_corr(cfg, args.out, args.format)
        if args.command == "verify":
            return cmd_verify(cfg, args.out, args.format)
        if args.command == "zeros":
            return cmd_zeros(cfg, args.out, args.format)
        if args.command == "moments":
            return cmd_moments(cfg, args.out, args.format)
        if args.command == "sample":
            return cmd_sample(cfg, args.out, args.format, args.seed)
        raise ConfigError(f"unknown command {args.command!r}")
    except (ConfigError, KeyError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
