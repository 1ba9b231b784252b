"""Config-driven experiment runner.

Each subcommand reads its parameters from the section of the same name in
an INI file (``--config``), with command-line flags taking precedence.
A run writes ``<command>.csv``, ``<command>.summary.json`` (one line,
also printed) and ``<command>.meta.json`` (timestamp and resolved
configuration) below the output root, which defaults to ``$MULTILAB_OUTPUT``
or ``./multilab-out``.

Exit codes: 0 pass, 1 tolerance breach, 2 configuration error.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import json
import math
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import validation
from .commutator import PvQuadratureSpec, calderon_c1_direct
from .errors import MultilabError
from .experiments import (
    c1_crosscheck,
    gaussian_pair,
    operator_norm_study,
    relative_l2,
    separable_cn_check,
    square_function_ratios,
)
from .grid import GridSpec, SpectralFunction, inverse_transform, sample, save_binary
from .littlewood_paley import build_dyadic_partition
from .multiplier_op import MultilinearPlan, apply
from .sobolev import (
    Family,
    SmoothnessSpec,
    fractional_multiplier,
    fractional_op,
    hormander_constant,
    multiparameter_constant,
    stein_I_alpha,
)
from .symbols import SYMBOL_IDS, constant_symbol, get_symbol


class ConfigError(MultilabError, ValueError):
    """A configuration value is missing, malformed or inconsistent."""


# parameter parsing ---------------------------------------------------------------

def _floats(text) -> tuple[float, ...]:
    if isinstance(text, (list, tuple)):
        return tuple(float(t) for t in text)
    return tuple(float(t) for t in str(text).replace(";", ",").split(",") if t.strip())


def _ints(text) -> tuple[int, ...]:
    return tuple(int(round(v)) for v in _floats(text))


def _bool(text) -> bool:
    if isinstance(text, bool):
        return text
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


@dataclass(frozen=True)
class Param:
    name: str
    kind: object
    default: object
    help: str = ""


COMPLEXITY = (
    "cost of the multiplier accumulation: (2K+1)^(m n) frequency tuples "
    "(m n <= 4), plus one FFT of (q N)^n points; e.g. m=2, n=1, K=512 -> 1e6 tuples, "
    "m=2, n=2, K=16 -> 1.2e6 tuples"
)


@dataclass(frozen=True)
class Command:
    name: str
    anchor: str
    params: tuple
    runner: object
    randomized: bool = False
    epilog: str = ""


@dataclass
class ExperimentConfig:
    """Resolved description of one run."""

    command: str
    params: dict
    seed: int | None
    output: Path
    jobs: int = 1
    sources: dict = field(default_factory=dict)


@dataclass
class Result:
    header: list
    rows: list
    passed: bool
    metrics: dict
    extra_tables: dict = field(default_factory=dict)


# commands -------------------------------------------------------------------------

def _partition_check(cfg):
    p = cfg.params
    P = build_dyadic_partition(p["dim"])
    r = np.logspace(p["log2_min"], p["log2_max"], p["samples"], base=2.0)
    direction = np.ones(p["dim"]) / math.sqrt(p["dim"])
    pts = r[:, None] * direction
    total = sum(P(2.0**-j * pts) for j in range(p["log2_min"] - 3, p["log2_max"] + 4))
    res = np.abs(total - 1.0)
    worst = float(res.max())
    return Result(["xi_norm", "residual"], list(zip(r, res)), worst <= p["tol"], {"max_residual": worst})


def _square_function(cfg):
    p = cfg.params
    ratios = square_function_ratios(p["n"], p["half_length"], p["band"], p["p"], p["trials"], cfg.seed)
    rows, metrics, ok = [], {}, True
    for t in range(p["trials"]):
        rows.append([t] + [ratios[q][t] for q in p["p"]])
    for q in p["p"]:
        v = ratios[q]
        ok &= bool(np.all(np.isfinite(v)) and v.min() > 0)
        metrics[f"p={q}"] = [float(v.min()), float(v.max())]
    return Result(["trial"] + [f"ratio_p{q}" for q in p["p"]], rows, ok, metrics)


def _fractional_roundtrip(cfg):
    p = cfg.params
    m, n = p["m"], p["n"]
    spec = _smoothness_from(dict(p, r=2.0), m, n)
    G = GridSpec(m * n, p["grid_n"], p["half_length"])
    rng = np.random.default_rng(cfg.seed)
    rows, worst = [], 0.0
    for t in range(p["waves"]):
        k0 = rng.integers(-G.n // 4, G.n // 4, size=G.dim)
        coeffs = np.zeros(G.shape, dtype=complex)
        coeffs[tuple(k0 + G.n // 2)] = (2 * G.half_length) ** G.dim
        wave = inverse_transform(SpectralFunction(G, coeffs))
        out = fractional_op(wave, spec)
        lam = fractional_multiplier(G, spec)[tuple(k0 + G.n // 2)]
        eig = float(np.max(np.abs(out.values - lam * wave.values)) / lam)
        back = fractional_op(out, spec.negated())
        rt = float(np.max(np.abs(back.values - wave.values)))
        worst = max(worst, eig, rt)
        rows.append(list(k0) + [lam, eig, rt])
    header = [f"k{i + 1}" for i in range(G.dim)] + ["multiplier", "eigen_error", "roundtrip_error"]
    return Result(header, rows, worst <= p["tol"], {"max_error": worst})


def _smoothness_from(p, m, n):
    fam = Family(p["family"])
    g = p["gamma"]
    if fam is Family.FULL:
        gamma = g[0]
    elif fam is Family.PER_VARIABLE:
        gamma = g if len(g) == m else g[0]
    else:
        gamma = np.reshape(g, (m, n)) if len(g) == m * n else g[0]
    return SmoothnessSpec(fam, m, n, gamma, p["r"])


def _hormander_constant(cfg):
    p = cfg.params
    sigma = get_symbol(p["symbol"], m=p["m"], n=p["n"])
    spec = _smoothness_from(p, sigma.m, sigma.n)
    G = GridSpec(sigma.m * sigma.n, p["grid_n"], p["half_length"])
    P = build_dyadic_partition(G.dim)
    rep = hormander_constant(sigma, P, spec, G, (p["jmin"], p["jmax"]), jobs=cfg.jobs)
    flat_required = sigma.homogeneous_degree == 0
    ok = rep.spread <= p["flatness"] if flat_required else True
    rows = [[j, v] for j, v in rep.profile.items()]
    return Result(["j", "norm"], rows, ok, {"A": rep.value, "spread": rep.spread, "argmax": rep.argmax})


def _multiparameter_constant(cfg):
    p = cfg.params
    sigma = get_symbol(p["symbol"], m=p["m"], n=p["n"])
    spec = _smoothness_from(dict(p, family="coordinatewise"), sigma.m, sigma.n)
    G = GridSpec(sigma.m * sigma.n, p["grid_n"], p["half_length"])
    parts = [build_dyadic_partition(sigma.m)] * sigma.n
    rep = multiparameter_constant(sigma, parts, spec, G, (p["kmin"], p["kmax"]), jobs=cfg.jobs)
    flat_required = sigma.homogeneous_degree == 0 and p["symbol"] in ("one", "calderon-tensor")
    ok = rep.spread <= p["flatness"] if flat_required else True
    rows = [list(k) + [v] for k, v in rep.profile.items()]
    header = [f"k{l + 1}" for l in range(sigma.n)] + ["norm"]
    return Result(header, rows, ok, {"A": rep.value, "spread": rep.spread, "argmax": list(rep.argmax)})


def _operator_norm(cfg):
    p = cfg.params
    pairs = [tuple(p["p"][i:i + 2]) for i in range(0, len(p["p"]), 2)]
    study = operator_norm_study(p["ns"], pairs, p["trials"], cfg.seed, p["half_length"], p["band"], cfg.jobs)
    rows, ok, metrics = [], True, {}
    for e, maxima in study.items():
        for N, v in zip(p["ns"], maxima):
            rows.append([e[0], e[1], 1 / (1 / e[0] + 1 / e[1]), N, v])
        ok &= bool(np.all(np.isfinite(maxima)))
        ok &= all(b <= a * (1 + p["trend_slack"]) for a, b in zip(maxima, maxima[1:]))
        metrics[f"{e[0]},{e[1]}"] = maxima
    return Result(["p1", "p2", "p", "N", "max_ratio"], rows, ok, metrics)


def _product_identity(cfg):
    p = cfg.params
    G = GridSpec(1, p["grid_n"], p["half_length"])
    f = sample(lambda x: np.exp(-math.pi * x**2 / 4) * np.cos(3 * x), G)
    g = sample(lambda x: 1.0 / (1.0 + x**2), G)
    out = apply(MultilinearPlan(constant_symbol(2, 1), G, K=p["K"]), [f, g], jobs=cfg.jobs)
    err = relative_l2(out.values, f.values * g.values)
    rows = [[x, v.real, v.imag, w.real] for x, v, w in zip(G.points, out.values, f.values * g.values)]
    return Result(["x", "T_re", "T_im", "fg"], rows, err <= p["tol"], {"relative_l2": err})


def _commutator_xcheck(cfg):
    p = cfg.params
    err, d, m = c1_crosscheck(p["grid_n"], p["half_length"], p["pad"], cfg.jobs)
    f, a = gaussian_pair(d.spec)
    for name, obj in (("f", f), ("a", a), ("direct", d), ("multiplier", m)):
        save_binary(obj, cfg.output / f"commutator-xcheck.{name}.mlab")
    rows = [[x, u.real, u.imag, v.real, v.imag, abs(u - v)] for x, u, v in zip(d.spec.points, d.values, m.values)]
    eps_rows = []
    for cells, ext in (((1,), "none"), ((2, 1), "richardson"), ((3, 2, 1), "richardson")):
        out = calderon_c1_direct(f, a, PvQuadratureSpec(cells, ext))
        eps_rows.append([" ".join(map(str, cells)), ext, relative_l2(out, m)])
    return Result(
        ["x", "direct_re", "direct_im", "multiplier_re", "multiplier_im", "abs_diff"],
        rows, err <= p["tol"], {"relative_l2": err},
        {"eps": (["bands", "extrapolation", "relative_l2"], eps_rows)},
    )


def _commutator_cn(cfg):
    p = cfg.params
    pad = p["pad"] or None
    K = p["K"] or None
    err = separable_cn_check(p["grid_n"], p["half_length"], p["mode"], pad=pad, K=K)
    return Result(["grid_n", "mode", "relative_l2"], [[p["grid_n"], p["mode"], err]], err <= p["tol"], {"relative_l2": err})


def _phi_transform_check(cfg):
    p = cfg.params
    rows, ok, metrics = [], True, {}
    for N in p["ns"]:
        rep = validation.phi_fractional_transform_check(p["gamma"], GridSpec(1, N, p["half_length"]))
        rows.append([N, rep.c_fit, rep.residual, rep.c_closed])
        metrics[f"N={N}"] = {"c_fit": rep.c_fit, "residual": rep.residual}
    res = [r[2] for r in rows]
    cs = [r[1] for r in rows]
    ok &= res[-1] <= p["tol"]
    drift = float((max(cs) - min(cs)) / abs(cs[-1]))
    ok &= drift <= p["stability"]
    metrics["c_drift"] = drift
    return Result(["N", "c_fit", "residual", "c_closed_form"], rows, bool(ok), metrics)


def _stein_ialpha(cfg):
    p = cfg.params
    hat = lambda *xs: np.prod([np.maximum(1 - np.abs(x) / p["width"], 0) for x in xs], axis=0)  # noqa: E731
    G = GridSpec(p["dim"], p["grid_n"], p["half_length"])
    out = stein_I_alpha(sample(hat, G), p["alpha"], method=p["method"])
    Gf = GridSpec(p["dim"], p["grid_n"] * p["refine"], p["half_length"])
    ref = stein_I_alpha(sample(hat, Gf), p["alpha"], method="fft")
    sub = ref.values[(slice(None, None, p["refine"]),) * p["dim"]]
    err = relative_l2(out.values, sub)
    if p["dim"] == 1:
        rows = [[x, v.real, w.real] for x, v, w in zip(G.points, out.values, sub)]
        header = ["x", "I_alpha", "I_alpha_refined"]
    else:
        rows = [[i, j, out.values[i, j].real] for i in range(G.n) for j in range(G.n)]
        header = ["i", "j", "I_alpha"]
    return Result(header, rows, err <= p["tol"], {"relative_l2_vs_refined": err})


def _refinement(cfg):
    p = cfg.params
    rep = validation.refinement_study(p["experiment"], p["ladder"] or None)
    minimum = p["min_order"] or validation.EXPERIMENTS[p["experiment"]].min_order
    rows = [[r, e, v] for r, e, v in rep.rows()]
    return Result(["rung", "error", "value"], rows, rep.order >= minimum, {"order": rep.order, "kind": rep.kind})


_GRID = (Param("grid_n", int, 128, "samples per axis"), Param("half_length", float, 4.0, "box half length L"))

COMMANDS = {
    c.name: c
    for c in (
        Command(
            "partition-check",
            "anchor: the dyadic partition of unity hypothesis (sum over j of the annulus bumps equals 1)",
            (Param("dim", int, 1), Param("log2_min", int, -10), Param("log2_max", int, 10),
             Param("samples", int, 2001), Param("tol", float, 1e-8)),
            _partition_check,
        ),
        Command(
            "square-function",
            "anchor: the coordinate-wise Littlewood-Paley square function estimate (||S f||_p comparable to ||f||_p)",
            (Param("n", int, 64), Param("half_length", float, 8.0), Param("band", int, 8),
             Param("p", _floats, (1.5, 2.0, 3.0)), Param("trials", int, 50)),
            _square_function, randomized=True,
        ),
        Command(
            "fractional-roundtrip",
            "anchor: the three fractional differentiation operator types (coordinatewise, per variable, full)",
            (Param("family", str, "full"), Param("m", int, 2), Param("n", int, 1), Param("gamma", _floats, (1.2,)),
             Param("grid_n", int, 32), Param("half_length", float, 4.0), Param("waves", int, 8),
             Param("tol", float, 1e-10)),
            _fractional_roundtrip, randomized=True,
        ),
        Command(
            "hormander-constant",
            "anchor: the supremum over dyadic scales of the localized mixed Sobolev norm (constant A of the main theorem)",
            (Param("symbol", str, "calderon"), Param("m", int, 2), Param("n", int, 1),
             Param("family", str, "coordinatewise"), Param("gamma", _floats, (0.8,)), Param("r", float, 1.5),
             *_GRID, Param("jmin", int, -8), Param("jmax", int, 8), Param("flatness", float, 0.02)),
            _hormander_constant,
        ),
        Command(
            "multiparameter-constant",
            "anchor: the multiparameter constant with independent dyadic dilations of each coordinate slot",
            (Param("symbol", str, "calderon-tensor"), Param("m", int, 2), Param("n", int, 2),
             Param("gamma", _floats, (0.8,)), Param("r", float, 2.0), Param("grid_n", int, 16),
             Param("half_length", float, 4.0), Param("kmin", int, -2), Param("kmax", int, 2),
             Param("flatness", float, 0.02)),
            _multiparameter_constant,
        ),
        Command(
            "operator-norm",
            "anchor: boundedness of the Calderon commutator from L^p1 x L^p2 to L^p (empirical ratios)",
            (Param("ns", _ints, (256, 512, 1024)), Param("p", _floats, (2, 2, 4, 4, 3, 1.5)),
             Param("trials", int, 100), Param("half_length", float, 8.0), Param("band", int, 8),
             Param("trend_slack", float, 1e-6)),
            _operator_norm, randomized=True, epilog=COMPLEXITY,
        ),
        Command(
            "product-identity",
            "anchor: the multilinear multiplier operator with the constant symbol 1 (the pointwise product)",
            (*_GRID, Param("K", int, 64), Param("tol", float, 1e-10)),
            _product_identity, epilog=COMPLEXITY,
        ),
        Command(
            "commutator-xcheck",
            "anchor: the Calderon commutator as a singular integral versus its bilinear multiplier form",
            (Param("grid_n", int, 1024), Param("half_length", float, 16.0), Param("pad", int, 4),
             Param("tol", float, 1e-3)),
            _commutator_xcheck,
        ),
        Command(
            "commutator-cn",
            "anchor: the n-parameter Calderon-Coifman-Journe commutator with product kernel",
            (Param("grid_n", int, 256), Param("half_length", float, 8.0), Param("mode", str, "direct"),
             Param("pad", int, 0), Param("K", int, 0), Param("tol", float, 1e-2)),
            _commutator_cn,
        ),
        Command(
            "phi-transform-check",
            "anchor: the closed form of the inverse transform of Phi-hat times |xi|^gamma",
            (Param("gamma", float, 1.5), Param("ns", _ints, (2048, 4096)), Param("half_length", float, 64.0),
             Param("tol", float, 0.05), Param("stability", float, 0.02)),
            _phi_transform_check,
        ),
        Command(
            "stein-ialpha",
            "anchor: Stein's square-difference functional I_alpha characterizing fractional smoothness",
            (Param("dim", int, 1), Param("alpha", float, 0.5), Param("width", float, 1.0),
             Param("grid_n", int, 256), Param("half_length", float, 4.0),
             Param("refine", int, 4), Param("method", str, "direct"), Param("tol", float, 0.01)),
            _stein_ialpha,
        ),
        Command(
            "refinement",
            "anchor: convergence-order studies for the registered oracles (no single theorem)",
            (Param("experiment", str, "fft-gaussian"), Param("ladder", _floats, ()), Param("min_order", float, 0.0, "required order (0: the experiment's own threshold)")),
            _refinement,
        ),
    )
}


# config resolution ---------------------------------------------------------------

def _resolve(cmd: Command, args) -> ExperimentConfig:
    ini = configparser.ConfigParser()
    if args.config:
        path = Path(args.config)
        if not path.exists():
            raise ConfigError(f"config file {path} does not exist")
        ini.read(path)
    section = ini[cmd.name] if ini.has_section(cmd.name) else ini["DEFAULT"]
    known = {p.name for p in cmd.params} | {"seed", "output", "jobs"}
    unknown = [k for k in section if k not in known and k not in ini.defaults()] if ini.has_section(cmd.name) else []
    if unknown:
        raise ConfigError(f"[{cmd.name}] unknown keys: {', '.join(sorted(unknown))}")
    params, sources, errors = {}, {}, []
    for prm in cmd.params:
        flag = getattr(args, prm.name, None)
        if flag is not None:
            raw, src = flag, "flag"
        elif prm.name in section:
            raw, src = section[prm.name], "config"
        else:
            raw, src = prm.default, "default"
        try:
            params[prm.name] = prm.kind(raw) if prm.kind is not str else str(raw)
        except (TypeError, ValueError) as exc:
            errors.append(f"{prm.name}: {exc}")
        sources[prm.name] = src
    seed = args.seed if args.seed is not None else section.get("seed")
    try:
        seed = int(seed) if seed is not None else None
    except ValueError:
        errors.append(f"seed: not an integer: {seed!r}")
    if cmd.randomized and seed is None:
        errors.append("seed: required for randomized experiments")
    jobs = args.jobs if args.jobs is not None else int(section.get("jobs", 1))
    if jobs < 1:
        errors.append(f"jobs: must be >= 1, got {jobs}")
    if errors:
        raise ConfigError("; ".join(errors))
    out = Path(args.output or section.get("output") or os.environ.get("MULTILAB_OUTPUT") or "multilab-out")
    return ExperimentConfig(cmd.name, params, seed, out, jobs, sources)


def _validate(cfg: ExperimentConfig):
    p = cfg.params
    if "symbol" in p:
        try:
            get_symbol(p["symbol"], m=p.get("m", 2), n=p.get("n", 1))
        except MultilabError as exc:
            raise ConfigError(f"symbol: {exc}; catalog: {', '.join(SYMBOL_IDS)}") from None
    if "family" in p:
        try:
            Family(p["family"])
        except ValueError:
            raise ConfigError(f"family: must be one of {[f.value for f in Family]}") from None
    if "experiment" in p and p["experiment"] not in validation.EXPERIMENTS:
        raise ConfigError(f"experiment: unknown id {p['experiment']!r}; known: {sorted(validation.EXPERIMENTS)}")
    if "mode" in p and p["mode"] not in ("direct", "multiplier"):
        raise ConfigError("mode: must be 'direct' or 'multiplier'")
    if "method" in p and p["method"] not in ("direct", "fft"):
        raise ConfigError("method: must be 'direct' or 'fft'")
    if cfg.command == "operator-norm" and len(p["p"]) % 2:
        raise ConfigError("p: give exponent pairs p1,p2,p1,p2,...")


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (complex, np.complexfloating)):
        return repr(complex(v))
    if isinstance(v, np.integer):
        return str(int(v))
    return str(v)


def _write_csv(path: Path, header, rows):
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for r in rows:
            w.writerow([_fmt(v) for v in r])


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (np.floating, float)):
        return float(v)
    if isinstance(v, (np.integer, int)):
        return int(v)
    if isinstance(v, (np.bool_, bool)):
        return bool(v)
    return v


def run(cfg: ExperimentConfig) -> int:
    """Execute one experiment and write its artifacts; returns the exit status."""
    _validate(cfg)
    cfg.output.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    res = COMMANDS[cfg.command].runner(cfg)
    elapsed = time.perf_counter() - t0
    _write_csv(cfg.output / f"{cfg.command}.csv", res.header, res.rows)
    for suffix, (header, rows) in res.extra_tables.items():
        _write_csv(cfg.output / f"{cfg.command}-{suffix}.csv", header, rows)
    summary = {"command": cfg.command, "status": "pass" if res.passed else "fail", **_jsonable(res.metrics)}
    line = json.dumps(summary, sort_keys=True)
    (cfg.output / f"{cfg.command}.summary.json").write_text(line + "\n")
    meta = {
        "command": cfg.command,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
        "elapsed_s": elapsed,
        "seed": cfg.seed,
        "jobs": cfg.jobs,
        "params": _jsonable(cfg.params),
        "sources": cfg.sources,
    }
    (cfg.output / f"{cfg.command}.meta.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    print(line)
    return 0 if res.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="multilab",
        description="Numerical experiments on multilinear Fourier multipliers.",
        epilog="Exit codes: 0 pass, 1 tolerance breach, 2 configuration error.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    for cmd in COMMANDS.values():
        sp = sub.add_parser(
            cmd.name,
            help=cmd.anchor,
            description=cmd.anchor[0].upper() + cmd.anchor[1:] + ".",
            epilog=cmd.epilog or None,
            formatter_class=argparse.RawDescriptionHelpFormatter,
        )
        sp.add_argument("--config", help="INI file; the section named after the command is used")
        sp.add_argument("--output", help="output directory (default $MULTILAB_OUTPUT or ./multilab-out)")
        sp.add_argument("--seed", type=int, help="seed" + (" (required)" if cmd.randomized else ""))
        sp.add_argument("--jobs", type=int, help="worker cap for parallel sections")
        for prm in cmd.params:
            default = ",".join(map(str, prm.default)) if isinstance(prm.default, tuple) else prm.default
            sp.add_argument(f"--{prm.name.replace('_', '-')}", dest=prm.name, type=str, default=None,
                            help=f"{prm.help or prm.name} (default: {default})")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    cmd = COMMANDS[args.command]
    try:
        cfg = _resolve(cmd, args)
        return run(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except MultilabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
