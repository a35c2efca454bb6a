"""Experiment driver: key = value configs, six experiment families as
subcommands, deterministic delimiter-separated output files, and run
manifests that echo the resolved parameters.

Exit status: 0 success, 1 configuration error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .classical import SpherePoint, phase_portrait
from .entangle import entropies, ks_exponential, reduce, schmidt
from .evolve import (
    CoupledParams,
    TopParams,
    build_single_propagator,
    evolve,
    initial_product_state,
    single_top_evolve,
)
from .husimi import SphericalGrid, delta_n_eff, gamma_factor, husimi_field, m2_pure, m2_rdm
from .rmt import sr_analytic
from .spincore import SpinQuantum, coherent_amplitudes

KINDS = ("evolve", "portrait", "husimi", "deltaneff", "rmt-compare", "stats")


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    """Resolved experiment parameters; defaults reproduce the j = 80,
    k = 6, eps = 1e-2 setup started at (theta, phi) = (0.89, 0.63)."""

    kind: str
    j: int = 80
    k: float = 6.0
    k1: Optional[float] = None
    k2: Optional[float] = None
    eps: float = 1e-2
    eps_list: Optional[tuple] = None
    steps: int = 1000
    theta0: float = 0.89
    phi0: float = 0.63
    theta0_2: Optional[float] = None
    phi0_2: Optional[float] = None
    n_theta: int = 200
    n_phi: int = 400
    snapshots: Optional[tuple] = None
    stride: int = 1
    seed: int = 0
    out: str = "runs"
    portrait_grid: int = 20
    portrait_iters: int = 500
    ic_grid: int = 4
    stats_mode: str = "state"
    pool: str = "all"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown experiment kind {self.kind!r}")
        if self.j < 0 or self.steps < 1 or self.stride < 1 or self.seed < 0:
            raise ConfigError("j/steps/stride must be positive, seed nonnegative")
        if self.stats_mode not in ("state", "rdm"):
            raise ConfigError(f"stats_mode must be 'state' or 'rdm', got {self.stats_mode!r}")
        if self.pool not in ("all", "top"):
            raise ConfigError(f"pool must be 'all' or 'top', got {self.pool!r}")

    @property
    def spin(self) -> SpinQuantum:
        return SpinQuantum.from_j(self.j)

    def kick_pair(self) -> tuple:
        k1 = self.k1 if self.k1 is not None else self.k
        if self.k2 is not None:
            k2 = self.k2
        elif self.kind == "rmt-compare":
            k2 = k1 + 0.1  # slightly non-identical tops break permutation symmetry
        else:
            k2 = k1
        return (k1, k2)

    def angles(self) -> tuple:
        t2 = self.theta0_2 if self.theta0_2 is not None else self.theta0
        p2 = self.phi0_2 if self.phi0_2 is not None else self.phi0
        return (self.theta0, self.phi0, t2, p2)

    def snapshot_steps(self) -> tuple:
        return self.snapshots if self.snapshots is not None else (0, self.steps)

    def epsilons(self) -> tuple:
        return self.eps_list if self.eps_list is not None else (self.eps,)


_INT_KEYS = {"j", "steps", "n_theta", "n_phi", "stride", "seed",
             "portrait_grid", "portrait_iters", "ic_grid"}
_FLOAT_KEYS = {"k", "k1", "k2", "eps", "theta0", "phi0", "theta0_2", "phi0_2"}
_STR_KEYS = {"kind", "out", "stats_mode", "pool"}
_TUPLE_FLOAT_KEYS = {"eps_list"}
_TUPLE_INT_KEYS = {"snapshots"}
_ALL_KEYS = _INT_KEYS | _FLOAT_KEYS | _STR_KEYS | _TUPLE_FLOAT_KEYS | _TUPLE_INT_KEYS


def _convert(key: str, raw: str):
    try:
        if key in _INT_KEYS:
            return int(raw)
        if key in _FLOAT_KEYS:
            return float(raw)
        if key in _TUPLE_FLOAT_KEYS:
            return tuple(float(t) for t in raw.split(",") if t.strip())
        if key in _TUPLE_INT_KEYS:
            return tuple(int(t) for t in raw.split(",") if t.strip())
    except ValueError as exc:
        raise ConfigError(f"bad value for {key!r}: {raw!r}") from exc
    return raw


def parse_config_text(text: str) -> dict:
    """One `key = value` per line; # starts a comment; blank lines ignored."""
    out = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, _, raw = body.partition("=")
        key = key.strip()
        raw = raw.strip()
        if key not in _ALL_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        out[key] = _convert(key, raw)
    return out


def config_from_mapping(kind: str, mapping: dict) -> RunConfig:
    mapping = dict(mapping)
    mapping.pop("kind", None)
    unknown = set(mapping) - _ALL_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    return RunConfig(kind=kind, **mapping)


def _fmt(x: float) -> str:
    return f"{x:.12e}"


def _config_value_str(val) -> str:
    if isinstance(val, tuple):
        return ",".join(repr(v) for v in val)
    if isinstance(val, float):
        return repr(val)
    return str(val)


def config_lines(cfg: RunConfig) -> list:
    lines = []
    for f in fields(cfg):
        val = getattr(cfg, f.name)
        if val is None:
            continue
        lines.append(f"{f.name} = {_config_value_str(val)}")
    return lines


def config_from_manifest_text(text: str) -> RunConfig:
    """Rebuild the RunConfig echoed in a manifest, ignoring bookkeeping keys."""
    params = {}
    kind = None
    for line in text.splitlines():
        body = line.split("#", 1)[0].strip()
        if not body or "=" not in body:
            continue
        key, _, raw = body.partition("=")
        key = key.strip()
        raw = raw.strip()
        if key == "kind":
            kind = raw
        elif key in _ALL_KEYS:
            params[key] = _convert(key, raw)
    if kind is None:
        raise ConfigError("manifest carries no kind")
    return config_from_mapping(kind, params)


@dataclass
class RunManifest:
    config: RunConfig
    duration_seconds: float
    files: dict  # file name -> data row count

    def to_text(self) -> str:
        lines = ["# run manifest"]
        lines.extend(config_lines(self.config))
        lines.append(f"artifact_version = {__version__}")
        lines.append(f"duration_seconds = {self.duration_seconds:.3f}")
        for name in sorted(self.files):
            lines.append(f"output_rows.{name} = {self.files[name]}")
        return "\n".join(lines) + "\n"


def _write_text(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _write_table(path: Path, header: str, rows) -> int:
    lines = [header]
    count = 0
    for row in rows:
        lines.append("\t".join(row))
        count += 1
    _write_text(path, "\n".join(lines) + "\n")
    return count


# ---------------------------------------------------------------------------
# experiment engines


def entropy_series(cfg: RunConfig) -> dict:
    """Coupled run: per recorded step S_V, S_R, M2 of rho_1, occupancy, gamma."""
    spin = cfg.spin
    n_dim = spin.dim
    k1, k2 = cfg.kick_pair()
    params = CoupledParams(TopParams(spin, k1), TopParams(spin, k2), cfg.eps)
    state = initial_product_state(spin, *cfg.angles())
    rec = {"n": [], "s_v": [], "s_r": [], "m2": [], "delta_n_eff": [], "gamma": []}

    def observe(n, st):
        if n % cfg.stride != 0 and n != cfg.steps:
            return
        rho = reduce(st, 1)
        s_v, s_r = entropies(schmidt(rho))
        m2 = m2_rdm(rho)
        dn = delta_n_eff(m2, n_dim)
        rec["n"].append(n)
        rec["s_v"].append(s_v)
        rec["s_r"].append(s_r)
        rec["m2"].append(m2)
        rec["delta_n_eff"].append(dn)
        rec["gamma"].append(gamma_factor(s_v, dn, n_dim))

    evolve(state, params, cfg.steps, observer=observe)
    return {key: np.asarray(val) for key, val in rec.items()}


def single_top_series(cfg: RunConfig) -> dict:
    """Single-top run: per recorded step the pure-state M2 and occupancy."""
    spin = cfg.spin
    n_dim = spin.dim
    prop = build_single_propagator(TopParams(spin, cfg.k))
    v0 = coherent_amplitudes(spin, cfg.theta0, cfg.phi0)
    rec = {"n": [], "m2": [], "delta_n_eff": []}

    def observe(n, v):
        if n % cfg.stride != 0 and n != cfg.steps:
            return
        m2 = m2_pure(v)
        rec["n"].append(n)
        rec["m2"].append(m2)
        rec["delta_n_eff"].append(delta_n_eff(m2, n_dim))

    single_top_evolve(v0, prop, cfg.steps, observer=observe)
    return {key: np.asarray(val) for key, val in rec.items()}


def rmt_compare_series(cfg: RunConfig, eps: float) -> dict:
    """Measured S_R averaged over a lattice of initial coherent products,
    next to both analytic evaluation routes."""
    spin = cfg.spin
    k1, k2 = cfg.kick_pair()
    params = CoupledParams(TopParams(spin, k1), TopParams(spin, k2), eps)
    g = cfg.ic_grid
    thetas = (np.arange(g) + 0.5) * math.pi / g
    phis = -math.pi + (np.arange(g) + 0.5) * 2.0 * math.pi / g
    acc = np.zeros(cfg.steps)

    for th in thetas:
        for ph in phis:
            state = initial_product_state(spin, th, ph, th, ph)

            def observe(n, st, acc=acc):
                a = st.amplitudes
                rho = a @ a.conj().T
                acc[n - 1] += 1.0 - float((np.abs(rho) ** 2).sum())

            evolve(state, params, cfg.steps, observer=observe)
    acc /= g * g
    n_arr = np.arange(1, cfg.steps + 1)
    return {
        "n": n_arr,
        "sr_measured": acc,
        "sr_exact_sum": np.array([sr_analytic(n, spin, eps, "exact-sum") for n in n_arr]),
        "sr_closed_form": np.array(
            [sr_analytic(n, spin, eps, "closed-form") for n in n_arr]
        ),
        "ic_thetas": thetas,
        "ic_phis": phis,
    }


def stats_components(cfg: RunConfig) -> np.ndarray:
    """Pooled complex components for the statistics experiment.

    Mode 'state': the time-evolved single-top state at each snapshot step.
    Mode 'rdm': eigenvectors of the subsystem-1 RDM of the coupled run at
    each snapshot ('all' pools every eigenvector, 'top' the upper half of
    the spectrum).
    """
    spin = cfg.spin
    snaps = sorted(set(cfg.snapshot_steps()))
    pool = []
    if cfg.stats_mode == "state":
        prop = build_single_propagator(TopParams(spin, cfg.k))
        v = coherent_amplitudes(spin, cfg.theta0, cfg.phi0)
        if 0 in snaps:
            pool.append(v.copy())

        def observe(n, vec):
            if n in snaps:
                pool.append(vec.copy())

        single_top_evolve(v, prop, max(max(snaps), 1), observer=observe)
    else:
        k1, k2 = cfg.kick_pair()
        params = CoupledParams(TopParams(spin, k1), TopParams(spin, k2), cfg.eps)
        state = initial_product_state(spin, *cfg.angles())

        def collect(st):
            spec = schmidt(reduce(st, 1))
            cols = spec.eigenvectors.shape[1]
            take = cols if cfg.pool == "all" else max(1, cols // 2)
            for col in range(take):
                pool.append(spec.eigenvectors[:, col].copy())

        if 0 in snaps:
            collect(state)

        def observe(n, st):
            if n in snaps:
                collect(st)

        evolve(state, params, max(max(snaps), 1), observer=observe)
    return np.concatenate(pool)


# ---------------------------------------------------------------------------
# subcommand runners


def _run_evolve(cfg: RunConfig, outdir: Path) -> dict:
    series = entropy_series(cfg)
    rows = (
        (str(n), _fmt(sv), _fmt(sr), _fmt(dn), _fmt(gm))
        for n, sv, sr, dn, gm in zip(
            series["n"], series["s_v"], series["s_r"],
            series["delta_n_eff"], series["gamma"],
        )
    )
    count = _write_table(outdir / "evolve_entropy.tsv",
                         "# n\tS_V\tS_R\tdelta_n_eff\tgamma", rows)
    return {"evolve_entropy.tsv": count}


def _run_portrait(cfg: RunConfig, outdir: Path) -> dict:
    g = cfg.portrait_grid
    cos_thetas = -1.0 + (np.arange(g) + 0.5) * 2.0 / g
    phis = -math.pi + (np.arange(g) + 0.5) * 2.0 * math.pi / g
    ics = []
    for ct in cos_thetas:
        st = math.sqrt(max(0.0, 1.0 - ct * ct))
        for ph in phis:
            ics.append(SpherePoint(st * math.cos(ph), st * math.sin(ph), ct))
    orbits = phase_portrait(cfg.k, ics, cfg.portrait_iters)
    rows = (
        (_fmt(phi), _fmt(ct))
        for orbit in orbits
        for ct, phi in orbit
    )
    count = _write_table(outdir / "portrait_points.tsv", "# phi\tcos_theta", rows)
    return {"portrait_points.tsv": count}


def _run_husimi(cfg: RunConfig, outdir: Path) -> dict:
    spin = cfg.spin
    grid = SphericalGrid.build(spin, cfg.n_theta, cfg.n_phi)
    snaps = sorted(set(cfg.snapshot_steps()))
    k1, k2 = cfg.kick_pair()
    params = CoupledParams(TopParams(spin, k1), TopParams(spin, k2), cfg.eps)
    state = initial_product_state(spin, *cfg.angles())
    files = {}

    def emit(step, st):
        field = husimi_field(reduce(st, 1), grid)
        name = f"husimi_n{step:05d}.tsv"
        header = (
            f"# husimi j={cfg.j} step={step} n_theta={cfg.n_theta} "
            f"n_phi={cfg.n_phi} rows=theta cols=phi"
        )
        rows = (tuple(_fmt(v) for v in row) for row in field.values)
        files[name] = _write_table(outdir / name, header, rows)

    if 0 in snaps:
        emit(0, state)
    positive = [s for s in snaps if s > 0]
    if positive:
        def observe(n, st):
            if n in positive:
                emit(n, st)

        evolve(state, params, max(positive), observer=observe)
    return files


def _run_deltaneff(cfg: RunConfig, outdir: Path) -> dict:
    series = single_top_series(cfg)
    rows = (
        (str(n), _fmt(m2), _fmt(dn))
        for n, m2, dn in zip(series["n"], series["m2"], series["delta_n_eff"])
    )
    count = _write_table(outdir / "deltaneff_single.tsv",
                         "# n\tm2_pure\tdelta_n_eff", rows)
    return {"deltaneff_single.tsv": count}


def _run_rmt_compare(cfg: RunConfig, outdir: Path) -> dict:
    files = {}
    for eps in cfg.epsilons():
        series = rmt_compare_series(cfg, eps)
        name = f"rmt_compare_eps{eps:g}.tsv"
        rows = (
            (str(n), _fmt(a), _fmt(b), _fmt(c))
            for n, a, b, c in zip(
                series["n"], series["sr_measured"],
                series["sr_exact_sum"], series["sr_closed_form"],
            )
        )
        files[name] = _write_table(
            outdir / name, "# n\tsr_measured\tsr_exact_sum\tsr_closed_form", rows
        )
    return files


def _run_stats(cfg: RunConfig, outdir: Path) -> dict:
    comps = stats_components(cfg)
    n_dim = cfg.spin.dim
    scaled = n_dim * np.abs(comps) ** 2
    rows = (
        (_fmt(c.real), _fmt(c.imag), _fmt(s)) for c, s in zip(comps, scaled)
    )
    files = {}
    files["stats_components.tsv"] = _write_table(
        outdir / "stats_components.tsv", "# re\tim\tn_abs2", rows
    )
    summary = (
        _fmt(comps.real.mean()), _fmt(comps.real.var()),
        _fmt(comps.imag.mean()), _fmt(comps.imag.var()),
        _fmt(ks_exponential(scaled)), str(len(comps)),
    )
    files["stats_summary.tsv"] = _write_table(
        outdir / "stats_summary.tsv",
        "# mean_re\tvar_re\tmean_im\tvar_im\tks_exponential\tn_samples",
        [summary],
    )
    return files


_RUNNERS = {
    "evolve": _run_evolve,
    "portrait": _run_portrait,
    "husimi": _run_husimi,
    "deltaneff": _run_deltaneff,
    "rmt-compare": _run_rmt_compare,
    "stats": _run_stats,
}


def run(cfg: RunConfig) -> RunManifest:
    outdir = Path(cfg.out)
    start = time.perf_counter()
    files = _RUNNERS[cfg.kind](cfg, outdir)
    manifest = RunManifest(
        config=cfg, duration_seconds=time.perf_counter() - start, files=files
    )
    _write_text(outdir / f"{cfg.kind.replace('-', '_')}_manifest.txt", manifest.to_text())
    return manifest


# ---------------------------------------------------------------------------
# argument parsing


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ktops", description="coupled kicked top experiments"
    )
    sub = parser.add_subparsers(dest="kind", required=True)
    for kind in KINDS:
        p = sub.add_parser(kind)
        p.add_argument("--config", type=str, default=None)
        p.add_argument("--j", type=int, default=None)
        p.add_argument("--k", type=float, default=None)
        p.add_argument("--k1", type=float, default=None)
        p.add_argument("--k2", type=float, default=None)
        p.add_argument("--eps", type=float, default=None)
        p.add_argument("--steps", type=int, default=None)
        p.add_argument("--theta0", type=float, default=None)
        p.add_argument("--phi0", type=float, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--out", type=str, default=None)
        p.add_argument("--snapshots", type=str, default=None)
        p.add_argument("--stride", type=int, default=None)
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    mapping = {}
    if args.config is not None:
        try:
            text = Path(args.config).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config file {args.config}: {exc}") from exc
        mapping.update(parse_config_text(text))
    for key in ("j", "k", "k1", "k2", "eps", "steps", "theta0", "phi0",
                "seed", "out", "stride"):
        val = getattr(args, key, None)
        if val is not None:
            mapping[key] = val
    if getattr(args, "snapshots", None) is not None:
        mapping["snapshots"] = _convert("snapshots", args.snapshots)
    return config_from_mapping(args.kind, mapping)


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    try:
        cfg = resolve_config(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    try:
        manifest = run(cfg)
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2
    for name in sorted(manifest.files):
        print(f"wrote {Path(cfg.out) / name} ({manifest.files[name]} rows)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
