"""Command line front end: parameter sweeps, state dumps and unit conversion.

    rindler-teleport fidelity-sweep --r-min 0 --r-max 3 --r-step 0.05 --out fid.csv
    rindler-teleport entropy-sweep --out entropy.csv --manifest run.jsonl
    rindler-teleport state-dump --r 0.5 --l 0 --m 1 --alpha-re 0.7071067811865476 --beta-re 0.7071067811865476
    rindler-teleport convert --omega-r 1e15 --acceleration 9.8

CSV values use 17 significant digits and '\\n' line endings so identical
configurations give byte-identical files.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import __version__
from .entropy import info_gain
from .fock import ContractViolation
from .rindler import (
    MAX_CUTOFF,
    PHYSICAL_CONSTANTS,
    DomainError,
    SqueezeParam,
    cutoff_for,
    horizon_crossing_time,
    one_particle_tail,
    r_from_omega,
    r_from_physical,
    squeeze,
    unruh_temperature,
    vacuum_tail,
)
from .teleport import (
    DegenerateOutcome,
    InputState,
    averaged_fidelity,
    averaged_fidelity_closed_form,
    fidelity_closed_form,
    fidelity_numeric,
    outcome_coefficients,
    rob_state_analytic,
    rob_state_numeric,
)

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4
COMMANDS = ("fidelity-sweep", "entropy-sweep", "gain-sweep", "state-dump", "convert")


class ConfigError(ValueError):
    pass


def fmt(x: float) -> str:
    if x == 0.0:
        return "0"  # drops the sign of -0.0
    return format(float(x), ".17g")


@dataclass(frozen=True)
class RunConfig:
    command: str
    r_min: float = 0.0
    r_max: float = 3.0
    r_step: float = 0.05
    cutoff: int | str = "auto"
    quadrature_points: int = 1001
    output_path: str | None = None
    format: str = "csv"
    jobs: int = 1
    # state-dump / convert inputs
    r: float | None = None
    l: int = 0
    m: int = 0
    alpha: complex = 1.0
    beta: complex = 0.0
    provenance: str = "analytic"
    omega_R: float | None = None
    acceleration: float | None = None
    Omega: float | None = None

    def validate(self) -> "RunConfig":
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.format != "csv":
            raise ConfigError(f"only csv output is supported, got {self.format!r}")
        if not self.r_min <= self.r_max:
            raise ConfigError(f"r_min ({self.r_min}) must be <= r_max ({self.r_max})")
        if not self.r_step > 0:
            raise ConfigError(f"r_step must be > 0, got {self.r_step}")
        if self.r_min < 0:
            raise ConfigError(f"r_min must be >= 0, got {self.r_min}")
        if self.quadrature_points < 3 or self.quadrature_points % 2 == 0:
            raise ConfigError(f"quadrature_points must be odd and >= 3, got {self.quadrature_points}")
        if self.cutoff != "auto" and not (isinstance(self.cutoff, int) and self.cutoff >= 2):
            raise ConfigError(f"cutoff must be 'auto' or an integer >= 2, got {self.cutoff!r}")
        if self.jobs < 1:
            raise ConfigError("jobs must be >= 1")
        if self.command == "state-dump":
            norm = abs(self.alpha) ** 2 + abs(self.beta) ** 2
            if abs(norm - 1) > 1e-12:
                raise ConfigError(f"|alpha|^2 + |beta|^2 must be 1, got {norm:.17g}")
        return self


@dataclass
class SweepResult:
    header: list[str]
    rows: list[list[float]]
    meta: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        lines = [",".join(self.header)]
        lines += [",".join(fmt(v) for v in row) for row in self.rows]
        return "\n".join(lines) + "\n"


def r_grid(cfg: RunConfig) -> list[float]:
    n = int(math.floor((cfg.r_max - cfg.r_min) / cfg.r_step + 1e-9)) + 1
    # rounding keeps 0.05-style steps free of accumulated binary noise
    return [round(cfg.r_min + i * cfg.r_step, 12) for i in range(n)]


def resolve_cutoff(cfg: RunConfig, r_max: float) -> int:
    return cutoff_for(squeeze(r_max)) if cfg.cutoff == "auto" else int(cfg.cutoff)


def _map(cfg: RunConfig, fn: Callable, grid: Sequence[float]) -> list:
    # executor.map yields in input order regardless of completion order
    if cfg.jobs == 1:
        return [fn(r) for r in grid]
    with ThreadPoolExecutor(max_workers=cfg.jobs) as ex:
        return list(ex.map(fn, grid))


def _truncation_meta(cutoff: int, r_max: float) -> dict:
    p = squeeze(r_max)
    return {"cutoff": cutoff, "vacuum_tail": vacuum_tail(p, cutoff),
            "one_particle_tail": one_particle_tail(p, cutoff),
            "cutoff_clamped": cutoff >= MAX_CUTOFF}


def run_fidelity_sweep(cfg: RunConfig) -> SweepResult:
    grid = r_grid(cfg)

    def row(r):
        p = squeeze(r)
        return [r, averaged_fidelity(p, cfg.quadrature_points), averaged_fidelity_closed_form(p)]

    return SweepResult(["r", "avg_fidelity", "avg_fidelity_closed_form"], _map(cfg, row, grid),
                       {"cutoff": None, "note": "closed-form fidelity needs no Fock truncation"})


def _entropy_reports(cfg: RunConfig):
    grid = r_grid(cfg)
    n = resolve_cutoff(cfg, grid[-1])
    return _map(cfg, lambda r: info_gain(squeeze(r), n), grid), _truncation_meta(n, grid[-1])


def run_entropy_sweep(cfg: RunConfig) -> SweepResult:
    reps, meta = _entropy_reports(cfg)
    return SweepResult(["r", "S_pre", "S_post", "S_vac"],
                       [[e.r, e.S_pre, e.S_post, e.S_vac] for e in reps], meta)


def run_gain_sweep(cfg: RunConfig) -> SweepResult:
    reps, meta = _entropy_reports(cfg)
    return SweepResult(["r", "dS_gain", "dS_gain_tsm"],
                       [[e.r, e.dS_gain, e.dS_gain_tsm] for e in reps], meta)


def run_state_dump(cfg: RunConfig) -> str:
    if cfg.r is None:
        raise ConfigError("state-dump needs --r")
    p = squeeze(cfg.r)
    n = resolve_cutoff(cfg, cfg.r)
    s = InputState(cfg.alpha, cfg.beta)
    o = outcome_coefficients(cfg.l, cfg.m, s)
    if cfg.provenance == "analytic":
        rs = rob_state_analytic(o, p, n)
    elif cfg.provenance == "numeric":
        rs = rob_state_numeric(o, s, p, n)
    else:
        raise ConfigError(f"provenance must be analytic or numeric, got {cfg.provenance!r}")
    mat = rs.rho.matrix
    rows, cols = np.nonzero(mat)
    lines = ["row,col,re,im"]
    lines += [f"{i},{j},{fmt(mat[i, j].real)},{fmt(mat[i, j].imag)}" for i, j in zip(rows, cols)]
    trailer = {
        "provenance": rs.provenance,
        "r": fmt(p.r),
        "l": cfg.l,
        "m": cfg.m,
        "cutoff": n,
        "trace": fmt(rs.rho.trace()),
        "fidelity": fmt(fidelity_numeric(rs, o)),
        "fidelity_closed_form": fmt(fidelity_closed_form(o, p)),
    }
    trailer.update({k: fmt(v) for k, v in sorted(rs.meta.items())})
    lines += [f"# {k}={v}" for k, v in trailer.items()]
    return "\n".join(lines) + "\n"


def run_convert(cfg: RunConfig) -> str:
    c = PHYSICAL_CONSTANTS["c"]
    given = [cfg.r is not None, cfg.Omega is not None, cfg.omega_R is not None]
    if sum(given) > 1:
        raise ConfigError("give exactly one of --r, --Omega or --omega-r (with --acceleration)")
    rows: list[tuple[str, str, str]] = []
    p: SqueezeParam | None = None
    if cfg.omega_R is not None:
        if cfg.acceleration is None:
            raise ConfigError("--omega-r needs --acceleration")
        p = r_from_physical(cfg.omega_R, cfg.acceleration)
    elif cfg.Omega is not None:
        p = r_from_omega(cfg.Omega)
    elif cfg.r is not None:
        p = squeeze(cfg.r)
    elif cfg.acceleration is None:
        raise ConfigError("convert needs --r, --Omega, --omega-r/--acceleration or --acceleration")

    if p is not None:
        rows.append(("r", fmt(p.r), "1"))
        rows.append(("r_underflow", str(p.underflow).lower(), "flag"))
        rows.append(("Omega", fmt(p.Omega), "1"))
        rows.append(("tanh_r", fmt(p.tanh), "1"))
        if p.r > 0:
            rows.append(("Omega_roundtrip_r", fmt(r_from_omega(p.Omega).r), "1"))
    if cfg.acceleration is not None:
        a = cfg.acceleration
        if not a > 0:
            raise DomainError(f"acceleration must be > 0, got {a}")
        rows.append(("acceleration", fmt(a), "m/s^2"))
        rows.append(("a_over_c", fmt(a / c), "1/s"))
        rows.append(("T_U", fmt(unruh_temperature(a)), "K"))
        rows.append(("horizon_time", fmt(horizon_crossing_time(a, c=c)), "s"))
        if p is not None and cfg.omega_R is None and math.isfinite(p.Omega):
            rows.append(("omega_R", fmt(p.Omega * a / c), "rad/s"))
    if cfg.omega_R is not None:
        rows.append(("omega_R", fmt(cfg.omega_R), "rad/s"))
    return "quantity,value,unit\n" + "".join(f"{k},{v},{u}\n" for k, v, u in rows)


def run(cfg: RunConfig) -> tuple[str, dict]:
    cfg.validate()
    if cfg.command == "fidelity-sweep":
        res = run_fidelity_sweep(cfg)
    elif cfg.command == "entropy-sweep":
        res = run_entropy_sweep(cfg)
    elif cfg.command == "gain-sweep":
        res = run_gain_sweep(cfg)
    elif cfg.command == "state-dump":
        return run_state_dump(cfg), {}
    else:
        return run_convert(cfg), {}
    return res.to_csv(), res.meta


def _complex(re: float, im: float) -> complex:
    return complex(re, im)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rindler-teleport", description=__doc__.split("\n")[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--r-min", type=float, default=0.0)
        sp.add_argument("--r-max", type=float, default=3.0)
        sp.add_argument("--r-step", type=float, default=0.05)
        sp.add_argument("--cutoff", default="auto")
        sp.add_argument("--quadrature-points", type=int, default=1001)
        sp.add_argument("--out", default=None, help="output path (default stdout)")
        sp.add_argument("--manifest", default=None, help="append the JSON run manifest here instead of stderr")
        sp.add_argument("--jobs", type=int, default=1)
        sp.add_argument("--r", type=float, default=None)
        sp.add_argument("--l", type=int, default=0, choices=(0, 1))
        sp.add_argument("--m", type=int, default=0, choices=(0, 1))
        sp.add_argument("--alpha-re", type=float, default=1.0)
        sp.add_argument("--alpha-im", type=float, default=0.0)
        sp.add_argument("--beta-re", type=float, default=0.0)
        sp.add_argument("--beta-im", type=float, default=0.0)
        sp.add_argument("--provenance", default="analytic", choices=("analytic", "numeric"))
        sp.add_argument("--omega-r", type=float, default=None, help="Rindler angular frequency, rad/s")
        sp.add_argument("--acceleration", type=float, default=None, help="proper acceleration, m/s^2")
        sp.add_argument("--Omega", type=float, default=None, help="dimensionless Rindler frequency")
    return ap


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    cutoff: int | str = ns.cutoff
    if cutoff != "auto":
        try:
            cutoff = int(cutoff)
        except ValueError:
            raise ConfigError(f"cutoff must be 'auto' or an integer, got {ns.cutoff!r}") from None
    return RunConfig(
        command=ns.command, r_min=ns.r_min, r_max=ns.r_max, r_step=ns.r_step, cutoff=cutoff,
        quadrature_points=ns.quadrature_points, output_path=ns.out, jobs=ns.jobs, r=ns.r,
        l=ns.l, m=ns.m, alpha=_complex(ns.alpha_re, ns.alpha_im), beta=_complex(ns.beta_re, ns.beta_im),
        provenance=ns.provenance, omega_R=ns.omega_r, acceleration=ns.acceleration, Omega=ns.Omega,
    )


def _manifest(cfg: RunConfig, meta: dict) -> str:
    conf = asdict(cfg)
    for k in ("alpha", "beta"):
        conf[k] = [conf[k].real, conf[k].imag] if isinstance(conf[k], complex) else conf[k]
    return json.dumps({"version": __version__, "config": conf, **meta}, sort_keys=True)


def main(argv: Sequence[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(ns)
        text, meta = run(cfg)
    except (ConfigError, DomainError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (ContractViolation, DegenerateOutcome) as e:
        print(f"numerical contract violation: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        if cfg.output_path is None:
            sys.stdout.write(text)
        else:
            with open(cfg.output_path, "w", newline="\n", encoding="utf-8") as fh:
                fh.write(text)
        line = _manifest(cfg, meta)
        if ns.manifest is None:
            print(line, file=sys.stderr)
        else:
            with open(ns.manifest, "a", encoding="utf-8") as fh:
                fh.write(line + "\n")
    except OSError as e:
        print(f"I/O error writing {e.filename}: {e.strerror}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
