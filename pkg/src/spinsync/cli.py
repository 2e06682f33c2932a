"""Command-line entry point: ``spinsync {sweep,husimi,steady,evolve,acceptance}``.

Exit codes: 0 success, 1 criterion failure or unusable result, 2 config error.
"""

from __future__ import annotations

import argparse
import contextlib
import sys

import numpy as np

from .acceptance import run_acceptance
from .config import ConfigError, RunConfig, load_config
from .dynamics import closed_form_sq, evolve, steady_state
from .effective import effective_parameters
from .experiments import (
    alpha_sweep,
    beta_sweep,
    delta_b_sweep,
    exact_state,
    model_liouvillian,
    perturbative_effective,
    perturbative_full,
    perturbative_ideal,
)
from .observables import ground_block, husimi_q, sync_measure
from .operators import basis_projector
from .rb87 import mhz

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    return format(float(value), ".12g")


def write_csv(out, header, rows, comments=()):
    for c in comments:
        out.write(f"# {c}\n")
    out.write(",".join(header) + "\n")
    for row in rows:
        out.write(",".join(fmt(v) for v in row) + "\n")


@contextlib.contextmanager
def _open_out(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


def _warn(msg: str):
    print(f"warning: {msg}", file=sys.stderr)


def run_sweep(cfg: RunConfig, out, jobs: int = 1) -> int:
    if cfg.sweep is None:
        raise ConfigError("sweep: a sweep section is required for this command")
    values = cfg.sweep.values()
    var = cfg.sweep.variable
    if var in ("alpha", "beta") and not cfg.drive.ideal_mapping:
        raise ConfigError(f"drive.ideal_mapping: the {var} sweep needs the ideal mapping")
    if var == "alpha":
        res = alpha_sweep(cfg.drive, values, cfg.constants, cfg.solver.order, cfg.solver.variant, jobs)
    elif var == "delta_b":
        res = delta_b_sweep(
            cfg.drive, [mhz(v) for v in values], cfg.constants, cfg.solver.order, jobs,
            cfg.husimi.n_theta, cfg.husimi.n_phi,
        )
    else:
        if np.any(values < 0) or np.any(values > 1):
            raise ConfigError("sweep: beta values must lie in [0, 1]")
        res = beta_sweep(cfg.drive, values, cfg.approaches, cfg.constants, jobs)
    if res.degenerate:
        _warn(f"{res.degenerate} sweep point(s) have no unique steady state; their S_q fields are empty")
    write_csv(out, res.header, res.rows)
    return EXIT_OK


def _ground_state(cfg: RunConfig, renormalize: bool):
    """Ground-manifold state for the configured model and solver, or None."""
    kind = cfg.solver.kind
    if kind == "closed-form":
        raise ConfigError("solver.kind: closed-form yields S_q only, not a density matrix")
    if kind == "exact":
        st = exact_state(cfg.model, cfg.drive, cfg.constants, cfg.ideal, renormalize=renormalize)
        return st.rho
    if cfg.model == "full":
        rho = perturbative_full(cfg.drive, cfg.constants, cfg.solver.order).rho
        return ground_block(rho, renormalize=renormalize)
    if cfg.model == "effective":
        return perturbative_effective(cfg.drive, cfg.constants, cfg.solver.order).rho
    return perturbative_ideal(cfg.ideal, cfg.solver.order).rho


def run_husimi(cfg: RunConfig, out) -> int:
    rho = _ground_state(cfg, cfg.husimi.renormalize)
    if rho is None:
        print("error: steady state is not unique", file=sys.stderr)
        return EXIT_FAIL
    field = husimi_q(rho, cfg.husimi.n_theta, cfg.husimi.n_phi)
    th, ph = np.meshgrid(field.theta, field.phi, indexing="ij")
    rows = zip(th.ravel(), ph.ravel(), field.values.ravel())
    write_csv(out, ("theta", "phi", "q"), rows, [f"normalization={fmt(field.normalization())}"])
    return EXIT_OK


def run_steady(cfg: RunConfig, out) -> int:
    if cfg.solver.kind == "closed-form":
        if cfg.model != "effective" or not cfg.drive.ideal_mapping:
            raise ConfigError("solver.kind: closed-form needs the effective model with ideal mapping")
        sq = closed_form_sq(effective_parameters(cfg.drive, cfg.constants), cfg.solver.variant)
        write_csv(out, ("row", "col", "re", "im"), [], [f"sq={fmt(sq)}", f"variant={cfg.solver.variant}"])
        return EXIT_OK
    comments = []
    if cfg.solver.kind == "exact":
        res = steady_state(model_liouvillian(cfg.model, cfg.drive, cfg.constants, cfg.ideal))
        rho = res.rho
        comments += [
            f"unique={str(res.unique).lower()}",
            f"null_multiplicity={res.null_multiplicity}",
            f"residual={fmt(res.residual)}",
        ]
        if not res.unique:
            _warn("steady state is not unique; the reported state is one null vector")
    else:
        if cfg.model == "full":
            rho = perturbative_full(cfg.drive, cfg.constants, cfg.solver.order).rho
        elif cfg.model == "effective":
            rho = perturbative_effective(cfg.drive, cfg.constants, cfg.solver.order).rho
        else:
            rho = perturbative_ideal(cfg.ideal, cfg.solver.order).rho
        comments.append(f"order={cfg.solver.order}")
    ground = ground_block(rho) if rho.shape[0] > 3 else rho
    comments.insert(0, f"sq={fmt(sync_measure(ground))}")
    rows = [(i + 1, j + 1, rho[i, j].real, rho[i, j].imag) for i in range(rho.shape[0]) for j in range(rho.shape[1])]
    write_csv(out, ("row", "col", "re", "im"), rows, comments)
    return EXIT_OK


EVOLVE_HEADER = (
    "t", "rho11", "rho22", "rho33", "re_rho12", "im_rho12", "re_rho13", "im_rho13",
    "re_rho23", "im_rho23", "excited", "sq",
)


def run_evolve(cfg: RunConfig, out) -> int:
    lv = model_liouvillian(cfg.model, cfg.drive, cfg.constants, cfg.ideal)
    dim = int(round(np.sqrt(lv.shape[0])))
    level = cfg.evolve.initial
    if not 1 <= level <= dim:
        raise ConfigError(f"evolve.initial: level must lie in 1..{dim}, got {level}")
    t = cfg.evolve.grid()
    rows = []
    for tt, rho in zip(t, evolve(lv, basis_projector(dim, level - 1), t)):
        g = rho[:3, :3]
        rows.append((
            tt, g[0, 0].real, g[1, 1].real, g[2, 2].real,
            g[0, 1].real, g[0, 1].imag, g[0, 2].real, g[0, 2].imag, g[1, 2].real, g[1, 2].imag,
            1 - np.trace(g).real, sync_measure(g),
        ))
    write_csv(out, EVOLVE_HEADER, rows)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spinsync", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "sweep": "S_q (and phi_max) over an alpha, delta_b or beta grid",
        "husimi": "Husimi-Q field of a steady state on a (theta, phi) grid",
        "steady": "steady-state density matrix",
        "evolve": "time evolution from a basis state",
        "acceptance": "run the acceptance criteria",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text)
        p.add_argument("--config", help="JSON run configuration (MHz / rad units)")
        p.add_argument("--out", help="output path ('-' or omitted: stdout)")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override a config field, e.g. drive.delta_b=0.2")
        p.add_argument("--jobs", type=int, default=1, help="parallel sweep points")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.jobs < 1:
        print("error: --jobs must be at least 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        cfg = load_config(args.config, args.set)
        out_path = args.out if args.out is not None else cfg.output
        if args.command == "acceptance":
            report = run_acceptance(cfg.constants)
            with _open_out(out_path) as out:
                out.write(report.text())
            if out_path not in (None, "-"):
                sys.stdout.write(report.text())
            return report.exit_code
        runners = {
            "sweep": lambda out: run_sweep(cfg, out, args.jobs),
            "husimi": lambda out: run_husimi(cfg, out),
            "steady": lambda out: run_steady(cfg, out),
            "evolve": lambda out: run_evolve(cfg, out),
        }
        with _open_out(out_path) as out:
            return runners[args.command](out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
