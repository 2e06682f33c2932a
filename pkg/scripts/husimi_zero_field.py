"""Husimi-Q fields at Delta_B = 0 from the full, effective and first-order solutions."""

import argparse
import sys

import numpy as np

from spinsync.cli import fmt, write_csv
from spinsync.experiments import exact_state, perturbative_state
from spinsync.observables import husimi_max, husimi_q
from spinsync.rb87 import reference_drive, mhz


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--delta-b", type=float, default=0.0, help="MHz")
    parser.add_argument("--alpha", type=float, default=0.0)
    parser.add_argument("--n-theta", type=int, default=181)
    parser.add_argument("--n-phi", type=int, default=360)
    parser.add_argument("--out-prefix", default="husimi_zero_field")
    args = parser.parse_args(argv)

    drive = reference_drive(delta_b=mhz(args.delta_b)).with_alpha(args.alpha)
    states = {
        "full": exact_state("full", drive, renormalize=True).rho,
        "eff": exact_state("effective", drive).rho,
        "pert": perturbative_state("effective", drive).rho,
    }
    for name, rho in states.items():
        field = husimi_q(rho, args.n_theta, args.n_phi)
        peak = husimi_max(field)
        th, ph = np.meshgrid(field.theta, field.phi, indexing="ij")
        path = f"{args.out_prefix}_{name}.csv"
        with open(path, "w", newline="\n") as fh:
            write_csv(fh, ("theta", "phi", "q"), zip(th.ravel(), ph.ravel(), field.values.ravel()),
                      [f"normalization={fmt(field.normalization())}"])
        where = f"({peak.theta / np.pi:.3f} pi, {peak.phi / np.pi:.3f} pi)" if peak.phase_preference else "none"
        print(f"{name}: maximum at {where}; wrote {path}", file=sys.stderr)


if __name__ == "__main__":
    main()
