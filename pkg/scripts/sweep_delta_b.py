"""S_q and Husimi phi_max versus the Zeeman splitting for two decay-beam strengths."""

import argparse
import sys

import numpy as np

from spinsync.cli import write_csv
from spinsync.experiments import delta_b_sweep
from spinsync.rb87 import reference_drive, mhz


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--points", type=int, default=41)
    parser.add_argument("--span", type=float, default=1.0, help="sweep -span..span MHz")
    parser.add_argument("--omega-prime", type=float, nargs="+", default=[3.0, 6.0], help="MHz")
    parser.add_argument("--phases", choices=["zero", "quarter"], default="zero",
                        help="phi_+-1 = 0 or +-pi/2 (both alpha = 0)")
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--out-prefix", default="delta_b_sweep")
    args = parser.parse_args(argv)

    phases = {} if args.phases == "zero" else {"phi_plus1": np.pi / 2, "phi_minus1": -np.pi / 2}
    grid = [mhz(v) for v in np.linspace(-args.span, args.span, args.points)]
    for op in args.omega_prime:
        drive = reference_drive(omega_prime=mhz(op), **phases)
        res = delta_b_sweep(drive, grid, jobs=args.jobs)
        path = f"{args.out_prefix}_omega{op:g}.csv"
        with open(path, "w", newline="\n") as fh:
            write_csv(fh, res.header, res.rows)
        print(f"wrote {path}", file=sys.stderr)


if __name__ == "__main__":
    main()
