#!/usr/bin/env python3
"""Produce the atom-chip design CSV set: trap geometry and dipole-force sweeps.

Writes:
  - trap.csv                U-trap height/gradient plus coupling figures
  - force_d{D}t{T}.csv      dipole force vs position, with kick estimates
"""

import argparse
import pathlib
import sys

from pbgsim.cli import main as pbgsim_main

DETUNING_SETS = ((10, 10), (10, 0))


def run(args):
    rc = pbgsim_main([str(a) for a in args])
    if rc != 0:
        sys.exit(rc)


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--outdir", default="results", type=pathlib.Path)
    ap.add_argument("--current", type=float, default=1.0, help="wire current, A")
    ap.add_argument("--bias-gauss", type=float, default=10.0)
    ap.add_argument("--n-drive", type=float, default=2.0)
    ns = ap.parse_args()
    ns.outdir.mkdir(parents=True, exist_ok=True)

    run(["trap", "--current", ns.current, "--bias-gauss", ns.bias_gauss,
         "--out", ns.outdir / "trap.csv"])
    for d, t in DETUNING_SETS:
        run(["force", "--detunings", f"{d},{t}", "--n-drive", ns.n_drive,
             "--out", ns.outdir / f"force_d{d}t{t}.csv"])
    print(f"wrote chip design tables to {ns.outdir}/")


if __name__ == "__main__":
    main()
