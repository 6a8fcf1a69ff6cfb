"""Regenerate the fidelity, entropy and information-gain curves as CSV.

    python scripts/reproduce_figures.py --outdir figures

Writes fidelity.csv, entropy.csv and gain.csv plus a manifest.jsonl with one
line per run. Plotting is left to whatever tool reads the CSVs.
"""
import argparse
import pathlib
import sys

from rindler_teleport.cli import main

SWEEPS = {"fidelity.csv": "fidelity-sweep", "entropy.csv": "entropy-sweep", "gain.csv": "gain-sweep"}


def parse_args(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--outdir", default="figures")
    ap.add_argument("--r-max", default="3.0")
    ap.add_argument("--r-step", default="0.05")
    ap.add_argument("--jobs", default="1")
    return ap.parse_args(argv)


def run(argv=None) -> int:
    args = parse_args(argv)
    out = pathlib.Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    manifest = out / "manifest.jsonl"
    manifest.unlink(missing_ok=True)
    for name, command in SWEEPS.items():
        code = main([command, "--r-max", args.r_max, "--r-step", args.r_step, "--jobs", args.jobs,
                     "--out", str(out / name), "--manifest", str(manifest)])
        if code:
            return code
        print(f"wrote {out / name}")
    return 0


if __name__ == "__main__":
    sys.exit(run())
