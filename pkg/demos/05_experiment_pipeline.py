"""End-to-end pipeline: harness experiment -> CSV -> rendered figure.

Runs a 120-trial simulation-versus-limit experiment on a 150-vertex graph,
writes the long-format CSV plus its metadata sidecar, then invokes the
figure script on the CSV to produce a PNG overlay with confidence bands.
"""

import subprocess
import sys
from pathlib import Path

from epilimit.harness import ExperimentConfig, run_sim_vs_ode

ROOT = Path(__file__).resolve().parents[1]
OUT = Path(__file__).parent / "out"


def main():
    cfg = ExperimentConfig.from_config({
        "kind": "sim_vs_ode",
        "graph": {"model": "erdos_renyi", "n": 150, "c": 2.0},
        "trials": 120,
        "t_max": 8.0,
        "seed": 2,
    }, out_dir=OUT)
    csv_path = run_sim_vs_ode(cfg, threads=2)
    print(f"experiment CSV: {csv_path}")
    print(f"metadata sidecar: {csv_path.with_suffix('.meta.json')}")

    png_path = OUT / "demo_sim_vs_ode.png"
    proc = subprocess.run([
        sys.executable, str(ROOT / "plots" / "render.py"),
        "--kind", "sim_vs_ode", "--in", str(csv_path),
        "--out", str(png_path),
        "--title", "simulation vs limit, ER(150, c=2)"],
        capture_output=True, text=True)
    if proc.returncode != 0:
        print(proc.stderr, file=sys.stderr)
        raise SystemExit(proc.returncode)
    print(f"figure: {png_path}")


if __name__ == "__main__":
    main()
