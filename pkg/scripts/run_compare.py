"""Full comparison at the default (large) resolution, printing a short table.

    python3 scripts/run_compare.py [config.json] [--out DIR]
"""
import argparse

from mnls_asym.config import ExperimentConfig, load_config
from mnls_asym.experiment import run_compare


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("config", nargs="?")
    ap.add_argument("--out", default="out/compare")
    args = ap.parse_args()
    cfg = load_config(args.config) if args.config else ExperimentConfig().validate()
    s = run_compare(cfg, out_dir=args.out)
    for z0, rows in s["_rows"].items():
        print(f"\nz0 = {z0:+.4f}")
        print(f"{'t':>8} {'|q_num|':>12} {'|q_asym|':>12} {'abs_err':>12} {'err*t^3/4':>12}")
        for r in rows:
            print(f"{r.t:8.2f} {abs(r.q_num):12.6e} {abs(r.q_asym):12.6e} {r.abs_err:12.4e} {r.scaled_err_34:12.4e}")
    for e in s["rays"]:
        print(f"z0 = {e['z0']:+.4f}: slope {e['fit']['slope']:+.3f}, modulus deviation {e['modulus_deviation']:.3%}")


if __name__ == "__main__":
    main()
