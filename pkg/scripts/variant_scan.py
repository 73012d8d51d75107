"""Tabulate nu, |alpha| and arg alpha for both amplitude variants along a range of rays."""
import argparse

import numpy as np

from mnls_asym.asymptotics import prepare_ray
from mnls_asym.params import ModelParams, lambda_of_z
from mnls_asym.scattering import SampledPotential, default_lambda_grid, reflection_table, sech_potential


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--amplitude", type=float, default=0.8)
    ap.add_argument("--a", type=float, default=1.0)
    ap.add_argument("--b", type=float, default=0.5)
    args = ap.parse_args()
    p = ModelParams(args.a, args.b)
    q0 = SampledPotential.from_function(sech_potential(args.amplitude), 30.0, 0.005)
    rays = np.linspace(p.z_min + 0.05, 2.0, 12)
    sd = reflection_table(q0, default_lambda_grid(p), p, refine_at=[lambda_of_z(z, p) for z in rays])
    print(f"{'z0':>7} {'nu0':>9} {'|a| gauge':>10} {'arg gauge':>10} {'|a| lit':>10} {'arg lit':>10}")
    for z0 in rays:
        g, lit = prepare_ray(z0, sd, p), prepare_ray(z0, sd, p, "literal")
        print(f"{z0:7.3f} {g.nu0:9.5f} {g.absalpha:10.5f} {g.argalpha:10.5f} {lit.absalpha:10.5f} {lit.argalpha:10.5f}")


if __name__ == "__main__":
    main()
