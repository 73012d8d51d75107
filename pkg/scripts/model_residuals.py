"""Scan the model problem over nu: beta identity, real-line jump, first moment (contour and ray)."""
import numpy as np

from mnls_asym.pcf import (
    ModelConstants,
    connection_coefficients,
    contour_first_moment,
    jump_residuals,
    nsol_first_moment,
    ray_first_moment,
)


def main():
    samples = np.linspace(-8, 8, 100)
    print(f"{'nu':>6} {'beta id':>10} {'jump':>10} {'jump eps':>10} {'contour M1':>11} {'ray M1':>10}")
    for nu in (0.01, 0.1, 0.25, 0.5, 1.0, 1.5, 2.0):
        mc = ModelConstants.from_nu(nu, z0=0.7, phase=0.3)
        cc = connection_coefficients(mc)
        m1 = nsol_first_moment(mc)
        print(
            f"{nu:6.2f} {abs(cc.beta12 * cc.beta21 - nu):10.1e} {np.max(jump_residuals(mc, samples)):10.1e} "
            f"{np.max(jump_residuals(mc, samples, eps=1e-6)):10.1e} "
            f"{np.max(np.abs(contour_first_moment(mc) - m1)):11.1e} {np.max(np.abs(ray_first_moment(mc) - m1)):10.1e}"
        )


if __name__ == "__main__":
    main()
