"""Minimum-gap estimates near the first-order transition.

Tracks two complementary gap probes for the p = 4, q = 2 encoded
ferromagnet at zero temperature:

  * the semiclassical overlap between the competing mean-field states as
    the penalty approaches the tricritical strength, and
  * the Bogoliubov spin-wave spectrum on the second-order line, whose soft
    mode closes as sqrt(gamma_c2 - gamma); the fitted exponent is printed.
"""

import numpy as np

from nqac.model import ModelParams
from nqac.phase import locate_gamma_c1, degenerate_minima, locate_gamma_c2
from nqac.gap import instanton_overlap, spinwave_spectrum, gap_exponent_fit


def overlap_vs_lambda():
    print("overlap of competing minima at the first-order point")
    print("lambda    gamma_c1    overlap")
    for lam in (1.0, 2.0, 3.0, 3.5, 3.9):
        params = ModelParams(p=4, q=2, J=1.0, lam=lam)
        gc1 = locate_gamma_c1(params)
        pair = degenerate_minima(params.with_(gamma=gc1))
        (m_in, _), (m_out, _) = pair
        est = instanton_overlap(params.with_(gamma=gc1), m_in, m_out)
        print(f"{lam:5.2f}    {gc1:8.4f}    {est.overlap:8.5f}")


def spinwave_gap_exponent():
    lam = 5.0
    params = ModelParams(p=4, q=2, J=1.0, lam=lam)
    gc2 = locate_gamma_c2(params)
    deltas = np.geomspace(1e-4, 1e-2, 12)
    omegas = [spinwave_spectrum(1.0, 1.0, lam, gc2 - d).gap for d in deltas]
    expo, coeff = gap_exponent_fit(deltas, omegas)
    print(f"\nspin-wave gap closing at gamma_c2 = {gc2:.4f} (lambda = {lam}):")
    print(f"  gap ~ {coeff:.4f} * (gamma_c2 - gamma)^{expo:.4f}")


def main():
    overlap_vs_lambda()
    spinwave_gap_exponent()


if __name__ == "__main__":
    main()
