"""Where sectored (broken-symmetry) metastable states survive.

Two maps at zero temperature for the p = 4, q = 2 encoded ferromagnet:

  1. the transverse field at which a ferromagnetic sector with a fraction
     k/N of flipped blocks stops being locally stable, as a function of k/N;
  2. thermal occupancy of the aligned-block levels of a small
     antiferromagnetic instance as the temperature drops (the penalty only
     shifts all aligned sectors by a common constant, so beta is the knob).
"""

import numpy as np

from nqac.model import ModelParams
from nqac.metastability import (fm_zero_T_threshold, fm_disappearance_point,
                                af_occupancy)


def fm_map():
    params = ModelParams(p=4, q=2, J=1.0, lam=0.3)
    kmin = fm_zero_T_threshold(params.J, params.lam)
    print(f"ferromagnetic sectors, lambda = {params.lam}; "
          f"stable at gamma = 0 only for k/N > {kmin:.3f}")
    print("k/N     gamma* where the sector destabilizes")
    for k_over_N in np.linspace(0.05, 0.45, 9):
        gstar = fm_disappearance_point(params, float(k_over_N),
                                       "gamma_over_C", 6.0)
        tag = "   (never stable)" if np.isnan(gstar) else f"{gstar:10.4f}"
        print(f"{k_over_N:4.2f}  {tag}")


def af_map():
    N = 8
    print(f"\nantiferromagnetic aligned-block occupancy, N = {N}")
    print("beta     occupancy of the three lowest levels")
    for beta in (0.5, 1.0, 2.0, 4.0, 8.0):
        occ = af_occupancy(1.0, 1.0, 0.5, beta, N)
        top = ", ".join(f"{p:.3f}" for p in occ.probabilities[:3])
        print(f"{beta:5.1f}    {top}")


def main():
    fm_map()
    af_map()


if __name__ == "__main__":
    main()
