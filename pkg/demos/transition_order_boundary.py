"""Boundary between first- and second-order transitions in the (T, lambda) plane.

For each temperature, finds the largest penalty strength lambda_c that still
gives a first-order transition in the transverse field, then bisects for the
temperature ceiling above which no penalty strength does.
"""

import csv

import numpy as np

from nqac.model import ModelParams
from nqac.phase import lambda_critical, fm_temperature_ceiling


def main():
    params = ModelParams(p=4, q=2, J=1.0)
    temps = np.linspace(0.0, 11.0, 12)
    rows = []
    for T in temps:
        lc = lambda_critical(params, float(T))
        rows.append((float(T), lc))
        print(f"T = {T:6.3f}  lambda_c = "
              + ("  none" if lc is None else f"{lc:7.4f}"))

    ceiling = fm_temperature_ceiling(params)
    print(f"temperature ceiling (no first-order transition above): "
          f"T = {ceiling:.3f}")

    with open("transition_order_boundary.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["T", "lambda_c"])
        for T, lc in rows:
            w.writerow([T, "" if lc is None else lc])
    print("wrote transition_order_boundary.csv")


if __name__ == "__main__":
    main()
