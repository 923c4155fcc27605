"""Phase diagram of the penalty-coupled p-spin model in the (lambda, Gamma) plane.

Sweeps the penalty strength lambda at zero temperature, locates the
second-order instability point and (where present) the first-order
transition of the global free-energy minimum, and prints the boundary.
Writes a CSV so the scan can be re-plotted later.
"""

import csv

import numpy as np

from nqac.model import ModelParams
from nqac.phase import classify_transition


def scan(p=4, q=2, C=1, lams=None):
    if lams is None:
        lams = np.linspace(0.25, 6.0, 24)
    rows = []
    for lam in lams:
        params = ModelParams(p=p, q=q, J=1.0, nesting=C, lam=float(lam))
        rep = classify_transition(params, with_barrier=False)
        g2, g1, order = rep.gamma_c2, rep.gamma_c1, rep.order
        rows.append((float(lam), g2, g1, order))
        print(f"lambda = {lam:6.3f}  gamma_c2 = {_fmt(g2)}  "
              f"gamma_c1 = {_fmt(g1)}  order = {order}")
    return rows


def _fmt(x):
    return "   --  " if x is None or not np.isfinite(x) else f"{x:7.4f}"


def main():
    rows = scan()
    with open("phase_diagram.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["lambda", "gamma_c2", "gamma_c1", "order"])
        for lam, g2, g1, order in rows:
            w.writerow([lam,
                        "" if g2 is None else g2,
                        "" if g1 is None else g1,
                        order])
    print("wrote phase_diagram.csv")


if __name__ == "__main__":
    main()
