"""Occupancy histograms: where orbits spend their time.

Left panel: logistic-map occupancy at three r values, showing the change
from a single occupied bin (period 2) through a 4-band chaotic attractor
to the full-interval edge-heavy density at r=4. Right panel: 2-D
occupancy of a Lotka-Volterra cycle, tracing the closed orbit.
"""

import argparse
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from holorisk import dynamics


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--bins", type=int, default=60)
    ap.add_argument("--keep", type=int, default=50_000)
    ap.add_argument("--out", type=Path, default=Path("occupancy.png"))
    args = ap.parse_args()

    fig, (left, right) = plt.subplots(1, 2, figsize=(12, 5))

    for r in (3.2, 3.6, 4.0):
        orbit = dynamics.iterate_logistic(
            dynamics.LogisticParams(r=r, x0=0.2, n_transient=2000, n_keep=args.keep)
        )
        hist = dynamics.occupancy_histogram(orbit, bins_per_dim=args.bins)
        centers = 0.5 * (hist.bin_edges[0][:-1] + hist.bin_edges[0][1:])
        left.step(centers, hist.probabilities, where="mid", label=f"r={r}")
    left.set_xlabel("x")
    left.set_ylabel("occupancy probability")
    left.set_title("Logistic-map occupancy")
    left.legend()

    params = dynamics.LotkaVolterraParams(
        alpha=2 / 3, beta=4 / 3, gamma=1.0, delta=1.0, x0=1.5, y0=0.5, steps=60_000
    )
    orbit = dynamics.integrate_lotka_volterra(params)
    hist = dynamics.occupancy_histogram(orbit, bins_per_dim=args.bins)
    right.imshow(
        hist.probabilities.T,
        origin="lower",
        aspect="auto",
        extent=(
            hist.bin_edges[0][0], hist.bin_edges[0][-1],
            hist.bin_edges[1][0], hist.bin_edges[1][-1],
        ),
        cmap="viridis",
    )
    right.set_xlabel("prey")
    right.set_ylabel("predator")
    right.set_title("Lotka-Volterra cycle occupancy")

    fig.tight_layout()
    fig.savefig(args.out, dpi=200)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
