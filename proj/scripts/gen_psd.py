#!/usr/bin/env python3
"""Generate the bundled pore size distribution tables.

Each table is a mixture of log-normal pore populations. The cumulative
porosity psi(r) is the volume fraction of pores with radius above r,
rescaled so that psi equals the total porosity at the smallest radius
and vanishes at the largest one.
"""
import argparse
import math
from pathlib import Path

R_MIN_LOG10 = -9.0
R_MAX_LOG10 = -4.0
POINTS_PER_DECADE = 20

# (log10 of the median radius [m], spread in decades, volume weight)
DISTRIBUTIONS = {
    "spec01": (0.35, [(-6.3, 0.40, 0.75), (-7.5, 0.40, 0.20), (-8.5, 0.30, 0.05)]),
    "spec02": (0.13, [(-6.0, 0.50, 0.40), (-7.7, 0.40, 0.30), (-8.5, 0.30, 0.30)]),
}


def survival(log_r, modes):
    total = 0.0
    for mu, sigma, weight in modes:
        z = (log_r - mu) / (sigma * math.sqrt(2.0))
        total += weight * 0.5 * math.erfc(z)
    return total


def table(porosity, modes):
    count = int(round((R_MAX_LOG10 - R_MIN_LOG10) * POINTS_PER_DECADE)) + 1
    logs = [R_MIN_LOG10 + i / POINTS_PER_DECADE for i in range(count)]
    s_first = survival(logs[0], modes)
    s_last = survival(logs[-1], modes)
    rows = []
    for i, lg in enumerate(logs):
        psi = porosity * (survival(lg, modes) - s_last) / (s_first - s_last)
        if i == 0:
            psi = porosity
        elif i == count - 1:
            psi = 0.0
        rows.append((10.0 ** lg, psi))
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path,
                        default=Path(__file__).resolve().parent.parent / "data" / "psd")
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for name, (porosity, modes) in DISTRIBUTIONS.items():
        lines = ["radius_m,cum_porosity"]
        lines += [f"{r:.6e},{psi:.10f}" for r, psi in table(porosity, modes)]
        (args.out / f"{name}.csv").write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
