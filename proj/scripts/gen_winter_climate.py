#!/usr/bin/env python3
"""Generate the synthetic 744 h winter climate record.

The record is deterministic: a diurnal temperature cycle on top of a mild
mean, two cold spells that pull the air well below freezing, a humidity
cycle, a handful of driving-rain events and daytime short-wave radiation
that is damped on overcast days.
"""
import argparse
import math
from pathlib import Path

HOURS = 744

# (centre [h], half width [h], depth [K])
COLD_SPELLS = [(250.0, 70.0, 13.0), (560.0, 80.0, 15.0)]
# (start [h], duration [h], peak rate [kg m^-2 s^-1])
RAIN_EVENTS = [
    (60.0, 8.0, 6.0e-5),
    (150.0, 10.0, 1.0e-4),
    (196.0, 6.0, 1.2e-4),
    (330.0, 12.0, 6.0e-5),
    (470.0, 8.0, 1.0e-4),
    (500.0, 6.0, 1.5e-4),
    (650.0, 10.0, 7.0e-5),
]


def bump(t, centre, half_width):
    x = (t - centre) / half_width
    if abs(x) >= 1.0:
        return 0.0
    return 0.5 * (1.0 + math.cos(math.pi * x))


def rain(t):
    total = 0.0
    for start, duration, peak in RAIN_EVENTS:
        if start <= t <= start + duration:
            total += peak * math.sin(math.pi * (t - start) / duration)
    return total


def overcast(t):
    """1 on clear days, lower on days with rain."""
    day = int(t // 24)
    for start, duration, _ in RAIN_EVENTS:
        if int(start // 24) <= day <= int((start + duration) // 24):
            return 0.3
    return 1.0


def sample(t):
    hour = t % 24.0
    theta = 3.0 - 3.5 * math.cos(2.0 * math.pi * (hour - 3.0) / 24.0)
    theta += 1.5 * math.sin(2.0 * math.pi * t / 168.0)
    for centre, half_width, depth in COLD_SPELLS:
        theta -= depth * bump(t, centre, half_width)

    q_rain = rain(t)
    phi = 0.84 + 0.08 * math.cos(2.0 * math.pi * (hour - 3.0) / 24.0)
    if q_rain > 0.0:
        phi = 0.97
    phi = min(max(phi, 0.0), 1.0)

    swr = 0.0
    if 8.0 < hour < 16.0:
        swr = 120.0 * overcast(t) * math.sin(math.pi * (hour - 8.0) / 8.0)
    return theta, phi, q_rain, swr


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path,
                        default=Path(__file__).resolve().parent.parent
                        / "data" / "climate" / "winter_744h.csv")
    args = parser.parse_args()
    args.out.parent.mkdir(parents=True, exist_ok=True)
    lines = ["time_h,theta_ext_C,phi_ext,rain_kg_m2_s,swr_W_m2"]
    for hour in range(HOURS + 1):
        theta, phi, q_rain, swr = sample(float(hour))
        lines.append(f"{hour},{theta:.4f},{phi:.4f},{q_rain:.6e},{swr:.3f}")
    args.out.write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
