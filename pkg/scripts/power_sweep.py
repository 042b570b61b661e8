"""Semantic SE vs transmit power for the three schemes, D = 20 m and 40 m."""

from _common import parse, run

if __name__ == "__main__":
    args = parse(__doc__)
    for side in (20.0, 40.0):
        run(f"power_sweep_D{side:g}", args, region_side=side)
