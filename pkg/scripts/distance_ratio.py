"""Semantic SE per distance-ratio bucket for antenna count and coverage size."""

from _common import parse, run

EDGES = tuple(round(0.2 * k, 1) for k in range(11))  # 0.0, 0.2, ..., 2.0

if __name__ == "__main__":
    args = parse(__doc__)
    for n in (3, 7):
        for side in (20.0, 40.0):
            run(f"distance_ratio_N{n}_D{side:g}", args, sweep_var="distance_ratio_bucket", grid=EDGES,
                schemes=("proportional",), antenna_count=n, region_side=side)
