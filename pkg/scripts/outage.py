"""Outage probability vs transmit power, proportional PASS against CAS."""

from _common import parse, run

if __name__ == "__main__":
    args = parse(__doc__)
    for side in (20.0, 40.0):
        run(f"outage_D{side:g}", args, region_side=side, schemes=("proportional", "cas"))
