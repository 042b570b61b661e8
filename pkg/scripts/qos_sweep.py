"""Semantic SE vs the bit user's minimum rate at 10 dBm."""

from _common import parse, run

if __name__ == "__main__":
    args = parse(__doc__)
    run("qos_sweep", args, sweep_var="R_B_min", grid=(0.1, 0.5, 1.0, 1.5, 2.0), schemes=("proportional", "cas"))
