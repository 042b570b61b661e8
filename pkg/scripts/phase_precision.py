"""Semantic SE vs transmit power for several phase-precision radii (proportional PASS).

Each power level is one sweep over the (delta_S, delta_B) pairs; the rows
are concatenated into one CSV per power.
"""

from _common import parse, run

PAIRS = ((0.02, 0.02), (0.02, 100.0), (100.0, 0.02), (100.0, 100.0), (0.5, 0.5))

if __name__ == "__main__":
    args = parse(__doc__)
    for p in (10.0, 18.0, 25.0, 30.0):
        run(f"phase_precision_P{p:g}", args, sweep_var="phase_precision_pair", grid=PAIRS,
            schemes=("proportional",), p_max_dbm=p)
