"""Oracle for the deterministic alternating-walk mechanics test.

Setup: two bins in the plane, inner-product rule (assign v to the bin
whose sum has the smaller inner product with v; ties to the lower
index).  With delta = B1 - B2 the decision reduces to: add v to B1 iff
<v, delta> <= 0, else add v to B2 (so delta either gains v or loses v).

Feed the alternating sequence (0, 1/2), (1/L, -1/2) with L = 40 for 320
steps starting from delta = (1/2, -1/10).  Exact rational arithmetic;
expected drift: each pair of steps nets delta += (1/L, 0), so after
L^2/5 = 320 steps delta should gain (L/10, 0) = (4, 0) ending at
(9/2, -1/10) -- provided every individual step's sign condition holds,
which this script verifies rather than assumes.

Run:  python tests/oracles/alternating_walk_oracle.py
Frozen in tests/test_acceptance.py (criterion: final delta (4.5, -0.1)).
"""

from fractions import Fraction


def run(L: int = 40, steps: int = 320):
    dx, dy = Fraction(1, 2), Fraction(-1, 10)
    up = (Fraction(0), Fraction(1, 2))
    down = (Fraction(1, L), Fraction(-1, 2))
    for t in range(steps):
        vx, vy = up if t % 2 == 0 else down
        ip = vx * dx + vy * dy
        if ip <= 0:
            dx, dy = dx + vx, dy + vy  # assigned to B1
        else:
            dx, dy = dx - vx, dy - vy  # assigned to B2
    return dx, dy


if __name__ == "__main__":
    dx, dy = run()
    assert (dx, dy) == (Fraction(9, 2), Fraction(-1, 10)), (dx, dy)
    print(f"delta after 320 exact steps: ({dx}, {dy}) = ({float(dx)!r}, {float(dy)!r})")
