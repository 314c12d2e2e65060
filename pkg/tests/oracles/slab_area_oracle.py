"""Oracle for the slab measure of the uniform disk.

For X uniform on the unit disk B^2 and a unit direction e,
P(|<X,e>| <= b) is the area fraction of the vertical slab |x1| <= b.
Computed two independent ways:

  closed form:  (2/pi) * (b*sqrt(1-b^2) + asin(b))
  quadrature:   (2/pi) * integral_{-b}^{b} sqrt(1-x^2) dx

Run:  python tests/oracles/slab_area_oracle.py
Values frozen in tests/test_distributions.py and tests/test_acceptance.py.
"""

import math

from scipy.integrate import quad


def closed_form(b: float) -> float:
    return (2.0 / math.pi) * (b * math.sqrt(1.0 - b * b) + math.asin(b))


def quadrature(b: float) -> float:
    # chord length at offset x is 2*sqrt(1-x^2)
    val, err = quad(lambda x: 2.0 * math.sqrt(1.0 - x * x), -b, b, epsabs=1e-14, limit=200)
    assert err < 1e-8  # b=1 has a sqrt endpoint singularity in the derivative
    return val / math.pi


if __name__ == "__main__":
    for b in (0.1, 0.2, 0.4, 0.5, 1.0):
        cf = closed_form(b)
        qd = quadrature(b)
        assert abs(cf - qd) < 1e-9, (b, cf, qd)
        print(f"b={b}: slab probability = {cf!r} (quadrature agrees to {abs(cf - qd):.2e})")
