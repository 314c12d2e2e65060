"""Oracle for the mean absolute projection of the uniform disk.

For X uniform on the unit disk and any unit direction e (rotational
symmetry makes the direction irrelevant),

  f(e) = E|<X,e>| = (1/pi) * integral over the disk of |x1| dA.

Computed two independent ways:

  polar closed form: (1/pi) * (int_0^1 r^2 dr) * (int_0^{2pi} |cos t| dt)
                   = (1/pi) * (1/3) * 4 = 4/(3*pi)
  2-d quadrature:    dblquad of |r cos t| * r over the disk

Run:  python tests/oracles/cmu_disk_oracle.py
Value frozen in tests/test_distributions.py and tests/test_acceptance.py.
"""

import math

from scipy.integrate import dblquad


def closed_form() -> float:
    return 4.0 / (3.0 * math.pi)


def quadrature() -> float:
    # integrand |r cos t| * r, r in [0,1], t in [0, 2pi]
    val, err = dblquad(
        lambda t, r: abs(r * math.cos(t)) * r,
        0.0,
        1.0,
        lambda r: 0.0,
        lambda r: 2.0 * math.pi,
        epsabs=1e-12,
    )
    assert err < 1e-9
    return val / math.pi


if __name__ == "__main__":
    cf = closed_form()
    qd = quadrature()
    assert abs(cf - qd) < 1e-9, (cf, qd)
    print(f"E|<X,e>| over the unit disk = {cf!r} (quadrature agrees to {abs(cf - qd):.2e})")
