"""Independent high-precision reference computations.

These use mpmath Taylor expansion and root finding rather than the
library's series arithmetic.  Running this file prints the values that are
frozen into the unit tests.
"""

import mpmath as mp

mp.mp.dps = 40


def taylor(f, n):
    return [complex(c) for c in mp.taylor(f, 0, n)]


def wco_entry(psi, phi, i, j):
    """Coefficient ``i`` of ``psi * phi**j``."""
    return complex(mp.taylor(lambda z: psi(z) * phi(z) ** j, 0, i)[i])


def boundary_basepoints(b1, r):
    """Solutions ``p = r u`` (``|u| = 1``) of ``b1 p (conj p - 1) + conj p (1 - p) = 0``.

    With ``conj p = r / u`` the equation becomes ``b1 u^2 - r (b1 - 1) u - 1 = 0``.
    """
    b1, r = mp.mpc(b1), mp.mpf(r)
    roots = mp.polyroots([b1, -r * (b1 - 1), -1], extraprec=60)
    keep = [u for u in roots if abs(abs(u) - 1) < mp.mpf(10) ** -25]
    return sorted((complex(r * u) for u in keep), key=lambda p: float(mp.arg(p) % (2 * mp.pi)))


def lft_fixed_points(a, b, c, d):
    return sorted((complex(z) for z in mp.polyroots([c, d - a, -b], maxsteps=200, extraprec=60)),
                  key=lambda z: (z.real, z.imag))


if __name__ == "__main__":
    psi = lambda z: 1 / (1 - mp.mpf("0.3") * z)
    phi = lambda z: (mp.mpf("0.5") * z + mp.mpf("0.2")) / (1 - mp.mpf("0.1") * z)
    for i, j in [(0, 0), (2, 1), (3, 3), (5, 2), (7, 6)]:
        print("entry", i, j, repr(wco_entry(psi, phi, i, j)))
    print("exp o sin", taylor(lambda z: mp.exp(mp.sin(z)), 8))
    print("basepoints i, 0.5", boundary_basepoints(1j, mp.mpf("0.5")))
    print("basepoints e^{0.7i}, 0.3", boundary_basepoints(mp.expj(0.7), mp.mpf("0.3")))
    print("fixed", lft_fixed_points(2, 1, 1, 3))
    print("fixed", lft_fixed_points(1 + 0.5j, 0.2j, -0.3, 2))
