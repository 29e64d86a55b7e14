"""Normal weighted composition operators and the conjugations that make them symmetric.

Runs the unitary, Hermitian, interior-fixed-point and boundary-fixed-point
families through their certificates, then shows how the boundary family
breaks down once |b| and |c| differ.

    python3 demos/normal_families.py
"""

from wco.operators import build_wco_matrix, normal_residual
from wco.symbols import (LinearFractionalMap, cross_adjoint, make_boundary_normal_family,
                         reproducing_kernel)
from wco.theorems import certify_theorem, verify_eq14

CASES = [
    ("unitary", {"q": 0.4 + 0.2j, "mu1": 1j, "mu2": -1}),
    ("hermitian", {"b0": 0.3, "b1": 0.2, "b2": 1}),
    ("normal-interior", {"p": 0.3 + 0.3j, "gamma": 1, "delta": 0.6}),
    ("boundary-normal", {"a": 1, "b": 0.3, "c": 0.3, "d": 1}),
]


def show(family, params):
    rep = certify_theorem(family, params)
    print(f"\n{family}: {rep.to_dict()['verdict']}")
    for check in rep.checks:
        print(f"  {check.name:<20} {check.value:.2e}  (tol {check.tolerance:.1e})")


def main():
    for family, params in CASES:
        show(family, params)

    fam = make_boundary_normal_family(1, 0.3, 0.3, 1)
    print(f"\nboundary fixed point eta = {fam.info['eta']:.4f}")
    for p in fam.info["solutions"]:
        print(f"  base point solution {p:.6f}, |p| = {abs(p):.3f}")

    # w -> A w + 0.5 on the right half-plane, moved to the disk; it fixes 1 and
    # has |b| = |c| only for A = 1.  The weight is the kernel at phi*(0).
    print("\n   A    ||b|-|c||   adjoint identity   normality")
    for A in (1.0, 1.1, 1.5, 2.5):
        a, b, c, d = A + 0.5, A - 0.5, A - 1.5, A + 1.5
        phi = LinearFractionalMap(a, b, c, d)
        eq = verify_eq14(a, b, c, d, order=128)
        weight = reproducing_kernel(cross_adjoint(phi)(0))
        t = build_wco_matrix(weight, phi, 128)
        print(f"  {A:.1f}   {abs(abs(phi.b) - abs(phi.c)):.3f}       {eq.value:.2e}"
              f"           {normal_residual(t).value:.2e}")


if __name__ == "__main__":
    main()
