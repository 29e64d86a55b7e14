"""Complex symmetry of a weighted composition operator under a twisted conjugation.

Builds one member of the linear-fractional complex symmetric family, checks
the conjugation axioms, and watches the finite-section residual shrink as
the section grows.  A conjugation with the wrong base point is shown for
contrast.

    python3 demos/complex_symmetry.py
"""

import numpy as np

from wco.operators import (build_wco_matrix, certified_block, conjugation_operator,
                           cs_residual, involution_residual, isometry_deviation)
from wco.symbols import ConjugationSpec, CsFamilyParams, make_cs_family
from wco.theorems import match_cs_parameters


def main():
    spec = ConjugationSpec.at(0.35 - 0.2j)
    fam = make_cs_family(CsFamilyParams(spec.p, spec.lam, 0.1 + 0.25j, 0.3, 0.8))
    print(f"base point p = {spec.p:.3f}, rotation lambda = {spec.lam:.4f}")
    print(f"weight   psi = {fam.psi}")
    print(f"map      phi = {fam.phi}")

    c = conjugation_operator(spec, 96)
    k = certified_block(c.u, 1e-12)
    v = np.zeros(97, dtype=complex)
    v[: k + 1] = np.random.default_rng(0).standard_normal(k + 1)
    print(f"\ninvolution residual  {involution_residual(c).value:.2e}")
    print(f"isometry deviation   {isometry_deviation(c, v):.2e} on a block of {k + 1} coefficients")

    print("\n   N   ||CT - T*C||   tail bound")
    for n in (16, 32, 64, 128):
        rep = cs_residual(build_wco_matrix(fam.psi, fam.phi, n), conjugation_operator(spec, n))
        print(f"{n:4d}   {rep.value:.3e}      {rep.tail_bound:.1e}")

    wrong = ConjugationSpec.at(0.1j)
    rep = cs_residual(build_wco_matrix(fam.psi, fam.phi, 128), conjugation_operator(wrong, 128))
    print(f"\nwith base point {wrong.p} instead: residual {rep.value:.3f} ({rep.verdict})")

    m = match_cs_parameters(fam.psi, fam.phi, spec)
    print(f"recovered parameters: a0={m.params.a0:.4f} a1={m.params.a1:.4f} c={m.params.c:.4f}"
          f"  (deviation {m.deviation:.1e})")


if __name__ == "__main__":
    main()
