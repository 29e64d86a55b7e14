"""Which weighted composition operators satisfy a polynomial of degree at most two?

Besides constant maps and the identity, only involutive maps qualify, and
then the weight need not be linear fractional: exp(z) with phi = -z gives
an operator whose square is the identity.

    python3 demos/algebraic_degree_two.py
"""

from wco.parse import parse_symbol
from wco.theorems import classify_algebraic, involution_pair, verify_case3_identity

PAIRS = [("2", "z"), ("1", "0"), ("exp(z)", "-z"), ("exp(sin(z))", "-z"),
         ("exp(z^2)", "-z"), ("1+z", "exp(2 pi i/5) z")]


def main():
    for psi_text, phi_text in PAIRS:
        psi, phi = parse_symbol(psi_text), parse_symbol(phi_text)
        cert = classify_algebraic(psi, phi)
        label = f"psi = {psi_text}, phi = {phi_text}"
        if not cert.algebraic:
            print(f"{label:<36} not algebraic of degree <= 2: {cert.reason}")
            continue
        ident = verify_case3_identity(psi, phi, cert)
        print(f"{label:<36} degree {cert.degree}, T^2 = {cert.B:.3g} T + {cert.C:.3g} I, "
              f"residual {cert.residual.value:.1e}, identity check {ident.value:.1e}")

    fam = involution_pair(0.3 + 0.2j, odd=(0.4, 0.1j), c=0.7)
    cert = classify_algebraic(fam.psi, fam.phi)
    print(f"\ninvolution fixing {0.3 + 0.2j}: degree {cert.degree}, C = {complex(cert.C):.4f}, "
          f"residual {cert.residual.value:.1e}")


if __name__ == "__main__":
    main()
