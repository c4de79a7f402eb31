"""Lex-leader breakers: formulas, clause encodings, cube encodings.

On the equality gadget the full breaker simplifies to "not y": picking
the lexicographically least strategy per orbit pins y to false while z
stays free, and all four strategy orbits keep a representative.
"""

from qsymbreak import (
    Not,
    SignedPermutation,
    Var,
    augment_instance,
    encode_existential_cnf,
    encode_universal_dnf,
    equivalent,
    lex_leader_formula,
    parse_qdimacs,
    qbf_truth,
    semantic_orbits,
    serialize_dnf,
    verify_breaker,
)

GADGET = "p cnf 3 2\na 1 0\ne 2 3 0\n-2 3 0\n2 -3 0\n"


def main():
    instance = parse_qdimacs(GADGET)
    swap = SignedPermutation.from_dict({1: 1, 2: 3, 3: 2})
    negate_both = SignedPermutation.from_dict({1: 1, 2: -2, 3: -3})
    gens = [swap, negate_both]

    psi = lex_leader_formula(instance.prefix, gens)
    print(f"breaker has {len(psi.parts)} conjuncts,"
          f" equivalent to Not(y): {equivalent(psi.formula, Not(Var(2)))}")

    orbits = semantic_orbits(instance.prefix, gens)
    report = verify_breaker(instance.prefix, gens, psi)
    print(f"existential strategy orbits: {len(orbits)},"
          f" covered by the breaker: {report.covered}")

    encoded = encode_existential_cnf(instance.prefix, gens)
    print(f"\nCNF chain encoding: {len(encoded.clauses)} clauses,"
          f" {len(encoded.aux_vars)} chain variables {encoded.aux_vars}")
    for clause in encoded.clauses:
        print(f"  {clause}")

    conjoined, _ = augment_instance(instance, encoded, "conjoin-cnf")
    print(f"truth before/after conjoining:"
          f" {qbf_truth(instance)}/{qbf_truth(conjoined)}")

    # the universal dual targets the other player; here the group fixes
    # the lone universal variable, so the cube list is empty (constant
    # false) and the instance is left alone
    dual = encode_universal_dnf(instance.prefix, gens)
    _, sidecar = augment_instance(instance, dual, "attach-dnf")
    print("\nuniversal sidecar for the same group:")
    print(serialize_dnf(*sidecar), end="")


if __name__ == "__main__":
    main()
