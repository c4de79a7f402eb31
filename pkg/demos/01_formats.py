"""Reading and writing the two on-disk formats.

QDIMACS carries prenex-CNF instances; the DNF sidecar carries cube
lists for the universal breaker under the same kind of prefix.
"""

from qsymbreak import parse_dnf, parse_qdimacs, serialize_dnf, serialize_qdimacs

RAW = """\
c a two-block instance with messy literal order
p cnf 4 3
a 1 2 0
e 3 4 0
4 -1 0
3 3 2 0
-4 2 1 0
"""


def main():
    instance = parse_qdimacs(RAW)
    print("parsed blocks:")
    for block in instance.prefix.blocks:
        print(f"  {block.quantifier} {block.variables}")
    print("normalized clauses (sorted by variable, duplicates folded):")
    for clause in instance.clauses:
        print(f"  {clause}")

    print("\nround trip:")
    print(serialize_qdimacs(instance), end="")

    cubes = ((1, -3), (-1, 4))
    sidecar = serialize_dnf(instance.prefix, cubes)
    print("\na DNF sidecar for the same prefix:")
    print(sidecar, end="")
    prefix_back, cubes_back = parse_dnf(sidecar)
    assert prefix_back == instance.prefix and cubes_back == cubes
    print("sidecar round trip ok")


if __name__ == "__main__":
    main()
