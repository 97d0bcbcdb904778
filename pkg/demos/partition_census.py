"""Count and list coalition structures under a block size cap.

Prints the restricted counting triangle for small player counts, then
walks the full four player family to show the enumeration order.
"""

from coalition_forge import enumerate_partitions, restricted_bell


def triangle(limit=8):
    print("counts of structures with blocks of at most K members")
    header = "n\\K " + "".join(f"{k:>6}" for k in range(1, limit + 1))
    print(header)
    for n in range(1, limit + 1):
        row = [restricted_bell(n, k) for k in range(1, n + 1)]
        print(f"{n:>3} " + "".join(f"{c:>6}" for c in row))


def full_listing(n=4):
    family = enumerate_partitions(n, n)
    print()
    print(f"all {len(family)} structures on {n} players, in generation order")
    for index, structure in enumerate(family):
        blocks = " ".join(
            "{" + ",".join(str(m) for m in block) + "}" for block in structure.blocks
        )
        print(f"{index:>3}  {blocks}")
    capped = enumerate_partitions(n, 2)
    print()
    print(f"with blocks capped at 2 members only {len(capped)} survive")
    print("the capped family is a prefix-ordered subfamily of the full one:")
    kept = [family.index_of(s) for s in capped]
    print("  surviving full-family indices:", kept)


def main():
    triangle()
    full_listing()


if __name__ == "__main__":
    main()
