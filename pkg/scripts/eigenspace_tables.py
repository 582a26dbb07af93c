#!/usr/bin/env python3
"""Print the character/dimension tables of the section spaces in degrees
1 through 3 for all three families."""

from campedelli.campedelli import FAMILY_LABELS, eigenspace_table, get_family

if __name__ == "__main__":
    for label in FAMILY_LABELS:
        fam = get_family(label)
        print(f"== family {label} ==")
        for degree in (1, 2, 3):
            table = eigenspace_table(fam, degree)
            row = ", ".join(f"{chi.label()}:{dim}"
                            for chi, dim in sorted(
                                table.items(), key=lambda t: t[0].label()))
            print(f"  degree {degree}: {row}")
        print()
