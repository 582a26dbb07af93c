#!/usr/bin/env python3
"""Sweep the hyperplane parameters (lam, mu) of the one-parameter family
joining the B1 and B2 models and print what each slice is identified as."""

from campedelli.campedelli import DegenerateParametersError, degeneration_check

if __name__ == "__main__":
    for lam, mu in ((1, 0), (0, 1), (1, 1), (1, -1), (2, 3), (0, 0)):
        try:
            rep = degeneration_check(lam, mu)
        except DegenerateParametersError as exc:
            print(f"({lam}, {mu}): rejected ({exc})")
            continue
        status = "ok" if rep["ok"] else "FAILED"
        print(f"({lam}, {mu}): {rep['identified']} [{status}]")
