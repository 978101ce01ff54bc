"""Writes crates/core/tests/data/variants.csv: for a few small knots, the
standard diagram and several diagrams enlarged by random Reidemeister moves.

Rows sharing a `knot` value are diagrams of the same knot. Labels are shifted
to start at 1. Requires spherogram.
"""

import csv
import random
import sys

import spherogram

KNOTS = ["K3a1", "K4a1", "K5a1", "K5a2", "K6a3", "K7a7"]
VARIANTS = 3
STEPS = [4, 8, 12]


def pd_text(link):
    return "PD[" + ",".join(
        "X[" + ",".join(str(e + 1) for e in x) + "]" for x in link.PD_code()
    ) + "]"


def main(out):
    random.seed(20240611)
    with open(out, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["knot", "crossings", "pd"])
        for name in KNOTS:
            base = spherogram.Link(name)
            w.writerow([name, len(base.crossings), pd_text(base)])
            for i in range(VARIANTS):
                link = spherogram.Link(name)
                link.backtrack(STEPS[i])
                if len(link.link_components) != 1:
                    continue
                w.writerow([name, len(link.crossings), pd_text(link)])


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "crates/core/tests/data/variants.csv")
