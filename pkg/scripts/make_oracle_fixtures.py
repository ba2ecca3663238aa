#!/usr/bin/env python3
"""Regenerate the exhaustive-search oracle fixtures used by the test suite.

The fixtures pin the small-grid brute-force energies; tests/test_acceptance.py
verifies the committed file matches a fresh run.
"""

import os

from convexfit.exports import atomic_write_text, fmt
from convexfit.geometry import Disk, named_container, support_samples
from convexfit.nodal import nodal_area
from convexfit.oracles import brute_force_nodal

FIXTURE_PATH = os.path.join(os.path.dirname(__file__), "..", "tests", "data", "oracle_fixtures.csv")

CELLS = [
    ("disk", Disk((0.0, 0.0), 1.0), 5, 2.0, 0.25, 25),
    ("square", named_container("square"), 4, 1.0, 0.25, 30),
]


def main():
    lines = ["name,N,p,alpha,G,energy"]
    for name, spec, n, p, alpha, grid in CELLS:
        report = brute_force_nodal(spec, n, p, alpha, grid)
        total = nodal_area(support_samples(spec, n).values)[0]
        print(
            f"{name}: N={n} p={p:g} alpha={alpha:g} G={grid} -> energy {report.energy:.8f} "
            f"(area slack {report.area_slack:.4f} = {report.area_slack / total:.4%} of the container)"
        )
        lines.append(f"{name},{n},{p:g},{alpha:g},{grid},{fmt(report.energy)}")
    atomic_write_text(os.path.abspath(FIXTURE_PATH), "\n".join(lines) + "\n")
    print(f"wrote {os.path.abspath(FIXTURE_PATH)}")


if __name__ == "__main__":
    main()
