"""Regenerate the frozen oracle tables in this directory.

    python tests/data/make_frozen.py

Uses only tests/oracles.py (mpmath), never the package under test.
"""
import sys
from pathlib import Path

import mpmath

HERE = Path(__file__).resolve().parent
sys.path.insert(0, str(HERE.parent))
import oracles  # noqa: E402


def main():
    roots = oracles.zeros_oracle(237.0, step=0.1)
    assert len(roots) == 100, len(roots)
    with open(HERE / "first100_zeros.txt", "w") as fh:
        fh.write("# index gamma |Z'(gamma)|  (mpmath Euler-Maclaurin oracle, 30 digits)\n")
        for i, r in enumerate(roots, 1):
            zp = abs(oracles.z_prime_oracle(r))
            fh.write(f"{i} {mpmath.nstr(r, 20)} {mpmath.nstr(zp, 15)}\n")


if __name__ == "__main__":
    main()
