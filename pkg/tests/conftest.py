import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from zeq.zero_finder import first_n_zeros  # noqa: E402

DATA = Path(__file__).parent / "data"


def load_frozen():
    rows = [ln.split() for ln in (DATA / "first100_zeros.txt").read_text().splitlines()
            if ln.strip() and not ln.startswith("#")]
    return np.array([float(r[1]) for r in rows]), np.array([float(r[2]) for r in rows])


@pytest.fixture(scope="session")
def frozen100():
    """(gamma, |Z'(gamma)|) for the first 100 zeros from the mpmath oracle."""
    return load_frozen()


@pytest.fixture(scope="session")
def zeros10k():
    return first_n_zeros(10_000)


@pytest.fixture(scope="session")
def zeros1k(zeros10k):
    return zeros10k.head(1000)
