import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oracles import GENUS_ONE_UNKNOT, VIRTUAL_TREFOIL  # noqa: E402
from vknot.gauss import parse_gauss_code  # noqa: E402
from vknot.recognizer import _one_vertex, scan, working_exterior  # noqa: E402

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def trefoil_exterior():
    """Reduced exterior of the virtual trefoil (a couple of minutes, once)."""
    return working_exterior(parse_gauss_code(VIRTUAL_TREFOIL))


@pytest.fixture(scope="session")
def unknot_exterior():
    return working_exterior(parse_gauss_code(GENUS_ONE_UNKNOT))


@pytest.fixture(scope="session")
def unknot_scan(unknot_exterior):
    """One-vertex form of the genus-one unknot exterior and its classified
    admissible vertex solutions."""
    tri = _one_vertex(unknot_exterior)
    return tri, scan(tri)


@pytest.fixture(scope="session")
def trefoil_scan(trefoil_exterior):
    tri = _one_vertex(trefoil_exterior)
    return tri, scan(tri)
