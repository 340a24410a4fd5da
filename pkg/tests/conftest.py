import pytest

from ramdea import dea

EIGHT_NAMES = tuple(f"DMU{k}" for k in range(1, 9))
EIGHT_INPUTS = (1.0, 2.0, 3.0, 5.0, 8.0, 2.0, 3.0, 6.0)
EIGHT_OUTPUTS = (2.0, 5.0, 6.0, 8.0, 8.0, 1.0, 3.0, 4.0)


@pytest.fixture(scope="session")
def frontier8():
    """Single-input single-output example with four efficient units."""
    return dea.Dataset(EIGHT_NAMES, [EIGHT_INPUTS], [EIGHT_OUTPUTS])


@pytest.fixture(scope="session")
def frontier8_csv():
    lines = ["# eight units, one input, one output", "dmu,in:x,out:y"]
    for name, x, y in zip(EIGHT_NAMES, EIGHT_INPUTS, EIGHT_OUTPUTS):
        lines.append(f"{name},{x:g},{y:g}")
    return "\n".join(lines) + "\n"
