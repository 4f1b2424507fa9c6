import pytest

from mwsieve.model import builtin_model, parse_model
from mwsieve.sieve import LocalDataCache


@pytest.fixture(scope="session")
def model53():
    return builtin_model(53)


@pytest.fixture(scope="session")
def cache53():
    return LocalDataCache()


@pytest.fixture
def fresh_cache():
    return LocalDataCache()


TOY_TORSION = {
    # E: y^2 + xy = x^3 - x (rank 1, torsion Z/2 generated by (0, 0)); C = E, psi = id.
    "N": 65,
    "genus": 4,
    "variables": ["x2", "x3", "x4"],
    "q_poly": [[1, [2, 0, 0]], [-1, [0, 1, 1]], [2, [0, 0, 2]]],
    "c_equations": [[[1, [0, 2, 1]], [1, [1, 1, 1]], [-1, [3, 0, 0]], [1, [1, 0, 2]]]],
    "psi": [[[1, [1, 0, 0]]], [[1, [0, 1, 0]]], [[1, [0, 0, 1]]]],
    "e_coeffs": [1, 0, 0, -1, 0],
    "generator": [1, 0, 1],
    "torsion": [0, 0, 1],
    "inverse_map": None,
    "expected_D": None,
}


@pytest.fixture(scope="session")
def toy_torsion_model():
    from mwsieve.model import load_model

    return load_model(dict(TOY_TORSION))


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
