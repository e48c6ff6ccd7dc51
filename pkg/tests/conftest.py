import numpy as np
import pytest

import cdcrdyn as cd

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def acceptance_report():
    """Collector so acceptance PASS lines also show in the terminal summary."""
    def _report(num, name, detail):
        line = f"ACCEPTANCE {num} [PASS] {name}: {detail}"
        print(line)
        ACCEPTANCE_LINES.append((num, line))
    return _report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def case1():
    return cd.build_case_model("case1")


@pytest.fixture(scope="session")
def case1_noload(case1):
    """Case-1 geometry with gravity switched off (static oracles)."""
    return cd.RobotModel(
        length=case1.length, profile_I=case1.profile_I, profile_A=case1.profile_A,
        profile_W=case1.profile_W, material=case1.material,
        load=cd.DistributedLoad(0.0, 0.0),
    )


@pytest.fixture(scope="session")
def grid(case1):
    return cd.make_quadrature(16, 5, case1.length)


@pytest.fixture(scope="session")
def basis6(case1):
    return cd.ModalBasis(6, case1.length)


@pytest.fixture(scope="session")
def raw1(case1):
    return cd.ModalBasis(1, case1.length, "raw_monomial")


@pytest.fixture(scope="session")
def raw2(case1):
    return cd.ModalBasis(2, case1.length, "raw_monomial")


@pytest.fixture(scope="session")
def asm_case1(case1, basis6, grid):
    return cd.make_assembly(case1, basis6, grid)


@pytest.fixture()
def rng():
    return np.random.default_rng(20240811)
