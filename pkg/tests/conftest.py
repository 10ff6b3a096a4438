import numpy as np
import pytest

from polyiso.linalg import random_unitary

ACCEPTANCE = {}


def record(criterion, passed, detail):
    ACCEPTANCE[criterion] = (passed, detail)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def haar(n, seed):
    return random_unitary(n, np.random.default_rng(seed))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section('acceptance criteria')
    for key in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[key]
        terminalreporter.write_line('AC%-2d %s  %s' % (key, 'PASS' if passed else 'FAIL', detail))
