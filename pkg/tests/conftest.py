from pathlib import Path

import numpy as np
import pytest

from ldpc_minsum.tanner import from_triples, generate_regular, load_alist

DATA = Path(__file__).parent / "data"

TOY_ALIST = "3 2\n2 2\n1 2 1\n2 2\n1 0\n1 2\n2 0\n1 2\n2 3\n"


@pytest.fixture(scope="session")
def toy():
    """H = [[1,1,0],[0,1,1]]."""
    return from_triples(3, 2, [(0, 0), (0, 1), (1, 1), (1, 2)])


@pytest.fixture(scope="session")
def code48():
    return generate_regular(48, 3, 6, seed=1)


@pytest.fixture(scope="session")
def code96():
    return generate_regular(96, 3, 6, seed=1)


@pytest.fixture(scope="session")
def irregular():
    return load_alist(DATA / "irregular_n60.alist")


def noisy_llrs(H, sigma2, seed):
    rng = np.random.default_rng(seed)
    return 2.0 * (1.0 + np.sqrt(sigma2) * rng.standard_normal(H.n_vars)) / sigma2


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def record():
    """Log one PASS/FAIL line for an acceptance criterion; printed in the terminal summary."""

    def _record(criterion: int, ok: bool, detail: str) -> None:
        line = f"[criterion {criterion}] {'PASS' if ok else 'FAIL'}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)

    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
