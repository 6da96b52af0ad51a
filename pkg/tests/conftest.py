import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def random_hermitian(rng, n, complex_=True):
    A = rng.standard_normal((n, n))
    if complex_:
        A = A + 1j * rng.standard_normal((n, n))
    return (A + A.conj().T) / 2


# acceptance criteria: one PASS/FAIL line each in the terminal summary
CRITERIA = {
    1: "Theorem-1 ensemble certified brackets and strict hierarchy",
    2: "amplitude-damping pair certified brackets and hierarchy",
    3: "random-pair census fractions",
    4: "gamma sweep ordering and gamma=0.67 consistency",
    5: "solver: Helstrom k=1 and primal/dual gap",
    6: "exact arithmetic suite",
    7: "certificate JSON round trip and mutation",
}
ACCEPTANCE = {}


def record(n, ok, detail=""):
    ACCEPTANCE[n] = (bool(ok), detail)
    return ok


def pytest_terminal_summary(terminalreporter):
    if not any(i.nodeid.startswith("tests/test_acceptance.py") or "test_acceptance" in i.nodeid
               for stats in terminalreporter.stats.values() for i in stats if hasattr(i, "nodeid")):
        return
    terminalreporter.section("acceptance criteria")
    for n, title in CRITERIA.items():
        ok, detail = ACCEPTANCE.get(n, (False, "not run or errored"))
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {title}  {detail}")
