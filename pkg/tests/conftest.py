from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")


# Three outputs a, b, c with l(a, b) = l(a, c) = 1 and l(b, c) = 2.
THREE_LOSS = np.array([[0, 1, 1], [1, 0, 2], [1, 2, 0]], dtype=float)
THREE_TAU = {(0, 1, 2): 5 / 8, (2,): 1 / 8, (0, 2): 1 / 8, (1, 2): 1 / 8}


def exact_risks(tau, loss, reduce):
    """Rational-arithmetic oracle: sum_S tau(S) * reduce({l(z, y) : y in S})."""
    m = len(loss)
    out = []
    for z in range(m):
        total = F(0)
        for S, p in tau.items():
            vals = [F(int(loss[z][y])) for y in S]
            total += F(p).limit_denominator(1 << 20) * reduce(vals)
        out.append(total)
    return out


@pytest.fixture
def three():
    return THREE_TAU, THREE_LOSS


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_ACCEPTANCE = pytest.StashKey()


@pytest.fixture
def acceptance(request):
    """Record one pass/fail line per acceptance criterion."""
    lines = request.config.stash.setdefault(_ACCEPTANCE, [])

    def record(number, ok, detail):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        lines.append((number, line))
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
