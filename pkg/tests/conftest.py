import os
import random

import pytest

from orproofs import _kernels_py
from orproofs.proofs import setup

KERNEL_IMPLS = [pytest.param(_kernels_py, id="python")]
try:
    from orproofs import _kernels

    KERNEL_IMPLS.append(pytest.param(_kernels, id="cython"))
except ImportError:
    pass


@pytest.fixture
def contexts():
    return setup(bytes(range(32)))


@pytest.fixture
def rng():
    return random.Random(0xA11CE)


def random_digest(rng):
    return rng.randbytes(32)


def flip_bit(data: bytes, bit: int) -> bytes:
    out = bytearray(data)
    out[bit // 8] ^= 1 << (bit % 8)
    return bytes(out)


ACCEPTANCE_LINES = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


@pytest.fixture
def criterion(request):
    """Label an acceptance test; its PASS/FAIL line appears in the terminal summary."""
    import time

    state = {}

    def start(number, title):
        state.update(number=number, title=title, t0=time.perf_counter())

    yield start
    rep = getattr(request.node, "rep_call", None)
    status = "PASS" if rep is not None and rep.passed else "FAIL"
    elapsed = time.perf_counter() - state["t0"]
    ACCEPTANCE_LINES.append((state["number"], f"[{status}] criterion {state['number']}: {state['title']} ({elapsed:.2f} s)"))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
