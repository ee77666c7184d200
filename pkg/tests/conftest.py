"""Shared dense-matrix oracles.

The oracles build H from Kronecker products of 2x2 Pauli matrices, which is
independent of the bit tricks used by the package.  Single-spin basis order
is (down, up), and spin 0 is the least significant bit of a basis index, so
it is the last factor of each Kronecker product.
"""
import math
from functools import reduce

import numpy as np
import pytest
from scipy.linalg import expm

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, 1j], [-1j, 0]], dtype=complex)  # (down, up) ordering
SZ = np.diag([-1.0, 1.0]).astype(complex)
I2 = np.eye(2, dtype=complex)


def kron_all(ops):
    return reduce(np.kron, ops)


def on_spin(op, k, n):
    """``op`` acting on spin k of an n-spin register."""
    return kron_all([op if j == k else I2 for j in reversed(range(n))])


def dense_static(n, gx, gy=0.0, gz=0.0):
    return gx * kron_all([SX] * n) + gy * kron_all([SY] * n) + gz * kron_all([SZ] * n)


def dense_hamiltonian(n, omega, gx, gy=0.0, gz=0.0):
    return omega * on_spin(SZ, 0, n) + dense_static(n, gx, gy, gz)


def exact_constant_evolution(h, psi0, times):
    """Exact states under a time-independent H at the given times."""
    t0 = times[0]
    return np.array([expm(-1j * h * (t - t0)) @ psi0 for t in times])


def magnus_linear_reference(n, gx, gy, gz, tau_i, tau_f, psi0, n_steps=20000):
    """Midpoint-exponential product for H(tau) = tau/2 sigma_z^0 + static.

    Second order in the step; used only with many steps on short windows.
    """
    taus = np.linspace(tau_i, tau_f, n_steps + 1)
    psi = np.asarray(psi0, dtype=complex)
    static = dense_static(n, gx, gy, gz)
    z0 = on_spin(SZ, 0, n)
    for a, b in zip(taus[:-1], taus[1:]):
        mid = 0.5 * (a + b)
        psi = expm(-1j * (b - a) * (mid / 2 * z0 + static)) @ psi
    return psi


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def lz_symmetric(lam):
    return 1 - math.exp(-2 * math.pi * lam)


# one line per acceptance criterion, printed after the test session
ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture
def criterion():
    def record(number, title, passed, detail):
        status = "PASS" if passed else "FAIL"
        ACCEPTANCE_LINES[number] = f"criterion {number:2d} {status}  {title}: {detail}"
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[number])
