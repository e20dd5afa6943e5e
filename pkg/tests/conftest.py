import numpy as np
import pytest

import imcflab as L

# the (n, m) family exercised across the metric-side tests
SUITE_NM = [(n, m) for n in range(3, 8) for m in (-1.0, -0.5, 0.0, 0.5, 1.0, 2.0)]


def suite_grid(spec, num=40, r_hi=None):
    """Log-spaced radii safely inside the working domain."""
    lo = 1.1 * spec.r_min if spec.mass_param and spec.mass_param > 0 else 0.5
    hi = r_hi if r_hi is not None else spec.r_max
    return np.geomspace(lo, hi, num)


def p2_graph(spec, r0, amp, n_intervals):
    """Initial slice r0 + amp * P2(cos theta) on the standard grid."""
    theta = np.linspace(0.0, np.pi, n_intervals + 1)
    rho = r0 + amp * (1.5 * np.cos(theta) ** 2 - 0.5)
    return L.AxisymmetricGraph(theta, rho, spec)


@pytest.fixture(scope="session")
def schw3m1():
    return L.ManifoldSpec.schwarzschild(3, 1.0)


@pytest.fixture(scope="session")
def flat3():
    return L.ManifoldSpec.flat(3)
