import numpy as np
import pytest

from netforms import Network, assemble


@pytest.fixture
def unit_edge():
    return assemble(Network(2, [(0, 1, 1.0)]))


@pytest.fixture
def path3():
    return assemble(Network(3, [(0, 1, 1.0), (1, 2, 1.0)]))


@pytest.fixture
def triangle():
    return assemble(Network(3, [(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)]))


def edge_sum_energy(net: Network, f, g=None) -> float:
    """Independent oracle: evaluate the form directly from the network data."""
    f = np.asarray(f, dtype=float)
    g = f if g is None else np.asarray(g, dtype=float)
    total = 0.0
    for u, v, c in net.edges:
        total += c * (f[u] - f[v]) * (g[u] - g[v])
    for x in range(net.n):
        total += net.killing[x] * f[x] * g[x]
    return total
