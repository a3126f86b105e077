"""Shared helpers for the test suite."""

import numpy as np


def random_density(rng, dim):
    """Random full-rank density matrix of the given dimension."""
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = m @ m.conj().T
    rho = rho / rho.trace().real
    return 0.5 * (rho + rho.conj().T)


def chi_ad_grid(gamma, a):
    """Vectorized reference Holevo curve for damping mirror pairs.

    Straightforward numpy transcription used as an in-test oracle; kept
    independent of the package implementation on purpose.
    """
    a = np.asarray(a, dtype=float)
    s = 4.0 * gamma * (1.0 - gamma) * (1.0 - a) ** 2
    x = np.sqrt(np.maximum(0.0, 1.0 - s))
    lam = s / (2.0 * (1.0 + x))

    def h2(t):
        t = np.clip(t, 0.0, 1.0)
        out = np.zeros_like(t)
        m = (t > 0.0) & (t < 1.0)
        out[m] = -(t[m] * np.log2(t[m]) + (1.0 - t[m]) * np.log2(1.0 - t[m]))
        return out

    return h2(a + (1.0 - a) * gamma) - h2(lam)
