"""Input ensembles and the Holevo quantity.

The generic path computes chi = S(average output) - average output entropy
for any ensemble and channel. For the amplitude-damping channel restricted
to a mirror-image pair of pure states there are closed forms for chi and
its derivative in the shared state parameter ``a``; both are provided here
and cross-checked against the generic path in the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channels import QubitChannel, apply_qubit_channel
from .errors import ValidationError
from .linalg import binary_entropy, validate_density_matrix, von_neumann_entropy

PROB_SUM_TOL = 1e-10


@dataclass(frozen=True)
class Ensemble:
    """Weighted list of single-qubit input states."""

    items: tuple  # of (prob, 2x2 density matrix)

    def __post_init__(self):
        if not self.items:
            raise ValidationError("ensemble must be nonempty")
        probs = [p for p, _ in self.items]
        if min(probs) < 0.0 or abs(sum(probs) - 1.0) > PROB_SUM_TOL:
            raise ValidationError("ensemble probabilities must be nonnegative and sum to 1")
        for _, rho in self.items:
            state = validate_density_matrix(rho)
            if state.shape != (2, 2):
                raise ValidationError("ensemble states must be single-qubit")

    @classmethod
    def of(cls, pairs) -> "Ensemble":
        return cls(items=tuple((float(p), np.asarray(rho, dtype=complex)) for p, rho in pairs))


@dataclass(frozen=True)
class MirrorPair:
    """Two mirror-image pure states with shared diagonal parameter a.

    The states are [[a, ±b], [±b, 1-a]] with b = sqrt(a(1-a)), each with
    probability 1/2; both are pure by construction.
    """

    a: float

    def __post_init__(self):
        if not 0.0 <= self.a <= 1.0:
            raise ValidationError(f"a must be in [0, 1], got {self.a!r}")

    def states(self) -> tuple[np.ndarray, np.ndarray]:
        a = self.a
        b = math.sqrt(a * (1.0 - a))
        plus = np.array([[a, b], [b, 1.0 - a]], dtype=complex)
        minus = np.array([[a, -b], [-b, 1.0 - a]], dtype=complex)
        return plus, minus

    def to_ensemble(self) -> Ensemble:
        plus, minus = self.states()
        return Ensemble(items=((0.5, plus), (0.5, minus)))


def average_output(ch: QubitChannel, e: Ensemble) -> np.ndarray:
    """Average channel output sum_j p_j Phi(rho_j)."""
    out = np.zeros((2, 2), dtype=complex)
    for p, rho in e.items:
        out += p * apply_qubit_channel(ch, rho)
    return out


def holevo_quantity(ch: QubitChannel, e: Ensemble) -> float:
    """Holevo quantity S(sum p_j Phi(rho_j)) - sum p_j S(Phi(rho_j)), in bits."""
    avg = von_neumann_entropy(average_output(ch, e))
    cond = sum(p * von_neumann_entropy(apply_qubit_channel(ch, rho)) for p, rho in e.items)
    return avg - cond


def chi_mirror_family(ch: QubitChannel, a: float) -> float:
    """Holevo quantity of the mirror pair at parameter a, via the generic path."""
    return holevo_quantity(ch, MirrorPair(a).to_ensemble())


def _check_unit_interval(name, value):
    if not 0.0 <= value <= 1.0:
        raise ValidationError(f"{name} must be in [0, 1], got {value!r}")


def chi_ad_mirror(gamma: float, a: float) -> float:
    """Closed-form Holevo quantity of the amplitude-damping mirror pair, in bits.

    The mirror pair averages to the diagonal state diag(a + (1-a)γ,
    (1-a)(1-γ)), and each branch output has eigenvalues
    (1 ± sqrt(1 - 4γ(1-γ)(1-a)²)) / 2, so

        chi(a) = H(a + (1-a)γ) - H((1 - sqrt(1 - 4γ(1-γ)(1-a)²)) / 2).
    """
    _check_unit_interval("gamma", gamma)
    _check_unit_interval("a", a)
    s = 4.0 * gamma * (1.0 - gamma) * (1.0 - a) ** 2
    x = math.sqrt(max(0.0, 1.0 - s))
    # (1-x)/2 rewritten as s / (2(1+x)) to avoid cancellation for small s
    lam_minus = s / (2.0 * (1.0 + x))
    return binary_entropy(a + (1.0 - a) * gamma) - binary_entropy(lam_minus)


def dchi_da_ad(gamma: float, a: float) -> float:
    """Derivative of chi_ad_mirror in the state parameter a, in nats.

    Only the root location is ever used, so the natural-log form is kept:

        (1-γ) ln[(1-a)(1-γ) / (a + (1-a)γ)]
          + (2γ(1-γ)(1-a)/x) ln[(1+x)/(1-x)],  x = sqrt(1 - 4γ(1-γ)(1-a)²).

    At γ = 0 the second term vanishes and this reduces to ln((1-a)/a).

    Raises:
        ValidationError: for γ outside [0, 1), a outside (0, 1), or x = 0.
    """
    if not 0.0 <= gamma < 1.0:
        raise ValidationError(f"gamma must be in [0, 1), got {gamma!r}")
    if not 0.0 < a < 1.0:
        raise ValidationError(f"a must lie strictly inside (0, 1), got {a!r}")
    t1 = (1.0 - gamma) * math.log((1.0 - a) * (1.0 - gamma) / (a + (1.0 - a) * gamma))
    s = 4.0 * gamma * (1.0 - gamma) * (1.0 - a) ** 2
    if s == 0.0:
        return t1
    x = math.sqrt(max(0.0, 1.0 - s))
    if x == 0.0:
        raise ValidationError("derivative is singular at x = 0")
    one_minus_x = s / (1.0 + x)
    t2 = (2.0 * gamma * (1.0 - gamma) * (1.0 - a) / x) * math.log((1.0 + x) / one_minus_x)
    return t1 + t2
