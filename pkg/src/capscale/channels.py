"""Qubit channel models and memory-channel constructions.

A ``QubitChannel`` is one CPT map (amplitude damping, depolarizing, or an
explicit Kraus list). A ``MemoryChannel`` bundles L branch maps with a
classical memory law: periodic cycling, an i.i.d. random branch draw, or a
stationary Markov chain over branch indices. ``apply_memory_channel_n``
applies the memory average to small n-fold states (n <= 4) by exhaustive
branch-sequence expansion.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .linalg import validate_density_matrix

COMPLETENESS_TOL = 1e-10
MAX_FOLD = 4
MAX_SEQUENCES = 1_000_000

_I2 = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)


@dataclass(frozen=True)
class QubitChannel:
    """A CPT map on qubit states.

    Use the factory constructors; the completeness sum K†K = I is checked
    to 1e-10 on construction for every kind.
    """

    kind: str
    gamma: float | None = None
    p: float | None = None
    kraus_ops: tuple = ()

    @classmethod
    def amplitude_damping(cls, gamma: float) -> "QubitChannel":
        if not 0.0 <= gamma <= 1.0:
            raise ValidationError(f"gamma must be in [0, 1], got {gamma!r}")
        return cls(kind="amplitude_damping", gamma=float(gamma))

    @classmethod
    def depolarizing(cls, p: float) -> "QubitChannel":
        if not 0.0 <= p <= 1.0:
            raise ValidationError(f"p must be in [0, 1], got {p!r}")
        return cls(kind="depolarizing", p=float(p))

    @classmethod
    def kraus(cls, ops) -> "QubitChannel":
        ops = tuple(np.asarray(k, dtype=complex) for k in ops)
        if not ops or any(k.shape != (2, 2) for k in ops):
            raise ValidationError("kraus kind needs a nonempty list of 2x2 operators")
        return cls(kind="kraus", kraus_ops=ops)

    def __post_init__(self):
        if self.kind not in ("amplitude_damping", "depolarizing", "kraus"):
            raise ValidationError(f"unknown channel kind {self.kind!r}")
        comp = sum(k.conj().T @ k for k in kraus_operators(self))
        dev = np.abs(comp - _I2).max()
        if dev > COMPLETENESS_TOL:
            raise ValidationError(f"Kraus completeness violated: |sum K†K - I| = {dev:.3e}")


def kraus_operators(ch: QubitChannel) -> list[np.ndarray]:
    """Kraus decomposition of the channel as a list of 2x2 arrays."""
    if ch.kind == "amplitude_damping":
        g = ch.gamma
        return [
            np.array([[1.0, 0.0], [0.0, math.sqrt(1.0 - g)]], dtype=complex),
            np.array([[0.0, math.sqrt(g)], [0.0, 0.0]], dtype=complex),
        ]
    if ch.kind == "depolarizing":
        p = ch.p
        ops = [math.sqrt(1.0 - 3.0 * p / 4.0) * _I2]
        w = math.sqrt(p / 4.0)
        if w > 0.0:
            ops += [w * _X, w * _Y, w * _Z]
        return ops
    return [k.copy() for k in ch.kraus_ops]


def apply_qubit_channel(ch: QubitChannel, rho) -> np.ndarray:
    """Apply one channel use to a single-qubit density matrix.

    Amplitude damping uses the closed matrix form
    [[a + (1-a)γ, b√(1-γ)], [b̄√(1-γ), (1-a)(1-γ)]] for input
    [[a, b], [b̄, 1-a]]; the other kinds go through their Kraus operators.
    """
    rho = validate_density_matrix(rho)
    if rho.shape != (2, 2):
        raise ValidationError(f"expected a 2x2 density matrix, got {rho.shape}")
    if ch.kind == "amplitude_damping":
        g = ch.gamma
        a = rho[0, 0]
        b = rho[0, 1]
        r = math.sqrt(1.0 - g)
        return np.array(
            [[a + (1.0 - a) * g, b * r], [b.conjugate() * r, (1.0 - a) * (1.0 - g)]],
            dtype=complex,
        )
    if ch.kind == "depolarizing":
        return (1.0 - ch.p) * rho + ch.p * _I2 / 2.0
    out = np.zeros((2, 2), dtype=complex)
    for k in ch.kraus_ops:
        out += k @ rho @ k.conj().T
    return out


@dataclass(frozen=True)
class MemoryChannel:
    """L branch channels plus a classical memory law.

    memory kinds:
      * ``periodic``: uniformly random cyclic starting offset
      * ``random``: one branch per message, drawn with probabilities q
      * ``markov``: branch index follows a stationary Markov chain with
        transition matrix Q and invariant distribution lam
    """

    branches: tuple
    memory: str
    q: np.ndarray | None = None
    Q: np.ndarray | None = None
    lam: np.ndarray | None = None

    @classmethod
    def periodic(cls, branches) -> "MemoryChannel":
        return cls(branches=tuple(branches), memory="periodic")

    @classmethod
    def random(cls, branches, q) -> "MemoryChannel":
        return cls(branches=tuple(branches), memory="random", q=np.asarray(q, dtype=float))

    @classmethod
    def markov(cls, branches, Q, lam) -> "MemoryChannel":
        return cls(
            branches=tuple(branches),
            memory="markov",
            Q=np.asarray(Q, dtype=float),
            lam=np.asarray(lam, dtype=float),
        )

    def __post_init__(self):
        L = len(self.branches)
        if L < 1:
            raise ValidationError("need at least one branch")
        if any(not isinstance(b, QubitChannel) for b in self.branches):
            raise ValidationError("branches must be QubitChannel instances")
        if self.memory == "periodic":
            return
        if self.memory == "random":
            q = self.q
            if q is None or q.shape != (L,):
                raise ValidationError("random memory needs one probability per branch")
            if q.min() < 0.0 or abs(q.sum() - 1.0) > 1e-10:
                raise ValidationError("q must be a probability vector summing to 1")
            return
        if self.memory == "markov":
            Q, lam = self.Q, self.lam
            if Q is None or Q.shape != (L, L) or lam is None or lam.shape != (L,):
                raise ValidationError("markov memory needs an LxL transition matrix and length-L lambda")
            if Q.min() < 0.0 or np.abs(Q.sum(axis=1) - 1.0).max() > 1e-10:
                raise ValidationError("each row of Q must be a probability vector")
            if lam.min() < 0.0 or abs(lam.sum() - 1.0) > 1e-10:
                raise ValidationError("lambda must be a probability vector summing to 1")
            if np.abs(lam @ Q - lam).max() > 1e-8:
                raise ValidationError("lambda is not invariant under Q")
            return
        raise ValidationError(f"unknown memory kind {self.memory!r}")

    def branch_sequences(self, n: int):
        """Yield (weight, index sequence) pairs defining the memory average."""
        L = len(self.branches)
        if self.memory == "periodic":
            for i in range(L):
                yield 1.0 / L, tuple((i + j) % L for j in range(n))
        elif self.memory == "random":
            for i in range(L):
                if self.q[i] > 0.0:
                    yield float(self.q[i]), (i,) * n
        else:
            if L**n > MAX_SEQUENCES:
                raise ValidationError(f"markov expansion of {L}^{n} sequences exceeds budget")
            for seq in itertools.product(range(L), repeat=n):
                w = float(self.lam[seq[0]])
                for a, b in itertools.pairwise(seq):
                    w *= float(self.Q[a, b])
                if w > 0.0:
                    yield w, seq


def _apply_product_map(branch_seq, channels, rho_n: np.ndarray) -> np.ndarray:
    """Apply the tensor product of the indexed branch maps via Kraus sums."""
    op_sets = [kraus_operators(channels[i]) for i in branch_seq]
    out = np.zeros_like(rho_n)
    for combo in itertools.product(*op_sets):
        k = combo[0]
        for op in combo[1:]:
            k = np.kron(k, op)
        out += k @ rho_n @ k.conj().T
    return out


def apply_memory_channel_n(mc: MemoryChannel, rho_n, n: int) -> np.ndarray:
    """Apply the n-fold memory channel to a 2^n-dimensional state, n <= 4."""
    if not 1 <= n <= MAX_FOLD:
        raise ValidationError(f"n must be in [1, {MAX_FOLD}], got {n}")
    rho_n = validate_density_matrix(rho_n)
    if rho_n.shape[0] != 2**n:
        raise ValidationError(f"state dimension {rho_n.shape[0]} does not match 2^{n}")
    out = np.zeros_like(rho_n)
    for w, seq in mc.branch_sequences(n):
        out += w * _apply_product_map(seq, mc.branches, rho_n)
    return out
