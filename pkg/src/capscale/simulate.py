"""Monte Carlo check of the operational meaning of subset rates.

The model is deliberately idealized: a coding strategy targets a subset
of branches at a fixed rate, the channel draws one branch per trial
(uniformly over cyclic offsets for periodic memory, by q for random
memory), and decoding succeeds exactly when the drawn branch lies in the
target subset and the rate is strictly below the subset's achievable
rate. Empirical failure frequencies then converge to the theoretical
error floors at the usual 1/sqrt(n) pace.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .channels import MemoryChannel
from .errors import ValidationError
from .scales import random_scale, staircase_profile, subset_scale_value

# Rates this close to a subset's achievable rate are refused: the
# success indicator would hinge on noise in the final optimizer digits.
RATE_MARGIN = 1e-12


@dataclass(frozen=True)
class Strategy:
    """A target subset of branch indices and an attempted rate in bits."""

    subset: tuple[int, ...]
    rate: float

    def __post_init__(self):
        subset = tuple(int(i) for i in self.subset)
        if not subset:
            raise ValidationError("strategy subset must be nonempty")
        if len(set(subset)) != len(subset):
            raise ValidationError(f"strategy subset has repeated indices: {subset}")
        object.__setattr__(self, "subset", tuple(sorted(subset)))
        if not self.rate >= 0.0:
            raise ValidationError(f"rate must be nonnegative, got {self.rate!r}")


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    branch: int
    success: bool


@dataclass(frozen=True)
class SimResult:
    n_trials: int
    seed: int
    strategy: Strategy
    subset_rate: float
    theoretical_error: float
    empirical_error: float
    max_branch_error: float
    branches: np.ndarray = field(repr=False)
    successes: np.ndarray = field(repr=False)

    def records(self):
        for i, (b, s) in enumerate(zip(self.branches, self.successes)):
            yield TrialRecord(i, int(b), bool(s))


def _branch_probs(mc: MemoryChannel) -> np.ndarray:
    if mc.memory == "periodic":
        L = len(mc.branches)
        return np.full(L, 1.0 / L)
    if mc.memory == "random":
        return np.asarray(mc.q, dtype=float)
    raise ValidationError(
        "simulation needs periodic or random memory; rewrite markov memory "
        "as one of those first"
    )


def _subset_rate(mc: MemoryChannel, subset, tol: float) -> float:
    if mc.memory == "periodic":
        return subset_scale_value(mc.branches, subset, tol)
    return random_scale(mc.branches, mc.q, subset, tol).c_delta


def success_oracle(mc: MemoryChannel, strategy: Strategy, tol: float = 1e-8) -> np.ndarray:
    """Per-branch success indicators for an idealized asymptotic decoder.

    Branch i succeeds exactly when it belongs to the strategy's subset and
    the attempted rate is below the subset's achievable rate. Rates within
    RATE_MARGIN of that threshold are rejected as indeterminate.
    """
    probs = _branch_probs(mc)
    value = _subset_rate(mc, strategy.subset, tol)
    if abs(strategy.rate - value) <= RATE_MARGIN:
        raise ValidationError(
            f"rate {strategy.rate!r} is within {RATE_MARGIN} of the subset rate "
            f"{value!r}; the outcome is indeterminate at this precision"
        )
    success = np.zeros(len(probs), dtype=bool)
    if strategy.rate < value:
        success[list(strategy.subset)] = True
    return success


def run_trials(
    mc: MemoryChannel, strategy: Strategy, n_trials: int, seed: int, tol: float = 1e-8
) -> SimResult:
    """Draw branches and score the strategy against the success oracle.

    Uses a counter-based generator and a single vectorized draw, so the
    result depends only on (seed, n_trials), not on evaluation order.
    The reported empirical_error is the overall failure fraction, which
    is the draw-weighted average of the per-branch failure rates;
    max_branch_error is the worst per-branch rate among drawn branches.
    """
    if n_trials < 1:
        raise ValidationError(f"n_trials must be positive, got {n_trials}")
    probs = _branch_probs(mc)
    success = success_oracle(mc, strategy, tol)
    value = _subset_rate(mc, strategy.subset, tol)

    rng = np.random.Generator(np.random.Philox(key=int(seed)))
    draws = rng.choice(len(probs), size=int(n_trials), p=probs)
    wins = success[draws]

    branch_errors = []
    for i in range(len(probs)):
        hits = draws == i
        if hits.any():
            branch_errors.append(1.0 - float(wins[hits].mean()))
    return SimResult(
        n_trials=int(n_trials),
        seed=int(seed),
        strategy=strategy,
        subset_rate=value,
        theoretical_error=1.0 - float(probs[success].sum()),
        empirical_error=1.0 - float(wins.mean()),
        max_branch_error=max(branch_errors),
        branches=draws,
        successes=wins,
    )


@dataclass(frozen=True)
class StaircaseRow:
    rate_bits: float
    subset: tuple[int, ...]
    q_subset: float
    theoretical_error: float
    empirical_error: float
    n_trials: int
    seed: int


def _best_subset_for_rate(rate, candidates):
    """Largest-probability subset whose rate clears the attempted rate."""
    best = None
    for subset, value, q in candidates:
        if abs(rate - value) <= RATE_MARGIN:
            raise ValidationError(
                f"rate {rate!r} is within {RATE_MARGIN} of the rate of subset "
                f"{subset}; pick a rate away from the thresholds"
            )
        if value > rate:
            key = (q, -len(subset), tuple(-i for i in subset))
            if best is None or key > best[0]:
                best = (key, subset, q)
    if best is None:
        return None
    return best[1], best[2]


def empirical_staircase(
    mc: MemoryChannel, rates, n_trials: int, seed: int, tol: float = 1e-8
) -> list[StaircaseRow]:
    """Simulate the best strategy at each rate and tabulate the errors.

    For each rate the most probable subset still achieving that rate is
    simulated (ties prefer smaller, earlier subsets); rates above every
    subset rate get the empty strategy, which always fails. Row i runs
    with seed + i so rows are reproducible independently.
    """
    rates = [float(r) for r in rates]
    if not rates:
        raise ValidationError("need at least one rate")
    if any(r < 0.0 for r in rates):
        raise ValidationError("rates must be nonnegative")
    if any(b - a < 0.0 for a, b in zip(rates, rates[1:])):
        raise ValidationError("rates must be sorted in ascending order")

    probs = _branch_probs(mc)
    L = len(probs)
    if mc.memory == "periodic":
        candidates = [
            (step.subset, step.value_bits, len(step.subset) / L)
            for step in staircase_profile(mc.branches, tol)
        ]
    else:
        candidates = []
        for r in range(1, L + 1):
            for subset in itertools.combinations(range(L), r):
                s = random_scale(mc.branches, mc.q, subset, tol)
                candidates.append((subset, s.c_delta, s.q_delta))

    rows = []
    for i, rate in enumerate(rates):
        pick = _best_subset_for_rate(rate, candidates)
        if pick is None:
            rows.append(
                StaircaseRow(rate, (), 0.0, 1.0, 1.0, int(n_trials), int(seed) + i)
            )
            continue
        subset, q = pick
        res = run_trials(mc, Strategy(subset, rate), n_trials, int(seed) + i, tol)
        rows.append(
            StaircaseRow(
                rate_bits=rate,
                subset=subset,
                q_subset=q,
                theoretical_error=res.theoretical_error,
                empirical_error=res.empirical_error,
                n_trials=int(n_trials),
                seed=int(seed) + i,
            )
        )
    return rows


def staircase_rows_to_dicts(rows) -> list[dict]:
    return [
        {
            "rate_bits": r.rate_bits,
            "subset": list(r.subset),
            "q_subset": r.q_subset,
            "theoretical_error": r.theoretical_error,
            "empirical_error": r.empirical_error,
            "n_trials": r.n_trials,
            "seed": r.seed,
        }
        for r in rows
    ]


def staircase_csv(rows) -> str:
    lines = ["rate_bits,subset,q_subset,theoretical_error,empirical_error,n_trials,seed"]
    for r in rows:
        subset = ";".join(str(i) for i in r.subset)
        lines.append(
            f"{r.rate_bits:.12g},{subset},{r.q_subset:.12g},"
            f"{r.theoretical_error:.12g},{r.empirical_error:.12g},{r.n_trials},{r.seed}"
        )
    return "\n".join(lines) + "\n"
