"""Product-state capacities and the scale-of-capacities hierarchy.

All quantities here reduce to one-parameter maximizations of Holevo
curves of mirror-pair ensembles, taken branch by branch and combined as
sums (periodic memory), minima (random memory), or best subsets (the
scale hierarchy). Reports bundle the numbers with the subsets that
achieve them and serialize to plain dicts and CSV.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .channels import QubitChannel
from .errors import NumericalError, ValidationError
from .holevo import chi_ad_mirror, chi_mirror_family
from .optim import OptResult, maximize_chi_min, maximize_chi_sum, maximize_concave_1d

# Subset enumeration is exponential in the number of branches.
MAX_BRANCHES = 12

# Strictly-greater margin for deterministic subset tie-breaking.
_TIE_EPS = 1e-12


def _as_channels(branches) -> tuple[QubitChannel, ...]:
    out = []
    for b in branches:
        if isinstance(b, QubitChannel):
            out.append(b)
        else:
            out.append(QubitChannel.amplitude_damping(float(b)))
    if not out:
        raise ValidationError("need at least one branch")
    return tuple(out)


def _maximize_scanned(f, tol: float) -> OptResult:
    """Coarse scan plus golden-section refinement on [0, 1] mirror parameter."""
    xs = np.linspace(1e-9, 1.0 - 1e-9, 257)
    vals = np.array([f(x) for x in xs])
    if not np.all(np.isfinite(vals)):
        raise NumericalError("Holevo curve returned a non-finite value")
    k = int(np.argmax(vals))
    lo = xs[max(0, k - 2)]
    hi = xs[min(len(xs) - 1, k + 2)]
    return maximize_concave_1d(f, lo, hi, tol)


class _BranchCurves:
    """Per-branch Holevo curves with memoized subset maximizations."""

    def __init__(self, branches, tol: float):
        self.channels = _as_channels(branches)
        self.tol = float(tol)
        self.all_ad = all(ch.kind == "amplitude_damping" for ch in self.channels)
        self._sum_cache: dict[tuple[int, ...], OptResult] = {}
        self._min_cache: dict[tuple[int, ...], OptResult] = {}

    def __len__(self):
        return len(self.channels)

    def _chi(self, i: int, a: float) -> float:
        ch = self.channels[i]
        if ch.kind == "amplitude_damping":
            return chi_ad_mirror(ch.gamma, a)
        return chi_mirror_family(ch, a)

    def sup_sum(self, idxs) -> OptResult:
        """Maximize the plain sum of the selected branch curves over one ensemble."""
        key = tuple(sorted(idxs))
        if key not in self._sum_cache:
            if self.all_ad:
                gammas = [self.channels[i].gamma for i in key]
                res = maximize_chi_sum(gammas, [1.0] * len(key), self.tol)
            else:
                res = _maximize_scanned(
                    lambda a: sum(self._chi(i, a) for i in key), self.tol
                )
            self._sum_cache[key] = res
        return self._sum_cache[key]

    def sup_min(self, idxs) -> OptResult:
        key = tuple(sorted(idxs))
        if key not in self._min_cache:
            if self.all_ad:
                gammas = [self.channels[i].gamma for i in key]
                res = maximize_chi_min(gammas, self.tol)
            else:
                res = _maximize_scanned(
                    lambda a: min(self._chi(i, a) for i in key), self.tol
                )
            self._min_cache[key] = res
        return self._min_cache[key]

    def branch_suprema(self) -> list[OptResult]:
        return [self.sup_sum((i,)) for i in range(len(self))]


@dataclass(frozen=True)
class BranchSupremum:
    a_max: float
    chi_star: float


@dataclass(frozen=True)
class ScaleEntry:
    value: float
    best_subset: tuple[int, ...]


@dataclass(frozen=True)
class CapacityReport:
    """Periodic-memory capacities and the full subset-scale hierarchy."""

    cp: float
    cbar: float
    scale: dict[int, ScaleEntry]
    per_branch_suprema: tuple[BranchSupremum, ...]

    @property
    def n_branches(self) -> int:
        return len(self.per_branch_suprema)


@dataclass(frozen=True)
class SubsetScale:
    q_delta: float
    c_delta: float
    cbar_delta: float


@dataclass(frozen=True)
class RandomScaleReport:
    """Subset capacities of a random-memory channel, keyed by subset."""

    q: tuple[float, ...]
    per_subset: dict[tuple[int, ...], SubsetScale]
    per_branch_suprema: tuple[BranchSupremum, ...]


@dataclass(frozen=True)
class StaircaseStep:
    r: int
    value_bits: float
    subset: tuple[int, ...]
    error_threshold: float


def capacity_periodic(branches, tol: float = 1e-8) -> OptResult:
    """Product-state capacity of the periodic channel: one ensemble serves all branches."""
    curves = _BranchCurves(branches, tol)
    res = curves.sup_sum(range(len(curves)))
    return OptResult(res.argmax, res.value / len(curves), res.iterations, res.achieved_tol)


def cbar_periodic(branches, tol: float = 1e-8) -> float:
    """Average of the branch capacities, each with its own best ensemble."""
    curves = _BranchCurves(branches, tol)
    return sum(r.value for r in curves.branch_suprema()) / len(curves)


def per_branch_suprema(branches, tol: float = 1e-8) -> list[BranchSupremum]:
    curves = _BranchCurves(branches, tol)
    return [BranchSupremum(r.argmax, r.value) for r in curves.branch_suprema()]


def _subset_value(curves: _BranchCurves, subset: tuple[int, ...]) -> float:
    L = len(curves)
    r = len(subset)
    total = 0.0
    for k in range(L):
        total += curves.sup_sum([(m + k) % L for m in subset]).value
    return total / (r * L)


def _check_subset(subset, L) -> tuple[int, ...]:
    subset = tuple(int(i) for i in subset)
    if not subset:
        raise ValidationError("subset must be nonempty")
    if len(set(subset)) != len(subset):
        raise ValidationError(f"subset has repeated indices: {subset}")
    if min(subset) < 0 or max(subset) >= L:
        raise ValidationError(f"subset {subset} out of range for {L} branches")
    return tuple(sorted(subset))


def subset_scale_value(branches, subset, tol: float = 1e-8) -> float:
    """Transmission rate of a fixed subset of branch positions, in bits.

    Averages, over the unknown cyclic offset, the best joint rate of the
    selected positions, normalized per selected position.
    """
    curves = _BranchCurves(branches, tol)
    return _subset_value(curves, _check_subset(subset, len(curves)))


def scale_r(branches, r: int, tol: float = 1e-8) -> ScaleEntry:
    """Best subset of size r and its rate; first subset in lex order wins ties."""
    curves = _BranchCurves(branches, tol)
    L = len(curves)
    if L > MAX_BRANCHES:
        raise ValidationError(f"subset enumeration limited to {MAX_BRANCHES} branches")
    if not 1 <= r <= L:
        raise ValidationError(f"r must be in [1, {L}], got {r}")
    best_val = -math.inf
    best_subset = None
    for subset in itertools.combinations(range(L), r):
        v = _subset_value(curves, subset)
        if v > best_val + _TIE_EPS:
            best_val, best_subset = v, subset
    return ScaleEntry(best_val, best_subset)


def pair_capacity(branches, tol: float = 1e-8) -> ScaleEntry:
    """Rate of the best branch pair (subset size two)."""
    channels = _as_channels(branches)
    if len(channels) < 2:
        raise ValidationError("pair capacity needs at least two branches")
    return scale_r(channels, 2, tol)


def chi_star_avg_pair(gamma0: float, gamma1: float, tol: float = 1e-8) -> float:
    """Average of the two branch capacities, separate ensembles per branch."""
    sups = per_branch_suprema([gamma0, gamma1], tol)
    return 0.5 * (sups[0].chi_star + sups[1].chi_star)


def compute_capacity_report(branches, tol: float = 1e-8) -> CapacityReport:
    """Full periodic report: capacities, per-branch suprema, all scale levels.

    Raises NumericalError if the computed hierarchy fails its own sanity
    checks (endpoints must match the capacities, levels must not increase).
    """
    curves = _BranchCurves(branches, tol)
    L = len(curves)
    if L > MAX_BRANCHES:
        raise ValidationError(f"subset enumeration limited to {MAX_BRANCHES} branches")
    sups = curves.branch_suprema()
    cbar = sum(r.value for r in sups) / L
    cp = curves.sup_sum(range(L)).value / L
    scale: dict[int, ScaleEntry] = {}
    for r in range(1, L + 1):
        best_val = -math.inf
        best_subset = None
        for subset in itertools.combinations(range(L), r):
            v = _subset_value(curves, subset)
            if v > best_val + _TIE_EPS:
                best_val, best_subset = v, subset
        scale[r] = ScaleEntry(best_val, best_subset)

    if abs(scale[L].value - cp) > 1e-7:
        raise NumericalError(
            f"full-size scale level {scale[L].value!r} disagrees with capacity {cp!r}"
        )
    if abs(scale[1].value - cbar) > 1e-7:
        raise NumericalError(
            f"size-one scale level {scale[1].value!r} disagrees with branch average {cbar!r}"
        )
    for r in range(1, L):
        if scale[r + 1].value > scale[r].value + 1e-9:
            raise NumericalError(f"scale increased from r={r} to r={r + 1}")

    return CapacityReport(
        cp=cp,
        cbar=cbar,
        scale=scale,
        per_branch_suprema=tuple(BranchSupremum(s.argmax, s.value) for s in sups),
    )


def staircase_profile(branches, tol: float = 1e-8) -> list[StaircaseStep]:
    """Achievable rate and guaranteed error floor for each subset size."""
    report = compute_capacity_report(branches, tol)
    L = report.n_branches
    return [
        StaircaseStep(r, e.value, e.best_subset, 1.0 - r / L)
        for r, e in sorted(report.scale.items())
    ]


def _check_probs(q, L) -> tuple[float, ...]:
    q = tuple(float(x) for x in q)
    if len(q) != L:
        raise ValidationError(f"got {len(q)} probabilities for {L} branches")
    if min(q) < 0.0:
        raise ValidationError("branch probabilities must be nonnegative")
    if abs(sum(q) - 1.0) > 1e-10:
        raise ValidationError(f"branch probabilities sum to {sum(q)!r}, not 1")
    return q


def random_scale(branches, q, delta, tol: float = 1e-8) -> SubsetScale:
    """Subset capacities of the random channel for one subset of branches.

    c_delta uses a single ensemble that must serve every branch in the
    subset (maximize the worst case); cbar_delta is the best single
    branch in the subset.
    """
    curves = _BranchCurves(branches, tol)
    q = _check_probs(q, len(curves))
    delta = _check_subset(delta, len(curves))
    sups = curves.branch_suprema()
    return SubsetScale(
        q_delta=sum(q[i] for i in delta),
        c_delta=curves.sup_min(delta).value,
        cbar_delta=max(sups[i].value for i in delta),
    )


def compute_random_scale_report(branches, q, deltas=None, tol: float = 1e-8) -> RandomScaleReport:
    """Subset-capacity table for a random-memory channel.

    deltas defaults to every nonempty subset of branches (the branch
    count is capped at MAX_BRANCHES in that case).
    """
    curves = _BranchCurves(branches, tol)
    L = len(curves)
    q = _check_probs(q, L)
    if deltas is None:
        if L > MAX_BRANCHES:
            raise ValidationError(f"subset enumeration limited to {MAX_BRANCHES} branches")
        deltas = [
            s for r in range(1, L + 1) for s in itertools.combinations(range(L), r)
        ]
    sups = curves.branch_suprema()
    per_subset: dict[tuple[int, ...], SubsetScale] = {}
    for delta in deltas:
        delta = _check_subset(delta, L)
        per_subset[delta] = SubsetScale(
            q_delta=sum(q[i] for i in delta),
            c_delta=curves.sup_min(delta).value,
            cbar_delta=max(sups[i].value for i in delta),
        )
    return RandomScaleReport(
        q=q,
        per_subset=per_subset,
        per_branch_suprema=tuple(BranchSupremum(s.argmax, s.value) for s in sups),
    )


# --- serialization --------------------------------------------------------


def _fmt(x: float) -> str:
    return f"{float(x):.12g}"


def _fmt_subset(subset) -> str:
    return ";".join(str(i) for i in subset)


def capacity_report_to_dict(report: CapacityReport) -> dict:
    return {
        "cp": report.cp,
        "cbar": report.cbar,
        "scale": {
            str(r): {"value_bits": e.value, "best_subset": list(e.best_subset)}
            for r, e in sorted(report.scale.items())
        },
        "per_branch_suprema": [
            {"a_max": s.a_max, "chi_star": s.chi_star} for s in report.per_branch_suprema
        ],
    }


def capacity_report_csv(report: CapacityReport) -> str:
    L = report.n_branches
    lines = ["r,value_bits,subset,error_threshold"]
    for r, e in sorted(report.scale.items()):
        lines.append(
            f"{r},{_fmt(e.value)},{_fmt_subset(e.best_subset)},{_fmt(1.0 - r / L)}"
        )
    return "\n".join(lines) + "\n"


def random_scale_report_to_dict(report: RandomScaleReport) -> dict:
    return {
        "q": list(report.q),
        "per_subset": [
            {
                "delta": list(delta),
                "q_delta": s.q_delta,
                "c_delta": s.c_delta,
                "cbar_delta": s.cbar_delta,
            }
            for delta, s in _sorted_subsets(report.per_subset)
        ],
        "per_branch_suprema": [
            {"a_max": s.a_max, "chi_star": s.chi_star} for s in report.per_branch_suprema
        ],
    }


def _sorted_subsets(per_subset):
    return sorted(per_subset.items(), key=lambda kv: (len(kv[0]), kv[0]))


def random_scale_report_csv(report: RandomScaleReport) -> str:
    lines = ["delta,q_delta,c_delta_bits,cbar_delta_bits"]
    for delta, s in _sorted_subsets(report.per_subset):
        lines.append(
            f"{_fmt_subset(delta)},{_fmt(s.q_delta)},{_fmt(s.c_delta)},{_fmt(s.cbar_delta)}"
        )
    return "\n".join(lines) + "\n"
