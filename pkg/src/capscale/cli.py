"""Command-line interface.

Subcommands compute per-branch optima (chi, amax), capacity reports and
subset-scale tables (capacity, scale, random-scale), the damping-pair gap
table (ad-gap), and the theoretical or simulated error staircase
(staircase, simulate). Channels come from a small JSON config file; output
is CSV (default) or JSON with 12 significant digits and LF line endings.

Exit codes: 0 success, 2 invalid input or configuration, 3 numerical
failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import scales, simulate
from .channels import MemoryChannel, QubitChannel
from .errors import NumericalError, ValidationError
from .holevo import dchi_da_ad
from .optim import AD_SEARCH_HI, AD_SEARCH_LO, find_root_bisection, maximize_chi_sum

_TOL_MIN, _TOL_MAX = 1e-12, 1e-2


def _fmt(x) -> str:
    return f"{float(x):.12g}"


def _round_floats(obj):
    if isinstance(obj, float):
        return float(_fmt(obj))
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def _write_output(text: str, path):
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
    except OSError as e:
        raise ValidationError(f"cannot write output file {path!r}: {e}") from e


def _emit(args, csv_text: str, json_obj):
    if args.format == "json":
        _write_output(json.dumps(_round_floats(json_obj), indent=2) + "\n", args.output)
    else:
        _write_output(csv_text, args.output)


def _check_tol(tol: float) -> float:
    if not _TOL_MIN <= tol <= _TOL_MAX:
        raise ValidationError(f"tol must be in [{_TOL_MIN}, {_TOL_MAX}], got {tol}")
    return tol


# --- channel config files ----------------------------------------------------


def _parse_branch(i, b) -> QubitChannel:
    if not isinstance(b, dict) or "type" not in b:
        raise ValidationError(f"branch {i} must be an object with a 'type' field")
    kind = b["type"]
    if kind == "amplitude_damping":
        if "gamma" not in b:
            raise ValidationError(f"branch {i}: amplitude_damping needs 'gamma'")
        return QubitChannel.amplitude_damping(float(b["gamma"]))
    if kind == "depolarizing":
        if "p" not in b:
            raise ValidationError(f"branch {i}: depolarizing needs 'p'")
        return QubitChannel.depolarizing(float(b["p"]))
    if kind == "kraus":
        ops = b.get("ops")
        if not isinstance(ops, list) or not ops:
            raise ValidationError(f"branch {i}: kraus needs a nonempty 'ops' list")
        mats = []
        for op in ops:
            arr = np.asarray(op, dtype=float)
            if arr.shape != (2, 2, 2):
                raise ValidationError(
                    f"branch {i}: each kraus op must be 2x2 entries of [re, im] pairs"
                )
            mats.append(arr[..., 0] + 1j * arr[..., 1])
        return QubitChannel.kraus(mats)
    raise ValidationError(f"branch {i}: unknown channel type {kind!r}")


def load_channel_config(path) -> MemoryChannel:
    """Read a memory-channel description from a JSON file."""
    try:
        with open(path, encoding="utf-8") as f:
            data = json.load(f)
    except OSError as e:
        raise ValidationError(f"cannot read channel file {path!r}: {e}") from e
    except json.JSONDecodeError as e:
        raise ValidationError(f"channel file {path!r} is not valid JSON: {e}") from e
    if not isinstance(data, dict):
        raise ValidationError("channel file must contain a JSON object")
    raw = data.get("branches")
    if not isinstance(raw, list) or not raw:
        raise ValidationError("channel file needs a nonempty 'branches' array")
    branches = [_parse_branch(i, b) for i, b in enumerate(raw)]
    mem = data.get("memory")
    if not isinstance(mem, dict) or "kind" not in mem:
        raise ValidationError("channel file needs a 'memory' object with a 'kind'")
    kind = mem["kind"]
    try:
        if kind == "periodic":
            return MemoryChannel.periodic(branches)
        if kind == "random":
            if "q" not in mem:
                raise ValidationError("random memory needs a 'q' array")
            return MemoryChannel.random(branches, mem["q"])
        if kind == "markov":
            if "Q" not in mem or "lambda" not in mem:
                raise ValidationError("markov memory needs 'Q' and 'lambda'")
            return MemoryChannel.markov(branches, mem["Q"], mem["lambda"])
    except (TypeError, ValueError) as e:
        if isinstance(e, ValidationError):
            raise
        raise ValidationError(f"bad memory parameters: {e}") from e
    raise ValidationError(f"unknown memory kind {kind!r}")


def _branch_param(ch: QubitChannel):
    if ch.kind == "amplitude_damping":
        return ch.gamma
    if ch.kind == "depolarizing":
        return ch.p
    return None


def _parse_indices(text, what) -> tuple[int, ...]:
    try:
        idxs = tuple(int(t) for t in text.split(",") if t.strip() != "")
    except ValueError as e:
        raise ValidationError(f"{what} must be comma-separated integers: {text!r}") from e
    if not idxs:
        raise ValidationError(f"{what} must list at least one index")
    return idxs


def _parse_rates(text) -> list[float]:
    try:
        rates = [float(t) for t in text.split(",") if t.strip() != ""]
    except ValueError as e:
        raise ValidationError(f"rates must be comma-separated numbers: {text!r}") from e
    if not rates:
        raise ValidationError("need at least one rate")
    return rates


# --- subcommands ------------------------------------------------------------


def cmd_chi(args) -> int:
    mc = load_channel_config(args.channel)
    tol = _check_tol(args.tol)
    sups = scales.per_branch_suprema(mc.branches, tol)
    lines = ["branch,kind,param,a_max,chi_star"]
    rows = []
    for i, (ch, s) in enumerate(zip(mc.branches, sups)):
        p = _branch_param(ch)
        lines.append(
            f"{i},{ch.kind},{'' if p is None else _fmt(p)},{_fmt(s.a_max)},{_fmt(s.chi_star)}"
        )
        rows.append(
            {"branch": i, "kind": ch.kind, "param": p, "a_max": s.a_max, "chi_star": s.chi_star}
        )
    _emit(args, "\n".join(lines) + "\n", rows)
    return 0


def cmd_amax(args) -> int:
    mc = load_channel_config(args.channel)
    tol = _check_tol(args.tol)
    lines = ["branch,gamma,a_max_search,a_max_root,abs_diff"]
    rows = []
    for i, ch in enumerate(mc.branches):
        if ch.kind != "amplitude_damping":
            raise ValidationError(
                f"branch {i} is {ch.kind}; the amax command handles amplitude damping only"
            )
        if ch.gamma >= 1.0:
            raise ValidationError(
                f"branch {i}: the optimum location is undefined at gamma=1 (flat curve)"
            )
        search = maximize_chi_sum([ch.gamma], [1.0], tol)
        root = find_root_bisection(
            lambda a: dchi_da_ad(ch.gamma, a), AD_SEARCH_LO, AD_SEARCH_HI, tol
        )
        diff = abs(search.argmax - root)
        lines.append(
            f"{i},{_fmt(ch.gamma)},{_fmt(search.argmax)},{_fmt(root)},{_fmt(diff)}"
        )
        rows.append(
            {
                "branch": i,
                "gamma": ch.gamma,
                "a_max_search": search.argmax,
                "a_max_root": root,
                "abs_diff": diff,
            }
        )
    _emit(args, "\n".join(lines) + "\n", rows)
    return 0


def _require_memory(mc: MemoryChannel, kinds, command):
    if mc.memory not in kinds:
        raise ValidationError(
            f"the {command} command needs {' or '.join(kinds)} memory, got {mc.memory}"
        )


def cmd_capacity(args) -> int:
    mc = load_channel_config(args.channel)
    tol = _check_tol(args.tol)
    _require_memory(mc, ("periodic", "random"), "capacity")
    if mc.memory == "periodic":
        report = scales.compute_capacity_report(mc.branches, tol)
        _emit(args, scales.capacity_report_csv(report), scales.capacity_report_to_dict(report))
    else:
        full = tuple(range(len(mc.branches)))
        report = scales.compute_random_scale_report(mc.branches, mc.q, deltas=[full], tol=tol)
        _emit(
            args,
            scales.random_scale_report_csv(report),
            scales.random_scale_report_to_dict(report),
        )
    return 0


def cmd_scale(args) -> int:
    mc = load_channel_config(args.channel)
    tol = _check_tol(args.tol)
    _require_memory(mc, ("periodic",), "scale")
    L = len(mc.branches)
    if args.r is not None:
        entry = scales.scale_r(mc.branches, args.r, tol)
        csv_text = (
            "r,value_bits,subset,error_threshold\n"
            f"{args.r},{_fmt(entry.value)},"
            f"{';'.join(str(i) for i in entry.best_subset)},{_fmt(1.0 - args.r / L)}\n"
        )
        obj = {
            "r": args.r,
            "value_bits": entry.value,
            "best_subset": list(entry.best_subset),
            "error_threshold": 1.0 - args.r / L,
        }
        _emit(args, csv_text, obj)
        return 0
    report = scales.compute_capacity_report(mc.branches, tol)
    _emit(args, scales.capacity_report_csv(report), scales.capacity_report_to_dict(report))
    return 0


def cmd_random_scale(args) -> int:
    mc = load_channel_config(args.channel)
    tol = _check_tol(args.tol)
    _require_memory(mc, ("random",), "random-scale")
    deltas = None
    if args.delta is not None:
        deltas = [_parse_indices(args.delta, "--delta")]
    report = scales.compute_random_scale_report(mc.branches, mc.q, deltas=deltas, tol=tol)
    _emit(
        args,
        scales.random_scale_report_csv(report),
        scales.random_scale_report_to_dict(report),
    )
    return 0


def cmd_ad_gap(args) -> int:
    """Tabulate pair capacity against averaged branch capacity on a gamma grid."""
    tol = _check_tol(args.tol)
    if args.grid < 2:
        raise ValidationError(f"grid must be >= 2, got {args.grid}")
    gammas = np.linspace(0.0, 1.0, args.grid)
    sups = {}
    for g in gammas:
        res = maximize_chi_sum([g], [1.0], tol)
        sups[float(g)] = res
    lines = ["gamma0,gamma1,a_max_joint,c_p,a_max_0,a_max_1,chi_star_avg,gap"]
    rows = []
    for g0 in gammas:
        for g1 in gammas:
            joint = maximize_chi_sum([g0, g1], [1.0, 1.0], tol)
            cp = joint.value / 2.0
            s0, s1 = sups[float(g0)], sups[float(g1)]
            avg = 0.5 * (s0.value + s1.value)
            gap = avg - cp
            lines.append(
                f"{_fmt(g0)},{_fmt(g1)},{_fmt(joint.argmax)},{_fmt(cp)},"
                f"{_fmt(s0.argmax)},{_fmt(s1.argmax)},{_fmt(avg)},{_fmt(gap)}"
            )
            rows.append(
                {
                    "gamma0": float(g0),
                    "gamma1": float(g1),
                    "a_max_joint": joint.argmax,
                    "c_p": cp,
                    "a_max_0": s0.argmax,
                    "a_max_1": s1.argmax,
                    "chi_star_avg": avg,
                    "gap": gap,
                }
            )
    _emit(args, "\n".join(lines) + "\n", rows)
    return 0


def cmd_staircase(args) -> int:
    mc = load_channel_config(args.channel)
    tol = _check_tol(args.tol)
    _require_memory(mc, ("periodic",), "staircase")
    steps = scales.staircase_profile(mc.branches, tol)
    lines = ["r,value_bits,subset,error_threshold"]
    rows = []
    for s in steps:
        lines.append(
            f"{s.r},{_fmt(s.value_bits)},"
            f"{';'.join(str(i) for i in s.subset)},{_fmt(s.error_threshold)}"
        )
        rows.append(
            {
                "r": s.r,
                "value_bits": s.value_bits,
                "subset": list(s.subset),
                "error_threshold": s.error_threshold,
            }
        )
    _emit(args, "\n".join(lines) + "\n", rows)
    return 0


def cmd_simulate(args) -> int:
    mc = load_channel_config(args.channel)
    tol = _check_tol(args.tol)
    _require_memory(mc, ("periodic", "random"), "simulate")
    if args.trials < 1:
        raise ValidationError(f"trials must be positive, got {args.trials}")
    rates = _parse_rates(args.rate)
    if args.subset is not None:
        if len(rates) != 1:
            raise ValidationError("--subset requires exactly one rate")
        subset = _parse_indices(args.subset, "--subset")
        res = simulate.run_trials(
            mc, simulate.Strategy(subset, rates[0]), args.trials, args.seed, tol
        )
        if mc.memory == "periodic":
            q_subset = len(res.strategy.subset) / len(mc.branches)
        else:
            q_subset = float(sum(mc.q[i] for i in res.strategy.subset))
        rows = [
            simulate.StaircaseRow(
                rate_bits=rates[0],
                subset=res.strategy.subset,
                q_subset=q_subset,
                theoretical_error=res.theoretical_error,
                empirical_error=res.empirical_error,
                n_trials=res.n_trials,
                seed=res.seed,
            )
        ]
    else:
        rows = simulate.empirical_staircase(mc, rates, args.trials, args.seed, tol)
    _emit(args, simulate.staircase_csv(rows), simulate.staircase_rows_to_dicts(rows))
    return 0


# --- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="capscale",
        description="Capacities and subset-rate scales of qubit channels with memory.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-8, help="optimizer tolerance")
    common.add_argument("--output", default=None, help="output path (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")

    def with_channel(name, help_text, **kw):
        p = sub.add_parser(name, parents=[common], help=help_text, **kw)
        p.add_argument("channel", help="JSON channel description file")
        return p

    with_channel("chi", "per-branch best mirror ensemble and Holevo quantity").set_defaults(
        func=cmd_chi
    )
    with_channel(
        "amax", "optimum location by search and by derivative root, per branch"
    ).set_defaults(func=cmd_amax)
    with_channel("capacity", "capacity report for the channel's memory kind").set_defaults(
        func=cmd_capacity
    )
    p = with_channel("scale", "subset-rate hierarchy for periodic memory")
    p.add_argument("--r", type=int, default=None, help="single subset size to report")
    p.set_defaults(func=cmd_scale)

    p = with_channel("random-scale", "subset capacities for random memory")
    p.add_argument("--delta", default=None, help="comma-separated branch indices")
    p.set_defaults(func=cmd_random_scale)

    p = sub.add_parser(
        "ad-gap",
        parents=[common],
        help="pair capacity vs averaged branch capacity on a damping grid",
    )
    p.add_argument("--grid", type=int, default=101, help="points per gamma axis")
    p.set_defaults(func=cmd_ad_gap)

    with_channel("staircase", "theoretical rate/error staircase").set_defaults(
        func=cmd_staircase
    )

    p = with_channel("simulate", "Monte Carlo decode success against the staircase")
    p.add_argument("--rate", required=True, help="rate in bits, or comma-separated rates")
    p.add_argument("--subset", default=None, help="fixed target subset (single rate only)")
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(func=cmd_simulate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except NumericalError as e:
        print(f"numerical error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
