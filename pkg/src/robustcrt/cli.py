"""Command-line interface: dynamic range, reconstruction, simulation, sweeps.

All structured output is JSON on stdout (CSV files for sweeps); domain errors
print a JSON error object on stderr and exit nonzero.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .baselines import nonrobust_estimate, searching_estimate
from .dynrange import dynamic_range_coprime, verify_dynamic_range
from .errors import ReconstructionError
from .gcrt2 import ResidueFamily, solve_two_gcd
from .harness import ESTIMATORS, ExperimentConfig, emit_results, run_snr_sweep, run_tau_sweep
from .modmath import ModulusSet
from .robust import robust_reconstruct
from .sigsim import ToneSpec, extract_family

__all__ = ["main"]


def _parse_ints(text: str) -> tuple[int, ...]:
    values = tuple(int(v) for v in text.split(",") if v.strip() != "")
    if not values:
        raise ValueError(f"expected a comma-separated integer list, got {text!r}")
    return values


def _parse_residues(text: str) -> tuple[tuple[int, int], ...]:
    pairs = []
    for chunk in text.split(";"):
        parts = [p for p in chunk.split(",") if p.strip() != ""]
        if len(parts) != 2:
            raise ValueError(f"residue group {chunk!r} must hold exactly two values")
        pairs.append((int(parts[0]), int(parts[1])))
    return tuple(pairs)


def _modulus_set(args) -> ModulusSet:
    return ModulusSet(args.M, _parse_ints(args.m))


def _frac(value: Fraction | None) -> str | None:
    return None if value is None else str(value)


def cmd_dynrange(args) -> dict:
    ms = _modulus_set(args)
    report = dynamic_range_coprime(ms)
    payload = {
        "M": ms.M,
        "m": list(ms.m),
        "d": report.d,
        "subset": list(report.subset),
        "d1": report.d1,
        "d2": report.d2,
        "Md": report.Md,
        "d_guaranteed": report.d_guaranteed,
        "Md_guaranteed": report.Md_guaranteed,
    }
    if args.verify:
        payload["verify"] = {
            "bound": report.Md,
            "holds_at_bound": verify_dynamic_range(ms, report.Md),
            "fails_past_bound": not verify_dynamic_range(ms, report.Md + 1),
        }
    return payload


def cmd_reconstruct(args) -> dict:
    ms = _modulus_set(args)
    fam = ResidueFamily(ms, _parse_residues(args.residues))
    base = {"mode": args.mode, "M": ms.M, "m": list(ms.m)}
    if args.mode == "errorfree":
        pair = solve_two_gcd(fam)
        return base | {"N1": pair.n1, "N2": pair.n2}
    if args.mode == "search":
        pair = searching_estimate(fam)
        return base | {"N1": pair.n1, "N2": pair.n2}
    if args.mode == "nonrobust":
        pair = nonrobust_estimate(fam)
        return base | {"N1": pair.n1, "N2": pair.n2}
    est = robust_reconstruct(fam)
    dec = est.decomposition
    return base | {
        "sorted_common_remainders": list(dec.sorted_remainders),
        "gaps": list(dec.gaps),
        "split_index": dec.split_index,
        "split_gap_sum": dec.split_gap_sum,
        "cluster1": list(dec.cluster1),
        "cluster2": list(dec.cluster2),
        "cluster1_shifted": list(dec.cluster1_shifted),
        "cluster_mean1": _frac(est.cluster_mean1),
        "cluster_mean2": _frac(est.cluster_mean2),
        "quotient_pairs": [list(p) for p in est.quotient_pairs],
        "quotient1": est.quotient1,
        "quotient2": est.quotient2,
        "diff_indices": list(est.diff_indices),
        "diff_count": est.diff_count,
        "rc_est1": _frac(est.rc_est1),
        "rc_est2": _frac(est.rc_est2),
        "value_est1": _frac(est.value_est1),
        "value_est2": _frac(est.value_est2),
        "N1": est.value1,
        "N2": est.value2,
        "guarantee_ok": est.guarantee_ok,
    }


def cmd_simulate(args) -> dict:
    ms = _modulus_set(args)
    spec = ToneSpec(
        f1=args.f1,
        f2=args.f2,
        amplitude1=args.amplitude,
        amplitude2=args.amplitude,
        snr_db=args.snr,
        seed=args.seed,
    )
    fam = extract_family(spec, ms)
    return {
        "M": ms.M,
        "m": list(ms.m),
        "rates": list(ms.moduli),
        "f1": args.f1,
        "f2": args.f2,
        "snr_db": args.snr,
        "seed": args.seed,
        "pairs": [list(p) for p in fam.pairs],
    }


def _sweep_payload(result, csv_path) -> dict:
    return {
        "csv": str(csv_path),
        "sidecar": str(csv_path) + ".json",
        "rows": [
            {
                "level": row.level,
                "estimator": row.estimator,
                "mean_error": row.mean_error,
                "max_error": row.max_error,
                "trials": row.trials,
                "failures": row.failures,
            }
            for row in result.rows
        ],
    }


def cmd_sweep_tau(args) -> dict:
    cfg = ExperimentConfig(
        ms=_modulus_set(args),
        mode="tau",
        levels=tuple(_parse_ints(args.levels)),
        trials=args.trials,
        seed=args.seed,
        value_bound=args.range,
        estimators=tuple(args.estimators.split(",")),
    )
    result = run_tau_sweep(cfg)
    emit_results(result, args.out)
    return _sweep_payload(result, args.out)


def cmd_sweep_snr(args) -> dict:
    cfg = ExperimentConfig(
        ms=_modulus_set(args),
        mode="snr",
        levels=tuple(_parse_ints(args.levels)),
        trials=args.trials,
        seed=args.seed,
        amplitude=args.amplitude,
        estimators=tuple(args.estimators.split(",")),
    )
    result = run_snr_sweep(cfg)
    emit_results(result, args.out)
    return _sweep_payload(result, args.out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="robustcrt",
        description="Two-integer reconstruction from unordered, possibly "
        "erroneous residue sets, and the Monte-Carlo experiments around it.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    moduli = argparse.ArgumentParser(add_help=False)
    moduli.add_argument("--M", type=int, required=True, help="shared gcd of the moduli")
    moduli.add_argument("--m", required=True, help="comma-separated coprime factors, e.g. 3,5,7")

    p = sub.add_parser("dynrange", parents=[moduli], help="largest two-integer dynamic range")
    p.add_argument("--verify", action="store_true", help="brute-force check at Md and Md+1")
    p.set_defaults(func=cmd_dynrange)

    p = sub.add_parser("reconstruct", parents=[moduli], help="reconstruct a pair from residues")
    p.add_argument("--mode", choices=("errorfree", "robust", "search", "nonrobust"), required=True)
    p.add_argument("--residues", required=True, help="semicolon-separated pairs, e.g. '69,195;95,169;69,395'")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("simulate", parents=[moduli], help="detect a residue family from synthesized tones")
    p.add_argument("--f1", type=int, required=True)
    p.add_argument("--f2", type=int, required=True)
    p.add_argument("--snr", type=float, default=None, help="SNR in dB; omit for noiseless")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--amplitude", type=float, default=1.0)
    p.set_defaults(func=cmd_simulate)

    for name, handler, default_levels in (
        ("sweep-tau", cmd_sweep_tau, "0,3,6,9,12,15"),
        ("sweep-snr", cmd_sweep_snr, "0,5,10,15,20,25,30"),
    ):
        p = sub.add_parser(name, parents=[moduli], help=f"Monte-Carlo {name.split('-')[1]} sweep to CSV")
        p.add_argument("--levels", default=default_levels)
        p.add_argument("--trials", type=int, default=2000 if name == "sweep-tau" else 500)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", required=True, help="CSV output path")
        p.add_argument("--estimators", default=",".join(ESTIMATORS))
        if name == "sweep-tau":
            p.add_argument("--range", type=int, default=2000, help="true values drawn from [0, range)")
        else:
            p.add_argument("--amplitude", type=float, default=0.03)
        p.set_defaults(func=handler)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        payload = args.func(args)
    except (ReconstructionError, ValueError, OSError) as exc:
        json.dump(
            {"error": {"type": type(exc).__name__, "message": str(exc)}},
            sys.stderr,
        )
        sys.stderr.write("\n")
        return 2
    json.dump(payload, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
