"""Command-line driver.

Subcommands: group | build | verify | matrix | sample. Machine-readable
output (JSON, CSV) goes to stdout, human messages to stderr. Exit codes:
0 success, 1 verification failed, 2 unreadable or malformed input file,
3 semantic error in the input, 4 build rejection.

The default verification tolerance is 1e-9; the COVPOVM_TOLERANCE
environment variable overrides it and the --tolerance flag overrides both.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import iojson
from .groups import pairing
from .harmonic import QuotientContext
from .observables import born_distribution, sample_outcomes
from .povm import (
    CheckResult,
    PovmBuildError,
    VerificationReport,
    apply_via_intertwiner,
    verify_axioms,
    verify_covariance,
)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_BAD_INPUT = 2
EXIT_SEMANTIC = 3
EXIT_BUILD_REJECTED = 4


def _load_json(path: str):
    with open(path, "r", encoding="utf-8") as handle:
        return json.load(handle)


def _emit(obj) -> None:
    json.dump(obj, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _tolerance(args) -> float:
    if getattr(args, "tolerance", None) is not None:
        return float(args.tolerance)
    env = os.environ.get("COVPOVM_TOLERANCE")
    return float(env) if env else 1e-9


def cmd_group(args) -> int:
    obj = _load_json(args.spec)
    group = iojson.group_from_json(obj["group"] if "group" in obj else obj)
    subgroup = iojson.subgroup_from_json(group, obj.get("subgroup", {}))
    ctx = QuotientContext.build(group, subgroup)
    pairing_table = [
        [iojson.complex_to_pair(pairing(y, h)) for h in subgroup.generators]
        for y in ctx.hperp_points
    ]
    _emit(
        {
            "spec_version": iojson.SPEC_VERSION,
            "group": {"factors": list(group.factors), "order": group.order},
            "subgroup": {
                "generators": [list(g.coords) for g in subgroup.generators],
                "elements": [list(g.coords) for g in subgroup.elements],
                "order": subgroup.order,
            },
            "annihilator": {
                "elements": [list(y.coords) for y in ctx.hperp_points],
                "order": len(ctx.hperp_points),
            },
            "cosets": {
                "count": ctx.n_cosets,
                "representatives": [
                    list(r.coords) for r in ctx.quotient.representatives
                ],
                "members": [
                    [list(p.coords) for p in ctx.quotient.coset_members(i)]
                    for i in range(ctx.n_cosets)
                ],
            },
            "dual_cosets": {
                "count": len(ctx.dual_quotient),
                "representatives": [
                    list(r.coords) for r in ctx.dual_quotient.representatives
                ],
            },
            "pairing_table": {
                "rows": "annihilator elements",
                "cols": "subgroup generators",
                "values": pairing_table,
            },
        }
    )
    return EXIT_OK


def cmd_build(args) -> int:
    scenario = iojson.scenario_from_json(_load_json(args.scenario))
    povm = scenario.build(atol=_tolerance(args))
    sectors = []
    for k, spec in enumerate(povm.rep.sectors):
        sectors.append(
            {
                "f_dim": spec.f_dim,
                "support_size": len(spec.rho.support),
                "densities": [
                    [list(x.coords), povm.densities[k][x]]
                    for x in povm.rep.sector_points[k]
                ],
            }
        )
    _emit(
        {
            "spec_version": iojson.SPEC_VERSION,
            "dimension": povm.dimension,
            "e_dim": povm.e_dim,
            "n_cosets": povm.ctx.n_cosets,
            "admits": True,
            "sectors": sectors,
            "class_measure": iojson.measure_to_json(povm.quotient_measure),
        }
    )
    return EXIT_OK


def _oracle_report(povm, tolerance: float, extra_omegas) -> VerificationReport:
    """Compare the kernel formula against the intertwiner compression over
    the indicator basis, the constant function, and any provided functions."""
    ctx = povm.ctx
    omegas = [ctx.indicator([i]) for i in range(ctx.n_cosets)]
    omegas.append(ctx.indicator(range(ctx.n_cosets)))
    omegas.extend(extra_omegas)
    rng = np.random.default_rng(2024)
    for _ in range(10):
        omegas.append(
            rng.standard_normal(ctx.n_cosets) + 1j * rng.standard_normal(ctx.n_cosets)
        )
    dev = 0.0
    for omega in omegas:
        direct = povm.assembled(omega)
        compressed = apply_via_intertwiner(povm, omega).assemble()
        dev = max(dev, float(np.abs(direct - compressed).max()))
    return VerificationReport(
        (CheckResult("oracle_agreement", dev <= tolerance, dev),)
    )


def cmd_verify(args) -> int:
    scenario = iojson.scenario_from_json(_load_json(args.scenario))
    tolerance = _tolerance(args)
    povm = scenario.build(atol=tolerance)
    omega = None
    extra = []
    if args.omega:
        omega = iojson.quotient_function_from_json(_load_json(args.omega))
        if omega.shape != (povm.ctx.n_cosets,):
            raise ValueError(
                f"omega carries {omega.shape[0]} values, "
                f"the quotient has {povm.ctx.n_cosets} cosets"
            )
        extra.append(omega)
    report = (
        verify_axioms(povm, atol=tolerance)
        .merged(verify_covariance(povm, atol=tolerance))
        .merged(_oracle_report(povm, tolerance, extra))
    )
    if args.dump_matrices:
        dump_dir = Path(args.dump_matrices)
        dump_dir.mkdir(parents=True, exist_ok=True)
        shown = omega if omega is not None else povm.ctx.indicator(
            range(povm.ctx.n_cosets)
        )
        (dump_dir / "m_omega.json").write_text(
            json.dumps(iojson.matrix_to_json(povm.assembled(shown)), indent=2)
        )
        for i in range(povm.ctx.n_cosets):
            (dump_dir / f"effect_{i}.json").write_text(
                json.dumps(iojson.matrix_to_json(povm.assembled_effect([i])), indent=2)
            )
    _emit(iojson.report_to_json(report, tolerance))
    if not report.passed:
        print("verification FAILED", file=sys.stderr)
        return EXIT_VERIFY_FAILED
    print("verification passed", file=sys.stderr)
    return EXIT_OK


def cmd_matrix(args) -> int:
    scenario = iojson.scenario_from_json(_load_json(args.scenario))
    povm = scenario.build(atol=_tolerance(args))
    if args.omega:
        omega = iojson.quotient_function_from_json(_load_json(args.omega))
    else:
        omega = povm.ctx.indicator(range(povm.ctx.n_cosets))
    _emit(iojson.matrix_to_json(povm.assembled(omega)))
    return EXIT_OK


def cmd_sample(args) -> int:
    scenario = iojson.scenario_from_json(_load_json(args.scenario))
    povm = scenario.build(atol=_tolerance(args))
    state = iojson.state_from_json(_load_json(args.state))
    if args.partition:
        partition = iojson.partition_from_json(_load_json(args.partition))
    else:
        partition = [[i] for i in range(povm.ctx.n_cosets)]
    counts = sample_outcomes(state, povm, partition, args.count, args.seed)
    sys.stdout.write("outcome,count\n")
    for i, c in enumerate(counts):
        sys.stdout.write(f"{i},{int(c)}\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="covpovm",
        description="Construct, evaluate, and verify covariant POVMs "
        "on finite Abelian groups.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_group = sub.add_parser("group", help="dual, annihilator, and coset tables")
    p_group.add_argument("spec", help="JSON file with group and subgroup specs")
    p_group.set_defaults(func=cmd_group)

    p_build = sub.add_parser("build", help="build a POVM and report its structure")
    p_build.add_argument("scenario", help="scenario JSON file")
    p_build.add_argument("--tolerance", type=float, default=None)
    p_build.set_defaults(func=cmd_build)

    p_verify = sub.add_parser("verify", help="build and verify a POVM")
    p_verify.add_argument("scenario", help="scenario JSON file")
    p_verify.add_argument("--omega", default=None, help="quotient function JSON file")
    p_verify.add_argument("--tolerance", type=float, default=None)
    p_verify.add_argument("--dump-matrices", default=None, metavar="DIR")
    p_verify.set_defaults(func=cmd_verify)

    p_matrix = sub.add_parser("matrix", help="dump the operator of a quotient function")
    p_matrix.add_argument("scenario", help="scenario JSON file")
    p_matrix.add_argument("--omega", default=None, help="quotient function JSON file")
    p_matrix.add_argument("--tolerance", type=float, default=None)
    p_matrix.set_defaults(func=cmd_matrix)

    p_sample = sub.add_parser("sample", help="sample outcomes from a state")
    p_sample.add_argument("scenario", help="scenario JSON file")
    p_sample.add_argument("--state", required=True, help="state vector JSON file")
    p_sample.add_argument("--partition", default=None, help="partition JSON file")
    p_sample.add_argument("-n", "--count", type=int, required=True)
    p_sample.add_argument("--seed", type=int, required=True)
    p_sample.set_defaults(func=cmd_sample)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except PovmBuildError as exc:
        _emit({"spec_version": iojson.SPEC_VERSION, "rejected": exc.details})
        print(f"build rejected: {exc}", file=sys.stderr)
        return EXIT_BUILD_REJECTED
    except (OSError, json.JSONDecodeError) as exc:
        print(f"cannot read input: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except (ValueError, KeyError, TypeError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC


if __name__ == "__main__":
    sys.exit(main())
