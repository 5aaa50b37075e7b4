"""Command line front end.

Subcommands: bounds (sweep the capacity / sampling-rate bounds, with
figure presets), groups (emit sequence groups), matrix (generate and
save a sampling matrix with its sequence provenance), verify (run the
self-check suites), recover (paired distortion experiment).

Output files carry a '#' manifest header with the resolved parameters,
seed, and tool version, so every file is reproducible from its header;
timestamps go to stderr only, keeping repeated runs byte-identical.
The output directory is --out, else $SEGCS_OUT_DIR, else the current
directory.  Exit codes: 0 success, 1 verification failure, 2 usage
error.
"""

from __future__ import annotations

import argparse
import datetime
import math
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__, bounds, covariance, permgroup, recovery, sampler, verify

DEFAULT_SEED = 1729
OUT_ENV = "SEGCS_OUT_DIR"

BOUNDS_COLUMNS = "case,gamma_db,gamma,alpha,m_o,n,rd,capacity_ub,delta_lb,delta_o_lb"

# Figure presets.  4 and 5 sweep the extension rate on the worked
# example (20 dB, m_o=3, n=100, R(D)=0.2); 6 through 8 sweep SNR from 0
# to 30 dB in 1 dB steps at alpha in {0, 1, 5} for the sparse source
# with s/n = 1e-4 (6: n=1e5, 7 and 8: n=1e7; 8 is read off the
# delta_o_lb column).
_EX1 = {"gamma_db": 20.0, "m_o": 3, "n": 100, "rd": 0.2}
_EX2_RATIO = 1e-4
_SNR_GRID_DB = [float(db) for db in range(0, 31)]
_SNR_ALPHAS = [Fraction(0), Fraction(1), Fraction(5)]
_SNR_M_O = 7  # smallest prime allowing alpha = 5 whole groups


def _fmt(value) -> str:
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _manifest(command: str, params: dict) -> list[str]:
    lines = [f"# segcs {__version__} {command}"]
    lines.extend(f"# {key} = {_fmt(params[key])}" for key in sorted(params))
    return lines


def _out_dir(arg) -> Path:
    path = Path(arg if arg is not None else os.environ.get(OUT_ENV, "."))
    path.mkdir(parents=True, exist_ok=True)
    return path


def _write(path: Path, text: str):
    path.write_text(text)
    stamp = datetime.datetime.now().isoformat(timespec="seconds")
    print(f"wrote {path} ({stamp})", file=sys.stderr)


def _parse_fractions(text: str) -> list[Fraction]:
    return [Fraction(part.strip()) for part in text.split(",")]


def _parse_floats(text: str) -> list[float]:
    return [float(part.strip()) for part in text.split(",")]


def _case_for(alpha: Fraction) -> str:
    return covariance.SINGLE_GROUP if alpha <= 1 else covariance.MULTI_GROUP


def _bounds_row(gamma: float, alpha: Fraction, m_o: int, n: int, rd: float) -> str:
    case = _case_for(alpha)
    query = bounds.BoundQuery(gamma=gamma, alpha=alpha, m_o=m_o, n=n, rd=rd, case=case)
    if case == covariance.SINGLE_GROUP:
        cap = bounds.capacity_ub_single_group(query)
        delta = bounds.sampling_rate_lb_single_group(query)
    else:
        cap = bounds.capacity_ub_multi_group(query)
        delta = bounds.sampling_rate_lb_multi_group(query)
    delta_o = bounds.original_rate_lb(query)
    gamma_db = 10.0 * math.log10(gamma)
    return ",".join([case, _fmt(gamma_db), _fmt(gamma), str(alpha), str(m_o), str(n),
                     _fmt(rd), _fmt(cap), _fmt(delta), _fmt(delta_o)])


def _curve_row(gamma: float, alpha: Fraction, m_o: int, n: int, rd: float) -> str:
    # continuous relaxation used by the alpha sweeps; alpha need not sit
    # on the admissible grid here
    a = float(alpha)
    cap = bounds.capacity_curve_single_group(gamma, a, m_o)
    delta = bounds._delta_single(gamma, a, n, rd)
    delta_o = delta / (1.0 + a)
    gamma_db = 10.0 * math.log10(gamma)
    return ",".join([covariance.SINGLE_GROUP, _fmt(gamma_db), _fmt(gamma), str(alpha),
                     str(m_o), str(n), _fmt(rd), _fmt(cap), _fmt(delta), _fmt(delta_o)])


def _figure_rows(figure: int) -> tuple[dict, list[str]]:
    if figure in (4, 5):
        gamma = 10.0 ** (_EX1["gamma_db"] / 10.0)
        m_o, n, rd = _EX1["m_o"], _EX1["n"], _EX1["rd"]
        alphas = sorted(set(Fraction(k, 100) for k in range(101))
                        | {Fraction(1, 3), Fraction(2, 3)})
        rows = [_curve_row(gamma, a, m_o, n, rd) for a in alphas]
        params = dict(_EX1, figure=figure, alpha_grid="0..1 step 1/100 plus 1/3, 2/3")
        return params, rows
    if figure in (6, 7, 8):
        n = 100_000 if figure == 6 else 10_000_000
        rd = bounds.rate_distortion_sparse(_EX2_RATIO)
        rows = []
        for db in _SNR_GRID_DB:
            gamma = 10.0 ** (db / 10.0)
            for alpha in _SNR_ALPHAS:
                rows.append(_bounds_row(gamma, alpha, _SNR_M_O, n, rd))
        params = {
            "figure": figure,
            "snr_grid_db": "0..30 step 1",
            "alphas": ",".join(str(a) for a in _SNR_ALPHAS),
            "m_o": _SNR_M_O,
            "n": n,
            "sparsity_ratio": _EX2_RATIO,
            "rd": rd,
        }
        return params, rows
    raise ValueError(f"no preset for figure {figure}; choose 4..8")


def cmd_bounds(args) -> int:
    if args.figure is not None:
        params, rows = _figure_rows(args.figure)
        filename = f"fig{args.figure}.csv"
    else:
        if args.gamma_db is not None:
            gammas = [10.0 ** (db / 10.0) for db in _parse_floats(args.gamma_db)]
        elif args.gamma is not None:
            gammas = _parse_floats(args.gamma)
        else:
            raise ValueError("need --gamma-db or --gamma (or a --figure preset)")
        if args.rd is not None:
            rd = args.rd
        elif args.sparsity_ratio is not None:
            rd = bounds.rate_distortion_sparse(args.sparsity_ratio)
        else:
            raise ValueError("need --rd or --sparsity-ratio")
        alphas = _parse_fractions(args.alpha) if args.alpha else [Fraction(0)]
        n_values = [int(v) for v in _parse_floats(args.n)] if args.n else [100]
        rows = [
            _bounds_row(gamma, alpha, args.m_o, n, rd)
            for gamma in gammas
            for n in n_values
            for alpha in alphas
        ]
        params = {
            "gammas": ",".join(_fmt(g) for g in gammas),
            "alphas": ",".join(str(a) for a in alphas),
            "m_o": args.m_o,
            "n": ",".join(str(n) for n in n_values),
            "rd": rd,
        }
        filename = "bounds.csv"
    out = _out_dir(args.out) / filename
    text = "\n".join(_manifest("bounds", params) + [BOUNDS_COLUMNS] + rows) + "\n"
    _write(out, text)
    return 0


def cmd_groups(args) -> int:
    if args.alpha is not None and args.alpha > 1:
        family = permgroup.congruence_groups(args.m_o, args.alpha)
    else:
        family = permgroup.cyclic_partition(args.m_o)
    params = {"m_o": args.m_o, "construction": family.construction,
              "groups": len(family)}
    if family.construction == permgroup.CONGRUENCE:
        params["alpha"] = family.alpha
    out = _out_dir(args.out) / "groups.txt"
    text = "\n".join(_manifest("groups", params)) + "\n" + permgroup.format_groups(family)
    _write(out, text)
    return 0


def _extension_blocks(m_o: int, alpha: Fraction):
    """Sequences for the extension plus their provenance blocks."""
    m_e = alpha * m_o
    if m_e.denominator != 1:
        raise ValueError(f"alpha={alpha} gives a fractional row count for m_o={m_o}")
    if alpha <= 1:
        identity = permgroup.PermutationSequence(tuple(range(1, m_o + 1)))
        members = list(permgroup.cyclic_shift_group(identity).members[: int(m_e)])
        return members, [(0, members)]
    if alpha.denominator != 1:
        raise ValueError(f"alpha above 1 must be an integer, got {alpha}")
    family = permgroup.congruence_groups(m_o, int(alpha))
    blocks = [(g.group_id, list(g.members)) for g in family]
    return family.sequences(), blocks


def cmd_matrix(args) -> int:
    alpha = Fraction(args.alpha)
    sequences, blocks = _extension_blocks(args.m_o, alpha)
    spec = sampler.MatrixSpec(m_o=args.m_o, n=args.n, distribution=args.distribution,
                              seed=args.seed)
    matrix = sampler.generate(spec, sequences)
    out = _out_dir(args.out)
    params = {
        "m_o": args.m_o,
        "n": args.n,
        "alpha": str(alpha),
        "m_e": matrix.m_e,
        "distribution": args.distribution,
        "seed": args.seed,
        "sequences_file": "sequences.txt",
    }
    matrix_text = "\n".join(_manifest("matrix", params)) + "\n" + sampler.matrix_to_text(
        matrix.full(), m_o=matrix.m_o, m_e=matrix.m_e, segment_length=matrix.segment_length
    )
    _write(out / "matrix.txt", matrix_text)
    seq_text = "\n".join(_manifest("matrix", params)) + "\n" + permgroup.format_blocks(blocks)
    _write(out / "sequences.txt", seq_text)
    return 0


def cmd_verify(args) -> int:
    checks = verify.run_suites(
        args.suite,
        small=args.small,
        m_o=args.m_o,
        alpha=Fraction(args.alpha) if args.alpha else None,
        gamma=args.gamma,
    )
    failed = 0
    for check in checks:
        tag = " ok " if check.passed else "FAIL"
        print(f"[{tag}] {check.name}: {check.detail}")
        failed += 0 if check.passed else 1
    print(f"{len(checks)} checks, {len(checks) - failed} passed, {failed} failed")
    if args.out is not None and args.suite in ("covariance", "all"):
        rows = verify.det_report_rows()
        lines = _manifest("verify", {"suite": args.suite}) + [
            "k,beta,m_o,closed_form,numeric,rel_err"
        ]
        lines.extend(
            f"{k},{_fmt(beta)},{m_o},{_fmt(closed)},{_fmt(numeric)},{_fmt(rel)}"
            for k, beta, m_o, closed, numeric, rel in rows
        )
        _write(_out_dir(args.out) / "verify_covariance.csv", "\n".join(lines) + "\n")
    return 1 if failed else 0


def cmd_recover(args) -> int:
    alphas = _parse_fractions(args.alpha) if args.alpha else [Fraction(0), Fraction(1)]
    gamma = 10.0 ** (args.gamma_db / 10.0)
    amplitude = recovery.spike_amplitude_for_snr(gamma, args.n, args.sparsity)
    signal = sampler.SignalModel.sparse_spikes(args.n, args.sparsity, amplitude)
    spec = sampler.MatrixSpec(m_o=args.m_o, n=args.n, seed=args.seed)
    config = recovery.RecoveryConfig(solver=args.solver, sparsity=args.sparsity,
                                     trials=args.trials, seed=args.seed)
    reports = recovery.mse_experiment(spec, signal, alphas, config)
    params = {
        "m_o": args.m_o,
        "n": args.n,
        "sparsity": args.sparsity,
        "alphas": ",".join(str(a) for a in alphas),
        "trials": args.trials,
        "seed": args.seed,
        "solver": args.solver,
        "gamma_db": args.gamma_db,
        "spike_amplitude": amplitude,
    }
    lines = _manifest("recover", params) + ["alpha,trial,distortion,converged"]
    for report in reports:
        lines.extend(
            f"{report.alpha},{t},{_fmt(float(report.distortions[t]))},"
            f"{int(report.converged[t])}"
            for t in range(report.trials)
        )
    for report in reports:
        lines.append(f"{report.alpha},summary,{_fmt(report.mean)},{report.converged_count}")
        lines.append(
            f"# summary alpha={report.alpha} mean={_fmt(report.mean)} "
            f"stderr={_fmt(report.stderr)} trials={report.trials} "
            f"converged={report.converged_count}"
        )
    _write(_out_dir(args.out) / "recovery.csv", "\n".join(lines) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="segcs",
        description="Segmented compressive sampling: bounds, matrices, recovery.",
    )
    parser.add_argument("--version", action="version", version=f"segcs {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_bounds = sub.add_parser("bounds", help="sweep capacity and sampling-rate bounds")
    p_bounds.add_argument("--figure", type=int, choices=(4, 5, 6, 7, 8),
                          help="emit a preset figure grid")
    p_bounds.add_argument("--gamma-db", help="comma list of SNRs in dB")
    p_bounds.add_argument("--gamma", help="comma list of linear SNRs")
    p_bounds.add_argument("--alpha", help="comma list of extension rates (fractions ok)")
    p_bounds.add_argument("--m-o", type=int, default=3, help="original rows (default 3)")
    p_bounds.add_argument("--n", help="comma list of signal lengths (default 100)")
    p_bounds.add_argument("--rd", type=float, help="source rate R(D) in bits/symbol")
    p_bounds.add_argument("--sparsity-ratio", type=float,
                          help="s/n, converted to R(D) = (s/n) log2(n/s)")
    p_bounds.add_argument("--out", help=f"output directory (default ${OUT_ENV} or .)")
    p_bounds.set_defaults(func=cmd_bounds)

    p_groups = sub.add_parser("groups", help="emit permutation-sequence groups")
    p_groups.add_argument("--m-o", type=int, required=True)
    p_groups.add_argument("--alpha", type=int,
                          help="emit this many congruence groups instead of the full partition")
    p_groups.add_argument("--out", help=f"output directory (default ${OUT_ENV} or .)")
    p_groups.set_defaults(func=cmd_groups)

    p_matrix = sub.add_parser("matrix", help="generate a sampling matrix")
    p_matrix.add_argument("--m-o", type=int, required=True)
    p_matrix.add_argument("--n", type=int, required=True)
    p_matrix.add_argument("--alpha", default="0", help="extension rate (fraction ok)")
    p_matrix.add_argument("--distribution", choices=(sampler.GAUSSIAN, sampler.RADEMACHER),
                          default=sampler.GAUSSIAN)
    p_matrix.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_matrix.add_argument("--out", help=f"output directory (default ${OUT_ENV} or .)")
    p_matrix.set_defaults(func=cmd_matrix)

    p_verify = sub.add_parser("verify", help="run self-check suites")
    p_verify.add_argument("suite", choices=("groups", "covariance", "capacity", "all"))
    p_verify.add_argument("--m-o", type=int)
    p_verify.add_argument("--alpha")
    p_verify.add_argument("--gamma", type=float)
    p_verify.add_argument("--small", action="store_true", help="reduced grids")
    p_verify.add_argument("--out", help="also write the determinant report CSV here")
    p_verify.set_defaults(func=cmd_verify)

    p_recover = sub.add_parser("recover", help="paired recovery distortion experiment")
    p_recover.add_argument("--m-o", type=int, default=32)
    p_recover.add_argument("--n", type=int, default=256)
    p_recover.add_argument("--sparsity", type=int, default=3)
    p_recover.add_argument("--alpha", help="comma list of extension rates (default 0,1)")
    p_recover.add_argument("--trials", type=int, default=200)
    p_recover.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_recover.add_argument("--solver", choices=(recovery.OMP, recovery.ISTA),
                           default=recovery.OMP)
    p_recover.add_argument("--gamma-db", type=float, default=10.0,
                           help="per-sample SNR of the spike signal (default 10)")
    p_recover.add_argument("--out", help=f"output directory (default ${OUT_ENV} or .)")
    p_recover.set_defaults(func=cmd_recover)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
