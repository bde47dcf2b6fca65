"""Command-line front end.

Exit status: 0 on success, 2 when a problem has no solution or a verification
fails, 1 on bad input.  Every command echoes its effective parameters in a
``metadata`` block (inside JSON outputs, or a ``.meta.json`` sidecar next to
CSV outputs).  No timestamps are written, so reruns are byte-identical.
"""
from __future__ import annotations

import argparse
import logging
import sys
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .dynamics import (
    PRESET_SITES,
    PRESETS,
    concurrence,
    occupation_trace,
    preset_hamiltonian,
    preset_info,
)
from .errors import BrokenNetworkError, InvalidInputError, NoSolutionError
from .hamiltonian import PstHamiltonian, build_hamiltonian, no_go_certificate, verify_pst
from .io import csv_text, dump_json, fmt, load_json, sidecar_path, trace_csv, write_text
from .permutation import SitePermutation, cycle_decompose, enumerate_transfer_permutations
from .solver import (
    Nn4Spectrum,
    SolverOptions,
    classify_4site_permutation,
    nn4_hamiltonian,
    nn4_parameters,
    solve_nn4,
    solve_power_law,
)
from .spectral import SpectralAssignment, assemble_eigensystem

EXIT_OK, EXIT_INPUT, EXIT_FAIL = 0, 1, 2
DEFAULT_SEED = 42


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.replace(" ", "").split(",") if v != ""]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected integers like 2,0,-2, got {text!r}") from exc


def _meta(args: argparse.Namespace, **extra) -> dict:
    params = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "verbose")}
    return {"command": args.command, "version": __version__, "parameters": params, **extra}


def _emit_json(args: argparse.Namespace, payload: dict, **meta) -> None:
    payload = {**payload, "metadata": _meta(args, **meta)}
    write_text(dump_json(payload), args.output)


def _emit_csv(args: argparse.Namespace, text: str, **meta) -> None:
    write_text(text, args.output)
    if args.output is not None:
        write_text(dump_json(_meta(args, **meta)), sidecar_path(args.output))


def cmd_synth(args: argparse.Namespace) -> int:
    if args.input is None:
        raise InvalidInputError("synth needs --input with 'permutation' and 'assignment'")
    data = load_json(args.input)
    try:
        p = SitePermutation.from_dict(data["permutation"])
        a = SpectralAssignment.from_dict(data["assignment"])
    except KeyError as exc:
        raise InvalidInputError(f"{args.input}: missing key {exc}") from exc
    if args.tau is not None:
        a = SpectralAssignment(a.shifts, args.tau, a.mixing)
    h = build_hamiltonian(assemble_eigensystem(p, a), p)
    report = verify_pst(h, p, args.tol)
    _emit_json(args, h.to_dict(), verification=report.to_dict(), assignment=a.to_dict())
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_verify(args: argparse.Namespace) -> int:
    if args.input is None:
        raise InvalidInputError("verify needs --input with a Hamiltonian JSON file")
    h = PstHamiltonian.from_dict(load_json(args.input))
    if args.permutation is not None:
        p = SitePermutation.from_dict(load_json(args.permutation))
    elif h.permutation is not None:
        p = h.permutation
    else:
        raise InvalidInputError("no target permutation: embed one or pass --permutation")
    report = verify_pst(h, p, args.tol)
    _emit_json(args, report.to_dict())
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_solve_nn4(args: argparse.Namespace) -> int:
    values = args.targets
    tau = args.tau if args.tau is not None else 1.0
    if args.input is not None:
        data = load_json(args.input)
        values = data.get("spectrum", values)
        tau = float(data.get("tau", tau))
    if values is None:
        raise InvalidInputError("solve-nn4 needs --targets or an input file with 'spectrum'")
    s = Nn4Spectrum.from_sequence(values)
    try:
        amp = solve_nn4(s)
    except BrokenNetworkError as exc:
        _emit_json(args, {"status": "broken_network", "detail": str(exc)})
        return EXIT_FAIL
    except NoSolutionError as exc:
        _emit_json(args, {"status": "no_solution", "detail": str(exc)})
        return EXIT_FAIL
    h = nn4_hamiltonian(s, amp, tau)
    report = verify_pst(h, h.permutation, args.tol)
    params = {k: v * tau for k, v in nn4_parameters(h).items()}  # eps*tau products
    _emit_json(
        args,
        {
            "status": "solved",
            "spectrum_pi_units": list(s.as_tuple()),
            "amplitudes": amp.to_dict(),
            "parameters_times_tau": params,
            "hamiltonian": h.to_dict(),
            "verification": report.to_dict(),
        },
    )
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_solve_powerlaw(args: argparse.Namespace) -> int:
    gamma, targets, guesses = args.gamma, args.targets, None
    max_starts, seed = args.max_starts, args.seed
    if args.input is not None:
        problem = load_json(args.input)
        gamma = problem.get("gamma", gamma)
        targets = problem.get("targets", targets)
        guesses = problem.get("guesses") or None
        max_starts = problem.get("max_starts", max_starts)
        seed = problem.get("seed", seed)
    if gamma is None or targets is None:
        raise InvalidInputError("solve-powerlaw needs --gamma and --targets (or an input file)")
    options = SolverOptions(max_starts=int(max_starts), seed=int(seed))
    design = solve_power_law(float(gamma), targets, guesses, options)
    text = csv_text(["parameter", "value", "units"], design.csv_rows())
    h = design.hamiltonian()
    report = verify_pst(h, h.permutation, design.verification_tolerance())
    _emit_csv(
        args,
        text,
        gamma=float(gamma),
        targets=list(targets),
        residual=fmt(design.residual),
        converged=design.converged,
        start_index=design.start_index,
        starts_tried=design.starts_tried,
        verification=report.to_dict(),
    )
    return EXIT_OK if design.converged else EXIT_FAIL


def cmd_classify4(args: argparse.Namespace) -> int:
    if args.input is not None:
        perms = [SitePermutation.from_dict(load_json(args.input))]
    else:
        perms = list(enumerate_transfer_permutations(4))
    rows = [
        {
            "image": list(p.image),
            "cycles": [str(c) for c in cycle_decompose(p)],
            "verdict": classify_4site_permutation(p).value,
        }
        for p in perms
    ]
    _emit_json(args, {"permutations": rows})
    return EXIT_OK


def cmd_nogo(args: argparse.Namespace) -> int:
    cert = no_go_certificate(args.n)
    _emit_json(args, cert.to_dict())
    return EXIT_OK if cert.certified else EXIT_FAIL


def cmd_simulate(args: argparse.Namespace) -> int:
    if args.input is not None:
        h = PstHamiltonian.from_dict(load_json(args.input))
        extra = {"source": "hamiltonian file"}
    elif args.preset is not None:
        if args.n is not None and args.n != PRESET_SITES:
            raise InvalidInputError(f"presets are defined for n={PRESET_SITES}")
        tau = args.tau if args.tau is not None else 1.0
        h = preset_hamiltonian(args.preset, tau)
        extra = preset_info(args.preset).to_dict()
        extra["tau"] = tau
    else:
        raise InvalidInputError("simulate needs --preset or --input")
    trace = occupation_trace(h, args.site, args.periods, args.samples)
    _emit_csv(args, trace_csv(trace), **extra)
    if args.concurrence:
        if args.output is None:
            raise InvalidInputError("--concurrence needs --output")
        others = [j for j in range(1, h.n + 1) if j != args.site]
        cols = np.column_stack([trace.times] + [concurrence(trace, args.site, j) for j in others])
        header = ["m", *(f"C_{args.site}_{j}" for j in others)]
        path = args.output + ".concurrence.csv"
        write_text(csv_text(header, ([float(v) for v in row] for row in cols)), path)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pstforge", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--input", help="input JSON file")
        sp.add_argument("--output", help="output file (stdout if omitted)")
        sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
        sp.add_argument("-v", "--verbose", action="store_true")
        sp.set_defaults(func=func)
        return sp

    sp = add("synth", cmd_synth, "build H from a permutation and spectral assignment")
    sp.add_argument("--tol", type=float, default=1e-10)
    sp.add_argument("--tau", type=float)

    sp = add("verify", cmd_verify, "check exp(iH tau) against the target permutation")
    sp.add_argument("--tol", type=float, default=1e-10)
    sp.add_argument("--permutation", help="permutation JSON overriding the embedded one")

    sp = add("solve-nn4", cmd_solve_nn4, "four-site nearest-neighbour chain from a spectrum")
    sp.add_argument("--targets", type=_int_list, help="eps+1,eps+2,eps-1,eps-2 in units of pi")
    sp.add_argument("--tau", type=float)
    sp.add_argument("--tol", type=float, default=1e-10)

    sp = add("solve-powerlaw", cmd_solve_powerlaw, "six-site 1/r^gamma wire design")
    sp.add_argument("--gamma", type=float)
    sp.add_argument("--targets", type=_int_list, help="six eigenphases in units of pi")
    sp.add_argument("--max-starts", type=int, default=100)

    add("classify4", cmd_classify4, "nearest-neighbour feasibility of 4-site permutations")

    sp = add("nogo", cmd_nogo, "certificate that one-cycle classes have no NN member")
    sp.add_argument("--n", type=int, required=True)

    sp = add("simulate", cmd_simulate, "occupation probabilities and tangle over one period")
    sp.add_argument("--preset", choices=PRESETS)
    sp.add_argument("--n", type=int)
    sp.add_argument("--samples", type=int, default=500, help="samples per period")
    sp.add_argument("--periods", type=float, default=1.0)
    sp.add_argument("--site", type=int, default=1, help="initially excited site")
    sp.add_argument("--tau", type=float)
    sp.add_argument("--concurrence", action="store_true", help="also write C_ij columns")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except InvalidInputError as exc:
        print(f"pstforge {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NoSolutionError as exc:
        print(f"pstforge {args.command}: no solution: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
