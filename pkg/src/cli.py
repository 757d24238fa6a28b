"""
Command line interface.

Usage: python -m src.cli <command> [inputs] [options]

Commands
--------
verify                    run a Yang-Mills verification campaign.
distance RHO MU           Bures distance and root fidelity of two states.
metric D X Y              the Bures metric g(X, Y) at D.
curvature W G G'          the curvature Omega(GW, G'W), as a matrix file.
transport CURVE W0        parallel transport of W0 along a curve of states.

Matrices are read from JSON matrix files, curves from JSON arrays of them.
Results go to standard output, or to --out (relative paths are placed
in $BYM_OUT_DIR when it is set).

Exit status is 0 on success (or a passed verification),
1 when a verification fails, and 2 on usage or input errors.
The command line never reads a config file.
"""
import argparse
import json
import sys

import numpy as np

from src.parameters import Parameters
from src.utils import resolve_output_path
from src.core import (
    DensityMatrix,
    HermitianMatrix,
    Purification,
    dumps_matrix,
    load_matrix,
    matrix_to_json,
)
from src.bundle import curvature_hh, holonomy, is_closed, load_curve, transport
from src.metric import bures_distance, bures_metric, fidelity_root
from src.yangmills import verify

COMMANDS = {
    "verify": 0,
    "distance": 2,
    "metric": 3,
    "curvature": 3,
    "transport": 2,
}

FORMATS = ("json", "csv", "human")


class ParsRun(Parameters):
    """
    The configuration of a single command line run.
    """

    def __init__(self, **kwargs):
        super().__init__()

        self.command = self.add_par(
            "command", "verify", str, f"The command to run: {', '.join(COMMANDS)}."
        )
        self.dim = self.add_par("dim", 2, int, "Dimension of the matrices (verify).")
        self.seed = self.add_par("seed", 0, int, "Campaign seed (verify).")
        self.samples = self.add_par("samples", 20, int, "Number of samples (verify).")
        self.tol = self.add_par(
            "tol", None, (None, float), "Relative tolerance (verify), None for the default."
        )
        self.cond_cap = self.add_par(
            "cond_cap", 1e3, float, "Cap on the eigenvalue ratio of the random states."
        )
        self.normalized = self.add_par(
            "normalized", False, bool, "Verify the normalized case (trace-one states)."
        )
        self.inputs = self.add_par(
            "inputs", [], list, "Paths of the input matrix or curve files."
        )
        self.format = self.add_par(
            "format", "json", str, f"Output format: {', '.join(FORMATS)}."
        )
        self.out = self.add_par(
            "out", None, (None, str), "Output file (default is standard output)."
        )

        self._enforce_no_new_attrs = True

        self.load_then_update(kwargs)

        expected = COMMANDS[self.command]
        if len(self.inputs) != expected:
            raise ValueError(
                f'Command "{self.command}" takes {expected} input files, '
                f"got {len(self.inputs)}."
            )

    def __setattr__(self, key, value):
        if key == "command" and value not in COMMANDS:
            raise ValueError(f'Unknown command "{value}".')
        if key == "format" and value not in FORMATS:
            raise ValueError(f'Unknown format "{value}", use one of {FORMATS}.')
        if key in ("dim", "samples") and isinstance(value, int) and value < 1:
            raise ValueError(f"--{key} must be at least 1, got {value}.")
        if key == "tol" and isinstance(value, (int, float)) and not value > 0:
            raise ValueError(f"--tol must be positive, got {value}.")
        if key == "cond_cap" and isinstance(value, (int, float)) and not value >= 1:
            raise ValueError(f"--cond-cap must be at least 1, got {value}.")

        super().__setattr__(key, value)

    @classmethod
    def _get_default_cfg_key(cls):
        """
        Get the default key to use when loading a config file.
        """
        return "run"


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--dim", type=int, default=2, help="dimension of the matrices")
    common.add_argument("--seed", type=int, default=0, help="campaign seed")
    common.add_argument("--samples", type=int, default=20, help="number of samples")
    common.add_argument("--tol", type=float, default=None, help="relative tolerance")
    common.add_argument(
        "--cond-cap", type=float, default=1e3, help="cap on the eigenvalue ratio"
    )
    common.add_argument(
        "--normalized", action="store_true", help="verify on trace-one states"
    )
    common.add_argument("--format", choices=FORMATS, default="json")
    common.add_argument("--out", default=None, help="output file")

    parser = argparse.ArgumentParser(
        prog="bures-ym",
        description="Bures geometry and Yang-Mills verification of purifications.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    subparsers.add_parser("verify", parents=[common], help="run a verification campaign")
    for name, help_text in (
        ("distance", "Bures distance of two states (files RHO MU)"),
        ("metric", "Bures metric at D of X and Y (files D X Y)"),
        ("curvature", "curvature of two horizontal vectors (files W G G')"),
        ("transport", "parallel transport along a curve (files CURVE W0)"),
    ):
        sub = subparsers.add_parser(name, parents=[common], help=help_text)
        sub.add_argument("inputs", nargs=COMMANDS[name], metavar="FILE")

    return parser


def emit(text, config):
    """Write the output to the --out file, or to standard output."""
    if not text.endswith("\n"):
        text += "\n"
    path = resolve_output_path(config.out)
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as file:
            file.write(text)


def cmd_verify(config):
    report = verify(
        config.dim,
        config.seed,
        samples=config.samples,
        normalized_case=config.normalized,
        tol=config.tol,
        cond_cap=config.cond_cap,
        verbose=1 if config.format == "human" else 0,
    )
    if config.format == "json":
        emit(report.to_json(), config)
    elif config.format == "csv":
        emit(report.to_csv(), config)
    else:
        emit(report.summary(), config)
    return 0 if report.passed else 1


def cmd_distance(config):
    rho, mu = (DensityMatrix(load_matrix(f), normalized=True) for f in config.inputs)
    distance = bures_distance(rho, mu)
    root = fidelity_root(rho, mu)
    if config.format == "json":
        emit(json.dumps({"bures_distance": distance, "fidelity_root": root}), config)
    elif config.format == "csv":
        emit(f"bures_distance,fidelity_root\n{distance:.17g},{root:.17g}", config)
    else:
        emit(f"bures_distance: {distance:.17g}\nfidelity_root: {root:.17g}", config)
    return 0


def cmd_metric(config):
    d_file, x_file, y_file = config.inputs
    value = bures_metric(
        DensityMatrix(load_matrix(d_file)),
        HermitianMatrix(load_matrix(x_file)),
        HermitianMatrix(load_matrix(y_file)),
    )
    if config.format == "json":
        emit(json.dumps({"bures_metric": value}), config)
    elif config.format == "csv":
        emit(f"bures_metric\n{value:.17g}", config)
    else:
        emit(f"bures_metric: {value:.17g}", config)
    return 0


def cmd_curvature(config):
    """The curvature is always written as a JSON matrix file, except in human format."""
    w_file, g_file, g_prime_file = config.inputs
    value = curvature_hh(
        Purification(load_matrix(w_file)),
        HermitianMatrix(load_matrix(g_file)).entries,
        HermitianMatrix(load_matrix(g_prime_file)).entries,
    )
    if config.format == "human":
        emit(f"Omega =\n{np.array2string(value, precision=6)}", config)
    else:
        emit(dumps_matrix(value), config)
    return 0


def cmd_transport(config):
    curve_file, start_file = config.inputs
    curve = load_curve(curve_file)
    W0 = Purification(load_matrix(start_file))
    final = transport(curve, W0)
    closed = is_closed(curve)
    unitary = holonomy(W0, final) if closed else None

    if config.format == "human":
        lines = [f"steps: {len(curve) - 1}", f"closed: {closed}"]
        lines.append(f"final W =\n{np.array2string(final.entries, precision=6)}")
        if unitary is not None:
            lines.append(f"holonomy =\n{np.array2string(unitary, precision=6)}")
        emit("\n".join(lines), config)
    else:
        output = {
            "final": matrix_to_json(final),
            "holonomy": None if unitary is None else matrix_to_json(unitary),
            "closed": closed,
            "steps": len(curve) - 1,
        }
        emit(json.dumps(output), config)
    return 0


HANDLERS = {
    "verify": cmd_verify,
    "distance": cmd_distance,
    "metric": cmd_metric,
    "curvature": cmd_curvature,
    "transport": cmd_transport,
}


def main(argv=None):
    """
    Run the command line interface and return the exit status.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code in (0, None) else 2

    try:
        config = ParsRun(
            cfg_file=False,
            command=args.command,
            dim=args.dim,
            seed=args.seed,
            samples=args.samples,
            tol=args.tol,
            cond_cap=args.cond_cap,
            normalized=args.normalized,
            inputs=list(getattr(args, "inputs", [])),
            format=args.format,
            out=args.out,
        )
    except (ValueError, TypeError) as e:
        sys.stderr.write(parser.format_usage())
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return 2

    try:
        return HANDLERS[config.command](config)
    except (ValueError, TypeError, OSError) as e:
        # domain errors (GeometryError) and JSON decoding errors are ValueErrors
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
