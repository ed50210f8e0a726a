"""
Command-line interface for derivkey.

Data goes to stdout or to files; diagnostics and logs go to stderr.
Exit codes: 0 success, 1 usage, 2 parse error, 3 numeric error, 4 I/O error.
"""
import argparse
import logging
import sys
from typing import Dict, List, Optional

from src.calculus import ift_invertibility_check, jacobian_at, select_square_submatrix
from src.config.dataset_config import load_dataset_config
from src.config.environment import ENV_CONFIG
from src.core.orchestrator import Orchestrator, load_dataset
from src.core.table import TableDocument, load_table, write_table
from src.errors import DerivkeyError, UsageError
from src.funcfile.parser import parse_function_file
from src.funcfile.polynomial import evaluate_field, field_text
from src.keying.cipher import time_transform, xor_transform
from src.keying.key import parse_key_text
from src.linalg.eigen import eigenvalues
from src.linalg.matrix import format_real, parse_matrix_csv
from src.perturb.perturbation import perturb_table, records_from_csv, records_to_csv
from src.perturb.reconstruction import reconstruct_table
from src.utils.file_utils import read_bytes, read_text, write_bytes, write_text

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"


class ArgumentParser(argparse.ArgumentParser):
    """argparse that reports usage problems as UsageError instead of exiting with status 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def parse_assignments(text: str) -> Dict[str, float]:
    """Parse 'x1=300,x2=1500' into a mapping."""
    values: Dict[str, float] = {}
    for part in text.split(","):
        name, sep, value = (p.strip() for p in part.partition("="))
        if not sep or not name:
            raise UsageError(f"expected 'name=value' pairs, got '{part.strip()}'")
        if name in values:
            raise UsageError(f"'{name}' assigned twice")
        try:
            values[name] = float(value)
        except ValueError:
            raise UsageError(f"value of '{name}' is not a number: '{value}'") from None
    return values


def _split_list(text: str) -> List[str]:
    return [item.strip() for item in text.split(",") if item.strip()]


def _positive_row(text: str) -> int:
    try:
        row = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"row must be a positive integer, got '{text}'") from None
    if row < 1:
        raise argparse.ArgumentTypeError(f"row must be a positive integer, got '{text}'")
    return row


def _emit(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _load_table_for(dataset, path) -> TableDocument:
    return load_table(read_text(path), dataset.config)


# Subcommands

def cmd_parse(args) -> int:
    field = parse_function_file(read_text(args.file))
    values = evaluate_field(field, field.point(parse_assignments(args.point))) if args.point else {}
    _emit(field_text(field))
    if args.point:
        for name, value in values.items():
            _emit(f"{name}({args.point}) = {format_real(value)}")
    return 0


def cmd_jacobian(args) -> int:
    field = parse_function_file(read_text(args.funcs))
    jac = jacobian_at(field, field.point(parse_assignments(args.point)))
    if args.vars:
        jac = select_square_submatrix(jac, _split_list(args.vars))
    shown = jac.transpose() if args.transpose else jac
    lines = ["," + ",".join(shown.col_labels)]
    for label, row in zip(shown.row_labels, shown.data.data):
        lines.append(label + "," + ",".join(format_real(x) for x in row))
    _emit("\n".join(lines))
    if args.vars:
        invertible, det = ift_invertibility_check(jac)
        _emit(f"det = {format_real(det)} ({'invertible' if invertible else 'singular'})")
    return 0


def cmd_eigen(args) -> int:
    spectrum = eigenvalues(parse_matrix_csv(read_text(args.matrix)))
    _emit("\n".join(str(v) for v in spectrum))
    return 0


def cmd_keygen(args) -> int:
    dataset = load_dataset(load_dataset_config(args.config))
    if args.point:
        point = dataset.field.point(parse_assignments(args.point))
    else:
        if not args.data:
            raise UsageError("--row needs --data")
        point = _load_table_for(dataset, args.data).row_point(args.row - 1, dataset.field.variables)
    key, report = Orchestrator(dataset).keygen(point)
    _emit(key.to_text())
    logger.info(f"Chosen eigenvalue {report.chosen_lambda!r} with policy {report.policy}")
    return 0


def cmd_perturb(args) -> int:
    dataset = load_dataset(load_dataset_config(args.config))
    table = _load_table_for(dataset, args.data)
    records = perturb_table(dataset.field, table, dataset.schedule)
    write_text(args.output, records_to_csv(records, dataset.schedule))
    logger.info(f"Wrote {len(records)} perturbed record(s) to {args.output}")
    return 0


def cmd_reconstruct(args) -> int:
    dataset = load_dataset(load_dataset_config(args.config))
    field = dataset.field
    records = records_from_csv(read_text(args.perturbed), dataset.schedule)
    x0 = field.point(parse_assignments(args.x0)) if args.x0 else None
    reports = reconstruct_table(field, dataset.schedule, records, x0, args.tol, args.max_iter)
    doc = TableDocument(field.variables, tuple(tuple(r.point.vector(field.variables)) for r in reports))
    write_text(args.output, write_table(doc, dataset.config))
    worst = max((r.residual for r in reports), default=0.0)
    logger.info(f"Reconstructed {len(reports)} record(s) to {args.output}, worst residual {worst:.3e}")
    return 0


def cmd_transform(args) -> int:
    key = parse_key_text(args.key)
    data = read_bytes(args.input)
    write_bytes(args.out, xor_transform(data, key))
    logger.info(f"{args.command.capitalize()}ed {len(data)} byte(s) with key {key.to_text()}")
    return 0


def cmd_pipeline(args) -> int:
    dataset = load_dataset(load_dataset_config(args.config))
    table = _load_table_for(dataset, args.data)
    message = read_bytes(args.message)
    report = Orchestrator(dataset).pipeline(table, args.row - 1, message, args.output)
    _emit(f"key {report.keygen.key.to_text()}")
    _emit(f"verified {str(report.verified).lower()}")
    _emit(f"duration {report.duration_seconds:.6f}s")
    return 0 if report.verified else 3


def cmd_bench(args) -> int:
    key = parse_key_text(args.key)
    try:
        sizes = [int(s) for s in _split_list(args.sizes)]
    except ValueError:
        raise UsageError(f"--sizes expects comma-separated byte counts, got '{args.sizes}'") from None
    if not sizes or any(s < 0 for s in sizes):
        raise UsageError("--sizes expects non-negative byte counts")
    lines = ["bytes,seconds"]
    lines += [f"{s.size_bytes},{s.seconds:.9f}" for s in time_transform(key, sizes, args.repeats)]
    _emit("\n".join(lines))
    return 0


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog="derivkey", description="Derivative-based perturbation and eigenvalue keys")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="warnings and errors only")
    sub = parser.add_subparsers(dest="command", metavar="command", parser_class=ArgumentParser)

    p = sub.add_parser("parse", help="parse a function file and print its canonical form")
    p.add_argument("file")
    p.add_argument("--point", help="also evaluate every function, e.g. 'x1=300,x2=1500'")
    p.set_defaults(handler=cmd_parse)

    p = sub.add_parser("jacobian", help="evaluate the Jacobian at a point")
    p.add_argument("--funcs", required=True)
    p.add_argument("--point", required=True)
    p.add_argument("--vars", help="restrict to a square block over these variables")
    p.add_argument("--transpose", action="store_true", help="variables as rows")
    p.set_defaults(handler=cmd_jacobian)

    p = sub.add_parser("eigen", help="eigenvalues of a CSV matrix")
    p.add_argument("--matrix", required=True)
    p.set_defaults(handler=cmd_eigen)

    p = sub.add_parser("keygen", help="derive the key for one record")
    p.add_argument("--config", required=True)
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--row", type=_positive_row, help="1-based record number in --data")
    source.add_argument("--point", help="record as assignments, e.g. 'x1=300,x2=1500'")
    p.add_argument("--data", help="CSV table that --row indexes; required with --row")
    p.set_defaults(handler=cmd_keygen)

    p = sub.add_parser("perturb", help="publish scheduled derivative values for every record")
    p.add_argument("--config", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(handler=cmd_perturb)

    p = sub.add_parser("reconstruct", help="recover records from perturbed values")
    p.add_argument("--config", required=True)
    p.add_argument("--perturbed", required=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--x0", help="Newton starting point, e.g. 'x1=1,x2=1'")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--max-iter", dest="max_iter", type=int, default=None)
    p.set_defaults(handler=cmd_reconstruct)

    for name in ("encrypt", "decrypt"):
        p = sub.add_parser(name, help=f"{name} a file with a key 'value/scale'")
        p.add_argument("--key", required=True)
        p.add_argument("--in", dest="input", required=True)
        p.add_argument("--out", required=True)
        p.set_defaults(handler=cmd_transform)

    p = sub.add_parser("pipeline", help="perturb, derive the key, encrypt and verify one record")
    p.add_argument("--config", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--row", type=_positive_row, required=True)
    p.add_argument("--message", required=True, help="plaintext file")
    p.add_argument("-o", "--output", required=True, help="output directory")
    p.set_defaults(handler=cmd_pipeline)

    p = sub.add_parser("bench", help="time the cipher over payload sizes")
    p.add_argument("--key", required=True)
    p.add_argument("--sizes", required=True, help="comma-separated byte counts")
    p.add_argument("--repeats", type=int, default=5)
    p.set_defaults(handler=cmd_bench)
    return parser


def configure_logging(verbose: bool = False, quiet: bool = False) -> None:
    level = logging.DEBUG if verbose else logging.WARNING if quiet else ENV_CONFIG["log_level"]
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)


def cli_dispatch(argv: Optional[List[str]] = None) -> int:
    """
    Run one CLI command.

    Args:
        argv: Arguments without the program name (defaults to sys.argv[1:])

    Returns:
        Process exit code
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        sys.stderr.write(f"derivkey: error: {e.message}\n")
        return e.exit_code
    except SystemExit as e:  # --help
        return int(e.code or 0)

    configure_logging(args.verbose, args.quiet)
    if not args.command:
        parser.print_help(sys.stderr)
        return UsageError.exit_code

    try:
        return args.handler(args)
    except DerivkeyError as e:
        logger.error(f"{e.__class__.__name__}: {e.message}")
        return e.exit_code
