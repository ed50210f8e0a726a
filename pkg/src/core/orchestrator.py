import logging
import time
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Tuple

from src.calculus import ift_invertibility_check, jacobian_at, select_square_submatrix
from src.config.dataset_config import DatasetConfig
from src.core.table import TableDocument
from src.errors import DerivkeyError, SingularJacobian
from src.funcfile.parser import parse_function_file
from src.funcfile.polynomial import Point, VectorField
from src.keying.cipher import xor_transform
from src.keying.key import derive_key_scalar
from src.keying.policies import select_eigenvalue
from src.linalg.eigen import eigenvalues
from src.models.records import (
    KeyScalar,
    KeygenReport,
    PipelineLogEntry,
    PipelineReport,
    Schedule,
    SpectrumValue,
)
from src.perturb.perturbation import perturb_point, records_to_csv
from src.perturb.schedule import parse_schedule_text
from src.utils import json_utils
from src.utils.file_utils import PathLike, ensure_dir, read_text, write_bytes, write_text

logger = logging.getLogger(__name__)

OUTPUT_FILES = {
    "perturbed": "perturbed.csv",
    "key": "key.txt",
    "ciphertext": "ciphertext.bin",
    "decrypted": "decrypted.bin",
    "report": "report.json",
}


@dataclass(frozen=True)
class Dataset:
    """A config together with the function file and schedule it names."""

    config: DatasetConfig
    field: VectorField
    schedule: Schedule


def load_dataset(config: DatasetConfig) -> Dataset:
    field = parse_function_file(read_text(config.function_file))
    config = config.validate_against(field)
    schedule = parse_schedule_text(read_text(config.schedule_file), field)
    logger.info(
        f"Dataset ready: {field.m} function(s) over {field.n} variable(s), {len(schedule)} scheduled partial(s)"
    )
    return Dataset(config, field, schedule)


class Orchestrator:
    """Runs key generation and the full perturb / keygen / encrypt pipeline, keeping a step log."""

    def __init__(self, dataset: Dataset):
        self.dataset = dataset
        self.log: List[PipelineLogEntry] = []

    def _record(self, step: str, action: str, details: Optional[str] = None) -> None:
        self.log.append(PipelineLogEntry(step=step, action=action, details=details))
        if action == "failed":
            logger.error(f"Step {step} failed: {details}")
        else:
            logger.debug(f"Step {step} {action}" + (f": {details}" if details else ""))

    def keygen(self, point: Point) -> Tuple[KeyScalar, KeygenReport]:
        """
        Derive the key for one record.

        jacobian -> square submatrix -> invertibility check -> eigenvalues -> selection -> quantization

        Raises:
            SingularJacobian: the submatrix fails the invertibility check
        """
        config, field = self.dataset.config, self.dataset.field
        step = "jacobian"
        try:
            square = select_square_submatrix(jacobian_at(field, point), config.submatrix_vars)
            self._record(step, "completed", f"{square.data.rows}x{square.data.cols} over {list(square.col_labels)}")

            step = "invertibility"
            invertible, det = ift_invertibility_check(square, config.det_tol)
            if not invertible:
                raise SingularJacobian(f"Jacobian submatrix is singular at this point (det = {det:.6e})", det)
            self._record(step, "completed", f"det = {det:.6e}")

            step = "eigenvalues"
            spectrum = eigenvalues(square.data)
            self._record(step, "completed", ", ".join(str(v) for v in spectrum))

            step = "select"
            lam = select_eigenvalue(spectrum, config.policy, config.imag_tol)
            self._record(step, "completed", f"{lam!r} via {config.policy}")

            step = "quantize"
            key = derive_key_scalar(lam, config.key_scale)
            self._record(step, "completed", key.to_text())
        except DerivkeyError as e:
            self._record(step, "failed", e.message)
            raise

        logger.info(f"Derived key {key.to_text()} from eigenvalue {lam!r}")
        report = KeygenReport(
            row_labels=list(square.row_labels),
            col_labels=list(square.col_labels),
            matrix=square.data.to_array().tolist(),
            det=det,
            invertible=invertible,
            spectrum=[SpectrumValue(re=v.re, im=v.im) for v in spectrum],
            chosen_lambda=lam,
            policy=config.policy.to_text(),
            key=key,
        )
        return key, report

    def pipeline(self, table: TableDocument, row_index: int, message: bytes, out_dir: PathLike) -> PipelineReport:
        """
        Perturb one record, derive its key, encrypt and decrypt the message, and write every artifact.

        Args:
            table: Loaded records
            row_index: 0-based record index
            message: Plaintext bytes
            out_dir: Output directory, created when missing

        Returns:
            PipelineReport, also written as report.json
        """
        started = time.perf_counter()
        field, schedule = self.dataset.field, self.dataset.schedule
        point = table.row_point(row_index, field.variables)

        self._record("perturb", "started")
        perturbed = perturb_point(field, point, schedule)
        self._record("perturb", "completed", f"{len(schedule)} value(s)")

        key, keygen_report = self.keygen(point)

        ciphertext = xor_transform(message, key)
        self._record("encrypt", "completed", f"{len(ciphertext)} byte(s)")
        decrypted = xor_transform(ciphertext, key)
        self._record("decrypt", "completed", f"{len(decrypted)} byte(s)")
        verified = decrypted == message
        self._record("verify", "completed" if verified else "failed", "round trip " + ("matches" if verified else "differs"))

        out_dir = ensure_dir(out_dir)
        paths = {name: Path(out_dir) / filename for name, filename in OUTPUT_FILES.items()}
        write_text(paths["perturbed"], records_to_csv([perturbed], schedule))
        write_text(paths["key"], key.to_text() + "\n")
        write_bytes(paths["ciphertext"], ciphertext)
        write_bytes(paths["decrypted"], decrypted)

        report = PipelineReport(
            row_index=row_index,
            perturbed=perturbed,
            keygen=keygen_report,
            message_length=len(message),
            ciphertext_length=len(ciphertext),
            verified=verified,
            duration_seconds=time.perf_counter() - started,
            files={name: str(path) for name, path in paths.items()},
            log=list(self.log),
        )
        write_text(paths["report"], json_utils.dumps(report.model_dump(), indent=2) + "\n")
        logger.info(
            f"Pipeline finished for record {row_index + 1}: key {key.to_text()}, "
            f"{len(message)} byte(s), verified={verified}, {report.duration_seconds:.4f}s"
        )
        return report


def run_keygen(config: DatasetConfig, point: Point) -> Tuple[KeyScalar, KeygenReport]:
    return Orchestrator(load_dataset(config)).keygen(point)


def run_pipeline(
    config: DatasetConfig, table: TableDocument, row_index: int, message: bytes, out_dir: PathLike
) -> PipelineReport:
    return Orchestrator(load_dataset(config)).pipeline(table, row_index, message, out_dir)
