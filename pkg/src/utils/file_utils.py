import logging
from pathlib import Path
from typing import Union

from src.errors import DerivkeyIOError

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def read_text(path: PathLike) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise DerivkeyIOError(f"cannot read file ({e.__class__.__name__})", path) from e


def read_bytes(path: PathLike) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as e:
        raise DerivkeyIOError(f"cannot read file ({e.__class__.__name__})", path) from e


def write_text(path: PathLike, text: str) -> Path:
    return write_bytes(path, text.encode("utf-8"))


def write_bytes(path: PathLike, data: bytes) -> Path:
    path = Path(path)
    try:
        path.write_bytes(data)
    except OSError as e:
        raise DerivkeyIOError(f"cannot write file ({e.__class__.__name__})", path) from e
    logger.debug(f"Wrote {len(data)} bytes to {path}")
    return path


def ensure_dir(path: PathLike) -> Path:
    path = Path(path)
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise DerivkeyIOError(f"cannot create directory ({e.__class__.__name__})", path) from e
    return path
