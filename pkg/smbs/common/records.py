"""Output files: schema header lines, atomic writes and line-oriented readers"""

import json
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Dict, IO, Iterable, Iterator, List

import pandas as pd

from smbs.common.errors import ConfigError
from smbs.common.logger import get_logger

logger = get_logger(__name__)

SCHEMA_VERSION = 1


def header_line(kind: str) -> str:
    """Header comment opening every output file"""
    return f"# smbs {kind} schema v{SCHEMA_VERSION}\n"


@contextmanager
def atomic_writer(filepath: Path) -> Iterator[IO[str]]:
    """
    Open a temporary sibling for writing and rename it into place on success

    Args:
        filepath: Final destination
    """
    filepath = Path(filepath)
    filepath.parent.mkdir(parents=True, exist_ok=True)
    temp_file = filepath.with_suffix(filepath.suffix + '.tmp')
    try:
        with open(temp_file, 'w', encoding='utf-8', newline='\n') as f:
            yield f
        temp_file.replace(filepath)
    except BaseException:
        temp_file.unlink(missing_ok=True)
        raise
    logger.debug(f"Wrote {filepath}")


def write_csv(frame: pd.DataFrame, filepath: Path, kind: str) -> Path:
    """Write a DataFrame as CSV behind a schema header"""
    with atomic_writer(filepath) as f:
        f.write(header_line(kind))
        frame.to_csv(f, index=False, lineterminator='\n')
    return Path(filepath)


def read_csv(filepath: Path) -> pd.DataFrame:
    """Read a CSV written by ``write_csv``"""
    return pd.read_csv(filepath, comment='#')


def write_jsonl(records: Iterable[Dict[str, Any]], filepath: Path, kind: str) -> Path:
    """Write one JSON object per line behind a schema header"""
    with atomic_writer(filepath) as f:
        f.write(header_line(kind))
        for record in records:
            f.write(json.dumps(record, sort_keys=True) + '\n')
    return Path(filepath)


def write_json(document: Dict[str, Any], filepath: Path, kind: str) -> Path:
    """Write a single JSON document; the schema goes in a ``schema`` key"""
    payload = {'schema': header_line(kind)[2:].strip(), **document}
    with atomic_writer(filepath) as f:
        json.dump(payload, f, indent=2, sort_keys=True)
        f.write('\n')
    return Path(filepath)


def read_data_lines(filepath: Path) -> List[str]:
    """
    Non-empty, non-comment lines of a text file

    Raises:
        ConfigError: If the file does not exist
    """
    filepath = Path(filepath)
    if not filepath.exists():
        raise ConfigError(f"Data file not found: {filepath}")
    with open(filepath, 'r', encoding='utf-8') as f:
        lines = [line.strip() for line in f]
    data = [line for line in lines if line and not line.startswith('#')]
    if not data:
        logger.warning(f"Data file {filepath} holds no paths")
    return data
