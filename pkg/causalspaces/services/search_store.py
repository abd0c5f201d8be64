"""
Persistent store for DFS enumeration runs.

The stream file holds one canonical code per line (decimal PFCodes, comma
separated) in discovery order and is only ever appended to. The sidecar
``<stream>.checkpoint.json`` records how many lines are covered by a resume
point; anything after that is discarded on resume.
"""
import logging
import os
from pathlib import Path
from typing import TextIO

from pydantic import ValidationError

from ..core.errors import CORRUPT_CHECKPOINT
from ..core.symmetry import CanonicalCode
from ..models.checkpoint import SearchCheckpoint

logger = logging.getLogger(__name__)


def format_code(code: CanonicalCode) -> str:
    return ",".join(str(c) for c in code)


def parse_code(line: str) -> CanonicalCode:
    line = line.strip()
    if not line:
        return ()
    return tuple(int(part) for part in line.split(","))


class CodeStore:
    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.checkpoint_path = self.path.with_name(self.path.name + ".checkpoint.json")
        self._handle: TextIO | None = None

    def has_checkpoint(self) -> bool:
        return self.checkpoint_path.exists()

    def load_checkpoint(self) -> SearchCheckpoint | None:
        if not self.has_checkpoint():
            return None
        try:
            return SearchCheckpoint.model_validate_json(self.checkpoint_path.read_text("utf-8"))
        except (ValidationError, ValueError) as e:
            raise CORRUPT_CHECKPOINT(f"unreadable checkpoint {self.checkpoint_path}: {e}") from e

    def read_codes(self) -> list[CanonicalCode]:
        if not self.path.exists():
            return []
        codes = []
        with self.path.open("r", encoding="utf-8") as handle:
            for number, line in enumerate(handle, 1):
                if not line.endswith("\n"):
                    # torn final write from an interrupted run
                    logger.warning(f"⚠️ ignoring incomplete record at line {number} of {self.path}")
                    break
                try:
                    codes.append(parse_code(line))
                except ValueError as e:
                    raise CORRUPT_CHECKPOINT(f"bad record at line {number} of {self.path}") from e
        return codes

    def reset(self) -> None:
        self.close()
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self.path.write_text("", encoding="utf-8")
        if self.checkpoint_path.exists():
            self.checkpoint_path.unlink()

    def truncate(self, count: int) -> list[CanonicalCode]:
        """Keep the first ``count`` records and return them."""
        codes = self.read_codes()
        if len(codes) < count:
            raise CORRUPT_CHECKPOINT(
                f"checkpoint covers {count} records but {self.path} holds {len(codes)}"
            )
        kept = codes[:count]
        if len(codes) != count or self.path.stat().st_size != self._size_of(kept):
            logger.info(f"✂️ discarding {len(codes) - count} records past the checkpoint")
            self._rewrite(kept)
        return kept

    @staticmethod
    def _size_of(codes: list[CanonicalCode]) -> int:
        return sum(len(format_code(c)) + 1 for c in codes)

    def _rewrite(self, codes: list[CanonicalCode]) -> None:
        tmp = self.path.with_name(self.path.name + ".tmp")
        tmp.write_text("".join(format_code(c) + "\n" for c in codes), encoding="utf-8")
        os.replace(tmp, self.path)

    def open_append(self) -> None:
        if self._handle is None:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            self._handle = self.path.open("a", encoding="utf-8")

    def append(self, code: CanonicalCode) -> None:
        if self._handle is None:
            self.open_append()
        assert self._handle is not None
        self._handle.write(format_code(code) + "\n")

    def save_checkpoint(self, checkpoint: SearchCheckpoint) -> None:
        if self._handle is not None:
            self._handle.flush()
            os.fsync(self._handle.fileno())
        tmp = self.checkpoint_path.with_name(self.checkpoint_path.name + ".tmp")
        tmp.write_text(checkpoint.model_dump_json(indent=2), encoding="utf-8")
        os.replace(tmp, self.checkpoint_path)

    def close(self) -> None:
        if self._handle is not None:
            self._handle.close()
            self._handle = None


def write_sorted_codes(path: str | Path, codes: list[CanonicalCode]) -> None:
    """Final code file: one record per line, lines in numeric order."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("".join(format_code(c) + "\n" for c in sorted(codes)), encoding="utf-8")
