from __future__ import annotations

import logging
import sys
from pathlib import Path


logger = logging.getLogger(__name__)


STDIN = "-"


class FileLoader:
    def load(self, path: str) -> bytes:
        """Read a whole input; `-` reads standard input."""
        if path == STDIN:
            data = sys.stdin.buffer.read()
        else:
            data = Path(path).read_bytes()
        logger.info(f"Loaded input: path={path}, bytes={len(data)}")
        return data
