#!/usr/bin/env python3
"""
Base Parser Class
Foundation for the IDX data and experiment config parsers
"""

from pathlib import Path
from typing import Any, Union

PathLike = Union[str, Path]


class BaseParser:
    """Base parser class that all parsers should inherit from"""

    binary = False

    def __init__(self):
        self.supported_extensions = []
        self.format = "unknown"

    def parse(self, content: Any, file_path: PathLike) -> Any:
        """Parse already-read content; ``file_path`` is used for error messages"""
        raise NotImplementedError

    def parse_file(self, file_path: PathLike) -> Any:
        path = Path(file_path)
        content = self.read(path)
        return self.parse(content, path)

    def read(self, path: Path) -> Union[bytes, str]:
        if self.binary:
            return path.read_bytes()
        return path.read_text(encoding="utf-8")

    def can_parse(self, file_path: PathLike) -> bool:
        """Check if this parser can handle the file extension"""
        suffixes = [s.lower() for s in Path(file_path).suffixes]
        return any(ext in suffixes for ext in self.supported_extensions)
