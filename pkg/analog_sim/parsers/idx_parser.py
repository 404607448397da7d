#!/usr/bin/env python3
"""
IDX Parser - big-endian IDX arrays (MNIST layout) with validation

Header: two zero bytes, a dtype code, the number of dimensions, then one
big-endian uint32 per dimension. Images are magic 0x00000803 (ubyte, 3-D),
labels 0x00000801 (ubyte, 1-D). Image pixels are scaled to [0, 1].
"""

import gzip
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Optional, Tuple

import numpy as np

from ..core.exceptions import ConfigError, IdxFormatError
from ..core.logger import get_logger
from .base_parser import BaseParser, PathLike

logger = get_logger(__name__)

IMAGES_MAGIC = 0x00000803
LABELS_MAGIC = 0x00000801

IDX_DTYPES = {
    0x08: np.dtype(">u1"),
    0x09: np.dtype(">i1"),
    0x0B: np.dtype(">i2"),
    0x0C: np.dtype(">i4"),
    0x0D: np.dtype(">f4"),
    0x0E: np.dtype(">f8"),
}
_DTYPE_CODES = {dtype.kind + str(dtype.itemsize): code for code, dtype in IDX_DTYPES.items()}

MNIST_FILES = {
    "train": ("train-images-idx3-ubyte", "train-labels-idx1-ubyte"),
    "test": ("t10k-images-idx3-ubyte", "t10k-labels-idx1-ubyte"),
}


@dataclass(frozen=True)
class Dataset:
    images: np.ndarray
    labels: np.ndarray

    def __len__(self) -> int:
        return len(self.labels)

    def flat_images(self) -> np.ndarray:
        return self.images.reshape(len(self.images), -1)

    def subset(self, count: Optional[int]) -> "Dataset":
        if count is None or count >= len(self):
            return self
        return Dataset(self.images[:count], self.labels[:count])


class IdxParser(BaseParser):
    binary = True

    def __init__(self, expected_magic: Optional[int] = None):
        super().__init__()
        self.supported_extensions = [".idx", ".idx1-ubyte", ".idx3-ubyte", ".gz", ".ubyte"]
        self.format = "idx"
        self.expected_magic = expected_magic

    def read(self, path: Path) -> bytes:
        raw = path.read_bytes()
        if path.suffix == ".gz":
            raw = gzip.decompress(raw)
        return raw

    def parse(self, content: bytes, file_path: PathLike) -> np.ndarray:
        path = str(file_path)
        if len(content) < 4:
            raise IdxFormatError("file shorter than the 4-byte magic", path, 0)
        magic = int.from_bytes(content[:4], "big")
        if content[0] != 0 or content[1] != 0 or content[2] not in IDX_DTYPES:
            raise IdxFormatError(f"bad magic 0x{magic:08x}", path, 0)
        if self.expected_magic is not None and magic != self.expected_magic:
            raise IdxFormatError(
                f"bad magic 0x{magic:08x}, expected 0x{self.expected_magic:08x}", path, 0
            )
        dtype = IDX_DTYPES[content[2]]
        ndim = content[3]
        header_end = 4 + 4 * ndim
        if len(content) < header_end:
            raise IdxFormatError(f"truncated header for {ndim} dimensions", path, len(content))
        dims = tuple(int(d) for d in np.frombuffer(content[4:header_end], dtype=">u4"))
        expected = int(np.prod(dims, dtype=np.int64)) * dtype.itemsize
        available = len(content) - header_end
        if available < expected:
            raise IdxFormatError(
                f"truncated data: {available} bytes for dims {dims} ({expected} needed)",
                path, len(content),
            )
        if available > expected:
            raise IdxFormatError(
                f"dimension mismatch: {available - expected} trailing bytes after dims {dims}",
                path, header_end + expected,
            )
        return np.frombuffer(content, dtype=dtype, offset=header_end).reshape(dims)


def load_idx(path: PathLike, expected_magic: Optional[int] = None) -> np.ndarray:
    """Read one IDX file; 3-D ubyte images come back as floats in [0, 1]"""
    parser = IdxParser(expected_magic)
    array = parser.parse_file(path)
    if array.ndim == 3 and array.dtype.itemsize == 1 and array.dtype.kind == "u":
        return array.astype(np.float64) / 255.0
    return array.astype(array.dtype.newbyteorder("="))


def load_idx_pair(images_path: PathLike, labels_path: PathLike) -> Dataset:
    images = load_idx(images_path, IMAGES_MAGIC)
    labels = load_idx(labels_path, LABELS_MAGIC).astype(np.int64)
    if len(images) != len(labels):
        raise IdxFormatError(
            f"label count {len(labels)} does not match image count {len(images)}", str(labels_path), 4
        )
    return Dataset(images, labels)


def _resolve(data_dir: Path, stem: str) -> Path:
    for candidate in (stem, stem.replace("-idx", ".idx"), stem + ".gz"):
        path = data_dir / candidate
        if path.exists():
            return path
    raise ConfigError(f"no IDX file '{stem}' in {data_dir}", "problem.data_dir")


def load_mnist(data_dir: PathLike, split: str = "train", subset: Optional[int] = None) -> Dataset:
    if split not in MNIST_FILES:
        raise ConfigError(f"unknown split '{split}'", "split")
    data_dir = Path(data_dir)
    images_stem, labels_stem = MNIST_FILES[split]
    dataset = load_idx_pair(_resolve(data_dir, images_stem), _resolve(data_dir, labels_stem))
    logger.info("loaded %d %s samples from %s", len(dataset), split, data_dir)
    return dataset.subset(subset)


def write_idx(path: PathLike, array: np.ndarray) -> Path:
    """Write ``array`` as IDX; used for synthetic fixtures"""
    array = np.asarray(array)
    key = array.dtype.kind + str(array.dtype.itemsize)
    if key not in _DTYPE_CODES:
        raise IdxFormatError(f"dtype {array.dtype} has no IDX code", str(path), 2)
    code = _DTYPE_CODES[key]
    header = bytes([0, 0, code, array.ndim]) + np.asarray(array.shape, dtype=">u4").tobytes()
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(header + array.astype(IDX_DTYPES[code]).tobytes())
    return path


def write_synthetic_mnist(out_dir: PathLike, train: int = 64, test: int = 16, seed: int = 0,
                          side: int = 28, classes: int = 10) -> Dict[str, Path]:
    """
    MNIST-shaped IDX files with learnable classes

    Each class lights a distinct horizontal band of pixels plus noise, so
    small runs can reach high accuracy.
    """
    rng = np.random.default_rng(seed)
    out_dir = Path(out_dir)
    written: Dict[str, Path] = {}
    for split, count in (("train", train), ("test", test)):
        labels = rng.integers(0, classes, size=count).astype(np.uint8)
        images = rng.integers(0, 40, size=(count, side, side)).astype(np.uint8)
        band = max(side // classes, 1)
        for i, label in enumerate(labels):
            start = int(label) * band
            images[i, start:start + band, :] = 255
        images_stem, labels_stem = MNIST_FILES[split]
        written[f"{split}_images"] = write_idx(out_dir / images_stem, images)
        written[f"{split}_labels"] = write_idx(out_dir / labels_stem, labels)
    return written
