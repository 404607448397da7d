import gzip

import numpy as np
import pytest

from analog_sim.core.exceptions import ConfigError, IdxFormatError
from analog_sim.parsers.idx_parser import (
    IMAGES_MAGIC,
    LABELS_MAGIC,
    IdxParser,
    load_idx,
    load_idx_pair,
    load_mnist,
    write_idx,
)


def header(code, dims):
    return bytes([0, 0, code, len(dims)]) + np.asarray(dims, dtype=">u4").tobytes()


class TestParse:
    def test_labels(self):
        content = header(0x08, [3]) + bytes([7, 0, 9])
        array = IdxParser(LABELS_MAGIC).parse(content, "labels")
        np.testing.assert_array_equal(array, [7, 0, 9])

    def test_big_endian_ints(self):
        content = header(0x0C, [2]) + np.array([1, -2], dtype=">i4").tobytes()
        np.testing.assert_array_equal(IdxParser().parse(content, "ints"), [1, -2])

    def test_short_magic(self):
        with pytest.raises(IdxFormatError) as info:
            IdxParser().parse(b"\x00\x00", "tiny")
        assert info.value.offset == 0

    @pytest.mark.parametrize("content", [b"\x01\x00\x08\x01", b"\x00\x00\x07\x01"])
    def test_bad_magic(self, content):
        with pytest.raises(IdxFormatError, match="bad magic"):
            IdxParser().parse(content + b"\x00\x00\x00\x00", "bad")

    def test_unexpected_magic(self):
        with pytest.raises(IdxFormatError, match="expected 0x00000803"):
            IdxParser(IMAGES_MAGIC).parse(header(0x08, [1]) + b"\x00", "labels")

    def test_truncated_header(self):
        with pytest.raises(IdxFormatError, match="truncated header"):
            IdxParser().parse(bytes([0, 0, 8, 3]) + b"\x00\x00\x00\x02", "short")

    def test_truncated_data(self):
        with pytest.raises(IdxFormatError, match="truncated data") as info:
            IdxParser().parse(header(0x08, [4]) + b"\x01\x02", "data")
        assert info.value.path == "data"

    def test_trailing_bytes(self):
        with pytest.raises(IdxFormatError, match="dimension mismatch"):
            IdxParser().parse(header(0x08, [1]) + b"\x01\x02", "data")


class TestFiles:
    def test_images_scaled_to_unit_interval(self, tmp_path):
        images = np.array([[[0, 255], [51, 102]]], dtype=np.uint8)
        path = write_idx(tmp_path / "images", images)
        loaded = load_idx(path, IMAGES_MAGIC)
        np.testing.assert_allclose(loaded, [[[0.0, 1.0], [0.2, 0.4]]])

    def test_gzip_files(self, tmp_path):
        raw = header(0x08, [2]) + bytes([3, 4])
        path = tmp_path / "labels.gz"
        path.write_bytes(gzip.compress(raw))
        np.testing.assert_array_equal(load_idx(path, LABELS_MAGIC), [3, 4])

    def test_written_ints_keep_values(self, tmp_path):
        values = np.array([[1, -5], [70000, 0]], dtype=np.int32)
        loaded = load_idx(write_idx(tmp_path / "ints.idx", values))
        np.testing.assert_array_equal(loaded, values)

    def test_unsupported_dtype(self, tmp_path):
        with pytest.raises(IdxFormatError):
            write_idx(tmp_path / "bad", np.zeros(2, dtype=np.uint16))

    def test_pair_count_mismatch(self, tmp_path):
        images = write_idx(tmp_path / "images", np.zeros((2, 2, 2), dtype=np.uint8))
        labels = write_idx(tmp_path / "labels", np.zeros(3, dtype=np.uint8))
        with pytest.raises(IdxFormatError, match="label count"):
            load_idx_pair(images, labels)

    def test_can_parse(self):
        assert IdxParser().can_parse("digits.idx")
        assert not IdxParser().can_parse("config.yaml")


class TestMnist:
    def test_synthetic_split(self, idx_dir):
        train = load_mnist(idx_dir, "train")
        assert len(train) == 48
        assert train.images.shape == (48, 28, 28)
        assert train.flat_images().shape == (48, 784)
        assert train.labels.dtype == np.int64
        assert 0.0 <= train.images.min() and train.images.max() == 1.0

    def test_subset(self, idx_dir):
        test = load_mnist(idx_dir, "test", subset=5)
        assert len(test) == 5
        assert len(load_mnist(idx_dir, "test", subset=500)) == 16

    def test_missing_files(self, tmp_path):
        with pytest.raises(ConfigError, match="problem.data_dir"):
            load_mnist(tmp_path, "train")

    def test_unknown_split(self, idx_dir):
        with pytest.raises(ConfigError):
            load_mnist(idx_dir, "validation")
