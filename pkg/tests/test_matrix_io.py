import struct

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from specbudget import (
    BadMagicError,
    BadVersionError,
    ParseError,
    TruncatedPayloadError,
    read_matrix,
    write_matrix,
)
from specbudget.matrix_io import parse_csv_matrix


def test_float64_round_trip_bit_identical(tmp_path, rng):
    m = rng.standard_normal((8, 5))
    path = tmp_path / "m.eapm"
    write_matrix(m, path)
    back = read_matrix(path)
    assert back.dtype == np.float64
    assert np.array_equal(back.view(np.uint64), m.view(np.uint64))


def test_float32_round_trip(tmp_path, rng):
    m = rng.standard_normal((6, 7))
    path = tmp_path / "m.eapm"
    write_matrix(m, path, dtype="float32")
    back = read_matrix(path)
    assert back.dtype == np.float32
    np.testing.assert_array_equal(back, m.astype(np.float32))


def test_header_layout(tmp_path):
    path = tmp_path / "m.eapm"
    write_matrix(np.arange(6.0).reshape(2, 3), path)
    raw = path.read_bytes()
    assert raw[:4] == b"EAPM"
    assert struct.unpack("<III", raw[4:16]) == (1, 2, 3)
    assert raw[16] == 1
    assert len(raw) == 17 + 6 * 8
    assert np.frombuffer(raw[17:], "<f8").tolist() == [0, 1, 2, 3, 4, 5]


def _header(magic=b"EAPM", version=1, n=2, d=2, code=1):
    return struct.pack("<4sIIIB", magic, version, n, d, code)


@pytest.mark.parametrize(
    "raw, error",
    [
        (b"XXXX" + bytes(40), BadMagicError),
        (_header(version=2) + bytes(32), BadVersionError),
        (_header() + bytes(31), TruncatedPayloadError),
        (b"EAPM\x01\x00", TruncatedPayloadError),
        (b"", TruncatedPayloadError),
        (_header(code=7) + bytes(32), ParseError),
        (_header(n=0) + b"", ParseError),
        (_header() + bytes(33), ParseError),
    ],
)
def test_malformed_binary(tmp_path, raw, error):
    path = tmp_path / "bad.eapm"
    path.write_bytes(raw)
    with pytest.raises(error):
        read_matrix(path)


def test_csv_text():
    np.testing.assert_array_equal(parse_csv_matrix("1,2\n3,4"), [[1, 2], [3, 4]])


def test_csv_file_round_trip(tmp_path, rng):
    m = rng.standard_normal((4, 3))
    path = tmp_path / "m.csv"
    write_matrix(m, path)
    assert np.array_equal(read_matrix(path), m)


def test_csv_blank_lines_and_spaces():
    np.testing.assert_array_equal(parse_csv_matrix("\n 1, 2 \n\n3,4\n"), [[1, 2], [3, 4]])


def test_csv_ragged_reports_line():
    with pytest.raises(ParseError) as info:
        parse_csv_matrix("1,2\n3\n", source="x.csv")
    assert info.value.line == 2
    assert "x.csv, line 2" in str(info.value)


def test_csv_bad_value_reports_column():
    with pytest.raises(ParseError) as info:
        parse_csv_matrix("1,2\n3,abc\n")
    assert info.value.line == 2
    assert info.value.field == "column 2"


def test_csv_empty():
    with pytest.raises(ParseError):
        parse_csv_matrix("\n\n")


def test_write_rejects_bad_input(tmp_path):
    with pytest.raises(ValueError):
        write_matrix(np.zeros(3), tmp_path / "v.eapm")
    with pytest.raises(ValueError):
        write_matrix(np.zeros((2, 2)), tmp_path / "v.eapm", dtype="int32")


def test_missing_file(tmp_path):
    with pytest.raises(OSError):
        read_matrix(tmp_path / "absent.eapm")


finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


@settings(suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(arrays(np.float64, st.tuples(st.integers(1, 9), st.integers(1, 9)), elements=finite))
def test_round_trip_property(tmp_path, m):
    for name in ("p.eapm", "p.csv"):
        write_matrix(m, tmp_path / name)
        back = read_matrix(tmp_path / name)
        assert np.array_equal(back, m)
