import json
import math
import os

import numpy as np
import pytest

from phasesynth.pgm import PGMError, decode_pgm, encode_pgm, read_pgm, write_pgm
from phasesynth.phasecore import GrayImage
from phasesynth.report import dumps, write_report


@pytest.mark.parametrize("binary", [True, False])
def test_pgm_round_trip(tmp_path, rng, binary):
    img = GrayImage.from_array(rng.integers(0, 256, (8, 8)))
    p = tmp_path / "a.pgm"
    write_pgm(p, img, binary=binary)
    back = read_pgm(p)
    assert np.array_equal(back.pixels, img.pixels)
    assert oct(os.stat(p).st_mode & 0o777) == "0o644"


def test_pgm_header_comments():
    data = b"P2\n# made by hand\n2 # width\n2\n255\n0 1 # row\n254 255\n"
    assert list(decode_pgm(data).pixels) == [0, 1, 254, 255]
    p5 = b"P5 #c\n1 1 255\n\x07"
    assert list(decode_pgm(p5).pixels) == [7]


def test_pgm_encoding_exact_bytes():
    img = GrayImage(2, 2, [0, 10, 200, 255])
    assert encode_pgm(img) == b"P5\n2 2\n255\n\x00\n\xc8\xff"
    assert encode_pgm(img, binary=False) == b"P2\n2 2\n255\n0 10\n200 255\n"


@pytest.mark.parametrize("data", [
    b"P6\n1 1\n255\n\x00\x00\x00",
    b"P5\n2 2\n65535\n",
    b"P5\n2 2\n255\n\x00",
    b"P2\n2 2\n255\n1 2 3",
    b"P2\n1 1\n255\n300",
    b"P5\n2",
])
def test_pgm_malformed(data):
    with pytest.raises(PGMError):
        decode_pgm(data)


def test_pgm_error_is_oserror():
    assert issubclass(PGMError, OSError)


def test_dumps_floats_and_order():
    text = dumps({"b": 1.0, "a": 0.1, "c": [np.float64(1 / 3), np.int64(2)],
                  "d": float("nan"), "e": None, "f": True, "g": {}})
    data = json.loads(text)
    assert list(data) == ["b", "a", "c", "d", "e", "f", "g"]
    assert data["c"][0] == 1 / 3 and data["d"] is None
    assert '"b": 1.0' in text and '"a": 0.10000000000000001' in text


def test_dumps_round_trips_every_double(rng):
    vals = list(rng.normal(0, 1e3, 200)) + [math.pi, 1e-300, 5e-324, 1e300]
    assert json.loads(dumps(vals)) == [float(v) for v in vals]


def test_dumps_rejects_unknown():
    with pytest.raises(TypeError):
        dumps({"x": object()})


def test_write_report_atomic(tmp_path):
    p = tmp_path / "r.json"
    write_report(p, {"x": 1})
    write_report(p, {"x": 2})
    assert json.loads(p.read_text()) == {"x": 2}
    assert [f.name for f in tmp_path.iterdir()] == ["r.json"]
