"""Single-file frame format "strip-frame/1".

Layout: a 4-byte little-endian length prefix, a UTF-8 JSON header of that
length, then the raw payload — IEEE 754 binary64 little-endian scalars in
column-major order, complex stored as interleaved (real, imaginary).
Round trips are bit exact.  Headers carry no timestamp so that rebuilding
with equal parameters reproduces identical bytes.
"""

import json
import struct
import warnings

import numpy as np

from . import __version__
from .errors import BadMagic, DimensionMismatch, TruncatedPayload
from .frames import SensingMatrix

FORMAT_TAG = "strip-frame/1"
NORM_DRIFT_WARN = 1e-8

_DTYPES = {"real": np.dtype("<f8"), "complex": np.dtype("<c16")}


def save_frame(phi, path):
    """Write a SensingMatrix to ``path`` in strip-frame/1 format."""
    header = {
        "format": FORMAT_TAG,
        "m": phi.m,
        "N": phi.N,
        "scalar_kind": phi.scalar_kind,
        "family": phi.family,
        "family_params": phi.family_params,
        "seed": phi.seed,
        "created_by": f"striplab {__version__}",
    }
    blob = json.dumps(header, sort_keys=True, separators=(",", ":")).encode("utf-8")
    payload = np.asarray(phi.entries, dtype=_DTYPES[phi.scalar_kind]).tobytes(order="F")
    with open(path, "wb") as fh:
        fh.write(struct.pack("<I", len(blob)))
        fh.write(blob)
        fh.write(payload)


def load_frame(path):
    """Read a strip-frame/1 file back into a SensingMatrix.

    Validates the format tag, dimensions and payload length; warns (does
    not fail) if column norms drifted beyond 1e-8.
    """
    with open(path, "rb") as fh:
        data = fh.read()
    if len(data) < 4:
        raise BadMagic("file too short for a header length prefix")
    (hlen,) = struct.unpack("<I", data[:4])
    if hlen == 0 or 4 + hlen > len(data):
        raise BadMagic("header length prefix inconsistent with file size")
    try:
        header = json.loads(data[4:4 + hlen].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise BadMagic(f"header is not valid JSON: {exc}") from exc
    if not isinstance(header, dict) or header.get("format") != FORMAT_TAG:
        raise BadMagic(f"format tag is not {FORMAT_TAG!r}")
    kind = header.get("scalar_kind")
    if kind not in _DTYPES:
        raise DimensionMismatch(f"unknown scalar kind {kind!r}")
    m, n = header.get("m"), header.get("N")
    if not (isinstance(m, int) and isinstance(n, int) and 1 <= m <= n):
        raise DimensionMismatch(f"bad dimensions m={m}, N={n}")
    dtype = _DTYPES[kind]
    expected = m * n * dtype.itemsize
    payload = data[4 + hlen:]
    if len(payload) < expected:
        raise TruncatedPayload(f"payload holds {len(payload)} bytes, need {expected}")
    if len(payload) > expected:
        raise DimensionMismatch(f"payload holds {len(payload)} bytes, expected {expected}")
    entries = np.frombuffer(payload, dtype=dtype).reshape((m, n), order="F")
    norms = np.linalg.norm(entries, axis=0)
    drift = float(np.abs(norms - 1.0).max())
    if drift > NORM_DRIFT_WARN:
        warnings.warn(f"column norms drifted by {drift:.3e} beyond {NORM_DRIFT_WARN}",
                      UserWarning, stacklevel=2)
    if drift > 1e-10:
        # degraded payload: renormalize so the matrix invariant holds again
        # (payloads written by save_frame never take this path)
        if np.any(norms == 0.0):
            raise DimensionMismatch("payload contains a zero column")
        entries = entries / norms
    return SensingMatrix(entries,
                         family=header.get("family", "custom"),
                         family_params=header.get("family_params") or {},
                         seed=header.get("seed"))
