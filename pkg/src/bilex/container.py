"""Versioned binary container for artifacts (index, sampler state, estimates).

Layout (all little-endian):

    bytes 0..7    magic ``b"BILEX\\x00\\x01\\n"`` (format version 1)
    bytes 8..15   uint64 header length in bytes
    header        UTF-8 JSON: {"kind": str, "meta": {...}, "arrays": [
                      {"name": str, "dtype": str, "shape": [int, ...]}, ...]}
    payload       the arrays' raw C-order bytes, concatenated in manifest order

The header JSON is serialized with sorted keys and no whitespace, and the
writer builds the whole file in memory before writing, so identical inputs
produce byte-identical files.
"""

from __future__ import annotations

import json

import numpy as np

MAGIC = b"BILEX\x00\x01\n"


def write_container(path, kind: str, meta: dict, arrays: dict[str, np.ndarray]) -> None:
    """Serialize ``meta`` plus named arrays under a format/kind tag."""
    manifest = []
    payload = []
    for name, arr in arrays.items():
        arr = np.ascontiguousarray(arr)
        dt = arr.dtype.newbyteorder("<")
        manifest.append({"name": name, "dtype": dt.str, "shape": list(arr.shape)})
        payload.append(arr.astype(dt, copy=False).tobytes())
    header = json.dumps(
        {"kind": kind, "meta": meta, "arrays": manifest},
        ensure_ascii=False, sort_keys=True, separators=(",", ":"),
    ).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(np.uint64(len(header)).tobytes())
        fh.write(header)
        for chunk in payload:
            fh.write(chunk)


def read_container(path, expect_kind: str | None = None):
    """Read a container; returns ``(kind, meta, arrays)``.

    Raises ``ValueError`` on a foreign or corrupted file, or when
    ``expect_kind`` is given and does not match.  Nothing is returned
    partially: any failure surfaces before data is handed back.
    """
    with open(path, "rb") as fh:
        magic = fh.read(len(MAGIC))
        if magic != MAGIC:
            raise ValueError(f"{path!r} is not a bilex container (or unsupported version)")
        (header_len,) = np.frombuffer(fh.read(8), dtype="<u8")
        try:
            header = json.loads(fh.read(int(header_len)).decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise ValueError(f"corrupted container header in {path!r}: {exc}") from None
        kind = header.get("kind")
        if expect_kind is not None and kind != expect_kind:
            raise ValueError(f"{path!r} holds a {kind!r} artifact, expected {expect_kind!r}")
        arrays = {}
        for entry in header["arrays"]:
            dtype = np.dtype(entry["dtype"])
            shape = tuple(entry["shape"])
            nbytes = dtype.itemsize * int(np.prod(shape, dtype=np.int64)) if shape else dtype.itemsize
            buf = fh.read(nbytes)
            if len(buf) != nbytes:
                raise ValueError(f"corrupted container {path!r}: truncated array {entry['name']!r}")
            arrays[entry["name"]] = np.frombuffer(buf, dtype=dtype).reshape(shape).copy()
        if fh.read(1):
            raise ValueError(f"corrupted container {path!r}: trailing bytes")
    return kind, header["meta"], arrays
