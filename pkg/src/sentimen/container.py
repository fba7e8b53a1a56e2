"""Binary model container: one JSON header line, then a little-endian payload.

The header is a UTF-8 JSON object terminated by ``\\n`` whose first key is
``version``.  ``header["arrays"]`` lists ``[name, shape]`` pairs in payload
order; every array is stored row-major as ``header["dtype"]`` (``<f8`` or
``<f4``).
"""

import json

import numpy as np

from .exceptions import ConfigError, DataError

CONTAINER_VERSION = 1


def write_container(path, kind, meta, arrays, dtype="<f8"):
    dt = np.dtype(dtype)
    header = {
        "version": CONTAINER_VERSION,
        "kind": kind,
        "dtype": dt.str,
        **meta,
        "arrays": [[name, list(np.shape(a))] for name, a in arrays.items()],
    }
    with open(path, "wb") as fh:
        fh.write(json.dumps(header, sort_keys=False).encode("utf-8") + b"\n")
        for a in arrays.values():
            fh.write(np.ascontiguousarray(a, dtype=dt).tobytes())


def read_container(path, kind):
    """Return ``(header, {name: array})``; rejects other kinds and versions."""
    try:
        with open(path, "rb") as fh:
            line = fh.readline()
            payload = fh.read()
    except FileNotFoundError:
        raise ConfigError(f"{path}: model file not found") from None
    try:
        header = json.loads(line.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise DataError(f"{path}: unreadable container header ({exc})") from None
    if header.get("version") != CONTAINER_VERSION:
        raise ConfigError(f"{path}: unsupported container version {header.get('version')!r}")
    if header.get("kind") != kind:
        raise ConfigError(f"{path}: expected a {kind} model, found {header.get('kind')!r}")
    dt = np.dtype(header["dtype"])
    arrays, offset = {}, 0
    for name, shape in header["arrays"]:
        size = int(np.prod(shape, dtype=np.int64))
        nbytes = size * dt.itemsize
        if offset + nbytes > len(payload):
            raise DataError(f"{path}: payload truncated at array {name!r}")
        arrays[name] = np.frombuffer(payload, dtype=dt, count=size, offset=offset).reshape(shape).copy()
        offset += nbytes
    if offset != len(payload):
        raise DataError(f"{path}: {len(payload) - offset} trailing payload bytes")
    return header, arrays
