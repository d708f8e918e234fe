#!/usr/bin/env python3

"""Flat binary container for orbital sets, integral tables and 1RDM checkpoints.

Layout: 8 magic bytes, the header length as little-endian uint64, a UTF-8 JSON header, then
the raw C-ordered bytes of every array at the offsets listed in the header."""

import json
import logging
import os
import struct
import tempfile
from pathlib import Path
from typing import Any, Dict, Mapping, Tuple, Union

import numpy as np

from polaritonrdmft.common.errors import CheckpointError

logger = logging.getLogger(__name__)

MAGIC = b"PRDMFT\x00\x01"
FORMAT_VERSION = 1
_LENGTH = struct.Struct("<Q")


def atomic_write_bytes(path: Union[str, Path], payload: bytes) -> None:
    """Write `payload` to a temporary sibling of `path`, then rename it into place."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    handle, temp_name = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(handle, "wb") as file:
            file.write(payload)
        os.replace(temp_name, path)
    except BaseException:
        if os.path.exists(temp_name):
            os.unlink(temp_name)
        raise


def write_container(
    path: Union[str, Path],
    kind: str,
    arrays: Mapping[str, np.ndarray],
    metadata: Mapping[str, Any],
) -> None:
    table = []
    blobs = []
    offset = 0
    for name, array in arrays.items():
        array = np.ascontiguousarray(array)
        if array.dtype.byteorder == ">":
            array = array.astype(array.dtype.newbyteorder("<"))
        blob = array.tobytes(order="C")
        table.append(
            {"name": name, "dtype": array.dtype.str, "shape": list(array.shape), "offset": offset, "nbytes": len(blob)}
        )
        blobs.append(blob)
        offset += len(blob)

    header = {"format_version": FORMAT_VERSION, "kind": kind, "metadata": dict(metadata), "arrays": table}
    encoded = json.dumps(header, sort_keys=True).encode("utf-8")
    atomic_write_bytes(path, MAGIC + _LENGTH.pack(len(encoded)) + encoded + b"".join(blobs))
    logger.info(f"Wrote {kind} container {path} ({offset} bytes of arrays)")


def read_header(path: Union[str, Path]) -> Tuple[Dict, int]:
    """JSON header of a container and the file offset where the array data starts."""
    if not Path(path).is_file():
        raise CheckpointError(f"{path} does not exist")
    with open(path, "rb") as file:
        prefix = file.read(len(MAGIC) + _LENGTH.size)
        if len(prefix) < len(MAGIC) + _LENGTH.size or prefix[: len(MAGIC)] != MAGIC:
            raise CheckpointError(f"{path} is not a polaritonrdmft container")
        (length,) = _LENGTH.unpack(prefix[len(MAGIC) :])
        try:
            header = json.loads(file.read(length).decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as err:
            raise CheckpointError(f"{path} has a corrupt header: {err}") from err

    if header.get("format_version") != FORMAT_VERSION:
        raise CheckpointError(f"{path} has unsupported format version {header.get('format_version')}")
    return header, len(prefix) + length


def read_container(path: Union[str, Path]) -> Tuple[Dict, Dict[str, np.ndarray]]:
    header, data_start = read_header(path)
    with open(path, "rb") as file:
        file.seek(data_start)
        data = file.read()

    arrays = {}
    for entry in header["arrays"]:
        start, stop = entry["offset"], entry["offset"] + entry["nbytes"]
        if stop > len(data):
            raise CheckpointError(f"{path} is truncated at array {entry['name']}")
        array = np.frombuffer(data[start:stop], dtype=np.dtype(entry["dtype"]))
        arrays[entry["name"]] = array.reshape(entry["shape"]).copy()
    return header, arrays
