"""Channel JSON and experiment CSV formats.

Channel documents take one of two shapes::

    {"kind": "kraus", "dim_in": n, "dim_out": m, "ops": [op, ...]}
    {"kind": "named", "name": "...", "params": {...}, "seed": 123}

where each ``op`` is a row-major nested list of ``[re, im]`` pairs.
"""

import csv
import io
import json
import os

import numpy as np

from .channels import Channel, named_channel
from .errors import ParseError

FLOAT_FORMAT = ".17g"


def encode_matrix(m) -> list:
    m = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def decode_matrix(data) -> np.ndarray:
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"matrix is not a nested list of [re, im] pairs: {exc}") from exc
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise ParseError(f"matrix must have shape (rows, cols, 2), got {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def channel_to_dict(phi: Channel) -> dict:
    return {
        "kind": "kraus",
        "dim_in": phi.dim_in,
        "dim_out": phi.dim_out,
        "ops": [encode_matrix(k) for k in phi.kraus],
    }


def channel_from_dict(doc: dict) -> Channel:
    if not isinstance(doc, dict) or "kind" not in doc:
        raise ParseError("channel document must be an object with a 'kind' field")
    kind = doc["kind"]
    if kind == "kraus":
        try:
            ops = [decode_matrix(op) for op in doc["ops"]]
            dim_in, dim_out = int(doc["dim_in"]), int(doc["dim_out"])
        except KeyError as exc:
            raise ParseError(f"missing field {exc}") from exc
        if not ops or any(op.shape != (dim_out, dim_in) for op in ops):
            raise ParseError(f"Kraus operators must be {dim_out}x{dim_in}")
        return Channel.from_kraus(ops, name="kraus")
    if kind == "named":
        params = dict(doc.get("params", {}))
        if "matrix" in params:
            params["matrix"] = decode_matrix(params["matrix"])
        if "name" not in doc:
            raise ParseError("named channel needs a 'name'")
        return named_channel(doc["name"], params, seed=doc.get("seed"))
    raise ParseError(f"unknown channel kind {kind!r}")


def loads_channel(text: str) -> Channel:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at line {exc.lineno} column {exc.colno} (char {exc.pos}): {exc.msg}") from exc
    return channel_from_dict(doc)


def load_channel(source: str) -> Channel:
    """Parse ``source`` as a path to a JSON file, or as inline JSON."""
    if os.path.exists(source):
        with open(source) as fh:
            return loads_channel(fh.read())
    return loads_channel(source)


def fmt(x) -> str:
    if isinstance(x, (float, np.floating)):
        return format(float(x), FLOAT_FORMAT)
    return str(x)


def to_csv(metadata: dict, columns: list, rows: list) -> str:
    """CSV text with one ``#``-prefixed metadata line ahead of the header."""
    buf = io.StringIO()
    meta = " ".join(f"{k}={json.dumps(v, sort_keys=True, separators=(',', ':'))}" for k, v in metadata.items())
    buf.write(f"# {meta}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt(x) for x in row])
    return buf.getvalue()


def read_csv(text: str) -> tuple[dict, list]:
    """Inverse of :func:`to_csv`: metadata line (raw) and row dicts."""
    lines = text.splitlines()
    meta = {}
    if lines and lines[0].startswith("# "):
        for item in lines[0][2:].split(" "):
            k, _, v = item.partition("=")
            meta[k] = json.loads(v)
        lines = lines[1:]
    return meta, list(csv.DictReader(lines))
