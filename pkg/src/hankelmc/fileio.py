"""Text file formats for complex matrices, 3-D arrays, masks, and JSON reports.

Matrices are UTF-8 text: a ``#complex d n`` header line followed by d lines of
n comma-separated entries written as ``a+bi`` with 17 significant digits.
3-D arrays use ``#complex3 n s d`` followed by the d frontal slices, each n
lines of s entries.  Masks use ``#mask d n p seed`` (or ``#mask3 n s d p
seed``) followed by one 1-based index tuple per line.  Malformed input raises
``ValidationError`` carrying the offending line and field.
"""

from __future__ import annotations

import dataclasses
import json
from pathlib import Path

import numpy as np

from .sampling import SamplingMask

__all__ = [
    "ValidationError",
    "format_complex",
    "parse_complex",
    "write_matrix",
    "read_matrix",
    "write_array3",
    "read_array3",
    "read_complex_file",
    "write_mask",
    "read_mask",
    "write_json",
]


class ValidationError(ValueError):
    """Malformed file content or inconsistent user input."""


def format_complex(z: complex) -> str:
    if not (np.isfinite(z.real) and np.isfinite(z.imag)):
        raise ValidationError(f"cannot serialize non-finite value {z!r}")
    return f"{z.real:.17g}{z.imag:+.17g}i"


def parse_complex(token: str, line_no: int, field: int) -> complex:
    try:
        return complex(token.strip().replace("i", "j"))
    except ValueError:
        raise ValidationError(
            f"line {line_no}, field {field + 1}: cannot parse complex number {token!r}"
        ) from None


def _read_lines(path: str | Path) -> list[str]:
    with open(path, "r", encoding="utf-8") as fh:
        return [line.rstrip("\n") for line in fh]


def _parse_header(line: str, tag: str, count: int, path: str | Path) -> list[str]:
    parts = line.split()
    if not parts or parts[0] != tag or len(parts) != count + 1:
        raise ValidationError(f"{path}: line 1: expected '{tag}' header, got {line!r}")
    return parts[1:]


def _parse_int(token: str, line_no: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ValidationError(f"line {line_no}: bad {what} {token!r}") from None


def _parse_row(line: str, width: int, line_no: int) -> list[complex]:
    tokens = line.split(",")
    if len(tokens) != width:
        raise ValidationError(
            f"line {line_no}: expected {width} entries, found {len(tokens)}"
        )
    return [parse_complex(tok, line_no, j) for j, tok in enumerate(tokens)]


def write_matrix(path: str | Path, x: np.ndarray) -> None:
    x = np.asarray(x, dtype=complex)
    if x.ndim != 2:
        raise ValidationError(f"expected a 2-D array, got shape {x.shape}")
    d, n = x.shape
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"#complex {d} {n}\n")
        for row in x:
            fh.write(",".join(format_complex(v) for v in row) + "\n")


def read_matrix(path: str | Path) -> np.ndarray:
    lines = _read_lines(path)
    if not lines:
        raise ValidationError(f"{path}: empty file")
    d_tok, n_tok = _parse_header(lines[0], "#complex", 2, path)
    d = _parse_int(d_tok, 1, "row count")
    n = _parse_int(n_tok, 1, "column count")
    body = [line for line in lines[1:] if line.strip()]
    if len(body) != d:
        raise ValidationError(f"{path}: expected {d} data lines, found {len(body)}")
    x = np.zeros((d, n), dtype=complex)
    for i, line in enumerate(body):
        x[i] = _parse_row(line, n, i + 2)
    return x


def write_array3(path: str | Path, x: np.ndarray) -> None:
    x = np.asarray(x, dtype=complex)
    if x.ndim != 3:
        raise ValidationError(f"expected a 3-D array, got shape {x.shape}")
    n, s, d = x.shape
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"#complex3 {n} {s} {d}\n")
        for i in range(d):
            for row in x[:, :, i]:
                fh.write(",".join(format_complex(v) for v in row) + "\n")


def read_array3(path: str | Path) -> np.ndarray:
    lines = _read_lines(path)
    if not lines:
        raise ValidationError(f"{path}: empty file")
    n_tok, s_tok, d_tok = _parse_header(lines[0], "#complex3", 3, path)
    n = _parse_int(n_tok, 1, "row count")
    s = _parse_int(s_tok, 1, "column count")
    d = _parse_int(d_tok, 1, "slice count")
    body = [line for line in lines[1:] if line.strip()]
    if len(body) != n * d:
        raise ValidationError(f"{path}: expected {n * d} data lines, found {len(body)}")
    x = np.zeros((n, s, d), dtype=complex)
    for i in range(d):
        for j in range(n):
            x[j, :, i] = _parse_row(body[i * n + j], s, i * n + j + 2)
    return x


def read_complex_file(path: str | Path) -> np.ndarray:
    """Read either format, dispatching on the header tag."""
    lines = _read_lines(path)
    if not lines:
        raise ValidationError(f"{path}: empty file")
    tag = lines[0].split()[0] if lines[0].split() else ""
    if tag == "#complex":
        return read_matrix(path)
    if tag == "#complex3":
        return read_array3(path)
    raise ValidationError(f"{path}: unknown header {lines[0]!r}")


def _seed_token(seed: int | None) -> str:
    return "-" if seed is None else str(seed)


def write_mask(path: str | Path, mask: SamplingMask) -> None:
    dims = mask.dims
    with open(path, "w", encoding="utf-8") as fh:
        if len(dims) == 2:
            fh.write(f"#mask {dims[0]} {dims[1]} {mask.p!r} {_seed_token(mask.seed)}\n")
        elif len(dims) == 3:
            fh.write(
                f"#mask3 {dims[0]} {dims[1]} {dims[2]} {mask.p!r} {_seed_token(mask.seed)}\n"
            )
        else:
            raise ValidationError(f"unsupported mask dimensionality {len(dims)}")
        for idx in mask.indices():
            fh.write(",".join(str(int(v) + 1) for v in idx) + "\n")


def read_mask(path: str | Path) -> SamplingMask:
    lines = _read_lines(path)
    if not lines:
        raise ValidationError(f"{path}: empty file")
    parts = lines[0].split()
    if parts and parts[0] == "#mask" and len(parts) == 5:
        dims = (_parse_int(parts[1], 1, "dim"), _parse_int(parts[2], 1, "dim"))
    elif parts and parts[0] == "#mask3" and len(parts) == 6:
        dims = (
            _parse_int(parts[1], 1, "dim"),
            _parse_int(parts[2], 1, "dim"),
            _parse_int(parts[3], 1, "dim"),
        )
    else:
        raise ValidationError(f"{path}: line 1: expected a mask header, got {lines[0]!r}")
    try:
        p = float(parts[-2])
    except ValueError:
        raise ValidationError(f"{path}: line 1: bad probability {parts[-2]!r}") from None
    seed = None if parts[-1] == "-" else _parse_int(parts[-1], 1, "seed")

    observed = np.zeros(dims, dtype=bool)
    for line_no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        tokens = line.split(",")
        if len(tokens) != len(dims):
            raise ValidationError(
                f"{path}: line {line_no}: expected {len(dims)} indices, found {len(tokens)}"
            )
        idx = tuple(_parse_int(tok, line_no, "index") - 1 for tok in tokens)
        for axis, (i, size) in enumerate(zip(idx, dims)):
            if not 0 <= i < size:
                raise ValidationError(
                    f"{path}: line {line_no}: index {i + 1} out of range for axis {axis + 1}"
                )
        observed[idx] = True
    return SamplingMask(observed, p, seed)


def _jsonable(obj):
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        out = dataclasses.asdict(obj)
        for extra in dir(type(obj)):
            if isinstance(getattr(type(obj), extra, None), property):
                out[extra] = getattr(obj, extra)
        return _jsonable(out)
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    return obj


def write_json(path: str | Path | None, obj) -> str:
    """Serialize a report (dataclass, dict, arrays) to JSON; returns the text."""
    text = json.dumps(_jsonable(obj), indent=2, sort_keys=True)
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return text
