"""Matrix Market and plain-text vector I/O.

Parsing and writing go through ``scipy.io``; this module adds the checks
that matter here: real (or integer) field only, square shape, and
agreement of mirrored entries for ``general`` files.
"""

from __future__ import annotations

import io
import os
import sys
import tempfile

import numpy as np
import scipy.io
import scipy.sparse

from .linalg import SymmetricMatrix, as_array

SYMMETRY_TOL = 1e-12


class MatrixFormatError(ValueError):
    pass


def _open_source(source):
    if source is None or source == "-":
        return io.BytesIO(sys.stdin.buffer.read())
    if isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as fh:
            return io.BytesIO(fh.read())
    data = source.read()
    if isinstance(data, str):
        data = data.encode()
    return io.BytesIO(data)


def read_matrix(source) -> SymmetricMatrix:
    """Read a Matrix Market file (path, file object, or ``-`` for stdin)."""
    buf = _open_source(source)
    try:
        rows, cols, _, fmt, field, symmetry = scipy.io.mminfo(buf)
        buf.seek(0)
        if field not in ("real", "integer"):
            raise MatrixFormatError(f"unsupported field {field!r}; only real matrices")
        if rows != cols:
            raise MatrixFormatError(f"matrix is {rows}x{cols}, not square")
        if symmetry not in ("general", "symmetric"):
            raise MatrixFormatError(f"unsupported symmetry {symmetry!r}")
        m = scipy.io.mmread(buf)
    except MatrixFormatError:
        raise
    except Exception as exc:  # scipy raises a zoo of types on bad input
        raise MatrixFormatError(f"cannot parse Matrix Market data: {exc}") from exc
    a = m.toarray() if scipy.sparse.issparse(m) else np.asarray(m)
    a = np.asarray(a, dtype=float)
    if symmetry == "general":
        scale = max(1.0, float(np.max(np.abs(a)))) if a.size else 1.0
        if a.size and np.max(np.abs(a - a.T)) > SYMMETRY_TOL * scale:
            raise MatrixFormatError("general matrix is not symmetric")
    try:
        return SymmetricMatrix(a)
    except ValueError as exc:
        raise MatrixFormatError(str(exc)) from exc


def _mm_bytes(A, fmt, comment):
    a = as_array(A)
    buf = io.BytesIO()
    target = scipy.sparse.coo_matrix(a) if fmt == "coordinate" else a
    scipy.io.mmwrite(buf, target, comment=comment, field="real",
                     precision=17, symmetry="symmetric")
    return buf.getvalue()


def write_matrix(target, A, fmt="coordinate", comment=""):
    """Write ``A`` as a symmetric real Matrix Market file.

    ``fmt`` is ``"coordinate"`` or ``"array"``.  Paths are written
    atomically; ``None`` or ``-`` writes to stdout.
    """
    if fmt not in ("coordinate", "array"):
        raise ValueError(f"unknown Matrix Market format {fmt!r}")
    data = _mm_bytes(A, fmt, comment)
    if target is None or target == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    elif isinstance(target, (str, os.PathLike)):
        atomic_write(target, data)
    else:
        target.write(data)


def read_vector(source) -> np.ndarray:
    """One decimal per line; blank lines and ``#`` comments ignored."""
    buf = _open_source(source)
    text = buf.getvalue().decode()
    vals = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            vals.append(float(line))
        except ValueError:
            raise MatrixFormatError(f"line {lineno}: not a number: {line!r}") from None
    if not vals:
        raise MatrixFormatError("empty vector file")
    return np.array(vals)


def format_vector(x) -> str:
    return "".join(f"{float(v):.17g}\n" for v in np.asarray(x).ravel())


def write_vector(target, x):
    data = format_vector(x).encode()
    if target is None or target == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        atomic_write(target, data)


def atomic_write(path, data):
    """Write bytes (or str) to ``path`` via a temp file and rename."""
    if isinstance(data, str):
        data = data.encode()
    path = os.fspath(path)
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
