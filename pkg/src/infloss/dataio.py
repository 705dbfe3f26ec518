"""LIBSVM sparse text format, fold splitting and CSV output."""

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "LibsvmFormatError",
    "SparseDataset",
    "parse_libsvm",
    "read_libsvm",
    "serialize_libsvm",
    "kfold",
    "format_number",
    "write_csv",
    "csv_text",
    "read_csv",
]


class LibsvmFormatError(ValueError):
    """Malformed LIBSVM input; carries the 1-based line and column."""

    def __init__(self, message, line, column):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass
class SparseDataset:
    """Integer labels and rows of ``(index, value)`` pairs with 1-based,
    strictly increasing indices."""

    labels: list = field(default_factory=list)
    rows: list = field(default_factory=list)

    def __post_init__(self):
        if len(self.labels) != len(self.rows):
            raise ValueError("labels and rows differ in length")
        for r, row in enumerate(self.rows):
            idx = [i for i, _ in row]
            if any(i < 1 for i in idx) or any(a >= b for a, b in zip(idx, idx[1:])):
                raise ValueError(f"row {r}: indices must be >= 1 and strictly increasing")

    def __len__(self):
        return len(self.rows)

    @property
    def n_features(self):
        return max((row[-1][0] for row in self.rows if row), default=0)

    def to_dense(self, d=None):
        """``(X, y)`` with ``X`` of shape ``(n, d)``; ``d`` defaults to the largest index."""
        d = self.n_features if d is None else d
        X = np.zeros((len(self.rows), d))
        for r, row in enumerate(self.rows):
            for i, v in row:
                if i > d:
                    raise ValueError(f"feature index {i} exceeds d={d}")
                X[r, i - 1] = v
        return X, np.array(self.labels, dtype=int)


def _number(token, line, col, what):
    try:
        v = float(token)
    except ValueError:
        raise LibsvmFormatError(f"non-numeric {what} {token!r}", line, col) from None
    if not math.isfinite(v):
        raise LibsvmFormatError(f"non-finite {what} {token!r}", line, col)
    return v


def parse_libsvm(text):
    """Parse ``label idx:val idx:val ...`` lines.

    Blank lines are skipped and anything after ``#`` is dropped.  Labels must
    be integers (``3`` or ``3.0``; a leading ``+`` is accepted).
    """
    labels, rows = [], []
    for ln, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        tokens = []
        pos = 0
        for tok in body.split():
            pos = body.index(tok, pos)
            tokens.append((tok, pos + 1))
            pos += len(tok)
        if not tokens:
            continue
        tok, col = tokens[0]
        lab = _number(tok, ln, col, "label")
        if lab != int(lab):
            raise LibsvmFormatError(f"label {tok!r} is not an integer", ln, col)
        row = []
        last = 0
        for tok, col in tokens[1:]:
            key, sep, val = tok.partition(":")
            if not sep or not key or not val:
                raise LibsvmFormatError(f"expected idx:value, got {tok!r}", ln, col)
            if not key.isdigit():
                raise LibsvmFormatError(f"bad feature index {key!r}", ln, col)
            idx = int(key)
            if idx < 1:
                raise LibsvmFormatError("feature indices start at 1", ln, col)
            if idx <= last:
                raise LibsvmFormatError(f"index {idx} does not increase (previous {last})", ln, col)
            row.append((idx, _number(val, ln, col + len(key) + 1, "value")))
            last = idx
        labels.append(int(lab))
        rows.append(row)
    return SparseDataset(labels, rows)


def read_libsvm(path):
    with open(path, encoding="utf-8") as fh:
        return parse_libsvm(fh.read())


def serialize_libsvm(ds):
    """Inverse of :func:`parse_libsvm` (values written with ``repr`` precision)."""
    lines = []
    for lab, row in zip(ds.labels, ds.rows):
        lines.append(" ".join([str(lab)] + [f"{i}:{v!r}" for i, v in row]))
    return "".join(line + "\n" for line in lines)


def kfold(n, k, seed):
    """Shuffle ``range(n)`` with ``seed`` and cut it into ``k`` folds whose
    sizes differ by at most one.  Each fold is returned sorted."""
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    perm = np.random.default_rng(seed).permutation(n)
    return [np.sort(part) for part in np.array_split(perm, k)]


def format_number(x):
    """At most 12 significant digits, no locale, no exponent for integers."""
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        if x == 0:
            return "0"
        return format(float(x), ".12g")
    return str(x)


def csv_text(rows, header):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        if len(row) != len(header):
            raise ValueError(f"row {row!r} does not match header {header!r}")
        w.writerow([format_number(v) for v in row])
    return buf.getvalue()


def write_csv(rows, header, path):
    """Write a header row and the rows as UTF-8 CSV (``-`` writes to stdout)."""
    text = csv_text(rows, header)
    if path in (None, "-"):
        import sys
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def read_csv(path):
    """``(header, rows)`` with every field left as a string."""
    with open(path, encoding="utf-8", newline="") as fh:
        r = list(csv.reader(fh))
    return r[0], r[1:]
