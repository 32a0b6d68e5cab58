"""Parsers for the buzzld CSV formats.

All files may carry leading ``#`` comment lines.  Trace files hold
``t,i,r,phase`` rows, series files ``t,value``, steady-state marginals
``i,p``, theoretical spectra ``q,lambda,alpha,f``, empirical spectra
``tau,q,alpha,epsilon,f`` and provisioning answers a header row
``kind,value,residual,bracket_limited`` followed by one data row.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class ParseError(Exception):
    """Unreadable or malformed input; carries file and line diagnostics."""

    def __init__(self, path, message, row=None):
        loc = f"{path}:{row}" if row is not None else str(path)
        super().__init__(f"{loc}: {message}")
        self.path = path
        self.row = row


@dataclass
class Series:
    """One plottable curve: parsed values, never transformed."""

    label: str
    x: np.ndarray
    y: np.ndarray
    extra: dict = field(default_factory=dict)


def _data_rows(path, n_cols):
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ParseError(path, f"cannot read: {exc.strerror}") from exc
    rows = []
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split(",")
        if len(fields) != n_cols:
            raise ParseError(path, f"expected {n_cols} fields, got "
                                   f"{len(fields)}", row=lineno)
        rows.append((lineno, fields))
    if not rows:
        raise ParseError(path, "no data rows")
    return rows


def _numeric(path, rows):
    out = []
    for lineno, fields in rows:
        try:
            out.append([float(v) for v in fields])
        except ValueError:
            raise ParseError(path, "non-numeric field", row=lineno) from None
    return np.asarray(out, dtype=float)


def read_xy(path, label=None) -> Series:
    """Two-column file: sampled series ``t,value`` or marginal ``i,p``."""
    data = _numeric(path, _data_rows(path, 2))
    return Series(label or str(path), data[:, 0], data[:, 1])


def read_trace(path, label=None) -> Series:
    """Trace file ``t,i,r,phase``; activity i is the plotted value."""
    data = _numeric(path, _data_rows(path, 4))
    return Series(label or str(path), data[:, 0], data[:, 1],
                  extra={"r": data[:, 2], "phase": data[:, 3]})


def read_theory(path, label="theory") -> Series:
    """Theoretical spectrum ``q,lambda,alpha,f``; plotted as f over alpha."""
    data = _numeric(path, _data_rows(path, 4))
    alpha, f = data[:, 2], data[:, 3]
    order = np.argsort(alpha, kind="stable")
    q = data[:, 0]
    alpha_as = float(data[np.argmin(np.abs(q)), 2])
    return Series(label, alpha[order], f[order],
                  extra={"q": q[order], "alpha_as": alpha_as})


def read_empirical(path) -> list[Series]:
    """Empirical spectra ``tau,q,alpha,epsilon,f``: one Series per tau."""
    data = _numeric(path, _data_rows(path, 5))
    series = []
    for tau in sorted(set(data[:, 0])):
        sel = data[data[:, 0] == tau]
        order = np.argsort(sel[:, 2], kind="stable")
        series.append(Series(f"tau={tau:g}", sel[order, 2], sel[order, 4],
                             extra={"tau": tau, "epsilon": sel[order, 3]}))
    return series


def read_answer(path) -> dict:
    """Provisioning answer: header row then one data row."""
    rows = _data_rows(path, 4)
    if len(rows) != 2:
        raise ParseError(path, f"expected header and one data row, got "
                               f"{len(rows)} rows")
    (hline, header), (dline, values) = rows
    if header != ["kind", "value", "residual", "bracket_limited"]:
        raise ParseError(path, "unrecognized answer header", row=hline)
    try:
        return {"kind": values[0], "value": float(values[1]),
                "residual": float(values[2]),
                "bracket_limited": bool(int(values[3]))}
    except ValueError:
        raise ParseError(path, "non-numeric field", row=dline) from None
