"""Figure assembly: parse everything first, then draw, then write.

No output file is created until every input has parsed, so a bad input
never leaves a partial image behind.  Rendering is headless (Agg) and
deterministic: fixed figure geometry, fixed fonts, inputs drawn in the
order given, and no timestamps embedded in the PNG.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .io import (ParseError, read_answer, read_empirical, read_theory,
                 read_trace, read_xy)

KINDS = ("trace", "steady-state", "spectra-overlay", "capacity-band")

_RC = {
    "figure.figsize": (6.4, 4.0),
    "figure.dpi": 120,
    "savefig.dpi": 120,
    "font.family": "DejaVu Sans",
    "font.size": 9,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "svg.hashsalt": "buzzplots",
}


@dataclass
class FigureSpec:
    kind: str
    inputs: list[str]
    out: str
    dump: str | None = None
    title: str | None = None
    labels: list[str] = field(default_factory=list)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}")
        if not self.inputs:
            raise ValueError("at least one input file is required")


def _sniff(path):
    """Column count of the first data row, and whether it is an answer file."""
    try:
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                fields = line.split(",")
                return len(fields), fields[0] == "kind"
    except OSError as exc:
        raise ParseError(path, f"cannot read: {exc.strerror}") from exc
    raise ParseError(path, "no data rows")


def _label(spec, idx, default):
    return spec.labels[idx] if idx < len(spec.labels) else default


def _parse_trace(spec):
    series = []
    for idx, path in enumerate(spec.inputs):
        n_cols, _ = _sniff(path)
        reader = read_trace if n_cols == 4 else read_xy
        series.append(reader(path, label=_label(spec, idx, path)))
    return series


def _parse_marginals(spec):
    return [read_xy(path, label=_label(spec, idx, path))
            for idx, path in enumerate(spec.inputs)]


def _parse_overlay(spec):
    series = []
    for path in spec.inputs:
        n_cols, _ = _sniff(path)
        if n_cols == 4:
            series.append(read_theory(path))
        elif n_cols == 5:
            series.extend(read_empirical(path))
        else:
            raise ParseError(path, f"expected a spectrum file with 4 or 5 "
                                   f"columns, got {n_cols}")
    return series


def _parse_band(spec):
    theory, answers = None, {}
    for path in spec.inputs:
        n_cols, is_answer = _sniff(path)
        if is_answer:
            ans = read_answer(path)
            answers[ans["kind"]] = ans
        elif n_cols == 4:
            theory = read_theory(path)
        else:
            raise ParseError(path, "expected a theoretical spectrum or an "
                                   "answer file")
    for need in ("c0", "servers"):
        if need not in answers:
            raise ParseError(spec.inputs[-1],
                             f"capacity-band needs a {need!r} answer file")
    if theory is None:
        raise ParseError(spec.inputs[-1],
                         "capacity-band needs a theoretical spectrum file")
    return theory, answers


def _draw_trace(ax, series):
    for s in series:
        ax.plot(s.x, s.y, drawstyle="steps-post", linewidth=0.8, label=s.label)
    ax.set_xlabel("time")
    ax.set_ylabel("active downloads")
    ax.legend(loc="upper right")


def _draw_marginals(ax, series):
    for s in series:
        ax.plot(s.x, s.y, marker=".", markersize=3, linewidth=1.0,
                label=s.label)
    ax.set_yscale("log")
    ax.set_xlabel("active downloads")
    ax.set_ylabel("stationary probability")
    ax.legend(loc="upper right")


def _draw_overlay(ax, series):
    for s in series:
        if s.label == "theory":
            ax.plot(s.x, s.y, color="black", linewidth=1.5, label=s.label)
        else:
            ax.plot(s.x, s.y, marker="o", markersize=3, linewidth=0.8,
                    label=s.label)
    ax.set_xlabel("mean rate over a block")
    ax.set_ylabel("large-deviation spectrum")
    ax.legend(loc="lower left")


def _draw_band(ax, theory, answers):
    alpha_as = theory.extra["alpha_as"]
    c0 = answers["c0"]["value"]
    k = int(round(answers["servers"]["value"]))
    link = k * alpha_as + answers["servers"]["residual"]
    for j in range(k):
        ax.bar(0, alpha_as, bottom=j * alpha_as, width=0.5,
               color="tab:blue", edgecolor="white", linewidth=0.5)
    ax.bar(0, c0, bottom=k * alpha_as, width=0.5, color="tab:orange",
           label=f"safety margin C0 = {c0:g}")
    ax.axhline(link, color="black", linewidth=1.2,
               label=f"link capacity = {link:g}")
    ax.set_xlim(-1, 1)
    ax.set_xticks([])
    ax.set_ylabel("bandwidth")
    ax.set_title(f"{k} channels of {alpha_as:g} each")
    ax.legend(loc="lower right")


def _write_dump(path, series, answers=None):
    with open(path, "w") as fh:
        for s in series:
            fh.write(f"series label={s.label} n={len(s.x)}\n")
            for x, y in zip(s.x, s.y):
                fh.write(f"{float(x)!r},{float(y)!r}\n")
        for ans in (answers or {}).values():
            fh.write(f"answer kind={ans['kind']} value={ans['value']!r} "
                     f"residual={ans['residual']!r}\n")


def render(spec: FigureSpec) -> None:
    """Parse the inputs, draw the requested figure and write a PNG."""
    answers = None
    if spec.kind == "trace":
        series = _parse_trace(spec)
    elif spec.kind == "steady-state":
        series = _parse_marginals(spec)
    elif spec.kind == "spectra-overlay":
        series = _parse_overlay(spec)
    else:
        theory, answers = _parse_band(spec)
        series = [theory]

    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        if spec.kind == "trace":
            _draw_trace(ax, series)
        elif spec.kind == "steady-state":
            _draw_marginals(ax, series)
        elif spec.kind == "spectra-overlay":
            _draw_overlay(ax, series)
        else:
            _draw_band(ax, series[0], answers)
        if spec.title:
            ax.set_title(spec.title)
        fig.tight_layout()
        try:
            fig.savefig(spec.out, format="png",
                        metadata={"Software": "buzzplots"})
        finally:
            plt.close(fig)

    if spec.dump:
        _write_dump(spec.dump, series, answers)
