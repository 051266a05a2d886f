"""Deterministic SVG chart rendering (no display server required).

Every function returns the SVG document as bytes. Output is byte-for-byte
reproducible for identical input: the element-id hash salt is pinned and the
creation date is stripped from the metadata.
"""

from __future__ import annotations

import io
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .core import ValidationError  # noqa: E402
from .edc import EdcPoint  # noqa: E402
from .metrics import ErrorHistogram  # noqa: E402

__all__ = ["scatter_chart", "histogram_chart", "edc_chart"]

_HASH_SALT = "shoulderscore"


def _render(fig) -> bytes:
    buf = io.BytesIO()
    try:
        fig.savefig(buf, format="svg", metadata={"Date": None})
    finally:
        plt.close(fig)
    return buf.getvalue()


def scatter_chart(
    pairs: Sequence[tuple[float, float]],
    metric_label: str = "horizontal score",
    width: float = 6.0,
    height: float = 6.0,
) -> bytes:
    """Score vs manual label with the dashed identity (perfect prediction) line."""
    if not pairs:
        raise ValidationError("cannot render a scatter chart from no samples")
    labels = [p[0] for p in pairs]
    scores = [p[1] for p in pairs]
    with plt.rc_context({"svg.hashsalt": _HASH_SALT}):
        fig, ax = plt.subplots(figsize=(width, height))
        ax.plot([0.0, 1.0], [0.0, 1.0], "k--", linewidth=1.0, label="identity")
        ax.scatter(labels, scores, s=22, alpha=0.7, edgecolors="none", zorder=3)
        ax.set_xlim(-0.03, 1.03)
        ax.set_ylim(-0.03, 1.03)
        ax.set_xlabel("manual label")
        ax.set_ylabel(metric_label)
        ax.set_title(f"{metric_label} vs manual label (n={len(pairs)})")
        ax.grid(True, linewidth=0.3, alpha=0.5)
        ax.legend(loc="upper left")
        return _render(fig)


def histogram_chart(
    hist: ErrorHistogram, width: float = 6.4, height: float = 4.4
) -> bytes:
    """Absolute-error distribution with a dashed marker at the error threshold."""
    if sum(hist.counts) == 0:
        raise ValidationError("cannot render a histogram from no samples")
    edges = hist.edges
    with plt.rc_context({"svg.hashsalt": _HASH_SALT}):
        fig, ax = plt.subplots(figsize=(width, height))
        ax.bar(
            edges[:-1],
            hist.counts,
            width=hist.bin_width,
            align="edge",
            edgecolor="white",
            linewidth=0.5,
        )
        ax.axvline(
            hist.threshold_marker,
            color="red",
            linestyle="--",
            linewidth=1.2,
            label=f"error = {hist.threshold_marker:g}",
        )
        ax.set_xlabel("|manual label - score|")
        ax.set_ylabel("samples")
        ax.set_title(f"Absolute error distribution (n={sum(hist.counts)})")
        ax.legend()
        return _render(fig)


def _defined(points: Sequence[EdcPoint]) -> tuple[list[float], list[float]]:
    xs = [p.discard_fraction for p in points if p.fnr_remaining is not None]
    ys = [p.fnr_remaining for p in points if p.fnr_remaining is not None]
    return xs, ys


def edc_chart(
    empirical: Sequence[EdcPoint],
    oracle: Sequence[EdcPoint] | None = None,
    width: float = 7.0,
    height: float = 4.6,
) -> bytes:
    """Survivor FNR against discard fraction; oracle series dashed when given.

    Points whose FNR is undefined (no compliant survivors) are not drawn.
    """
    if not empirical:
        raise ValidationError("cannot render an EDC chart from an empty curve")
    with plt.rc_context({"svg.hashsalt": _HASH_SALT}):
        fig, ax = plt.subplots(figsize=(width, height))
        xs, ys = _defined(empirical)
        if not xs:
            plt.close(fig)
            raise ValidationError("empirical curve has no defined points to draw")
        ax.step(xs, ys, where="post", color="tab:blue", label="quality-ordered discard")
        if oracle is not None:
            oxs, oys = _defined(oracle)
            if oxs:
                ax.step(
                    oxs,
                    oys,
                    where="post",
                    color="tab:orange",
                    linestyle="--",
                    label="oracle (misclassified first)",
                )
        ax.set_xlabel("fraction of lowest-scored samples discarded")
        ax.set_ylabel("FNR of remaining samples")
        ax.set_title("Error versus discard")
        ax.set_ylim(bottom=-0.01)
        ax.grid(True, linewidth=0.3, alpha=0.5)
        ax.legend()
        return _render(fig)
