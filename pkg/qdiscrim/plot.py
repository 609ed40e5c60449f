"""
SVG line charts of failure probability against the number of copies.
"""
import io
import logging
from pathlib import Path
from typing import List, Optional

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .curves import SchemeCurve, parse_csv  # noqa: E402
from .errors import CurveParseError  # noqa: E402

logger = logging.getLogger(__name__)

# fixed ids and no timestamp so identical input gives identical bytes
SVG_RC = {"svg.hashsalt": "qdiscrim", "svg.fonttype": "none"}


def _label(curve: SchemeCurve, panels: int) -> str:
    if panels == 1:
        return curve.scheme
    return f"{curve.scheme} (theta={curve.theta:.4g}, F={curve.fidelity:g})"


def render_svg(curves: List[SchemeCurve], log_scale: bool = False,
               title: Optional[str] = None) -> bytes:
    """One polyline per curve, p_error on the vertical axis"""
    if not curves:
        raise CurveParseError("no curves to plot")
    panels = len({(c.theta, c.fidelity, c.prior0) for c in curves})
    with matplotlib.rc_context(SVG_RC):
        fig, ax = plt.subplots(figsize=(6.4, 4.8))
        for curve in curves:
            ns = [row.n for row in curve.rows]
            errors = curve.errors
            if log_scale:
                # zero error cannot be drawn on a log axis
                pairs = [(n, e) for n, e in zip(ns, errors) if e > 0]
                ns, errors = [p[0] for p in pairs], [p[1] for p in pairs]
            ax.plot(ns, errors, label=_label(curve, panels))
        if log_scale:
            ax.set_yscale("log")
        ax.set_xlabel("number of copies N")
        ax.set_ylabel("probability of failure")
        if title is None and panels == 1:
            title = f"theta={curves[0].theta:.4g}, F={curves[0].fidelity:g}"
        if title:
            ax.set_title(title)
        ax.legend()
        fig.tight_layout()
        buffer = io.BytesIO()
        fig.savefig(buffer, format="svg", metadata={"Date": None})
        plt.close(fig)
    return buffer.getvalue()


def plot_file(csv_path: Path, out_path: Path, log_scale: bool = False) -> None:
    """Read a curves CSV and write the chart; nothing is written when the CSV is unusable"""
    curves = parse_csv(Path(csv_path).read_text())
    svg = render_svg(curves, log_scale=log_scale)
    Path(out_path).write_bytes(svg)
    logger.info(f"Wrote {len(curves)} curve(s) to {out_path}")
