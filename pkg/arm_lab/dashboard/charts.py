"""Line charts rendered from the metrics CSV, one SVG per plotted column."""

import os
from typing import Dict, List, Tuple

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from arm_lab.dashboard.csv_tools import read_metrics_csv, to_float  # noqa: E402
from arm_lab.domain.task import DIFFICULTIES  # noqa: E402

CHART_COLUMNS = (
    "mean_reward",
    "frac_direct",
    "frac_short",
    "frac_code",
    "frac_long",
    "mean_tokens",
    "cum_tokens",
)
# same value on every difficulty row of a step
RUN_LEVEL_COLUMNS = {"cum_tokens"}

# fixed hash salt and no date keep the SVG bytes stable across reruns
plt.rcParams["svg.hashsalt"] = "arm-lab"


def _series(rows: List[Dict[str, str]], column: str, difficulty: str) -> Tuple[List[int], List[float]]:
    xs: List[int] = []
    ys: List[float] = []
    for r in rows:
        if r["difficulty"] != difficulty:
            continue
        y = to_float(r[column])
        if y is None:
            continue
        xs.append(int(r["step"]))
        ys.append(y)
    return xs, ys


def write_metric_charts(csv_path: str, out_dir: str, prefix: str = "") -> List[str]:
    """Returns the written paths; a header-only CSV yields no charts."""
    rows = read_metrics_csv(csv_path)
    if not rows:
        return []
    os.makedirs(out_dir, exist_ok=True)

    written = []
    for column in CHART_COLUMNS:
        fig, ax = plt.subplots(figsize=(6.4, 3.6))
        labels = [DIFFICULTIES[0].label] if column in RUN_LEVEL_COLUMNS else [d.label for d in DIFFICULTIES]
        for label in labels:
            xs, ys = _series(rows, column, label)
            if xs:
                ax.plot(xs, ys, linewidth=1.2, label=None if column in RUN_LEVEL_COLUMNS else label)
        ax.set_xlabel("step")
        ax.set_ylabel(column)
        ax.grid(True, linewidth=0.3)
        if column not in RUN_LEVEL_COLUMNS:
            ax.legend(loc="best", fontsize="small")
        fig.tight_layout()

        path = os.path.join(out_dir, f"{prefix}{column}.svg")
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
        written.append(path)
    return written
