"""Optional figure rendering for suite reports.

Kept separate from the suites so that library use never imports matplotlib;
the command line calls :func:`render_suite` only when ``--figures`` is given.
Each suite gets one PNG derived from the same rows that land in the CSV.
"""

from __future__ import annotations

import os
from collections import Counter, defaultdict

from .harness import SuiteResult


def _plt():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def render_suite(result: SuiteResult, directory: str, stem: str | None = None) -> list[str]:
    """Render the suite's figure(s) into ``directory``; returns written paths."""
    os.makedirs(directory, exist_ok=True)
    plt = _plt()
    name = stem or result.suite
    path = os.path.join(directory, f"{name}.png")
    fig = plt.figure(figsize=(7.5, 4.5))
    try:
        drawer = _DRAWERS.get(result.suite, _draw_fallback)
        drawer(fig, result)
        fig.tight_layout()
        fig.savefig(path, dpi=150)
    finally:
        plt.close(fig)
    return [path]


def _draw_probe(fig, result: SuiteResult):
    ax = fig.add_subplot(111)
    series = defaultdict(list)
    for row in result.rows:
        series[row[0]].append((int(row[1]), float(row[2]), float(row[3]), float(row[4])))
    for pid, pts in series.items():
        pts.sort()
        ks = [p[0] for p in pts]
        ax.plot(ks, [max(p[1], 1e-17) for p in pts], marker="o", label=f"probe {pid}: h")
        ax.plot(ks, [max(p[2], 1e-17) for p in pts], marker=".", linestyle="--",
                label=f"probe {pid}: lsc")
        ax.plot(ks, [max(p[3], 1e-17) for p in pts], marker=".", linestyle=":",
                label=f"probe {pid}: usc")
    ax.set_yscale("log")
    ax.set_xlabel("step k (offset direction / 2^k)")
    ax.set_ylabel("deficit")
    ax.set_title("continuity probes")
    ax.legend(fontsize=7)
    ax.grid(True, which="both", alpha=0.3)


def _draw_check(fig, result: SuiteResult):
    ax = fig.add_subplot(111)
    counts: dict[str, Counter] = defaultdict(Counter)
    for row in result.rows:
        quantity = row[1].split("[")[0]
        counts[quantity][row[3]] += 1
    names = sorted(counts)
    passes = [counts[n]["pass"] for n in names]
    fails = [counts[n]["fail"] for n in names]
    xs = range(len(names))
    ax.bar(xs, passes, label="pass", color="#2a7")
    ax.bar(xs, fails, bottom=passes, label="fail", color="#c33")
    ax.set_xticks(list(xs))
    ax.set_xticklabels(names, rotation=20, ha="right", fontsize=8)
    ax.set_ylabel("checks")
    ax.set_title("property checks")
    ax.legend()


def _draw_selections(fig, result: SuiteResult):
    ax = fig.add_subplot(111)
    xs, ys, colors = [], [], []
    for row in result.rows:
        xs.append(int(row[0]))
        ys.append(float(row[4]))
        colors.append("#2a7" if row[2] == "1" else "#c33")
    ax.scatter(xs, ys, c=colors, s=18)
    ax.set_xlabel("matrix index")
    ax.set_ylabel("Lipschitz bound")
    certified = sum(1 for c in colors if c == "#2a7")
    ax.set_title(f"extreme selections ({certified}/{len(xs)} certified)")
    ax.grid(True, alpha=0.3)


def _draw_radstrom(fig, result: SuiteResult):
    ax = fig.add_subplot(111)
    norms = [float(row[1]) for row in result.rows]
    fails = sum(1 for row in result.rows if row[3] == "fail")
    ax.hist(norms, bins=30, color="#467", alpha=0.85)
    ax.set_xlabel("pair norm")
    ax.set_ylabel("rows")
    ax.set_title(f"pair-space norms ({fails} failing rows)")
    ax.grid(True, alpha=0.3)


def _draw_lemma1(fig, result: SuiteResult):
    ax = fig.add_subplot(111)
    pts = [float(row[1]) for row in result.rows if row[0] != "GLOBAL"]
    glob = [float(row[1]) for row in result.rows if row[0] == "GLOBAL"]
    ax.plot(range(len(pts)), pts, ".", markersize=3, label="per-point bound")
    if glob:
        ax.axhline(glob[0], color="#c33", linestyle="--", label=f"global {glob[0]:.4g}")
    ax.set_xlabel("grid point index")
    ax.set_ylabel("sup of vertex norms")
    ax.set_title("uniform boundedness over the scaled family")
    ax.legend()
    ax.grid(True, alpha=0.3)


def _draw_fallback(fig, result: SuiteResult):  # pragma: no cover
    ax = fig.add_subplot(111)
    ax.text(0.5, 0.5, f"{result.suite}: {len(result.rows)} rows", ha="center")
    ax.set_axis_off()


_DRAWERS = {
    "probe": _draw_probe,
    "check": _draw_check,
    "selections": _draw_selections,
    "radstrom": _draw_radstrom,
    "lemma1": _draw_lemma1,
}
