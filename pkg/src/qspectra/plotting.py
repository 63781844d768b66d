"""Figure rendering for the command line reports (file output only)."""

from __future__ import annotations


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def render_cex_figure(report: dict, path: str) -> None:
    """Orientation-norm growth of the truncated counterexample blocks."""
    plt = _pyplot()
    rows = report["rows"]
    ms = [r["m"] for r in rows]
    norms = [r["j_norm"] for r in rows]
    bounds = [r["lower_bound"] for r in rows]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(ms, norms, "o-", ms=3, label="orientation norm ||J_m||")
    ax.plot(ms, bounds, "--", label="column bound 2m")
    ax.set_xlabel("block index m")
    ax.set_ylabel("norm")
    ax.set_title("unbounded spectral orientations of the truncations")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_verify_figure(results, path: str) -> None:
    """Worst residual per property against its bound, log scale."""
    plt = _pyplot()
    names = [r.name for r in results]
    worsts = [max(r.worst, 1e-18) for r in results]
    bounds = [max(r.bound, 1e-18) for r in results]
    colors = ["tab:blue" if r.passed else "tab:red" for r in results]
    fig, ax = plt.subplots(figsize=(7.5, 0.28 * len(names) + 1.5))
    y = range(len(names))
    ax.barh(y, worsts, color=colors)
    ax.plot(bounds, y, "k|", markersize=9, label="bound")
    ax.set_yticks(list(y))
    ax.set_yticklabels(names, fontsize=7)
    ax.set_xscale("log")
    ax.set_xlabel("worst residual")
    ax.invert_yaxis()
    ax.legend(loc="lower right", fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
