"""Figures for the CLI's --figures option.  Rendering only; no computation lives here."""
from __future__ import annotations

import math
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

_STYLE = {"figure.figsize": (6.4, 4.0), "axes.grid": True, "grid.alpha": 0.3,
          "axes.spines.top": False, "axes.spines.right": False, "font.size": 10}


def _save(fig, directory, name):
    os.makedirs(directory, exist_ok=True)
    path = os.path.join(directory, name)
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)
    return path


def weil_deviation(counts, q, g, directory, name="weil_deviation.png"):
    """Normalized deviation (N_j - q^j - 1) / (2g q^(j/2)), which must lie in [-1, 1]."""
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
        js = list(range(1, len(counts) + 1))
        scale = [2 * max(g, 1) * q ** (j / 2) for j in js]
        dev = [(N - q ** j - 1) / s for N, j, s in zip(counts, js, scale)]
        ax.axhspan(-1, 1, color="tab:blue", alpha=0.08, label="Weil bound")
        ax.plot(js, dev, "o-", color="tab:blue", label="curve")
        ax.set_xlabel("extension degree j")
        ax.set_ylabel("normalized deviation")
        ax.set_ylim(-1.2, 1.2)
        ax.set_xticks(js)
        ax.set_title(f"point counts over F_{{{q}^j}}, g = {g}")
        ax.legend(loc="upper right", frameon=False)
        return _save(fig, directory, name)


def session_hits(hits, thresholds, labels, directory, name="session_hits.png"):
    """Hash hits per protocol session against the acceptance threshold."""
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
        xs = range(len(hits))
        ax.bar(xs, hits, color="tab:green", alpha=0.7, label="hits")
        ax.scatter(xs, thresholds, marker="_", s=400, color="black", label="threshold")
        ax.set_xticks(list(xs))
        ax.set_xticklabels(labels, rotation=30, ha="right", fontsize=8)
        ax.set_ylabel("pairs hit")
        ax.legend(frameon=False)
        return _save(fig, directory, name)


def charpoly_counts(counts, bracket, ell, r, directory, name="charpoly_counts.png"):
    """Sorted per-class counts with the lower and upper bracket lines."""
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
        vals = sorted(counts)
        ax.plot(range(len(vals)), vals, ".", color="tab:purple", label="classes")
        lo, hi = bracket
        ax.axhline(lo, color="tab:red", ls="--", lw=1, label="bracket")
        ax.axhline(hi, color="tab:red", ls="--", lw=1)
        ax.set_xlabel("characteristic polynomial (sorted by count)")
        ax.set_ylabel("matrices")
        ax.set_title(f"GSp({2 * r}, F_{ell})")
        ax.legend(frameon=False)
        return _save(fig, directory, name)


def proportion(value, sigma, bound, directory, name="proportion.png"):
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots(figsize=(4.0, 4.0))
        ax.errorbar([0], [value], yerr=[3 * sigma], fmt="o", color="tab:blue", capsize=6,
                    label="estimate (3 sigma)")
        ax.axhline(bound, color="tab:red", ls="--", label=f"bound {bound:g}")
        ax.set_xlim(-1, 1)
        ax.set_xticks([])
        ax.set_ylim(0, max(bound, value + 3 * sigma) * 1.2)
        ax.set_ylabel("shared-root proportion")
        ax.legend(frameon=False)
        return _save(fig, directory, name)


def synthetic_rates(rate, lower_bound, threshold, trials, directory, name="synthetic.png"):
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots(figsize=(4.5, 4.0))
        se = math.sqrt(max(rate * (1 - rate), 0) / max(trials, 1))
        ax.bar([0], [rate], yerr=[3 * se], color="tab:green", alpha=0.7, capsize=6)
        ax.axhline(threshold, color="black", ls=":", label="2/3")
        if lower_bound > 0:
            ax.axhline(lower_bound, color="tab:red", ls="--", label="predicted lower bound")
        ax.set_xticks([0])
        ax.set_xticklabels([f"{trials} trials"])
        ax.set_ylim(0, 1.05)
        ax.set_ylabel("gcd recovery rate")
        ax.legend(frameon=False, loc="lower right")
        return _save(fig, directory, name)


def fiber_traces(traces, Q, directory, name="fiber_traces.png"):
    """Frobenius traces of the sampled fibers against the Weil range."""
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
        bound = 2 * math.sqrt(Q)
        ax.hist(traces, bins=max(5, min(30, len(set(traces)))), color="tab:orange", alpha=0.8)
        ax.axvline(-bound, color="black", ls="--", lw=1)
        ax.axvline(bound, color="black", ls="--", lw=1)
        ax.set_xlabel("trace a = Q + 1 - N_1")
        ax.set_ylabel("fibers")
        return _save(fig, directory, name)


def critical_degrees(degrees, directory, name="critical_degrees.png"):
    """Degrees of the irreducible factors of the parameter discriminant."""
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots(figsize=(5.0, 3.5))
        ax.bar(range(len(degrees)), degrees, color="tab:gray")
        ax.set_xlabel("irreducible factor")
        ax.set_ylabel("degree")
        ax.set_title(f"{sum(degrees)} critical values")
        return _save(fig, directory, name)
