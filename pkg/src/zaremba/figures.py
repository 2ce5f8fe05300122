"""Matplotlib renderings of the report tables the CLI emits.

Every renderer takes the already-computed report object and a target path;
data stays on stdout, figures go to files.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def _finish(fig, path: str) -> None:
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def multiplicity_figure(index, title: str, path: str) -> None:
    fig, ax = plt.subplots(figsize=(8, 5))
    rows = index.rows()
    if rows:
        d = np.array([r[0] for r in rows])
        c = np.array([r[1] for r in rows])
        ax.scatter(d, c, s=4, alpha=0.5)
        ax.set_xscale("log")
        ax.set_yscale("log")
    ax.set_xlabel("denominator d")
    ax.set_ylabel("multiplicity")
    ax.set_title(title)
    _finish(fig, path)


def density_figure(report, path: str) -> None:
    fig, ax = plt.subplots(figsize=(8, 5))
    ax.plot(report.cutoffs, report.fractions, marker="o", ms=3)
    ax.set_xscale("log")
    ax.set_ylim(0, 1.05)
    ax.set_xlabel("cutoff n")
    ax.set_ylabel("realized fraction of admissible integers")
    ax.set_title(f"denominator density, alphabet {report.alphabet}, ball {report.norm_bound}")
    _finish(fig, path)


def decomposition_figure(result, path: str) -> None:
    fig, (top, bottom) = plt.subplots(2, 1, figsize=(9, 7), sharex=True)
    top.plot(result.ds, result.R, drawstyle="steps-mid", label="R(d)")
    top.plot(result.ds, result.M, lw=1.2, label="main term")
    if result.exceptional:
        exc = np.array(result.exceptional)
        sel = np.isin(result.ds, exc)
        top.scatter(result.ds[sel], result.R[sel], color="red", zorder=3,
                    label="R < M/2")
    top.set_ylabel("count / mass")
    top.legend()
    top.set_title(f"R = M + E on {result.index_set_label}, "
                  f"N = {result.config.N}, Q = {result.config.Q_level}")
    bottom.plot(result.ds, result.E, lw=1.0, color="gray")
    bottom.axhline(0.0, color="black", lw=0.6)
    bottom.set_xlabel("d")
    bottom.set_ylabel("error E(d)")
    _finish(fig, path)


def series_figure(value, path: str) -> None:
    fig, ax = plt.subplots(figsize=(8, 5))
    qs = sorted(value.terms)
    terms = [float(value.terms[q]) for q in qs]
    if value.mode == "truncated":
        ax.plot(qs, np.cumsum(terms), marker="o", ms=3)
        ax.set_xlabel("modulus q")
        ax.set_ylabel("partial sum")
    else:
        ax.plot(qs, np.cumprod(terms), marker="o", ms=3)
        ax.set_xlabel("prime p")
        ax.set_ylabel("partial product")
    ax.axhline(value.value, color="gray", lw=0.8, ls="--")
    ax.set_title(f"singular series at n = {value.n} ({value.mode}, level {value.level})")
    _finish(fig, path)


def schedule_figure(schedule, path: str) -> None:
    fig, ax = plt.subplots(figsize=(8, 5))
    js = list(schedule.indices())
    ax.plot(js, [float(schedule.exponents[j]) for j in js], marker="o", ms=3)
    for j in (-schedule.J1, 0, schedule.J1):
        ax.axvline(j, color="gray", lw=0.6, ls=":")
    ax.set_xlabel("level index j")
    ax.set_ylabel("exponent of N")
    ax.set_title(f"parameter ladder, r = {schedule.r}, J1 = {schedule.J1}, J = {schedule.J}")
    _finish(fig, path)


def primroot_figure(records, path: str) -> None:
    fig, ax = plt.subplots(figsize=(8, 5))
    found = [(r.p, r.height) for r in records if r.found]
    if found:
        ps, hs = zip(*found)
        ax.scatter(ps, hs, s=5, alpha=0.5)
    missing = [r.p for r in records if not r.found]
    if missing:
        ax.scatter(missing, [0] * len(missing), s=12, color="red", marker="x",
                   label="none found")
        ax.legend()
    ax.set_xlabel("prime p")
    ax.set_ylabel("height of least bounded primitive root")
    ax.set_title("primitive roots of bounded continued-fraction height")
    _finish(fig, path)
