"""Distances between laws and the convergence-rate verification harness.

Total variation between integer pmfs is half the l1 gap over the union
support; the Kolmogorov-Smirnov distance between a step CDF and a continuous
CDF is exact when evaluated at jump points only. The rate harness compares
exact centered count laws against the discretized limit family over a grid,
phrasing the asymptotic rate claims as finite-n monotonicity of scaled
sequences (an o(.) statement is not assertable at any finite n). Distances
against truncated laws carry the reported truncation mass as certified
slack, so every asserted inequality is sound rather than merely plausible.
"""

from __future__ import annotations

import io
import json
import time
from dataclasses import dataclass

import numpy as np

from .limit_law import q_cdf, q_pmf, q_tail
from .pmf import IntPmf
from .renewal import (
    centered_count_distribution,
    depth_distribution_exact,
    floor_log2,
    frac_log2,
    ks_scaled_sum_exact,
)

MAX_TV_N = 2 ** 22
_TAIL_EPS = 1e-14

REPORT_COLUMNS = ("n", "eta", "kind", "value", "trunc_bound", "ms")


@dataclass(frozen=True)
class RateRow:
    n: float
    eta: float
    kind: str
    value: float
    trunc_bound: float
    ms: float


@dataclass(frozen=True)
class DistanceReport:
    """Rows of distance measurements, strictly increasing in n."""

    rows: tuple[RateRow, ...]

    def __post_init__(self):
        ns = [r.n for r in self.rows]
        if any(b <= a for a, b in zip(ns, ns[1:])):
            raise ValueError("report rows must be strictly increasing in n")
        for r in self.rows:
            if not 0.0 <= r.value <= 1.0:
                raise ValueError(f"distance out of [0, 1] at n={r.n}")

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(",".join(REPORT_COLUMNS) + "\n")
        for r in self.rows:
            buf.write(",".join(_num(v) for v in
                               (r.n, r.eta, r.kind, r.value,
                                r.trunc_bound, r.ms)) + "\n")
        return buf.getvalue()

    def to_json(self) -> str:
        rows = [{c: getattr(r, f) for c, f in
                 zip(REPORT_COLUMNS, ("n", "eta", "kind", "value",
                                      "trunc_bound", "ms"))}
                for r in self.rows]
        return json.dumps({"rows": rows}, indent=2)

    def zero_ms(self) -> "DistanceReport":
        """Copy with wall times zeroed, for byte-reproducible emission."""
        return DistanceReport(tuple(
            RateRow(r.n, r.eta, r.kind, r.value, r.trunc_bound, 0.0)
            for r in self.rows))


def _num(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, (int, np.integer)) or (isinstance(v, float)
                                            and v.is_integer()):
        return str(int(v))
    return format(v, ".17g")


def tv_distance(p: IntPmf, q: IntPmf) -> float:
    """d_TV(p, q) = (1/2) sum_j |p({j}) - q({j})| over the union support."""
    lo = min(p.offset, q.offset)
    hi = max(p.support_max, q.support_max)
    ap = np.zeros(hi - lo + 1)
    aq = np.zeros(hi - lo + 1)
    ap[p.offset - lo: p.offset - lo + len(p.masses)] = p.masses
    aq[q.offset - lo: q.offset - lo + len(q.masses)] = q.masses
    return 0.5 * float(np.abs(ap - aq).sum())


def ks_discrete_vs_continuous(jumps, cdf) -> float:
    """Exact KS distance between a step CDF and a continuous CDF.

    ``jumps`` is a sorted sequence of (point, cdf-after-jump) pairs (or a
    pair of parallel arrays). Both one-sided gaps are checked at every jump,
    which attains the supremum for step-vs-continuous pairs.
    """
    if isinstance(jumps, tuple) and len(jumps) == 2 and np.ndim(jumps[0]) == 1:
        pts = np.asarray(jumps[0], dtype=float)
        after = np.asarray(jumps[1], dtype=float)
    else:
        pairs = list(jumps)
        pts = np.array([p for p, _ in pairs], dtype=float)
        after = np.array([c for _, c in pairs], dtype=float)
    if pts.size == 0:
        raise ValueError("need at least one jump")
    if np.any(np.diff(pts) <= 0):
        raise ValueError("jump points must be sorted strictly increasing")
    if np.any(np.diff(after) < 0) or after[-1] > 1.0 + 1e-12:
        raise ValueError("cdf-after values must be nondecreasing and <= 1")
    vals = np.asarray(cdf(pts), dtype=float)
    if vals.shape != pts.shape:
        vals = np.array([float(cdf(x)) for x in pts])
    before = np.concatenate(([0.0], after[:-1]))
    return max(float(np.abs(after - vals).max()),
               float(np.abs(before - vals).max()))


def empirical_cdf_jumps(sample) -> tuple[np.ndarray, np.ndarray]:
    """Jump representation (points, cdf-after) of an empirical CDF."""
    s = np.sort(np.asarray(sample, dtype=float))
    pts = np.unique(s)
    return pts, np.searchsorted(s, pts, side="right") / s.size


def limit_pmf_window(eta: float, lo: int = -8, hi: int = 10) -> tuple[int, np.ndarray, float]:
    """Q_eta masses on a window wide enough that both tails are < 1e-14.

    Returns (lo, masses, outside) where ``outside`` is the exact mass the
    law carries off-window, to be carried as certified slack.
    """
    while q_cdf(eta, lo - 1) >= _TAIL_EPS:
        lo -= 4
    while q_tail(eta, hi + 1) >= _TAIL_EPS:
        hi += 4
    masses = np.array([q_pmf(eta, j) for j in range(lo, hi + 1)])
    outside = q_cdf(eta, lo - 1) + q_tail(eta, hi + 1)
    return lo, masses, outside


def tv_vs_limit(pmf: IntPmf, eta: float) -> tuple[float, float]:
    """Certified d_TV(pmf, Q_eta): (upper bound, slack included in it)."""
    lo, qm, outside = limit_pmf_window(eta, min(pmf.support_min, -8),
                                       max(pmf.support_max, 10))
    qpmf = IntPmf(lo, qm, truncation=outside)
    slack = 0.5 * (outside + pmf.truncation)
    return tv_distance(pmf, qpmf) + slack, slack


def tv_to_limit(n: int) -> tuple[float, float]:
    """d_TV between the exact centered count law at n and Q_{frac(log2 n)}.

    The result includes the certified truncation slack of both sides, so it
    is a sound upper bound on the true distance.
    """
    if not 1 <= n <= MAX_TV_N:
        raise ValueError(f"n must be in [1, {MAX_TV_N}], got {n}")
    law, eta = centered_count_distribution(n)
    tv, _ = tv_vs_limit(law, eta)
    return tv, eta


def pmf_gap_bound_check(t: int, j: int) -> tuple[float, float]:
    """Pointwise gap |P(N_t - k(t) = j) - Q_eta({j})| and its KS bound.

    The bound is phi(k+j) + phi(k+j+1) with phi(m) the exact KS distance of
    the scaled sum at m, plus both reported truncation bounds so the
    comparison is certified. Callers assert lhs <= rhs.
    """
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    k = floor_log2(t)
    eta = frac_log2(t)
    if k + j < 1:
        raise ValueError(f"k(t) + j must be >= 1, got {k + j}")
    law = depth_distribution_exact(t)
    lhs = abs(law.prob(k + j) - q_pmf(eta, j))
    phi1, tb1 = ks_scaled_sum_exact(k + j)
    phi2, tb2 = ks_scaled_sum_exact(k + j + 1)
    return lhs, phi1 + phi2 + tb1 + tb2


KINDS = ("tv_limit", "ks_scaled")


def rate_report(n_grid, kind: str) -> DistanceReport:
    """One distance row per grid point; grid must be strictly increasing."""
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")
    grid = [int(n) for n in n_grid]
    rows = []
    for n in grid:
        t0 = time.perf_counter()
        if kind == "tv_limit":
            law, eta = centered_count_distribution(n)
            value, slack = tv_vs_limit(law, eta)
            trunc = slack
        else:
            value, trunc = ks_scaled_sum_exact(n)
            eta = 0.0
        ms = (time.perf_counter() - t0) * 1e3
        rows.append(RateRow(n, eta, kind, value, trunc, ms))
    return DistanceReport(tuple(rows))


def check_rate_report(report: DistanceReport) -> list[str]:
    """Monotone-proxy assertions for a rate report; empty list means pass.

    tv_limit: values strictly decreasing, and value * n^0.9 decreasing from
    n = 256 on. ks_scaled: values strictly decreasing, and value * 2^n / n
    never above its value at the first grid point.
    """
    problems = []
    rows = report.rows
    if not rows:
        return problems
    kind = rows[0].kind
    for a, b in zip(rows, rows[1:]):
        if not b.value < a.value:
            problems.append(
                f"value not strictly decreasing at n={b.n:g} "
                f"({b.value:.6g} >= {a.value:.6g})")
    if kind == "tv_limit":
        scaled = [(r.n, r.value * r.n ** 0.9) for r in rows if r.n >= 256]
        for (na, va), (nb, vb) in zip(scaled, scaled[1:]):
            if not vb < va:
                problems.append(
                    f"value * n^0.9 not decreasing at n={nb:g} "
                    f"({vb:.6g} >= {va:.6g})")
    elif kind == "ks_scaled" and rows:
        ref = rows[0].value * 2.0 ** rows[0].n / rows[0].n
        for r in rows[1:]:
            sc = r.value * 2.0 ** r.n / r.n
            if sc > ref:
                problems.append(
                    f"value * 2^n / n exceeds first-row level at n={r.n:g} "
                    f"({sc:.6g} > {ref:.6g})")
    return problems
