"""Exact rate formulas, convex envelopes and the computable gap checks.

Every value is a Fraction; floats only appear when a curve is written out.
Memory M is measured in files. Grids used below:

* private scheme and the NK-user building block: M = t/K, t = 0..NK
* K-user building block and the uncoded MN scheme: M = jN/K, j = 0..K
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

from .combinatorics import binomial
from .yma import yma_rate

DENSE_POINTS = 1000

CSV_COLUMNS = ["M", "R_private", "R_private_env", "R_yma_K", "R_yma_NK", "R_mn_K",
               "R_mn_lin_K", "cutset", "f1", "f2", "trivial"]


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class RateCurve:
    """Piecewise-linear curve through (M, R) points with strictly increasing M."""

    label: str
    points: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        if not self.points:
            raise ValueError("a curve needs at least one point")
        ms = [m for m, _ in self.points]
        if any(a >= b for a, b in zip(ms, ms[1:])):
            raise ValueError(f"{self.label}: memory points must be strictly increasing")

    @property
    def grid(self) -> list[Fraction]:
        return [m for m, _ in self.points]

    def __call__(self, m) -> Fraction:
        m = _frac(m)
        pts = self.points
        if not pts[0][0] <= m <= pts[-1][0]:
            raise ValueError(f"{self.label}: M={m} outside [{pts[0][0]}, {pts[-1][0]}]")
        lo, hi = 0, len(pts) - 1
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if pts[mid][0] <= m:
                lo = mid
            else:
                hi = mid
        (m0, r0), (m1, r1) = pts[lo], pts[hi]
        if m == m0:
            return r0
        return r0 + (r1 - r0) * (m - m0) / (m1 - m0)


def rate_private(n_files: int, n_users: int, t: int) -> Fraction:
    """(C(NK, t+1) - C(NK-N, t+1)) / C(NK, t) at M = t/K."""
    nk = n_files * n_users
    if not 0 <= t <= nk:
        raise ValueError(f"t={t} outside [0, {nk}]")
    return Fraction(binomial(nk, t + 1) - binomial(nk - n_files, t + 1), binomial(nk, t))


def _cross(o, a, b) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def envelope(points: Sequence[tuple], label: str = "envelope") -> RateCurve:
    """Lower convex envelope (monotone chain lower hull) of the points."""
    pts = sorted((_frac(m), _frac(r)) for m, r in points)
    if len(pts) < 2:
        raise ValueError("the envelope needs at least 2 points")
    if any(a[0] == b[0] for a, b in zip(pts, pts[1:])):
        raise ValueError("points must have distinct memory values")
    hull: list = []
    for p in pts:
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], p) <= 0:
            hull.pop()
        hull.append(p)
    return RateCurve(label, tuple(hull))


def private_grid(n_files: int, n_users: int) -> list[tuple[Fraction, Fraction]]:
    return [(Fraction(t, n_users), rate_private(n_files, n_users, t))
            for t in range(n_files * n_users + 1)]


def private_envelope(n_files: int, n_users: int) -> RateCurve:
    return envelope(private_grid(n_files, n_users), "R_private_env")


def _grid_index(n_files: int, n_users: int, m) -> int:
    """j with M = jN/K; error when M is off that grid."""
    j = _frac(m) * n_users / n_files
    if j.denominator != 1 or not 0 <= j <= n_users:
        raise ValueError(f"M={m} is not on the grid {{0, N/K, ..., N}} for N={n_files}, K={n_users}")
    return int(j)


def rate_yma(n_files: int, n_users: int, m) -> Fraction:
    """Building-block rate at M = r N/K, r integer in [0, K]."""
    return yma_rate(n_files, n_users, _grid_index(n_files, n_users, m))


def rate_mn(n_files: int, n_users: int, m) -> Fraction:
    """K (1 - M/N) min(1/(1 + KM/N), N/K) on the grid M = jN/K."""
    _grid_index(n_files, n_users, m)
    m = _frac(m)
    n, k = n_files, n_users
    return k * (1 - m / n) * min(1 / (1 + k * m / n), Fraction(n, k))


def _grid_curve(n_files: int, n_users: int, fn: Callable, label: str) -> RateCurve:
    return RateCurve(label, tuple((Fraction(j * n_files, n_users), fn(n_files, n_users, Fraction(j * n_files, n_users)))
                                  for j in range(n_users + 1)))


def rate_mn_lin(n_files: int, n_users: int, m) -> Fraction:
    """Piecewise-linear interpolation of rate_mn between adjacent grid points."""
    m = _frac(m)
    if not 0 <= m <= n_files:
        raise ValueError(f"M={m} outside [0, {n_files}]")
    return _grid_curve(n_files, n_users, rate_mn, "R_mn_lin")(m)


def rate_yma_lin(n_files: int, n_users: int, m) -> Fraction:
    return _grid_curve(n_files, n_users, rate_yma, "R_yma_lin")(_frac(m))


def cutset_bound(n_files: int, m) -> Fraction:
    return max(Fraction(0), 1 - _frac(m) / n_files)


def f1_bound(n_files: int, m) -> Fraction:
    m = _frac(m)
    if m == 0:
        raise ValueError("f1 is undefined at M = 0")
    return n_files / m - Fraction(1, 2)


def f2_bound(n_files: int, m) -> Fraction:
    return 2 * (1 - _frac(m) / n_files)


def trivial_rate(n_files: int, m) -> Fraction:
    return n_files - _frac(m)


# --- gap report --------------------------------------------------------------


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class RatioPoint:
    m: Fraction
    ratio: Fraction | None
    tag: str


@dataclass
class GapReport:
    n_files: int
    n_users: int
    checks: list[Check] = field(default_factory=list)
    ratios: list[RatioPoint] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> Check:
        return next(c for c in self.checks if c.name == name)

    def add(self, name: str, passed: bool, detail: str = ""):
        self.checks.append(Check(name, bool(passed), detail))

    def render(self) -> str:
        lines = [f"gap report for N={self.n_files}, K={self.n_users}"]
        for c in self.checks:
            lines.append(f"  [{'PASS' if c.passed else 'FAIL'}] {c.name}" + (f": {c.detail}" if c.detail else ""))
        if self.ratios:
            lines.append("  ratios:")
            for r in self.ratios:
                value = "undefined (0/0)" if r.ratio is None else f"{r.ratio} ({float(r.ratio):.6f})"
                lines.append(f"    M={r.m}: {value} [{r.tag}]")
        lines.append(f"result: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines)


def dense_grid(n_files: int, points: int = DENSE_POINTS) -> list[Fraction]:
    return [Fraction(n_files * i, points - 1) for i in range(points)]


def _mn_case(n_files: int, n_users: int, m: Fraction) -> tuple[str, Fraction]:
    """Case tag and closed-form MN(NK)/MN(K) ratio for N <= K."""
    n, k = n_files, n_users
    if m <= 1 - Fraction(n, k):
        return "case 1", Fraction(1)
    if m <= 1 - Fraction(1, k):
        return "case 2", Fraction(n, k) + m
    return "case 3", Fraction(n - 1) / (1 + k * m) + 1


def theorem2_report(n_files: int, n_users: int, dense_points: int = DENSE_POINTS) -> GapReport:
    n, k = n_files, n_users
    nk = n * k
    rep = GapReport(n, k)
    fine = [Fraction(t, k) for t in range(nk + 1)]  # contains the coarse grid
    coarse = [Fraction(j * n, k) for j in range(k + 1)]
    env = private_envelope(n, k)

    # (i) envelope equals the NK-user building block everywhere on the grid
    bad = [m for m in fine if env(m) != rate_yma(n, nk, m)]
    rep.add("envelope equals R_yma(N, NK, M)", not bad, f"mismatch at {bad}" if bad else f"{len(fine)} grid points")
    bad = [m for m in fine if rate_private(n, k, int(m * k)) != env(m)]
    rep.add("envelope equals piecewise-linear interpolation", not bad,
            f"mismatch at {bad}" if bad else "all grid points are envelope points")

    # (ii) building block at NK users never exceeds MN at NK users
    bad = [m for m in fine if rate_yma(n, nk, m) > rate_mn(n, nk, m)]
    rep.add("R_yma(N, NK, M) <= R_mn(N, NK, M)", not bad, f"violated at {bad}" if bad else "")

    # (iii) N <= K: MN(NK)/MN(K) <= 2 on the coarse grid, per case
    if n <= k:
        worst = Fraction(0)
        ok = closed_ok = True
        for m in coarse:
            case, closed = _mn_case(n, k, m)
            den = rate_mn(n, k, m)
            if den == 0:
                rep.ratios.append(RatioPoint(m, None, case))
                continue
            ratio = rate_mn(n, nk, m) / den
            rep.ratios.append(RatioPoint(m, ratio, case))
            worst = max(worst, ratio)
            ok &= ratio <= 2
            # case 1 derivation assumes N > 1
            if not (case == "case 1" and n == 1):
                closed_ok &= ratio == closed
        rep.add("R_mn(N, NK, M) / R_mn(N, K, M) <= 2 (N <= K)", ok, f"max ratio {worst}")
        rep.add("per-case closed forms of the MN ratio", closed_ok)

    # (iv) N > K, M >= N/K: private rate within factor 2 of the K-user block
    if n > k:
        worst = Fraction(0)
        ok = chain_ok = True
        for j in range(1, k):
            m = Fraction(j * n, k)
            r1, r2 = j * n, j
            priv, yma_k = rate_private(n, k, r1), rate_yma(n, k, m)
            ratio = priv / yma_k
            rep.ratios.append(RatioPoint(m, ratio, "N > K"))
            worst = max(worst, ratio)
            ok &= ratio <= 2
            chain_ok &= (yma_k == Fraction(k - r2, r2 + 1)
                         and priv <= Fraction(nk - r1, r1 + 1)
                         and Fraction((nk - r1) * (r2 + 1), (r1 + 1) * (k - r2)) == Fraction(n * (r2 + 1), n * r2 + 1)
                         and Fraction(n * (r2 + 1), n * r2 + 1) == 1 + Fraction(n - 1, n * r2 + 1) <= 2)
        rep.ratios.append(RatioPoint(Fraction(n), None, "N > K"))
        rep.add("R_private / R_yma(N, K, M) <= 2 for M >= N/K (N > K)", ok, f"max ratio {worst}")
        rep.add("intermediate bounds of the N > K chain", chain_ok)
        bad = [m for m in fine if m >= Fraction(n, k) and env(m) > 2 * rate_yma_lin(n, k, m)]
        rep.add("envelope <= 2 * interpolated R_yma(N, K, M) for M >= N/K", not bad,
                f"violated at {bad}" if bad else "")

    # (v) optimal tail: both corner points sit on the cut-set line
    m_tail = Fraction(nk - 1, k)
    tail = rate_private(n, k, nk - 1)
    rep.add("R_private((NK-1)/K) = 1/(NK) = cut-set",
            tail == Fraction(1, nk) == cutset_bound(n, m_tail), f"R = {tail}")
    rep.add("R_private(N) = 0 = cut-set", rate_private(n, k, nk) == 0 == cutset_bound(n, n))
    rep.add("cut-set <= envelope on the grid", all(cutset_bound(n, m) <= env(m) for m in fine))

    # (vi) interpolated MN: non-increasing on [0, N], convex on [1 - N/K, N]
    dense = dense_grid(n, dense_points)
    vals = [rate_mn_lin(n, k, m) for m in dense]
    mono = all(b - a <= 0 for a, b in zip(vals, vals[1:]))
    rep.add("R_mn_lin non-increasing on [0, N]", mono, f"{dense_points} points")
    lo = max(Fraction(0), 1 - Fraction(n, k))
    sub = [v for m, v in zip(dense, vals) if m >= lo]
    convex = all(a - 2 * b + c >= 0 for a, b, c in zip(sub, sub[1:], sub[2:]))
    rep.add(f"R_mn_lin convex on [{lo}, N]", convex, f"{len(sub)} points")

    if n <= k:
        _appendix_regions(rep, n, k, dense, vals)
    return rep


def _appendix_regions(rep: GapReport, n: int, k: int, dense, vals):
    """Upper-bound steps on R_mn_lin used with the converse, per memory region."""
    # Region I, 0 <= M <= 1: R_mn_lin <= N (the N/4 converse is cited only)
    rep.add("region I: R_mn_lin <= N on [0, 1]", all(v <= n for m, v in zip(dense, vals) if m <= 1))
    # Region II, 1 <= M <= N/2: R_mn_lin(M) <= R_mn(N t0 / K) <= f1(M), t0 = floor(KM/N)
    step = bound = True
    for m, v in zip(dense, vals):
        if 1 <= m <= Fraction(n, 2):
            corner = rate_mn(n, k, Fraction(math.floor(k * m / n) * n, k))
            step &= v <= corner
            bound &= corner <= f1_bound(n, m)
    rep.add("region II: R_mn_lin(M) <= R_mn(N t0/K)", step)
    rep.add("region II: R_mn(N t0/K) <= f1(M)", bound)
    # Region III, M >= N t0/K with t0 = floor(K/2): R_mn_lin(M) <= lambda R_mn(N t0/K) <= f2(M)
    t0 = k // 2
    corner_m = Fraction(t0 * n, k)
    corner = rate_mn(n, k, corner_m)
    step = bound = True
    for m, v in zip(dense, vals):
        if m >= Fraction(n, 2):  # already >= N t0/K
            lam = (1 - m / n) / (1 - Fraction(t0, k))
            step &= v <= lam * corner
            bound &= lam * corner <= f2_bound(n, m)
    rep.add("region III: R_mn_lin(M) <= lambda R_mn(N t0/K)", step)
    rep.add("region III: lambda R_mn(N t0/K) <= f2(M)", bound)


# --- curves ------------------------------------------------------------------


def emit_curves(n_files: int, n_users: int, resolution: int | None = None) -> dict[str, list]:
    """Column name -> values on the grid M = j/resolution (default resolution K).

    Cells are None where a curve is undefined at that M.
    """
    n, k = n_files, n_users
    res = resolution or k
    ms = [Fraction(j, res) for j in range(n * res + 1)]
    env = private_envelope(n, k)

    def on_private_grid(m):
        t = m * k
        return rate_private(n, k, int(t)) if t.denominator == 1 else None

    def on_k_grid(fn, m):
        j = m * k / n
        return fn(n, k, m) if j.denominator == 1 else None

    def on_nk_grid(m):
        t = m * k
        return rate_yma(n, n * k, m) if t.denominator == 1 else None

    cols = {
        "M": ms,
        "R_private": [on_private_grid(m) for m in ms],
        "R_private_env": [env(m) for m in ms],
        "R_yma_K": [on_k_grid(rate_yma, m) for m in ms],
        "R_yma_NK": [on_nk_grid(m) for m in ms],
        "R_mn_K": [on_k_grid(rate_mn, m) for m in ms],
        "R_mn_lin_K": [rate_mn_lin(n, k, m) for m in ms],
        "cutset": [cutset_bound(n, m) for m in ms],
        "f1": [f1_bound(n, m) if m > 0 else None for m in ms],
        "f2": [f2_bound(n, m) for m in ms],
        "trivial": [trivial_rate(n, m) for m in ms],
        # reference only: cited converse constant for 0 <= M <= 1, never checked
        "region1_converse": [Fraction(n, 4) if m <= 1 else None for m in ms],
    }
    return cols


def curves_as_rate_curves(cols: dict[str, list]) -> dict[str, RateCurve]:
    out = {}
    for name, values in cols.items():
        if name == "M":
            continue
        pts = tuple((m, v) for m, v in zip(cols["M"], values) if v is not None)
        if pts:
            out[name] = RateCurve(name, pts)
    return out


def _decimal(x: Fraction | None) -> str:
    return "" if x is None else format(float(x), ".12g")


def _exact(x: Fraction | None) -> str:
    return "" if x is None else str(x)


def write_csv(cols: dict[str, list], path: str | Path) -> tuple[Path, Path]:
    """Write the decimal CSV and a sibling ``.exact`` file with fraction strings."""
    path = Path(path)
    exact_path = path.with_suffix(".exact")
    rows = list(zip(*(cols[c] for c in CSV_COLUMNS)))
    for target, fmt in ((path, _decimal), (exact_path, _exact)):
        with open(target, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CSV_COLUMNS)
            for row in rows:
                w.writerow([fmt(x) for x in row])
    return path, exact_path
