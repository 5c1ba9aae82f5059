"""Van Hove averaging regions, cluster counting, and frequency estimation.

freq(P) and the single-orbit freq'(P) share one estimator; they differ
only in the offset set (freq' is offsets = [0]).  Counting is exact
integer work on float positions with the global tolerance; at desk scale
all bundled sources keep distinct coordinates far above TOL_EQ.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass

import numpy as np

from .coords import TOL_EQ, as_float
from .geometry import Box, Cluster, Interval, boundary_shell_volume


@dataclass
class VanHoveSpec:
    """Centered closed cubes F_n = [-n, n]^d on a geometric schedule.

    Vol(F_n - F_n) = 2^d Vol(F_n), so K = 2^d works in the difference-set
    condition, and the union of the schedule exhausts R^d.
    """

    n0: float = 125.0
    doublings: int = 4
    dim: int = 1

    def schedule(self):
        return [self.n0 * 2 ** k for k in range(self.doublings + 1)]

    @property
    def K(self) -> float:
        return 2.0 ** self.dim

    def region(self, n: float):
        if self.dim == 1:
            return Interval(-n, n)
        return Box((-n,) * self.dim, (n,) * self.dim)


def van_hove_region(spec: VanHoveSpec, n: float, rs=(1.0, 10.0)):
    """The cube F_n plus the boundary ratios Vol((dF_n)^{+r})/Vol(F_n)."""
    region = spec.region(n)
    vol = region.volume()
    ratios = {float(r): boundary_shell_volume(region, float(r)) / vol for r in rs}
    return region, ratios, spec.K


# ---------------------------------------------------------------------------
# counting


def _in_sorted_1d(pos: np.ndarray, targets: np.ndarray, tol: float = TOL_EQ) -> np.ndarray:
    """Boolean membership of targets in a sorted 1D position array."""
    if len(pos) == 0:
        return np.zeros(len(targets), dtype=bool)
    idx = np.searchsorted(pos, targets)
    ok = np.zeros(len(targets), dtype=bool)
    for shift in (-1, 0):
        j = np.clip(idx + shift, 0, len(pos) - 1)
        ok |= np.abs(pos[j] - targets) <= tol
    return ok


def _count_in_patch(patch, P: Cluster, tol: float = TOL_EQ) -> int:
    """L_P over one patch: translates v with v + P inside the patch."""
    if P.is_empty():
        raise ValueError("cannot count the empty cluster")
    if P.m != patch.m or P.dim != patch.dim:
        raise ValueError("cluster shape does not match the point set")
    anchor = P.anchor_point()
    anchor_color = None
    for i, part in enumerate(P.parts):
        if part and all(as_float(a) == as_float(b) for a, b in zip(part[0], anchor)):
            anchor_color = i
            break
    if anchor_color is None:  # lex-min support point always belongs to some part
        raise AssertionError("anchor color not found")
    if patch.dim == 1:
        base = patch.positions(anchor_color)
        cand = base - as_float(anchor[0])
        mask = np.ones(len(cand), dtype=bool)
        for i, part in enumerate(P.parts):
            pos_i = patch.positions(i)
            for p in part:
                if i == anchor_color and as_float(p[0]) == as_float(anchor[0]):
                    continue
                delta = as_float(p[0])
                mask &= _in_sorted_1d(pos_i, cand + delta, tol)
                if not mask.any():
                    return 0
        return int(mask.sum())
    # d = 2: KD-tree membership per required offset
    from scipy.spatial import cKDTree

    base = patch.positions(anchor_color)
    if len(base) == 0:
        return 0
    av = np.array([as_float(c) for c in anchor])
    cand = base - av
    mask = np.ones(len(cand), dtype=bool)
    trees = [cKDTree(patch.positions(i)) if len(patch.positions(i)) else None
             for i in range(patch.m)]
    for i, part in enumerate(P.parts):
        for p in part:
            pv = np.array([as_float(c) for c in p])
            if i == anchor_color and np.allclose(pv, av, atol=0):
                continue
            if trees[i] is None:
                return 0
            d, _ = trees[i].query(cand + pv, k=1)
            mask &= d <= tol
            if not mask.any():
                return 0
    return int(mask.sum())


def count_cluster(source, P: Cluster, region) -> int:
    """L_P(A) = number of translates x with x + P contained in A ∩ Λ."""
    patch = source.window(region)
    return _count_in_patch(patch, P)


# ---------------------------------------------------------------------------
# frequency estimation


@dataclass
class FrequencyEstimate:
    cluster: Cluster
    per_n: list          # [(n, mean ratio over offsets)]
    per_offset: list     # [(offset, ratio)] at the largest n
    value: float         # point estimate at the largest n
    uniformity_gap: float
    cauchy_gap: float

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "uniformity_gap": self.uniformity_gap,
            "cauchy_gap": self.cauchy_gap,
            "per_n": [[n, v] for n, v in self.per_n],
        }


def halton(count: int, base: int = 2, start: int = 1) -> np.ndarray:
    """Van der Corput / Halton low-discrepancy points in [0, 1)."""
    out = np.empty(count)
    for k in range(count):
        i, f, x = start + k, 1.0, 0.0
        while i > 0:
            f /= base
            x += f * (i % base)
            i //= base
        out[k] = x
    return out


def default_offsets(count: int, span: float, dim: int = 1):
    """Low-discrepancy probe offsets in [0, span]^d."""
    if dim == 1:
        return [(float(x),) for x in halton(count) * span]
    xs, ys = halton(count, 2), halton(count, 3)
    return [(float(x * span), float(y * span)) for x, y in zip(xs, ys)]


def estimate_frequency(source, P: Cluster, spec: VanHoveSpec, offsets,
                       threads: int = 1) -> FrequencyEstimate:
    """Per-offset, per-n counting ratios L_P(x + F_n)/Vol(F_n).

    The point estimate is the offset average at the largest n; the
    uniformity gap (max offset deviation) is the finite UCF diagnostic.
    Use offsets=[(0,)] for the single-orbit estimator freq'.  Counting
    over the (n, offset) grid is embarrassingly parallel; `threads`
    bounds the pool and cannot change the results (integer counts,
    collected by index).
    """
    if not offsets:
        raise ValueError("offsets must be nonempty (use [(0,)] for freq')")
    offsets = [o if isinstance(o, (tuple, list)) else (o,) for o in offsets]
    schedule = spec.schedule()
    n_max = schedule[-1]
    span = max(max(abs(as_float(c)) for c in o) for o in offsets) if offsets else 0.0
    sup = P.support()
    reach = max(
        (max(abs(as_float(c)) for c in p) for p in sup), default=0.0
    )
    master_region = spec.region(n_max + span + reach + 1.0)
    patch = source.window(master_region)

    grid = [(n, off) for n in schedule for off in offsets]

    def one(args):
        n, off = args
        region = spec.region(n).translate(off)
        return _count_in_patch(patch.restrict(region), P)

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            counts = list(pool.map(one, grid))
    else:
        counts = [one(g) for g in grid]

    per_n = []
    per_offset_last = []
    rows = []  # (n, offset, count, ratio)
    idx = 0
    for n in schedule:
        vol = spec.region(n).volume()
        vals = []
        for off in offsets:
            c = counts[idx]
            idx += 1
            ratio = c / vol
            vals.append(ratio)
            rows.append((n, off, c, ratio))
            if n == n_max:
                per_offset_last.append((off, ratio))
        per_n.append((n, float(np.mean(vals))))
    value = per_n[-1][1]
    uniformity_gap = max(abs(r - value) for _, r in per_offset_last)
    cauchy_gap = abs(per_n[-1][1] - per_n[-2][1]) if len(per_n) >= 2 else 0.0
    est = FrequencyEstimate(
        cluster=P,
        per_n=per_n,
        per_offset=per_offset_last,
        value=value,
        uniformity_gap=uniformity_gap,
        cauchy_gap=cauchy_gap,
    )
    est._rows = rows
    return est


def write_frequency_csv(est: FrequencyEstimate, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["n", "offset", "count", "ratio"])
        for n, off, c, ratio in est._rows:
            w.writerow(["%.17g" % n, ";".join("%.17g" % as_float(x) for x in off),
                        c, "%.17g" % ratio])


def write_frequency_json(est: FrequencyEstimate, path):
    with open(path, "w") as fh:
        json.dump(est.to_json(), fh, indent=1, sort_keys=True)
        fh.write("\n")
