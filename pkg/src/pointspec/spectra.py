"""Autocorrelation and diffraction estimators.

Two independent autocorrelation routes act as each other's oracle:

* autocorr_direct        finite-volume pair enumeration (the defining
                         self-convolution, volume-normalized)
* autocorr_from_frequencies   pair-cluster frequencies per difference
                         vector, one count per distinct (t, color pair)

Diffraction is probed by normalized exponential sums A_n(k); Bragg
candidates must survive a non-decay drift test across the averaging
schedule to be retained.  Smoothing kernels carry closed-form Fourier
transforms, and the Dworkin check compares the ergodic average of the
smoothed-density correlation against the smoothed autocorrelation.

All reductions use a fixed-order pairwise tree summation so results do
not depend on how work is split.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .coords import TOL_EQ, as_float, coord_key, is_exact_coord
from .geometry import Interval
from .stats import VanHoveSpec


def pairwise_sum(arr):
    """Deterministic pairwise (tree) reduction of a 1D array."""
    a = np.asarray(arr)
    if a.size == 0:
        return a.dtype.type(0) if a.dtype.kind in "fc" else 0.0
    while a.size > 1:
        n = a.size
        if n % 2:
            a = np.concatenate([a[: n - 1 : 2] + a[1::2], a[-1:]])
        else:
            a = a[0::2] + a[1::2]
    return a[0]


def validate_weights(w, m: int) -> np.ndarray:
    arr = np.asarray(w, dtype=complex)
    if arr.shape != (m,):
        raise ValueError("weight vector must have one entry per color (m=%d)" % m)
    if np.allclose(arr, 0):
        raise ValueError("weight vector must not be identically zero")
    return arr


# ---------------------------------------------------------------------------
# autocorrelation measures


@dataclass
class AutocorrelationMeasure:
    """Finitely supported t -> c(t), |t| <= radius, from one estimator run."""

    radius: float
    method: str
    n: float
    entries: dict = field(default_factory=dict)  # key -> [t, c]

    def add(self, t, c: complex):
        key = coord_key(t) if is_exact_coord(t) else coord_key(float(t))
        cur = self.entries.get(key)
        if cur is None:
            self.entries[key] = [t, c]
        else:
            cur[1] = cur[1] + c

    def items(self):
        """(t_float, c) pairs sorted by t."""
        out = [(as_float(t), c) for t, c in self.entries.values()]
        out.sort(key=lambda tc: tc[0])
        return out

    def coefficient(self, t) -> complex:
        key = coord_key(t) if is_exact_coord(t) else coord_key(float(t))
        cur = self.entries.get(key)
        if cur is not None:
            return cur[1]
        tf = as_float(t)
        for u, c in self.entries.values():
            if abs(as_float(u) - tf) <= TOL_EQ:
                return c
        return 0.0 + 0.0j

    def hermitian_defect(self) -> float:
        worst = 0.0
        for t, c in self.entries.values():
            worst = max(worst, abs(self.coefficient(-t if is_exact_coord(t) else -as_float(t))
                                   - np.conj(c)))
        return worst

    def max_difference(self, other: "AutocorrelationMeasure") -> float:
        keys = set(self.entries) | set(other.entries)
        worst = 0.0
        for k in keys:
            a = self.entries.get(k)
            b = other.entries.get(k)
            ca = a[1] if a else 0.0
            cb = b[1] if b else 0.0
            worst = max(worst, abs(ca - cb))
        return worst

    def scaled(self, alpha: complex) -> "AutocorrelationMeasure":
        out = AutocorrelationMeasure(self.radius, self.method + "*", self.n)
        for t, c in self.entries.values():
            out.add(t, c * (alpha * np.conj(alpha)))
        return out


def autocorr_direct(source, w, radius: float, spec: VanHoveSpec, n: float) -> AutocorrelationMeasure:
    """c(t) = (1/Vol F_n) sum over pairs x - y = t of w(x) conj(w(y))."""
    if radius <= 0:
        raise ValueError("radius must be positive")
    w = validate_weights(w, source.m)
    patch = source.window(spec.region(n))
    vol = spec.region(n).volume()
    meas = AutocorrelationMeasure(radius=radius, method="direct", n=n)
    exact = patch.exact
    # flatten support with colors, sorted by position
    pts = []
    for i in range(patch.m):
        for p in patch.parts[i]:
            pts.append((p[0], i))
    pts.sort(key=lambda pc: as_float(pc[0]))
    vals = np.array([as_float(p) for p, _ in pts])
    agg = {}
    for a_idx in range(len(pts)):
        xa, ia = pts[a_idx]
        lo = np.searchsorted(vals, vals[a_idx] - radius - TOL_EQ)
        hi = np.searchsorted(vals, vals[a_idx] + radius + TOL_EQ)
        for b_idx in range(lo, hi):
            xb, ib = pts[b_idx]
            t = xa - xb if exact else vals[a_idx] - vals[b_idx]
            key = coord_key(t)
            cur = agg.get(key)
            coef = w[ia] * np.conj(w[ib])
            if cur is None:
                agg[key] = [t, coef]
            else:
                cur[1] = cur[1] + coef
    for t, c in agg.values():
        meas.add(t, c / vol)
    return meas


def autocorr_from_frequencies(source, w, radius: float, spec: VanHoveSpec,
                              n: float) -> AutocorrelationMeasure:
    """c(t) = sum_{i,j} a_i conj(a_j) freq(two-point cluster at difference t).

    Differences are discovered on F_n; each (t, i, j) frequency is the
    translate count of the pair cluster (color-i point at 0, color-j
    point at -t) over F_n, volume-normalized.  The t = 0, i = j term uses
    the single-point frequency.
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    w = validate_weights(w, source.m)
    patch = source.window(spec.region(n))
    vol = spec.region(n).volume()
    exact = patch.exact
    positions = [patch.positions(i) for i in range(patch.m)]
    meas = AutocorrelationMeasure(radius=radius, method="from-frequencies", n=n)

    # discover occurring differences per color pair
    diffs = {}
    for i in range(patch.m):
        pts_i = patch.parts[i]
        vals_i = positions[i]
        for j in range(patch.m):
            vals_j = positions[j]
            pts_j = patch.parts[j]
            for a_idx in range(len(pts_i)):
                lo = np.searchsorted(vals_j, vals_i[a_idx] - radius - TOL_EQ)
                hi = np.searchsorted(vals_j, vals_i[a_idx] + radius + TOL_EQ)
                for b_idx in range(lo, hi):
                    t = (pts_i[a_idx][0] - pts_j[b_idx][0]) if exact \
                        else vals_i[a_idx] - vals_j[b_idx]
                    diffs.setdefault((i, j, coord_key(t)), t)

    for (i, j, _key), t in diffs.items():
        tf = as_float(t)
        if abs(tf) <= TOL_EQ and i == j:
            count = len(positions[i])  # degenerate pair: single-point frequency
        else:
            targets = positions[i] - tf
            count = _membership_count(positions[j], targets)
        meas.add(t, w[i] * np.conj(w[j]) * (count / vol))
    return meas


def _membership_count(pos: np.ndarray, targets: np.ndarray) -> int:
    if len(pos) == 0 or len(targets) == 0:
        return 0
    idx = np.searchsorted(pos, targets)
    ok = np.zeros(len(targets), dtype=bool)
    for sh in (-1, 0):
        jj = np.clip(idx + sh, 0, len(pos) - 1)
        ok |= np.abs(pos[jj] - targets) <= TOL_EQ
    return int(ok.sum())


def write_autocorr_csv(measures, path):
    with open(path, "w", newline="") as fh:
        wcsv = csv.writer(fh)
        wcsv.writerow(["t", "re_c", "im_c", "method"])
        for meas in measures:
            for t, c in meas.items():
                wcsv.writerow(["%.17g" % t, "%.17g" % c.real, "%.17g" % c.imag, meas.method])


# ---------------------------------------------------------------------------
# exponential sums and peak scan


def bragg_amplitude(source, w, k, spec: VanHoveSpec, n: float) -> complex:
    """A_n(k) = (1/Vol F_n) sum over points of w(color) e^{-2 pi i k.x}."""
    w = validate_weights(w, source.m)
    patch = source.window(spec.region(n))
    vol = spec.region(n).volume()
    pos, col = patch.all_positions()
    if len(pos) == 0:
        return 0.0 + 0.0j
    k = np.atleast_1d(np.asarray(k, dtype=float))
    phase = pos @ k if pos.ndim == 2 else pos * k[0]
    terms = w[col] * np.exp(-2j * np.pi * phase)
    return complex(pairwise_sum(terms)) / vol


def _amplitudes_grid(pos, wvals, ks, vol):
    """|A(k)| for many k at once (1D positions), chunked outer products."""
    out = np.empty(len(ks), dtype=complex)
    chunk = max(1, int(4e6 // max(len(pos), 1)))
    for s in range(0, len(ks), chunk):
        kk = ks[s: s + chunk]
        ph = np.exp(-2j * np.pi * np.outer(kk, pos))
        out[s: s + chunk] = ph @ wvals
    return out / vol


@dataclass
class PeakEntry:
    k: float
    amplitude: complex
    intensity: float
    n: float
    retained: bool


@dataclass
class DiffractionEstimate:
    entries: list
    k_range: tuple
    resolution: float
    n_schedule: list
    threshold: float
    drift_tol: float

    def retained(self):
        return [e for e in self.entries if e.retained]

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["k", "re_A", "im_A", "intensity", "n", "retained"])
            for e in self.entries:
                w.writerow(["%.17g" % e.k, "%.17g" % e.amplitude.real,
                            "%.17g" % e.amplitude.imag, "%.17g" % e.intensity,
                            "%.17g" % e.n, int(e.retained)])


def _golden_refine(fn, lo, hi, iters=60):
    """Golden-section maximization of fn on [lo, hi] (vectorized over rows)."""
    invphi = (math.sqrt(5.0) - 1) / 2
    a, b = np.array(lo, dtype=float), np.array(hi, dtype=float)
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = fn(c), fn(d)
    for _ in range(iters):
        swap = fc < fd
        a = np.where(swap, c, a)
        b = np.where(~swap, d, b)
        c_new = b - invphi * (b - a)
        d_new = a + invphi * (b - a)
        fc_keep = np.where(swap, fd, fc)
        c, d = c_new, d_new
        fc, fd = fn(c), fn(d)
    mid = 0.5 * (a + b)
    return mid, fn(mid)


def module_seed_candidates(source, k_lo: float, k_hi: float, coeff_bound: int = 12):
    """Fourier-module candidates (p + q tau)/sqrt(D) for exact cut-project sources."""
    f = getattr(source, "field", None)
    if f is None:
        return []
    root = math.sqrt(f.disc)
    out = set()
    for p in range(-coeff_bound, coeff_bound + 1):
        for q in range(-coeff_bound, coeff_bound + 1):
            k = (p + q * f.tau) / root
            if k_lo <= k <= k_hi:
                out.add(round(k, 12))
    return sorted(out)


def peak_scan(source, w, k_range, resolution: float, n_schedule, spec: VanHoveSpec = None,
              threshold_bump: float = 10.0, drift_tol: float = 0.2,
              seed_from_module: bool = True) -> DiffractionEstimate:
    """Locate non-decaying Bragg candidates of the weighted comb.

    Coarse-scan |A_{n1}|^2 on a k grid; runs above threshold (empirical
    noise floor + threshold_bump/(Vol F_{n1})^2) yield local-max
    candidates, refined by golden-section at n1; a candidate is retained
    only if its intensity never drops below (1 - drift_tol) of the
    previous schedule entry's value.  Exact cut-project sources also seed
    candidates from their Fourier module.
    """
    if len(n_schedule) < 2:
        raise ValueError("n_schedule needs at least two entries")
    if any(b <= a for a, b in zip(n_schedule, n_schedule[1:])):
        raise ValueError("n_schedule must be increasing")
    if spec is None:
        spec = VanHoveSpec()
    k_lo, k_hi = float(k_range[0]), float(k_range[1])
    w = validate_weights(w, source.m)
    n1 = n_schedule[0]
    patch1 = source.window(spec.region(n1))
    vol1 = spec.region(n1).volume()
    pos1, col1 = patch1.all_positions()
    wv1 = w[col1]

    ks = np.arange(k_lo, k_hi + resolution / 2, resolution)
    amps = _amplitudes_grid(pos1, wv1, ks, vol1)
    inten = np.abs(amps) ** 2
    noise = float(np.median(inten))
    threshold = noise + threshold_bump / vol1 ** 2

    above = inten > threshold
    cand = []
    for idx in range(len(ks)):
        if not above[idx]:
            continue
        left = inten[idx - 1] if idx > 0 else -1.0
        right = inten[idx + 1] if idx + 1 < len(ks) else -1.0
        if inten[idx] >= left and inten[idx] >= right:
            cand.append(ks[idx])
    if seed_from_module:
        cand.extend(module_seed_candidates(source, k_lo, k_hi))
    if not cand:
        return DiffractionEstimate([], (k_lo, k_hi), resolution, list(n_schedule),
                                   threshold, drift_tol)
    cand = np.array(sorted(cand))

    def fn1(kk):
        return np.abs(_amplitudes_grid(pos1, wv1, np.asarray(kk, dtype=float), vol1)) ** 2

    # peaks at n1 have width ~ 1/(2 n1); locate the main lobe on a fine grid
    # first (|A|^2 is not unimodal across a coarse-resolution bracket), then
    # golden-section inside one fine step
    fine_step = 0.25 / (2.0 * n1)
    offs = np.arange(-resolution, resolution + fine_step / 2, fine_step)
    fine_ks = (cand[:, None] + offs[None, :]).ravel()
    fine_int = fn1(fine_ks).reshape(len(cand), len(offs))
    k0 = cand + offs[np.argmax(fine_int, axis=1)]
    k_star, i_star = _golden_refine(fn1, k0 - fine_step, k0 + fine_step)

    # dedupe refined candidates within half a grid step
    order = np.argsort(k_star)
    uniq_k, uniq_i = [], []
    for idx in order:
        if uniq_k and abs(k_star[idx] - uniq_k[-1]) < resolution / 2:
            if i_star[idx] > uniq_i[-1]:
                uniq_k[-1], uniq_i[-1] = k_star[idx], i_star[idx]
            continue
        uniq_k.append(k_star[idx])
        uniq_i.append(i_star[idx])
    uniq_k = np.array(uniq_k)
    prev = np.array(uniq_i)
    keep = prev > threshold

    entries = []
    last_amp = None
    for n in n_schedule[1:]:
        patchn = source.window(spec.region(n))
        voln = spec.region(n).volume()
        posn, coln = patchn.all_positions()
        wvn = w[coln]
        ampn = _amplitudes_grid(posn, wvn, uniq_k, voln)
        inten_n = np.abs(ampn) ** 2
        keep &= inten_n >= (1.0 - drift_tol) * prev
        prev = inten_n
        last_amp = ampn
    n_last = n_schedule[-1]
    for j in range(len(uniq_k)):
        entries.append(PeakEntry(
            k=float(uniq_k[j]),
            amplitude=complex(last_amp[j]),
            intensity=float(abs(last_amp[j]) ** 2),
            n=n_last,
            retained=bool(keep[j]),
        ))
    entries.sort(key=lambda e: e.k)
    return DiffractionEstimate(entries, (k_lo, k_hi), resolution, list(n_schedule),
                               threshold, drift_tol)


# ---------------------------------------------------------------------------
# smoothing kernels


class SmoothingKernel:
    """Continuous compactly supported kernel with closed-form transform.

    Shapes: "triangle" and "cosine" (raised-cosine bump) on [-s, s], and
    "plateau" on an interval V with linear tapers of width zeta (equal to
    1 on the eroded interval, 0 outside V), the exact shape the
    smoothed-indicator bound calls for.
    """

    def __init__(self, shape: str, s: float = None, v_lo: float = None,
                 v_hi: float = None, zeta: float = None):
        self.shape = shape
        if shape in ("triangle", "cosine"):
            if not s or s <= 0:
                raise ValueError("support radius s must be positive")
            self.s = float(s)
            self.support = (-self.s, self.s)
        elif shape == "plateau":
            if v_lo is None or v_hi is None or zeta is None:
                raise ValueError("plateau kernel needs v_lo, v_hi, zeta")
            if not (0 < zeta < (v_hi - v_lo) / 2):
                raise ValueError("need 0 < zeta < |V|/2")
            self.v_lo, self.v_hi, self.zeta = float(v_lo), float(v_hi), float(zeta)
            self.support = (self.v_lo, self.v_hi)
        else:
            raise ValueError("unknown kernel shape %r" % shape)

    @property
    def half_width(self) -> float:
        lo, hi = self.support
        return max(abs(lo), abs(hi))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.shape == "triangle":
            return np.clip(1.0 - np.abs(x) / self.s, 0.0, None)
        if self.shape == "cosine":
            inside = np.abs(x) <= self.s
            return np.where(inside, 0.5 * (1.0 + np.cos(np.pi * x / np.where(inside, self.s, 1.0))), 0.0)
        up = np.clip((x - self.v_lo) / self.zeta, 0.0, 1.0)
        down = np.clip((self.v_hi - x) / self.zeta, 0.0, 1.0)
        return np.minimum(up, down)

    def fourier(self, k):
        """omega-hat(k) = integral of omega(x) e^{-2 pi i k x} dx, closed form."""
        k = np.asarray(k, dtype=float)
        if self.shape == "triangle":
            return self.s * np.sinc(k * self.s) ** 2  # np.sinc(x) = sin(pi x)/(pi x)
        if self.shape == "cosine":
            c = 1.0 / (2.0 * self.s)
            num = np.sinc(2.0 * self.s * k)
            den = 1.0 - (k / c) ** 2
            safe = np.abs(den) > 1e-12
            main = np.where(safe, self.s * num / np.where(safe, den, 1.0), 0.0)
            # removable singularity at k = +-c: limit s/2
            return np.where(safe, main, self.s / 2.0)
        # plateau = (1/zeta) box(plateau+zeta/2 span) * box(zeta), shifted
        L = (self.v_hi - self.v_lo) - self.zeta
        center = 0.5 * (self.v_lo + self.v_hi)
        mag = L * np.sinc(k * L) * np.sinc(k * self.zeta)
        return mag * np.exp(-2j * np.pi * k * center)

    def l2_norm_sq(self) -> float:
        if self.shape == "triangle":
            return 2.0 * self.s / 3.0
        if self.shape == "cosine":
            return 0.75 * self.s
        L = self.v_hi - self.v_lo
        return (L - 2 * self.zeta) + 2 * self.zeta / 3.0

    def autocorr(self, u, step_frac: float = 1e-3):
        """(omega * omega~)(u) by midpoint quadrature on the overlap."""
        u = np.atleast_1d(np.asarray(u, dtype=float))
        lo, hi = self.support
        width = hi - lo
        step = width * step_frac
        grid = np.arange(lo + step / 2, hi, step)
        base = self(grid)
        out = np.empty(len(u))
        for idx, uu in enumerate(u):
            shifted = self(grid - uu)
            out[idx] = float(np.dot(base, shifted)) * step
        return out


def triangle_kernel(s: float) -> SmoothingKernel:
    return SmoothingKernel("triangle", s=s)


def cosine_kernel(s: float) -> SmoothingKernel:
    return SmoothingKernel("cosine", s=s)


def plateau_kernel(v_lo: float, v_hi: float, zeta: float) -> SmoothingKernel:
    return SmoothingKernel("plateau", v_lo=v_lo, v_hi=v_hi, zeta=zeta)


# ---------------------------------------------------------------------------
# smoothed diffraction and the Dworkin check


@dataclass
class SmoothedDiffraction:
    bragg: list        # [(k, |omega-hat(k)|^2 * I)]
    profile: list      # [(x, gamma_omega(x))]


def smoothed_autocorr_profile(autocorr: AutocorrelationMeasure, kernel: SmoothingKernel, xs):
    """Real-space gamma_omega(x) = sum_t c(t) (omega * omega~)(x - t)."""
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    w = kernel.half_width
    if np.max(np.abs(xs)) + 2 * w > autocorr.radius + TOL_EQ:
        raise ValueError("kernel support exceeds the autocorrelation radius at the "
                         "requested x range")
    items = autocorr.items()
    ts = np.array([t for t, _ in items])
    cs = np.array([c for _, c in items], dtype=complex)
    out = np.zeros(len(xs), dtype=complex)
    for j, x in enumerate(xs):
        rel = x - ts
        mask = np.abs(rel) < 2 * w
        if mask.any():
            vals = kernel.autocorr(rel[mask])
            out[j] = np.dot(cs[mask], vals)
    return out


def smoothed_diffraction(autocorr: AutocorrelationMeasure, kernel: SmoothingKernel,
                         peaks=(), xs=()) -> SmoothedDiffraction:
    bragg = [(float(k), float(np.abs(kernel.fourier(k)) ** 2 * I)) for k, I in peaks]
    prof = []
    if len(xs):
        vals = smoothed_autocorr_profile(autocorr, kernel, xs)
        prof = [(float(x), complex(v)) for x, v in zip(xs, vals)]
    return SmoothedDiffraction(bragg=bragg, profile=prof)


@dataclass
class DworkinRow:
    x: float
    lhs: float
    rhs: float
    abs_diff: float
    rel_diff: float


@dataclass
class SpectralCheckReport:
    rows: list
    kernel: str
    n: float

    def max_rel_diff(self) -> float:
        return max((r.rel_diff for r in self.rows), default=0.0)

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["x", "lhs", "rhs", "abs_diff", "rel_diff"])
            for r in self.rows:
                w.writerow(["%.17g" % v for v in (r.x, r.lhs, r.rhs, r.abs_diff, r.rel_diff)])


def smoothed_density(source, w, kernel: SmoothingKernel, grid: np.ndarray) -> np.ndarray:
    """rho_omega(y) = sum_points w(color) omega(y - point) on a grid."""
    w = validate_weights(w, source.m)
    lo, hi = float(grid[0]), float(grid[-1])
    hw = kernel.half_width
    patch = source.window(Interval(lo - hw - 1.0, hi + hw + 1.0))
    step = grid[1] - grid[0]
    rho = np.zeros(len(grid), dtype=complex)
    for i in range(patch.m):
        pos = patch.positions(i)
        for p in pos:
            a = int(np.searchsorted(grid, p + kernel.support[0] - step))
            b = int(np.searchsorted(grid, p + kernel.support[1] + step))
            if b > a:
                rho[a:b] += w[i] * kernel(grid[a:b] - p)
    return rho


def dworkin_correlation(source, w, kernel: SmoothingKernel, x: float, spec: VanHoveSpec,
                        n: float, autocorr: AutocorrelationMeasure = None,
                        quad_step: float = None) -> DworkinRow:
    """One row of the spectral check at shift x.

    lhs: midpoint quadrature of (1/Vol F_n) int_{F_n} rho(x+y) conj(rho(y)) dy
    rhs: gamma_omega(x) from the frequency-route autocorrelation measure.
    """
    hw = kernel.half_width
    if quad_step is None:
        quad_step = (kernel.support[1] - kernel.support[0]) / 40.0  # = s/20 for radius-s kernels
    grid = np.arange(-n + quad_step / 2, n, quad_step)
    rho = smoothed_density(source, w, kernel, grid)
    rho_shift = smoothed_density(source, w, kernel, grid + x)
    prods = rho_shift * np.conj(rho)
    lhs = complex(pairwise_sum(prods)) * quad_step / (2.0 * n)
    if autocorr is None:
        radius = abs(x) + 2 * hw + 1.0
        autocorr = autocorr_from_frequencies(source, w, radius, spec, n)
    rhs = smoothed_autocorr_profile(autocorr, kernel, [x])[0]
    lhs_r, rhs_r = float(np.real(lhs)), float(np.real(rhs))
    abs_diff = abs(lhs - rhs)
    rel = abs_diff / max(abs(rhs), 1e-300)
    return DworkinRow(x=float(x), lhs=lhs_r, rhs=rhs_r, abs_diff=float(abs_diff),
                      rel_diff=float(rel))


def dworkin_report(source, w, kernel: SmoothingKernel, xs, spec: VanHoveSpec,
                   n: float) -> SpectralCheckReport:
    """Spectral check rows over sampled shifts, sharing one autocorrelation."""
    xs = [float(x) for x in xs]
    radius = max(abs(x) for x in xs) + 2 * kernel.half_width + 1.0
    ac = autocorr_from_frequencies(source, w, radius, spec, n)
    rows = [dworkin_correlation(source, w, kernel, x, spec, n, autocorr=ac) for x in xs]
    return SpectralCheckReport(rows=rows, kernel=kernel.shape, n=n)
