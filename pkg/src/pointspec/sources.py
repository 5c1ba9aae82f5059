"""Deterministic point-set generators served through window queries.

Every source is an infinite colored point set Lambda = (Lambda_i)_{i<=m}
exposed only through `window(region) -> MultiSetPatch`.  Queries are
deterministic and consistent across nested regions; no source ever holds
an infinite set in memory.

Bundled test beds:

* LatticeSource          periodic control (pure point, trivially)
* CutProjectSource       model sets; exact quadratic coordinates
* SubstitutionSource     one-sided fixed-point tilings (supp in [0, inf))
* PoissonSource          disordered negative control (not Delone)

The Fibonacci chain is available both ways (substitution and
cut-and-project) and the two constructions agree point-for-point with
colors on the positive axis, which the test suite checks exactly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .coords import (
    GOLDEN,
    TOL_EQ,
    QuadField,
    QuadNum,
    as_float,
    field_by_name,
    is_exact_coord,
)
from .geometry import Ball, Box, Interval, MultiSetPatch


class SourceError(ValueError):
    pass


def _require_bounded(region):
    for lo, hi in region.bounds():
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise SourceError("window region must be bounded")


class PointSource:
    """Base class: deterministic window-query interface."""

    id = "source"
    dim = 1
    m = 1
    coords = "float"  # or "exact"
    field = None
    seed = None

    def window(self, region) -> MultiSetPatch:
        _require_bounded(region)
        if region.dim != self.dim:
            raise SourceError("region dimension %d != source dimension %d"
                              % (region.dim, self.dim))
        parts = self._query(region)
        return MultiSetPatch(region, parts, self.dim, exact=(self.coords == "exact"))

    def _query(self, region):
        raise NotImplementedError


def window(source: PointSource, region) -> MultiSetPatch:
    """A ∩ Λ as a patch (boundary points included; regions are closed)."""
    return source.window(region)


# ---------------------------------------------------------------------------
# lattices


class LatticeSource(PointSource):
    """Points {B k : k in Z^d}, colored by (sum of integer coords) mod m."""

    def __init__(self, basis, colors: int = 1, id: str = None):
        basis = np.asarray(basis, dtype=float)
        if basis.ndim == 1:
            basis = basis.reshape(1, 1)
        if basis.shape[0] != basis.shape[1]:
            raise SourceError("basis must be square")
        if abs(np.linalg.det(basis)) < 1e-12:
            raise SourceError("basis is singular")
        self.basis = basis
        self.inv = np.linalg.inv(basis)
        self.dim = basis.shape[0]
        self.m = int(colors)
        if self.m < 1:
            raise SourceError("colors must be >= 1")
        self.coords = "float"
        self.id = id or ("lattice%dd" % self.dim)

    def _query(self, region):
        bounds = region.bounds()
        corners = np.array(np.meshgrid(*[(lo, hi) for lo, hi in bounds])).T.reshape(-1, self.dim)
        pre = corners @ self.inv.T
        klo = np.floor(pre.min(axis=0)).astype(int) - 1
        khi = np.ceil(pre.max(axis=0)).astype(int) + 1
        grids = np.meshgrid(*[np.arange(a, b + 1) for a, b in zip(klo, khi)], indexing="ij")
        ks = np.stack([g.ravel() for g in grids], axis=1)
        pts = ks @ self.basis.T
        parts = [[] for _ in range(self.m)]
        for k, p in zip(ks, pts):
            pt = tuple(float(c) for c in p)
            if region.contains_point(pt):
                parts[int(k.sum()) % self.m].append(pt)
        return parts


def lattice_source(basis, colors: int = 1, id: str = None) -> LatticeSource:
    return LatticeSource(basis, colors=colors, id=id)


def integer_lattice(spacing: float = 1.0, colors: int = 1) -> LatticeSource:
    return LatticeSource([[spacing]], colors=colors,
                         id="Z" if spacing == 1.0 else "lattice[%g]" % spacing)


# ---------------------------------------------------------------------------
# cut and project


@dataclass(frozen=True)
class CutProjectSpec:
    """Acceptance windows in internal space, one half-open interval per color.

    Points are x = a + b*tau (a, b integers); x is accepted with color i
    when its Galois conjugate x* lies in windows[i].  Windows must be
    pairwise disjoint.
    """

    field: QuadField
    windows: tuple  # tuple of Interval with exact endpoints

    def __post_init__(self):
        if not self.windows:
            raise SourceError("need at least one acceptance window")
        for w in self.windows:
            if w.volume() <= 0:
                raise SourceError("empty acceptance window")


class CutProjectSource(PointSource):
    def __init__(self, spec: CutProjectSpec, id: str = "cut_project"):
        self.spec = spec
        self.field = spec.field
        self.dim = 1
        self.m = len(spec.windows)
        self.coords = "exact"
        self.id = id
        f = self.field
        self._star_lo = min(as_float(w.lo) for w in spec.windows)
        self._star_hi = max(as_float(w.hi) for w in spec.windows)
        self._tau = f.tau
        self._tauc = f.tau_conj

    def _query(self, region):
        (lo, hi), = region.bounds()
        lo_x, hi_x = lo - TOL_EQ, hi + TOL_EQ
        f = self.field
        # x = a + b*tau in [lo, hi] and x* = a + b*tau' in the window band:
        # b = (x - x*) / (tau - tau'), then a is pinned by both constraints.
        span = self._tau - self._tauc
        b_lo = math.floor(min((lo_x - self._star_hi), (lo_x - self._star_lo)) / span) - 1
        b_hi = math.ceil(max((hi_x - self._star_lo), (hi_x - self._star_hi)) / span) + 1
        # closed float boundaries carry TOL_EQ slack (exact compare against
        # the float's rational value would resolve irrational ties arbitrarily)
        slack = Fraction(1, 10 ** 9)
        lo_exact = Fraction(lo) - slack
        hi_exact = Fraction(hi) + slack
        parts = [[] for _ in range(self.m)]
        for b in range(b_lo, b_hi + 1):
            a_min = math.floor(max(lo_x - b * self._tau, self._star_lo - b * self._tauc)) - 1
            a_max = math.ceil(min(hi_x - b * self._tau, self._star_hi - b * self._tauc)) + 1
            for a in range(a_min, a_max + 1):
                x = QuadNum(a, b, f)
                if x < lo_exact or x > hi_exact:
                    continue
                s = x.conj()
                for i, w in enumerate(self.spec.windows):
                    if w.contains_value(s):
                        parts[i].append((x,))
                        break
        return parts


def cut_project_source(spec: CutProjectSpec, id: str = "cut_project") -> CutProjectSource:
    return CutProjectSource(spec, id=id)


def fibonacci_cut_project(colors: int = 2) -> CutProjectSource:
    """The Fibonacci chain as a model set, exact golden-ratio coordinates.

    Acceptance windows (internal space): color 0 ('a', tile length tau)
    on [tau-2, tau-1), color 1 ('b', tile length 1) on [-1, tau-2).  With
    a single color the union window [-1, tau-1) is used.
    """
    f = GOLDEN
    w_a = Interval(QuadNum(-2, 1, f), QuadNum(-1, 1, f), True, False)
    w_b = Interval(QuadNum(-1, 0, f), QuadNum(-2, 1, f), True, False)
    if colors == 2:
        spec = CutProjectSpec(field=f, windows=(w_a, w_b))
    elif colors == 1:
        spec = CutProjectSpec(field=f, windows=(Interval(QuadNum(-1, 0, f), QuadNum(-1, 1, f), True, False),))
    else:
        raise SourceError("fibonacci supports 1 or 2 colors")
    return CutProjectSource(spec, id="fibonacci")


# ---------------------------------------------------------------------------
# substitutions


@dataclass(frozen=True)
class SubstitutionRule:
    """Inflation rule on letters with per-letter tile lengths.

    lengths must satisfy the Perron eigenvector equation exactly in exact
    mode: inflation * length(letter) = sum of lengths over the expansion
    word, with one common inflation factor.
    """

    letters: str
    expansions: tuple          # expansion word per letter, e.g. ("ab", "a")
    lengths: tuple             # QuadNum / int / float per letter
    color_of: tuple            # letter index -> color index
    field: QuadField = None

    def __post_init__(self):
        k = len(self.letters)
        if len(self.expansions) != k or len(self.lengths) != k or len(self.color_of) != k:
            raise SourceError("rule arrays must all have one entry per letter")
        for w in self.expansions:
            if not w or any(ch not in self.letters for ch in w):
                raise SourceError("expansion words must be nonempty over the alphabet")
        for L in self.lengths:
            if as_float(L) <= 0:
                raise SourceError("tile lengths must be positive")
        if not self._primitive():
            raise SourceError("substitution matrix is not primitive")

    @property
    def n_colors(self) -> int:
        return max(self.color_of) + 1

    def matrix(self) -> np.ndarray:
        k = len(self.letters)
        M = np.zeros((k, k), dtype=np.int64)
        idx = {ch: i for i, ch in enumerate(self.letters)}
        for j, w in enumerate(self.expansions):
            for ch in w:
                M[idx[ch], j] += 1
        return M

    def _primitive(self) -> bool:
        M = self.matrix()
        P = np.eye(len(self.letters), dtype=np.int64)
        for _ in range((len(self.letters) - 1) ** 2 + 1):
            P = np.minimum(P @ M, 1)
            if P.min() > 0:
                return True
        return False

    def inflation(self):
        """Common inflation factor; raises if lengths violate the eigen equation."""
        idx = {ch: i for i, ch in enumerate(self.letters)}
        lam = None
        exact = all(is_exact_coord(L) for L in self.lengths)
        for j, w in enumerate(self.expansions):
            total = self.lengths[idx[w[0]]]
            for ch in w[1:]:
                total = total + self.lengths[idx[ch]]
            if exact:
                # lam = total / length_j must be field-rational and shared
                cand = _exact_ratio(total, self.lengths[j], self.field)
                if lam is None:
                    lam = cand
                elif not _exact_eq(lam, cand):
                    raise SourceError("tile lengths are not a Perron eigenvector")
            else:
                cand = as_float(total) / as_float(self.lengths[j])
                if lam is None:
                    lam = cand
                elif abs(lam - cand) > 1e-9:
                    raise SourceError("tile lengths are not a Perron eigenvector")
        return lam


def _exact_eq(x, y) -> bool:
    d = x - y
    if isinstance(d, QuadNum):
        return d == 0
    return d == 0


def _exact_ratio(total, length, field):
    """total / length within Q(tau), assuming it exists."""
    if isinstance(length, QuadNum) or isinstance(total, QuadNum):
        f = field or (length.field if isinstance(length, QuadNum) else total.field)
        t = total if isinstance(total, QuadNum) else QuadNum(Fraction(total), 0, f)
        l = length if isinstance(length, QuadNum) else QuadNum(Fraction(length), 0, f)
        # divide via conjugate: 1/l = conj(l) / (l * conj(l)), the norm is rational
        norm = l * l.conj()
        assert isinstance(norm, QuadNum) and norm.b == 0
        inv = l.conj() * Fraction(1, 1) / Fraction(norm.a)
        return t * inv
    return Fraction(total) / Fraction(length)


class SubstitutionSource(PointSource):
    """Left tile endpoints of the one-sided fixed-point tiling from a seed letter.

    The support lies in [0, inf); window queries clip accordingly.
    """

    def __init__(self, rule: SubstitutionRule, seed_letter: str, id: str = "substitution"):
        if seed_letter not in rule.letters:
            raise SourceError("unknown seed letter %r" % seed_letter)
        if rule.expansions[rule.letters.index(seed_letter)][0] != seed_letter:
            raise SourceError("seed letter must begin its own expansion (legal fixed point)")
        rule.inflation()  # validates the eigenvector equation
        self.rule = rule
        self.seed_letter = seed_letter
        self.dim = 1
        self.m = rule.n_colors
        exact = all(is_exact_coord(L) for L in rule.lengths)
        self.coords = "exact" if exact else "float"
        self.field = rule.field
        self.id = id
        self._word = [rule.letters.index(seed_letter)]
        self._ends = None  # cumulative float endpoints, built lazily

    def _extend_to(self, length_needed: float):
        idx = {ch: i for i, ch in enumerate(self.rule.letters)}
        exp = [[idx[ch] for ch in w] for w in self.rule.expansions]
        lengths_f = [as_float(L) for L in self.rule.lengths]

        def total(word):
            return sum(lengths_f[i] for i in word)

        while total(self._word) < length_needed:
            self._word = [j for i in self._word for j in exp[i]]
        self._ends = None

    def _endpoints(self):
        if self._ends is None:
            lengths_f = [as_float(L) for L in self.rule.lengths]
            arr = np.array([lengths_f[i] for i in self._word])
            self._ends = np.concatenate([[0.0], np.cumsum(arr)])
        return self._ends

    def _query(self, region):
        (lo, hi), = region.bounds()
        if hi < -TOL_EQ:
            return [[] for _ in range(self.m)]
        self._extend_to(hi + max(as_float(L) for L in self.rule.lengths) + 1.0)
        ends = self._endpoints()
        i0 = int(np.searchsorted(ends, lo - TOL_EQ))
        i1 = int(np.searchsorted(ends, hi + TOL_EQ))
        parts = [[] for _ in range(self.m)]
        exact = self.coords == "exact"
        # exact cumulative positions for the needed slice only
        if exact:
            pos = _exact_prefix(self.rule, self._word, i1)
        for j in range(i0, min(i1, len(self._word))):
            x = pos[j] if exact else float(ends[j])
            if region.contains_value(x) if isinstance(region, Interval) else region.contains_point((x,)):
                parts[self.rule.color_of[self._word[j]]].append((x,))
        return parts


def _exact_prefix(rule: SubstitutionRule, word, upto: int):
    key = (id(word), upto)
    cache = getattr(rule, "_prefix_cache", None)
    if cache is not None and cache[0] == id(word) and len(cache[1]) >= upto + 1:
        return cache[1]
    pos = []
    cur = 0
    for i in word[: upto + 1]:
        pos.append(cur)
        cur = cur + rule.lengths[i]
    pos.append(cur)
    object.__setattr__(rule, "_prefix_cache", (id(word), pos))
    return pos


def substitution_source(rule: SubstitutionRule, seed_letter: str, id: str = "substitution") -> SubstitutionSource:
    return SubstitutionSource(rule, seed_letter, id=id)


def fibonacci_substitution() -> SubstitutionSource:
    """a -> ab, b -> a with exact lengths (tau, 1); colors: a=0, b=1."""
    f = GOLDEN
    rule = SubstitutionRule(
        letters="ab",
        expansions=("ab", "a"),
        lengths=(QuadNum(0, 1, f), QuadNum(1, 0, f)),
        color_of=(0, 1),
        field=f,
    )
    return SubstitutionSource(rule, "a", id="fibonacci-sub")


def thue_morse_source() -> SubstitutionSource:
    """a -> ab, b -> ba, unit tiles; colors: a=0, b=1."""
    rule = SubstitutionRule(
        letters="ab", expansions=("ab", "ba"), lengths=(1, 1), color_of=(0, 1),
    )
    return SubstitutionSource(rule, "a", id="thue-morse")


def period_doubling_source() -> SubstitutionSource:
    """a -> ab, b -> aa, unit tiles; colors: a=0, b=1."""
    rule = SubstitutionRule(
        letters="ab", expansions=("ab", "aa"), lengths=(1, 1), color_of=(0, 1),
    )
    return SubstitutionSource(rule, "a", id="period-doubling")


# ---------------------------------------------------------------------------
# Poisson


class PoissonSource(PointSource):
    """Homogeneous Poisson points, reproducible and window-consistent.

    Each unit cell of Z^d is populated by its own seeded generator, so
    nested queries always agree.  Not a Delone set: used only as the
    disordered contrast in diffraction runs.
    """

    def __init__(self, intensity: float, seed: int = 0, dim: int = 1, id: str = "poisson"):
        if intensity <= 0:
            raise SourceError("intensity must be positive")
        self.intensity = float(intensity)
        self.seed = int(seed)
        self.dim = int(dim)
        if self.dim not in (1, 2):
            raise SourceError("dim must be 1 or 2")
        self.m = 1
        self.coords = "float"
        self.id = id

    def _cell_rng(self, cell):
        offset = 2 ** 32
        key = (self.seed,) + tuple(int(c) + offset for c in cell)
        return np.random.default_rng(key)

    def _query(self, region):
        bounds = region.bounds()
        ranges = [range(math.floor(lo), math.ceil(hi) + 1) for lo, hi in bounds]
        pts = []
        if self.dim == 1:
            cells = [(j,) for j in ranges[0]]
        else:
            cells = [(i, j) for i in ranges[0] for j in ranges[1]]
        for cell in cells:
            rng = self._cell_rng(cell)
            n = rng.poisson(self.intensity)
            if n == 0:
                continue
            u = rng.uniform(0.0, 1.0, size=(n, self.dim))
            for row in u:
                pt = tuple(float(c) + row[k] for k, c in enumerate(cell))
                if region.contains_point(pt):
                    pts.append(pt)
        return [pts]


def poisson_source(intensity: float, seed: int = 0, dim: int = 1) -> PoissonSource:
    return PoissonSource(intensity, seed=seed, dim=dim)


# ---------------------------------------------------------------------------
# derived sources


class TranslatedSource(PointSource):
    """-h + Lambda for a base source and shift h."""

    def __init__(self, base: PointSource, shift):
        if not isinstance(shift, (tuple, list)):
            shift = (shift,)
        if len(shift) != base.dim:
            raise SourceError("shift dimension mismatch")
        self.base = base
        self.shift = tuple(shift)
        self.dim = base.dim
        self.m = base.m
        exact_shift = all(is_exact_coord(s) for s in shift)
        self.coords = base.coords if exact_shift else "float"
        self.field = base.field
        self.id = "%s@%s" % (base.id, ",".join("%g" % as_float(s) for s in shift))

    def window(self, region) -> MultiSetPatch:
        moved = region.translate(self.shift)
        patch = self.base.window(moved)
        return patch.translate(tuple(-s for s in self.shift))


def translate_source(base: PointSource, shift) -> TranslatedSource:
    return TranslatedSource(base, shift)


# ---------------------------------------------------------------------------
# configuration and serialization


def source_from_config(cfg: dict, seed=None) -> PointSource:
    """Build a source from a config dict ({"type": ..., ...params})."""
    if not isinstance(cfg, dict) or "type" not in cfg:
        raise SourceError("source config must be an object with a 'type' key")
    cfg = dict(cfg)
    typ = cfg.pop("type")
    offset = cfg.pop("offset", None)
    if typ == "lattice":
        basis = cfg.pop("basis", [[1.0]])
        colors = cfg.pop("colors", 1)
        src = LatticeSource(basis, colors=colors)
    elif typ == "fibonacci":
        src = fibonacci_cut_project(colors=cfg.pop("colors", 2))
    elif typ == "thue_morse":
        src = thue_morse_source()
    elif typ == "period_doubling":
        src = period_doubling_source()
    elif typ == "cut_project":
        f = field_by_name(cfg.pop("field", "golden"))
        windows = []
        for w in cfg.pop("windows"):
            lo = QuadNum(int(w["lo"][0]), int(w["lo"][1]), f)
            hi = QuadNum(int(w["hi"][0]), int(w["hi"][1]), f)
            windows.append(Interval(lo, hi, True, False))
        src = CutProjectSource(CutProjectSpec(field=f, windows=tuple(windows)))
    elif typ == "substitution":
        fname = cfg.pop("field", None)
        f = field_by_name(fname) if fname else None
        letters = cfg.pop("letters")
        expansions = tuple(cfg.pop("expansions"))
        raw_lengths = cfg.pop("lengths")
        lengths = []
        for L in raw_lengths:
            if isinstance(L, (list, tuple)):
                if f is None:
                    raise SourceError("exact lengths require a 'field'")
                lengths.append(QuadNum(int(L[0]), int(L[1]), f))
            elif isinstance(L, int) or (isinstance(L, float) and L.is_integer()):
                lengths.append(int(L))
            else:
                lengths.append(float(L))
        color_of = tuple(cfg.pop("color_of", range(len(letters))))
        rule = SubstitutionRule(letters=letters, expansions=expansions,
                                lengths=tuple(lengths), color_of=color_of, field=f)
        src = SubstitutionSource(rule, cfg.pop("seed_letter", letters[0]))
    elif typ == "poisson":
        src = PoissonSource(
            cfg.pop("intensity", 1.0),
            seed=cfg.pop("seed", seed if seed is not None else 0),
            dim=cfg.pop("dim", 1),
        )
    else:
        raise SourceError("unknown source type %r" % typ)
    cfg.pop("seed", None)
    if cfg:
        raise SourceError("unknown source parameters: %s" % sorted(cfg))
    if offset is not None:
        src = TranslatedSource(src, offset)
    return src


def patch_to_json(patch: MultiSetPatch, field: QuadField = None) -> dict:
    """Point-set JSON: exact coordinates as integer pairs."""
    exact = patch.exact
    points = []
    for i in range(patch.m):
        for p in patch.parts[i]:
            if exact:
                row = []
                for c in p:
                    if isinstance(c, QuadNum):
                        row.append([_int_or_str(c.a), _int_or_str(c.b)])
                    else:
                        row.append([_int_or_str(c), 0])
                points.append(row + [i])
            else:
                points.append([float(as_float(c)) for c in p] + [i])
    points.sort(key=lambda row: tuple(str(v) for v in row))
    doc = {
        "dim": patch.dim,
        "m": patch.m,
        "coords": "exact" if exact else "float",
        "points": points,
        "region": region_to_json(patch.region),
    }
    if exact and field is not None:
        doc["field"] = {"tau": field.name}
    return doc


def _int_or_str(v):
    if isinstance(v, Fraction):
        return int(v) if v.denominator == 1 else str(v)
    return int(v)


def region_to_json(region) -> dict:
    if isinstance(region, Interval):
        return {"kind": "interval", "lo": as_float(region.lo), "hi": as_float(region.hi),
                "closed": [region.closed_lo, region.closed_hi]}
    if isinstance(region, Box):
        return {"kind": "box", "lo": [as_float(c) for c in region.lo],
                "hi": [as_float(c) for c in region.hi]}
    if isinstance(region, Ball):
        return {"kind": "ball", "center": [as_float(c) for c in region.center],
                "radius": region.radius}
    raise ValueError("unknown region type")


def region_from_json(doc: dict):
    kind = doc.get("kind")
    if kind == "interval":
        closed = doc.get("closed", [True, True])
        return Interval(doc["lo"], doc["hi"], closed[0], closed[1])
    if kind == "box":
        return Box(tuple(doc["lo"]), tuple(doc["hi"]))
    if kind == "ball":
        return Ball(tuple(doc["center"]), doc["radius"])
    raise ValueError("unknown region kind %r" % kind)


def save_patch(patch: MultiSetPatch, path, field: QuadField = None):
    with open(path, "w") as fh:
        json.dump(patch_to_json(patch, field=field), fh, indent=1, sort_keys=True)
        fh.write("\n")
