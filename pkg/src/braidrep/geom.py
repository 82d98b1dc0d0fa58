"""Trajectory engine: polyline braids in the plane, event extraction, and
word realization.

This module is the independent cross-check for the algebraic pipelines. It
never consults the word-level maps: a braid is a family of piecewise-linear
disjoint paths, and words are read off from geometric events only.

Two extraction pipelines are provided.

Cylinder reading (project_pk / power_map_extract): fix a strand k; watch the
remaining strands through the angular coordinate around strand k, cut along
the ray from strand k pointing away from the centroid. Alignment of two
strands with each other (as seen from k) is a crossing event; a strand
sweeping through the cut is a rotation event. Under the d-th power reading a
rotation event expands into the rotation-virtual block z (Dv z)^(d-1).

Plane-pair reading (q_kl / psi_events / psi_d_events / realize_flat_virtual):
normalize strands k and l to the punctures 0 and 1, watch each remaining
pair through the cross-ratio with the punctures; real crossings of the
cross-ratio are crossing events, classified as over, under or flat by where
on the real line they happen, and realized as a flat-virtual word.

All event detection happens on the polyline model itself: between merged
breakpoints every strand is linear in t, so alignment conditions are exact
real quadratics and cross-ratio conditions are quartics located by sign
scanning plus bisection.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .braidword import GroupId, Letter, Word, free_reduce_letters, sigma, tau, pi, zeta
from .errors import (NonGenericInput, NonIntegerWinding, NonZeroLinking,
                     PunctureCollision, SeparationViolated)
from .homs import rotation_block_letters

TWO_PI = 2.0 * math.pi

SEPARATION_TOL = 4e-6        # minimum distance between strands
GENERICITY_TOL = 1e-9        # event separation and boundary margin
PUNCTURE_TOL = 1e-9          # margin around the punctures 0 and 1
BISECTION_TOL = 1e-12        # root refinement width in t
_ANGLE_MARGIN = 1e-9         # triple-alignment margin, radians
_REL_EPS = 1e-11             # relative threshold for degenerate polynomials

# deterministic base-point profile; small irrational-frequency jitter keeps
# regular-polygon degeneracies away without disturbing the slot order
_ANG_AMP, _ANG_FREQ, _ANG_PHASE = 0.031, 2.39996, 0.7
_RAD_AMP, _RAD_FREQ, _RAD_PHASE = 0.043, 1.61803, 1.1
_SPREAD_FREQ, _SPREAD_PHASE = 2.71828, 0.5


@dataclass(frozen=True)
class Conventions:
    """Calibration switches for synthesis and reading.

    positive_crossing_rotation: rotation sense realizing a positive crossing.
    over_is_farther: the strand farther from the watched strand is on top.
    cut_angle: None for the moving radial cut (away from the centroid
    through strand k); a float fixes the cut direction instead.
    """

    positive_crossing_rotation: str = "ccw"
    over_is_farther: bool = True
    cut_angle: float | None = None

    def __post_init__(self):
        if self.positive_crossing_rotation not in ("ccw", "cw"):
            raise ValueError("rotation must be 'ccw' or 'cw'")


DEFAULT_CONVENTIONS = Conventions()


@dataclass(frozen=True)
class Event:
    """One generic pair event. Strand ids satisfy i < j; cls is one of
    'classical_over' (j passes over i), 'classical_under', 'flat', 'virtual';
    ne is the strand whose tangent heads to the negative end at the event."""

    time: float
    i: int
    j: int
    cls: str
    ne: int | None = None
    slot: int | None = None

    def to_json(self) -> dict:
        out = {"t": self.time, "pair": [self.i, self.j], "class": self.cls}
        if self.ne is not None:
            out["ne"] = self.ne
        if self.slot is not None:
            out["slot"] = self.slot
        return out


@dataclass(frozen=True)
class GeomBraid:
    """Polyline braid: per strand, breakpoints (time, point) with times
    strictly increasing from 0 to 1. Strands stay separated by
    SEPARATION_TOL at all times."""

    n: int
    strands: tuple[tuple[tuple[float, complex], ...], ...]
    pure: bool = False

    def __post_init__(self):
        if self.n != len(self.strands) or self.n < 2:
            raise ValueError("strand count mismatch")
        for bps in self.strands:
            if len(bps) < 2 or bps[0][0] != 0.0 or bps[-1][0] != 1.0:
                raise ValueError("each strand needs breakpoints from t=0 to t=1")
            for (t0, _), (t1, _) in zip(bps, bps[1:]):
                if not t1 > t0:
                    raise ValueError("breakpoint times must strictly increase")
        object.__setattr__(self, "_times",
                           tuple([bp[0] for bp in bps] for bps in self.strands))
        self._check_separation()

    def at(self, strand: int, t: float) -> complex:
        """Position of 1-based strand at time t."""
        bps = self.strands[strand - 1]
        times = self._times[strand - 1]
        lo, hi = 0, len(times) - 1
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if times[mid] <= t:
                lo = mid
            else:
                hi = mid
        t0, z0 = bps[lo]
        t1, z1 = bps[hi]
        if t <= t0:
            return z0
        if t >= t1:
            return z1
        u = (t - t0) / (t1 - t0)
        return z0 + (z1 - z0) * u

    def start_config(self) -> tuple[complex, ...]:
        return tuple(bps[0][1] for bps in self.strands)

    def end_config(self) -> tuple[complex, ...]:
        return tuple(bps[-1][1] for bps in self.strands)

    def _check_separation(self) -> None:
        for i in range(1, self.n + 1):
            for j in range(i + 1, self.n + 1):
                times = sorted(set(self._times[i - 1]) | set(self._times[j - 1]))
                for t0, t1 in zip(times, times[1:]):
                    d0 = self.at(i, t0) - self.at(j, t0)
                    d1 = self.at(i, t1) - self.at(j, t1)
                    step = d1 - d0
                    den = abs(step) ** 2
                    if den > 0.0:
                        u = -((d0.real * step.real) + (d0.imag * step.imag)) / den
                        u = min(1.0, max(0.0, u))
                    else:
                        u = 0.0
                    if abs(d0 + step * u) < SEPARATION_TOL:
                        raise SeparationViolated(
                            f"strands {i} and {j} within tolerance near t={t0:.6f}")


def merged_times(braid: GeomBraid) -> list[float]:
    times = sorted({t for bps in braid.strands for t, _ in bps})
    out = [times[0]]
    for t in times[1:]:
        if t - out[-1] > 1e-13:
            out.append(t)
    out[-1] = 1.0
    return out


# -- synthesis ------------------------------------------------------------------


def base_points(n: int, radial_spread: float = 0.0) -> list[complex]:
    pts = []
    for j in range(1, n + 1):
        ang = TWO_PI * (j - 1) / n + _ANG_AMP * math.sin(_ANG_FREQ * j + _ANG_PHASE)
        rad = 1.0 + _RAD_AMP * math.cos(_RAD_FREQ * j + _RAD_PHASE)
        rad += radial_spread * math.cos(_SPREAD_FREQ * j + _SPREAD_PHASE)
        pts.append(rad * cmath.exp(1j * ang))
    return pts


def artin_dynamics(word: Word, conv: Conventions | None = None, *,
                   segments_per_crossing: int = 16,
                   radial_spread: float = 0.0) -> GeomBraid:
    """Synthesize trajectories realizing a braid word: each crossing is a
    half-turn of the two affected strands about their midpoint, one uniform
    time slice per unit-power letter."""
    conv = conv or DEFAULT_CONVENTIONS
    if word.group.family != "B":
        raise ValueError("trajectory synthesis expects a braid word (family B)")
    n = word.group.strands
    pts = base_points(n, radial_spread)
    letters = list(word.expanded())
    tracks: list[list[tuple[float, complex]]] = [[(0.0, z)] for z in pts]
    occupant = list(range(n))        # occupant[position] = strand index (0-based)
    current = list(pts)              # current[strand]
    total = len(letters)
    seg = segments_per_crossing
    for step_idx, letter in enumerate(letters):
        t0 = step_idx / total
        t1 = (step_idx + 1) / total
        a_pos = letter.index - 1
        b_pos = letter.index
        sa, sb = occupant[a_pos], occupant[b_pos]
        za, zb = current[sa], current[sb]
        mid = (za + zb) / 2
        rel = za - mid
        direction = 1.0 if (letter.power > 0) == \
            (conv.positive_crossing_rotation == "ccw") else -1.0
        for s in range(1, seg + 1):
            t = t0 + (t1 - t0) * s / seg
            if s == seg:
                pa, pb = zb, za
            else:
                rot = rel * cmath.exp(1j * direction * math.pi * s / seg)
                pa, pb = mid + rot, mid - rot
            tracks[sa].append((t, pa))
            tracks[sb].append((t, pb))
        current[sa], current[sb] = zb, za
        occupant[a_pos], occupant[b_pos] = sb, sa
    for track in tracks:
        if track[-1][0] != 1.0:
            track.append((1.0, track[-1][1]))
    pure = all(tracks[s][-1][1] == pts[s] for s in range(n))
    return GeomBraid(n, tuple(tuple(tr) for tr in tracks), pure)


def perturb(braid: GeomBraid, seed: int, magnitude: float) -> GeomBraid:
    """Jitter interior breakpoints; endpoints stay fixed. The magnitude must
    stay below half the separation tolerance."""
    if magnitude > SEPARATION_TOL / 2:
        raise SeparationViolated(
            f"perturbation {magnitude} exceeds half the separation tolerance")
    rng = random.Random(seed)
    strands = []
    for bps in braid.strands:
        out = []
        for t, z in bps:
            if 0.0 < t < 1.0:
                z = z + complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) * magnitude
            out.append((t, z))
        strands.append(tuple(out))
    return GeomBraid(braid.n, tuple(strands), braid.pure)


def resample(braid: GeomBraid, factor: int = 2) -> GeomBraid:
    """Insert factor-1 collinear midpoints per segment; same paths."""
    if factor < 1:
        raise ValueError("factor must be positive")
    strands = []
    for bps in braid.strands:
        out = [bps[0]]
        for (t0, z0), (t1, z1) in zip(bps, bps[1:]):
            for s in range(1, factor):
                u = s / factor
                out.append((t0 + (t1 - t0) * u, z0 + (z1 - z0) * u))
            out.append((t1, z1))
        strands.append(tuple(out))
    return GeomBraid(braid.n, tuple(strands), braid.pure)


def concat(first: GeomBraid, second: GeomBraid) -> GeomBraid:
    """Run first then second on half time each; end and start configurations
    must agree exactly."""
    if first.n != second.n:
        raise ValueError("strand counts differ")
    if first.end_config() != second.start_config():
        raise ValueError("braids do not share the junction configuration")
    strands = []
    for a, b in zip(first.strands, second.strands):
        head = [(t / 2, z) for t, z in a]
        tail = [(0.5 + t / 2, z) for t, z in b[1:]]
        strands.append(tuple(head + tail))
    pure = all(s[0][1] == s[-1][1] for s in strands)
    return GeomBraid(first.n, tuple(strands), pure)


# -- winding -----------------------------------------------------------------------


def linking_number(braid: GeomBraid, i: int, j: int) -> int:
    """Integer winding of strand i around strand j (symmetric)."""
    times = sorted(set(braid._times[i - 1]) | set(braid._times[j - 1]))
    total = 0.0
    prev = braid.at(i, times[0]) - braid.at(j, times[0])
    for t in times[1:]:
        cur = braid.at(i, t) - braid.at(j, t)
        total += cmath.phase(cur / prev)
        prev = cur
    w = total / TWO_PI
    r = round(w)
    if abs(w - r) > 1e-6:
        raise NonIntegerWinding(
            f"pair ({i},{j}) winds {w:.9f} turns; braid not pure or corrupted")
    return int(r)


# -- linear segment models -----------------------------------------------------------


def _segment_models(braid: GeomBraid):
    """Per merged interval [t0, t1]: values p and increments q with
    strand(t0 + u*(t1-t0)) = p + q*u for u in [0, 1]."""
    times = merged_times(braid)
    configs = [[braid.at(s, t) for s in range(1, braid.n + 1)] for t in times]
    models = []
    for idx in range(len(times) - 1):
        p = configs[idx]
        q = [configs[idx + 1][s] - p[s] for s in range(braid.n)]
        models.append((times[idx], times[idx + 1], p, q))
    return models


def _quad_roots(c2: float, c1: float, c0: float, scale: float):
    """Real roots of c2 u^2 + c1 u + c0 in (0, 1]; second value tells whether
    the polynomial is negligible against scale over the whole interval."""
    eps = _REL_EPS * scale
    if abs(c2) <= eps and abs(c1) <= eps:
        return [], abs(c0) <= eps
    roots = []
    if abs(c2) <= eps:
        roots.append(-c0 / c1)
    else:
        disc = c1 * c1 - 4.0 * c2 * c0
        if disc >= 0.0:
            sq = math.sqrt(disc)
            qq = -(c1 + math.copysign(sq, c1)) / 2.0
            if qq == 0.0:
                roots.append(0.0)
            else:
                roots.append(qq / c2)
                roots.append(c0 / qq)
    return sorted(r for r in roots if 0.0 < r <= 1.0), False


def _im_pair_quad(u0: complex, du: complex, v0: complex, dv: complex):
    """Coefficients of Im((u0+du*u) * conj(v0+dv*u)) and a magnitude scale."""
    c0 = (u0 * v0.conjugate()).imag
    c1 = (u0 * dv.conjugate() + du * v0.conjugate()).imag
    c2 = (du * dv.conjugate()).imag
    scale = (abs(u0) + abs(du)) * (abs(v0) + abs(dv)) + 1e-300
    return c2, c1, c0, scale


# -- cylinder extraction ---------------------------------------------------------------


def _cut_vector(conv: Conventions, p, q, k0: int, n: int):
    """Cut direction as a linear model (w0, dw) on the segment."""
    if conv.cut_angle is not None:
        return cmath.exp(1j * conv.cut_angle), 0j
    cen0 = sum(p) / n
    dcen = sum(q) / n
    return p[k0] - cen0, q[k0] - dcen


def cylinder_events(braid: GeomBraid, k: int,
                    conv: Conventions | None = None) -> list[tuple]:
    """Generic events seen from strand k, sorted by time. Records are
    ('cross', t, i, j, slot, sign) and ('cut', t, l, power)."""
    conv = conv or DEFAULT_CONVENTIONS
    n = braid.n
    if n < 3:
        raise ValueError("need at least 3 strands")
    if not 1 <= k <= n:
        raise ValueError(f"k={k} outside 1..{n}")
    k0 = k - 1
    others = [s for s in range(n) if s != k0]
    raw = []
    for t0, t1, p, q in _segment_models(braid):
        h = t1 - t0

        def rel(s0: int, u: float) -> complex:
            return (p[s0] - p[k0]) + (q[s0] - q[k0]) * u

        w0, dw = _cut_vector(conv, p, q, k0, n)

        def cut_dir(u: float) -> complex:
            return w0 + dw * u

        # pair alignments
        for ia in range(len(others)):
            for ib in range(ia + 1, len(others)):
                si, sj = others[ia], others[ib]
                u0 = p[si] - p[k0]
                du = q[si] - q[k0]
                v0 = p[sj] - p[k0]
                dv = q[sj] - q[k0]
                c2, c1, c0, scale = _im_pair_quad(u0, du, v0, dv)
                roots, degenerate = _quad_roots(c2, c1, c0, scale)
                if degenerate:
                    middle = (u0 + du * 0.5) * (v0 + dv * 0.5).conjugate()
                    if middle.real > 0:
                        raise NonGenericInput("persistent alignment",
                                              time=t0, pair=(si + 1, sj + 1))
                    continue
                for u in roots:
                    ui = u0 + du * u
                    vj = v0 + dv * u
                    if (ui * vj.conjugate()).real <= 0:
                        continue
                    slope = 2.0 * c2 * u + c1
                    if abs(slope) <= 1e-9 * scale:
                        raise NonGenericInput("tangential alignment",
                                              time=t0 + h * u,
                                              pair=(si + 1, sj + 1))
                    rising = slope < 0.0
                    t_ev = t0 + h * u
                    # angular coordinates of everything else at the event
                    wv = cut_dir(u)
                    if abs(wv) <= 1e-9:
                        raise NonGenericInput("cut direction degenerate", time=t_ev)
                    f_pair = (cmath.phase(wv) - cmath.phase(ui)) % TWO_PI
                    below = 0
                    for l in others:
                        if l in (si, sj):
                            continue
                        fl = (cmath.phase(wv) - cmath.phase(rel(l, u))) % TWO_PI
                        gap = abs(fl - f_pair)
                        if min(gap, TWO_PI - gap) < _ANGLE_MARGIN:
                            raise NonGenericInput("triple alignment", time=t_ev,
                                                  pair=(si + 1, sj + 1))
                        if fl < f_pair:
                            below += 1
                    slot = 1 + below
                    ri, rj = abs(ui), abs(vj)
                    if abs(ri - rj) <= 1e-9 * max(ri, rj):
                        raise NonGenericInput("radial tie at alignment",
                                              time=t_ev, pair=(si + 1, sj + 1))
                    farther_i = ri > rj
                    over_i = farther_i == conv.over_is_farther
                    sign = 1 if (over_i != rising) else -1
                    raw.append(("cross", t_ev, si + 1, sj + 1, slot, sign))

        # cut passages
        for l in others:
            u0 = p[l] - p[k0]
            du = q[l] - q[k0]
            c2, c1, c0, scale = _im_pair_quad(u0, du, w0, dw)
            roots, degenerate = _quad_roots(c2, c1, c0, scale)
            if degenerate:
                middle = (u0 + du * 0.5) * (w0 + dw * 0.5).conjugate()
                if middle.real > 0:
                    raise NonGenericInput("strand stalls on the cut",
                                          time=t0, pair=(l + 1, k))
                continue
            for u in roots:
                ul = u0 + du * u
                wv = w0 + dw * u
                if (ul * wv.conjugate()).real <= 0:
                    continue
                slope = 2.0 * c2 * u + c1
                if abs(slope) <= 1e-9 * scale:
                    raise NonGenericInput("tangential cut passage",
                                          time=t0 + h * u, pair=(l + 1, k))
                power = 1 if slope < 0.0 else -1
                raw.append(("cut", t0 + h * u, l + 1, power))

    raw.sort(key=lambda r: r[1])
    _check_event_spacing([r[1] for r in raw])
    return raw


def _check_event_spacing(times: Sequence[float]) -> None:
    for t in times:
        if t < GENERICITY_TOL or t > 1.0 - GENERICITY_TOL:
            raise NonGenericInput("event at the time boundary", time=t)
    for a, b in zip(times, times[1:]):
        if b - a < GENERICITY_TOL:
            raise NonGenericInput("events closer than the separation margin",
                                  time=a)


def project_pk(braid: GeomBraid, k: int,
               conv: Conventions | None = None) -> Word:
    """Cylinder word on n-1 strands read off the trajectories."""
    m = braid.n - 1
    letters: list[Letter] = []
    for record in cylinder_events(braid, k, conv):
        if record[0] == "cross":
            _, _, _, _, slot, sign = record
            letters.append(sigma(slot, sign))
        else:
            letters.append(zeta(record[3]))
    return Word(GroupId("CPB", m), free_reduce_letters(letters))


def power_map_extract(braid: GeomBraid, k: int, d: int,
                      conv: Conventions | None = None) -> Word:
    """Word of the d-th power reading: crossings stay crossings, each cut
    passage becomes the rotation-virtual block."""
    if d < 1:
        raise ValueError("d must be positive")
    m = braid.n - 1
    letters: list[Letter] = []
    for record in cylinder_events(braid, k, conv):
        if record[0] == "cross":
            _, _, _, _, slot, sign = record
            letters.append(sigma(slot, sign))
        else:
            letters.extend(rotation_block_letters(m, d, record[3]))
    return Word(GroupId("VCB", m), free_reduce_letters(letters))


# -- pair normalization ------------------------------------------------------------------


def q_kl(braid: GeomBraid, k: int, l: int, refine: int = 2) -> GeomBraid:
    """Send strands k and l to the punctures 0 and 1; requires every pairwise
    winding to vanish. Remaining strands are renumbered in increasing
    original order."""
    n = braid.n
    if n < 4:
        raise ValueError("need at least 4 strands")
    if k == l or not (1 <= k <= n and 1 <= l <= n):
        raise ValueError(f"bad pair ({k},{l})")
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            if linking_number(braid, i, j) != 0:
                raise NonZeroLinking("winding must vanish", pair=(i, j))
    grid: list[float] = []
    times = merged_times(braid)
    for t0, t1 in zip(times, times[1:]):
        for s in range(refine):
            grid.append(t0 + (t1 - t0) * s / refine)
    grid.append(1.0)
    survivors = [s for s in range(1, n + 1) if s not in (k, l)]
    strands = []
    for s in survivors:
        bps = []
        for t in grid:
            den = braid.at(l, t) - braid.at(k, t)
            g = (braid.at(s, t) - braid.at(k, t)) / den
            if abs(g) < PUNCTURE_TOL or abs(g - 1) < PUNCTURE_TOL:
                raise PunctureCollision(
                    f"strand {s} touches a puncture at t={t:.6f}")
            bps.append((t, g))
        strands.append(tuple(bps))
    return GeomBraid(n - 2, tuple(strands), braid.pure)


def initial_order(braid: GeomBraid) -> tuple[int, ...]:
    """Strand ids sorted by starting position, left to right."""
    starts = [(z.real, z.imag, idx + 1) for idx, z in enumerate(braid.start_config())]
    return tuple(idx for _, _, idx in sorted(starts))


# -- crossing classification --------------------------------------------------------------


def _cross_ratio_models(p_i, q_i, p_j, q_j, method: str):
    """Quadratic numerator and denominator (complex coefficient triples,
    constant first) of the classifier function on one segment."""
    if method == "cross-ratio":
        num = (p_i * (p_j - 1), p_i * q_j + q_i * (p_j - 1), q_i * q_j)
        den = ((p_i - 1) * p_j, (p_i - 1) * q_j + q_i * p_j, q_i * q_j)
    elif method == "mobius":
        num = (p_j * (1 - p_i), q_j * (1 - p_i) - p_j * q_i, -q_j * q_i)
        den = ((1 - 2 * p_i) * p_j + p_i,
               (1 - 2 * p_i) * q_j - 2 * q_i * p_j + q_i,
               -2 * q_i * q_j)
    else:
        raise ValueError(f"unknown method {method!r}")
    return num, den


def _poly_eval(coeffs, u: float) -> complex:
    c0, c1, c2 = coeffs
    return c0 + (c1 + c2 * u) * u


def _poly_deriv(coeffs, u: float) -> complex:
    _, c1, c2 = coeffs
    return c1 + 2.0 * c2 * u


def _ratio_value(num, den, u: float) -> complex:
    dv = _poly_eval(den, u)
    if abs(dv) < 1e-300:
        raise NonGenericInput("classifier function blows up")
    return _poly_eval(num, u) / dv


def _ratio_deriv(num, den, u: float) -> complex:
    nv, dv = _poly_eval(num, u), _poly_eval(den, u)
    npv, dpv = _poly_deriv(num, u), _poly_deriv(den, u)
    return (npv * dv - nv * dpv) / (dv * dv)


def _im_value(num, den, u: float) -> float:
    return (_poly_eval(num, u) * _poly_eval(den, u).conjugate()).imag


def _bisect(f, lo: float, hi: float, h: float) -> float:
    flo = f(lo)
    for _ in range(200):
        if (hi - lo) * h <= BISECTION_TOL:
            break
        mid = (lo + hi) / 2
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (flo > 0) != (fm > 0):
            hi = mid
        else:
            lo, flo = mid, fm
    return (lo + hi) / 2


def psi_events(braid: GeomBraid, conv: Conventions | None = None,
               method: str = "cross-ratio", subsamples: int = 8) -> tuple[Event, ...]:
    """Events of a braid in the plane punctured at 0 and 1: for each pair,
    the real crossings of the classifier function, with class and
    negative-end strand."""
    events: list[Event] = []
    models = _segment_models(braid)
    for i0 in range(braid.n):
        for j0 in range(i0 + 1, braid.n):
            for t0, t1, p, q in models:
                h = t1 - t0
                num, den = _cross_ratio_models(p[i0], q[i0], p[j0], q[j0], method)

                def phi(u: float) -> float:
                    return _im_value(num, den, u)

                samples = [phi(s / subsamples) for s in range(subsamples + 1)]
                for s in range(subsamples):
                    fa, fb = samples[s], samples[s + 1]
                    root = None
                    if fa == 0.0:
                        if s > 0 or t0 > 0.0:
                            root = s / subsamples
                    elif (fa > 0) != (fb > 0):
                        root = _bisect(phi, s / subsamples, (s + 1) / subsamples, h)
                    if root is None:
                        continue
                    events.append(_classify(num, den, root, t0 + h * root,
                                            i0 + 1, j0 + 1, method))
    events.sort(key=lambda e: e.time)
    events = _dedupe(events)
    _check_event_spacing([e.time for e in events])
    return tuple(events)


def _dedupe(events: list[Event]) -> list[Event]:
    out: list[Event] = []
    for e in events:
        if out and (e.i, e.j) == (out[-1].i, out[-1].j) \
                and abs(e.time - out[-1].time) < 1e-11:
            continue
        out.append(e)
    return out


def _classify(num, den, u: float, t: float, i: int, j: int, method: str) -> Event:
    val = _ratio_value(num, den, u)
    deriv = _ratio_deriv(num, den, u)
    x = val.real
    if method == "mobius":
        # transport to the cross-ratio picture: cr = (1-w)/w, cr' = -w'/w^2
        guard = min(abs(val), abs(val - 1.0))
        if guard < 1e-9:
            raise NonGenericInput("crossing at a puncture boundary", time=t,
                                  pair=(i, j))
        if 0.5 < x < 1.0:
            cls = "classical_over"
        elif 0.0 < x < 0.5:
            cls = "classical_under"
        else:
            cls = "flat"
        if abs(x - 0.5) < 1e-9 or abs(x) < 1e-9:
            raise NonGenericInput("crossing class at boundary", time=t,
                                  pair=(i, j))
        imd = deriv.imag
        if abs(imd) <= 1e-12 * (1.0 + abs(deriv)):
            raise NonGenericInput("tangential crossing", time=t, pair=(i, j))
        ne = j if imd < 0 else i
        return Event(t, i, j, cls, ne)
    guard = min(abs(val), abs(val - 1.0))
    if guard < 1e-9:
        raise NonGenericInput("crossing at a puncture boundary", time=t,
                              pair=(i, j))
    if 0.0 < x < 1.0:
        cls = "classical_over"
    elif x > 1.0:
        cls = "classical_under"
    else:
        cls = "flat"
    imd = deriv.imag
    if abs(imd) <= 1e-12 * (1.0 + abs(deriv)):
        raise NonGenericInput("tangential crossing", time=t, pair=(i, j))
    ne = j if imd > 0 else i
    return Event(t, i, j, cls, ne)


def psi_d_events(braid: GeomBraid, d: int, conv: Conventions | None = None,
                 subsamples: int = 8) -> tuple[Event, ...]:
    """Events of the d-th power reading in the punctured plane: per pair, the
    pair ratio sweeps through the rays at angles 2 pi p / d; ray 0 gives a
    classical crossing, the others are flat."""
    if d < 2:
        raise ValueError("power readings need d >= 2")
    events: list[Event] = []
    models = _segment_models(braid)
    for i0 in range(braid.n):
        for j0 in range(i0 + 1, braid.n):
            lifted = None
            prev_val = None
            for t0, t1, p, q in models:
                h = t1 - t0
                num, den = _cross_ratio_models(p[i0], q[i0], p[j0], q[j0],
                                               "cross-ratio")

                def ratio(u: float) -> complex:
                    return _ratio_value(num, den, u)

                start = 0 if lifted is None else 1
                if lifted is None:
                    prev_val = ratio(0.0)
                    lifted = cmath.phase(prev_val)
                    prev_u = 0.0
                for s in range(start, subsamples + 1):
                    u = s / subsamples
                    val = ratio(u)
                    step = cmath.phase(val / prev_val)
                    cur = lifted + step
                    lo_phi, hi_phi = min(lifted, cur), max(lifted, cur)
                    rising = cur > lifted
                    v_lo = math.floor(lo_phi * d / TWO_PI - 1)
                    v_hi = math.ceil(hi_phi * d / TWO_PI + 1)
                    for v in range(v_lo, v_hi + 1):
                        level = TWO_PI * v / d
                        hit = (lifted < level <= cur) if rising \
                            else (cur <= level < lifted)
                        if not hit:
                            continue
                        anchor_phi, anchor_val = lifted, prev_val

                        def lifted_arg(x: float) -> float:
                            return anchor_phi + cmath.phase(ratio(x) / anchor_val)

                        root = _bisect(lambda x: lifted_arg(x) - level,
                                       prev_u, u, h)
                        events.append(_classify_ray(
                            num, den, root, t0 + h * root, i0 + 1, j0 + 1,
                            v % d, d))
                    lifted, prev_val, prev_u = cur, val, u
                prev_u = 0.0
    events.sort(key=lambda e: e.time)
    events = _dedupe(events)
    _check_event_spacing([e.time for e in events])
    return tuple(events)


def _classify_ray(num, den, u: float, t: float, i: int, j: int,
                  p: int, d: int) -> Event:
    val = _ratio_value(num, den, u)
    deriv = _ratio_deriv(num, den, u)
    if p == 0:
        mag = val.real
        if abs(mag - 1.0) < 1e-9 or abs(mag) < 1e-9:
            raise NonGenericInput("crossing class at boundary", time=t,
                                  pair=(i, j))
        cls = "classical_over" if mag < 1.0 else "classical_under"
    else:
        cls = "flat"
    if p == 0 or 2 * p == d:
        decider = deriv.imag
    else:
        decider = (cmath.exp(-1j * TWO_PI * p / d) * deriv).imag
    if abs(decider) <= 1e-12 * (1.0 + abs(deriv)):
        raise NonGenericInput("tangential ray crossing", time=t, pair=(i, j))
    ne = j if decider > 0 else i
    return Event(t, i, j, cls, ne)


# -- realization --------------------------------------------------------------------------


def realize_flat_virtual(events: Iterable[Event], m: int,
                         scheme: str = "route-and-return",
                         initial_order: Sequence[int] | None = None) -> Word:
    """Flat-virtual word on m strands realizing an event list.

    Every event contributes a block that transposes its pair; virtual
    letters route distant strands together and, at the end, restore the
    deterministic final order shared by both schemes, so the resulting group
    element does not depend on the routing.
    """
    if scheme not in ("route-and-return", "swap-in-place"):
        raise ValueError(f"unknown scheme {scheme!r}")
    order = list(initial_order) if initial_order is not None \
        else list(range(1, m + 1))
    if sorted(order) != list(range(1, m + 1)):
        raise ValueError("initial_order must be a permutation of 1..m")
    target = list(order)
    events = list(events)
    for ev in events:
        ia, ja = target.index(ev.i), target.index(ev.j)
        target[ia], target[ja] = target[ja], target[ia]
    letters: list[Letter] = []
    work = list(order)
    for ev in events:
        if ev.ne not in (ev.i, ev.j):
            raise ValueError("negative end must belong to the event pair")
        pa = work.index(ev.i) + 1
        pb = work.index(ev.j) + 1
        a, b = min(pa, pb), max(pa, pb)
        if ev.cls == "flat":
            def cross(idx: int) -> Letter:
                return pi(idx)
        elif ev.cls in ("classical_over", "classical_under"):
            over = ev.j if ev.cls == "classical_over" else ev.i
            sgn = 1 if over == ev.ne else -1

            def cross(idx: int, s=sgn) -> Letter:
                return sigma(idx, s)
        else:
            raise ValueError(f"cannot realize class {ev.cls!r}")
        if scheme == "route-and-return":
            ne_at_b = work[b - 1] == ev.ne
            letters.extend(tau(x) for x in range(b - 1, a, -1))
            if ne_at_b:
                letters.append(cross(a))
            else:
                letters.extend((tau(a), cross(a), tau(a)))
            letters.extend(tau(x) for x in range(a + 1, b))
            work[a - 1], work[b - 1] = work[b - 1], work[a - 1]
        else:
            for x in range(a, b - 1):
                letters.append(tau(x))
                work[x - 1], work[x] = work[x], work[x - 1]
            if work[b - 1] != ev.ne:
                letters.append(tau(b - 1))
                work[b - 2], work[b - 1] = work[b - 1], work[b - 2]
            letters.append(cross(b - 1))
            work[b - 2], work[b - 1] = work[b - 1], work[b - 2]
    for pos in range(m):
        want = target[pos]
        cur = work.index(want)
        while cur > pos:
            letters.append(tau(cur))
            work[cur - 1], work[cur] = work[cur], work[cur - 1]
            cur -= 1
    return Word(GroupId("FVB", m), free_reduce_letters(letters))


def flat_virtual_word(braid: GeomBraid, k: int, l: int, d: int | None = None,
                      conv: Conventions | None = None,
                      scheme: str = "route-and-return",
                      refine: int = 2) -> Word:
    """Full plane-pair pipeline: normalize (k, l) to the punctures, detect
    events, realize them as a flat-virtual word on n-2 strands."""
    punctured = q_kl(braid, k, l, refine)
    if d is None:
        events = psi_events(punctured, conv)
    else:
        events = psi_d_events(punctured, d, conv)
    return realize_flat_virtual(events, punctured.n, scheme,
                                initial_order=initial_order(punctured))


# -- serialization -------------------------------------------------------------------------


def braid_to_json(braid: GeomBraid) -> dict:
    return {"n": braid.n, "pure": braid.pure,
            "strands": [[[t, z.real, z.imag] for t, z in bps]
                        for bps in braid.strands]}


def braid_from_json(data) -> GeomBraid:
    try:
        n = int(data["n"])
        pure = bool(data.get("pure", False))
        strands = tuple(
            tuple((float(t), complex(re, im)) for t, re, im in bps)
            for bps in data["strands"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed braid JSON: {exc}") from exc
    return GeomBraid(n, strands, pure)


def events_to_json(events: Iterable[Event]) -> list[dict]:
    return [e.to_json() for e in events]


def cylinder_events_json(braid: GeomBraid, k: int,
                         conv: Conventions | None = None) -> list[dict]:
    out = []
    for record in cylinder_events(braid, k, conv):
        if record[0] == "cross":
            _, t, i, j, slot, sign = record
            out.append({"t": t, "kind": "crossing", "pair": [i, j],
                        "slot": slot, "sign": sign})
        else:
            _, t, l, power = record
            out.append({"t": t, "kind": "cut", "strand": l, "power": power})
    return out


# -- drawing ---------------------------------------------------------------------------------

_PALETTE = ("#1d4ed8", "#b91c1c", "#047857", "#7c3aed", "#b45309",
            "#0e7490", "#be185d", "#4d7c0f", "#6b7280", "#92400e")

_MARK = {"classical_over": "#111827", "classical_under": "#6b7280",
         "flat": "#d97706", "virtual": "#16a34a",
         "crossing": "#111827", "cut": "#16a34a"}


def render_svg(braid: GeomBraid, marks: Iterable[dict] | None = None,
               width: int = 640, height: int = 800) -> str:
    """Strand chart, time running downward, horizontal = real part.
    Marks are event JSON records; colored by class."""
    xs = [z.real for bps in braid.strands for _, z in bps]
    lo, hi = min(xs), max(xs)
    span = (hi - lo) or 1.0
    pad = 40.0

    def sx(x: float) -> float:
        return pad + (x - lo) / span * (width - 2 * pad)

    def sy(t: float) -> float:
        return pad + t * (height - 2 * pad)

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
             f'height="{height}" viewBox="0 0 {width} {height}">',
             f'<rect width="{width}" height="{height}" fill="white"/>']
    for idx, bps in enumerate(braid.strands):
        color = _PALETTE[idx % len(_PALETTE)]
        pts = " ".join(f"{sx(z.real):.2f},{sy(t):.2f}" for t, z in bps)
        parts.append(f'<polyline points="{pts}" fill="none" '
                     f'stroke="{color}" stroke-width="1.4"/>')
        t0, z0 = bps[0]
        parts.append(f'<text x="{sx(z0.real):.2f}" y="{sy(t0) - 8:.2f}" '
                     f'font-size="11" fill="{color}">{idx + 1}</text>')
    for mark in marks or ():
        t = mark["t"]
        kind = mark.get("class") or mark.get("kind", "crossing")
        if "pair" in mark:
            i, j = mark["pair"]
            x = (braid.at(i, t).real + braid.at(j, t).real) / 2
        else:
            x = braid.at(mark["strand"], t).real
        parts.append(f'<circle cx="{sx(x):.2f}" cy="{sy(t):.2f}" r="4" '
                     f'fill="none" stroke="{_MARK.get(kind, "#111827")}" '
                     f'stroke-width="1.6"/>')
    parts.append("</svg>")
    return "\n".join(parts)
