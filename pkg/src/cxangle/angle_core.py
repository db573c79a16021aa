"""The norm-derived product and the complex angle over pluggable norms.

For nonzero x, y in a complex normed space the product is

    <x|y> = ||x|| ||y|| / 4 * [ ||u+v||^2 - ||u-v||^2 + i (||u+iv||^2 - ||u-iv||^2) ]

with ``u = x/||x||`` and ``v = y/||y||``; it is linear in the first argument
for inner-product norms.  The angle is ``carccos(<x|y> / (||x|| ||y||))``.

Vectors are numpy arrays whose last axis is the coordinate axis; leading
axes broadcast, so every function here also works on stacks of pairs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from . import cxfn
from .cxfn import HALF_PI, carccos, sgn
from .errors import ConvergenceError, DegenerateError, DimensionError, DomainError
from .gauge import GeneratorSet, gauge_batch, relative_accuracy

_EPS = np.finfo(float).eps


# --------------------------------------------------------------------------
# spaces


@dataclass(frozen=True, eq=False)
class NormedSpace:
    """A norm on C^dim.  ``evaluate`` maps (..., dim) arrays to (...) norms."""

    dim: int
    kind: str
    evaluate: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    p: float | None = None
    gram: np.ndarray | None = field(default=None, repr=False)
    generators: GeneratorSet | None = field(default=None, repr=False)
    # bound on the relative error of ``evaluate`` beyond float rounding
    accuracy: float = 0.0

    def norm(self, x):
        x = as_vector(self, x)
        out = np.asarray(self.evaluate(x), dtype=float)
        return out[()] if out.ndim == 0 else out

    @property
    def label(self) -> str:
        if self.kind == "lp":
            return f"lp:{self.p:g}"
        return self.kind


def as_vector(space: NormedSpace, x) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    if x.ndim == 0 or x.shape[-1] != space.dim:
        raise DimensionError(f"expected vectors of length {space.dim}, got shape {x.shape}")
    return x


def l2_space(dim: int, debug: bool = False) -> NormedSpace:
    return _build(NormedSpace(dim, "l2", lambda x: np.linalg.norm(x, axis=-1)), debug)


def lp_space(dim: int, p: float, debug: bool = False) -> NormedSpace:
    if not p >= 1:
        raise DomainError(f"lp needs p >= 1, got {p}")
    if math.isinf(p):
        return linf_space(dim, debug)

    def evaluate(x):
        mag = np.abs(x)
        top = np.max(mag, axis=-1, keepdims=True)
        safe = np.where(top > 0, top, 1.0)
        return top[..., 0] * np.sum((mag / safe) ** p, axis=-1) ** (1.0 / p)

    return _build(NormedSpace(dim, "lp", evaluate, p=float(p)), debug)


def linf_space(dim: int, debug: bool = False) -> NormedSpace:
    return _build(NormedSpace(dim, "linf", lambda x: np.max(np.abs(x), axis=-1)), debug)


def gram_space(gram, debug: bool = False) -> NormedSpace:
    """Norm sqrt(x H conj(x)) for a Hermitian positive definite H."""
    H = np.array(gram, dtype=complex)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise DimensionError(f"Gram matrix must be square, got shape {H.shape}")
    if not np.allclose(H, H.conj().T, rtol=0, atol=1e-12):
        raise DomainError("Gram matrix is not Hermitian")
    try:
        np.linalg.cholesky(H)
    except np.linalg.LinAlgError as exc:
        raise DomainError("Gram matrix is not positive definite") from exc
    H.setflags(write=False)

    def evaluate(x):
        q = np.einsum("...i,ij,...j->...", x, H, np.conj(x)).real
        return np.sqrt(np.maximum(q, 0.0))

    return _build(NormedSpace(H.shape[0], "gram", evaluate, gram=H), debug)


def gauge_space(G: GeneratorSet, debug: bool = False) -> NormedSpace:
    space = NormedSpace(
        G.dim, "gauge", lambda x: gauge_batch(G, x), generators=G, accuracy=relative_accuracy(G)
    )
    return _build(space, debug)


def _build(space: NormedSpace, debug: bool) -> NormedSpace:
    if space.dim < 1:
        raise DimensionError("dimension must be positive")
    if debug:
        bad = audit_norm_axioms(space)
        if bad:
            raise DomainError(f"norm axioms violated: {bad}")
    return space


def _random_vectors(rng, shape, dim):
    return rng.normal(size=shape + (dim,)) + 1j * rng.normal(size=shape + (dim,))


def audit_norm_axioms(space: NormedSpace, trials: int = 200, seed: int = 0, tol: float = 1e-9) -> dict:
    """Randomized check of homogeneity, triangle inequality and definiteness.

    Returns the worst violation per axiom, only for axioms that failed.
    """
    rng = np.random.default_rng(seed)
    x = _random_vectors(rng, (trials,), space.dim)
    y = _random_vectors(rng, (trials,), space.dim)
    z = rng.normal(size=trials) + 1j * rng.normal(size=trials)
    nx, ny = space.norm(x), space.norm(y)
    failures = {}
    homog = np.max(np.abs(space.norm(z[:, None] * x) - np.abs(z) * nx) / (1 + np.abs(z) * nx))
    if homog > tol:
        failures["absolute homogeneity"] = float(homog)
    tri = np.max(space.norm(x + y) - nx - ny)
    if tri > tol * (1 + np.max(nx + ny)):
        failures["triangle inequality"] = float(tri)
    if float(space.norm(np.zeros(space.dim))) != 0.0 or np.any(nx <= 0):
        failures["positive definiteness"] = 1.0
    return failures


# --------------------------------------------------------------------------
# product and angle


def norm_eval(space: NormedSpace, x):
    return space.norm(x)


def _cosine_parts(space, x, y):
    """Norms of x and y and the normalized product, all broadcast together."""
    x, y = np.broadcast_arrays(as_vector(space, x), as_vector(space, y))
    nxy = space.norm(np.stack([x, y]))
    nx, ny = nxy[0], nxy[1]
    ok = (nx > 0) & (ny > 0)
    u = x / np.where(nx > 0, nx, 1.0)[..., None]
    v = y / np.where(ny > 0, ny, 1.0)[..., None]
    six = space.norm(np.stack([u + v, u - v, u + 1j * v, u - 1j * v, u, v]))
    sq = six[:4] * six[:4]
    # ||u|| = ||v|| = 1 up to rounding; dividing by the computed values makes
    # parallel pairs give exactly +-1 instead of 1 - ulp, which arccos would
    # turn into an angle of order sqrt(ulp)
    unit = np.where(ok, six[4] * six[5], 1.0)
    cos = 0.25 * ((sq[0] - sq[1]) + 1j * (sq[2] - sq[3])) / unit
    cos = np.where(ok, cos, 0.0)
    return nx, ny, cos, ok


def gproduct(space: NormedSpace, x, y):
    """The norm-derived product <x|y>; zero when either vector is zero."""
    nx, ny, cos, _ = _cosine_parts(space, x, y)
    out = nx * ny * cos
    return out[()] if np.ndim(out) == 0 else out


def cosine(space: NormedSpace, x, y):
    """``<x|y> / (||x|| ||y||)``, the cosine of the angle; needs x, y != 0."""
    _, _, cos, ok = _cosine_parts(space, x, y)
    if not np.all(ok):
        raise DomainError("angle is undefined for a zero vector")
    return cos[()] if np.ndim(cos) == 0 else cos


def _cosine_slack(accuracy: float) -> float:
    # each of the six norm evaluations may be off by the relative accuracy;
    # propagated through the formula that moves the cosine by at most 8x it
    return 4 * _EPS + 8 * accuracy


def _into_b(c, accuracy: float = 0.0):
    """Clamp excursions past +-1 on the real axis back into B.

    On the real axis the cosine is bounded by 1 in exact arithmetic (the
    triangle inequality bounds the real part), so an excursion there can only
    come from rounding or from an inexact norm evaluator.  Values with an
    exactly zero imaginary part and within the evaluation slack of +-1 are
    snapped; anything further out is left alone and rejected by the arccos.
    Off the axis, cosines within the same slack of +-1 are snapped too.
    """
    c = np.asarray(c, dtype=complex)
    on_axis = c.imag == 0
    slack = _cosine_slack(accuracy)
    near = on_axis & (np.abs(c.real) > 1.0) & (np.abs(c.real) <= 1.0 + slack)
    out = np.where(near, np.sign(c.real) + 0j, c)
    # Re c = +-1 forces u = +-v and hence Im c = 0, so a cosine within the
    # slack of +-1 is +-1 up to evaluation error
    for pole in (1.0, -1.0):
        out = np.where(np.abs(out - pole) <= slack, pole + 0j, out)
    return out


def angle_from_cosine(c, accuracy: float = 0.0):
    return carccos(_into_b(c, accuracy))


def angle(space: NormedSpace, x, y):
    """The complex angle of (x, y), a value in the strip A."""
    return angle_from_cosine(cosine(space, x, y), space.accuracy)


@dataclass(frozen=True)
class AngleDecomposition:
    """angle = pi/2 + a + i b with -pi/2 <= a <= pi/2."""

    a: float
    b: float

    @property
    def value(self):
        return HALF_PI + self.a + 1j * self.b


@dataclass(frozen=True)
class CosineDecomposition:
    """cosine = r + i s inside the square [-1, 1]^2."""

    r: float
    s: float

    @property
    def value(self):
        return self.r + 1j * self.s


def decompose_angle(theta) -> AngleDecomposition:
    theta = np.asarray(theta, dtype=complex)
    re, im = theta.real, theta.imag
    inside = np.isfinite(theta) & (re >= 0) & (re <= math.pi)
    boundary = (re == 0) | (re == math.pi)
    if not np.all(inside & ~(boundary & (im != 0))):
        raise DomainError(f"angle outside the strip A: {theta!r}")
    a, b = re - HALF_PI, im
    return AngleDecomposition(a[()] if a.ndim == 0 else a, b[()] if b.ndim == 0 else b)


def decompose_cos(c) -> CosineDecomposition:
    c = np.asarray(c, dtype=complex)
    if not np.all((np.abs(c.real) <= 1) & (np.abs(c.imag) <= 1)):
        raise DomainError(f"cosine outside the square [-1,1]^2: {c!r}")
    r, s = c.real, c.imag
    return CosineDecomposition(r[()] if r.ndim == 0 else r, s[()] if s.ndim == 0 else s)


def angle_ix_predicted(d: AngleDecomposition):
    """Angle of (i x, y) from the decomposition pi/2 + a + i b of angle(x, y).

    Evaluates pi/2 + (-sgn(b) arccos(H-) + i sgn(a) arcosh(H+)) / 2 with

        H-/+ = sqrt((c^2 + cosh^2 b - 2)^2 + 4 c^2 cosh^2 b) -/+ (c^2 + cosh^2 b - 1),
        c = cos(pi/2 + a).
    """
    a = np.asarray(d.a, dtype=float)
    b = np.asarray(d.b, dtype=float)
    if np.any(np.abs(a) > HALF_PI) or np.any((np.abs(a) == HALF_PI) & (b != 0)):
        raise DomainError("invalid decomposition: need |a| <= pi/2, and b = 0 when |a| = pi/2")
    c = np.cos(HALF_PI + a)
    sh = np.sinh(b)
    rho = c * c + sh * sh  # c^2 + cosh^2 b - 1
    s_abs = np.abs(c) * np.cosh(b)
    ca = np.cos(a)
    r_abs = np.abs(sh * ca)  # sqrt(rho - s^2), without cancellation
    rho_m1 = (sh - ca) * (sh + ca)  # c^2 - 1 = -cos^2 a
    alpha, beta, _ = cxfn._half_parts(r_abs, s_abs, rho, rho_m1)
    out = HALF_PI - sgn(b) * alpha + 1j * (sgn(a) * beta)
    return out[()] if np.ndim(out) == 0 else out


# --------------------------------------------------------------------------
# the eight-row table


TABLE_LABELS = ("(x,y)", "(-x,y)", "(y,x)", "(-y,x)", "(ix,y)", "(y,ix)", "(x,iy)", "(iy,x)")


@dataclass(frozen=True)
class TableRow:
    label: str
    angle: complex
    cosine: complex


def angle_table(space: NormedSpace, x, y) -> list[TableRow]:
    x = as_vector(space, x)
    y = as_vector(space, y)
    pairs = [(x, y), (-x, y), (y, x), (-y, x), (1j * x, y), (y, 1j * x), (x, 1j * y), (1j * y, x)]
    firsts = np.stack([p[0] for p in pairs])
    seconds = np.stack([p[1] for p in pairs])
    cos = cosine(space, firsts, seconds)
    ang = angle_from_cosine(cos, space.accuracy)
    return [TableRow(lbl, complex(t), complex(c)) for lbl, t, c in zip(TABLE_LABELS, ang, cos)]


def table_residuals(rows: list[TableRow]) -> dict[str, float]:
    """Deviation of each row from the relations it must satisfy.

    With row (x,y) = pi/2 + a + ib, cosine r + is, and row (ix,y) =
    pi/2 + v + iw, the expected angles and cosines are

        (-x,y)  pi/2 - a - ib   -r - is       (ix,y)  pi/2 + v + iw   -s + ir
        (y,x)   pi/2 + a - ib    r - is       (y,ix)  pi/2 + v - iw   -s - ir
        (-y,x)  pi/2 - a + ib   -r + is       (x,iy)  pi/2 - v - iw    s - ir
                                              (iy,x)  pi/2 - v + iw    s + ir
    """
    by = {row.label: row for row in rows}
    t1, c1 = by["(x,y)"].angle, by["(x,y)"].cosine
    t5 = by["(ix,y)"].angle
    a, b = t1.real - HALF_PI, t1.imag
    v, w = t5.real - HALF_PI, t5.imag
    r, s = c1.real, c1.imag
    expect = {
        "(-x,y)": (HALF_PI - a - 1j * b, -r - 1j * s),
        "(y,x)": (HALF_PI + a - 1j * b, r - 1j * s),
        "(-y,x)": (HALF_PI - a + 1j * b, -r + 1j * s),
        "(ix,y)": (t5, -s + 1j * r),
        "(y,ix)": (HALF_PI + v - 1j * w, -s - 1j * r),
        "(x,iy)": (HALF_PI - v - 1j * w, s - 1j * r),
        "(iy,x)": (HALF_PI - v + 1j * w, s + 1j * r),
    }
    out = {}
    for label, (ang, cos) in expect.items():
        row = by[label]
        out[label] = max(abs(row.angle - ang), abs(row.cosine - cos))
    mods = [abs(row.cosine) for row in rows]
    out["|cos| equal"] = max(mods) - min(mods)
    return out


# --------------------------------------------------------------------------
# twisting x by a unit phase


@dataclass(frozen=True)
class OvalSample:
    phi: np.ndarray
    angle: np.ndarray
    cosine: np.ndarray


def oval_sample(space: NormedSpace, x, y, m: int) -> OvalSample:
    """Angles of (exp(i phi_k) x, y) for phi_k = 2 pi k / m."""
    if m < 2:
        raise DomainError(f"need m >= 2 samples, got {m}")
    x = as_vector(space, x)
    y = as_vector(space, y)
    phi = 2 * np.pi * np.arange(m) / m
    rot = np.exp(1j * phi)
    # exact units at the quarter turns keep i x, -x bitwise exact
    rot = np.where(np.isclose(rot.real, 0, atol=1e-15), 1j * np.sign(rot.imag), rot)
    rot = np.where(np.isclose(rot.imag, 0, atol=1e-15), np.sign(rot.real) + 0j, rot)
    cos = cosine(space, rot[:, None] * x, y)
    return OvalSample(phi, angle_from_cosine(cos, space.accuracy), cos)


def find_real_angle_phase(space: NormedSpace, x, y, tol: float = 1e-10, scan: int = 64) -> float:
    """A phase phi in [0, 2 pi) with |Im <exp(i phi) x | y>| < tol ||x|| ||y||.

    Scans the oval, then refines between neighbours whose imaginary parts
    have opposite signs with a bracketing root finder.  Such neighbours
    exist because the imaginary part at phi + pi is minus the one at phi.
    """
    x = as_vector(space, x)
    y = as_vector(space, y)

    def im_cos(phi):
        return float(np.imag(cosine(space, np.exp(1j * phi) * x, y)))

    f0 = im_cos(0.0)
    if abs(f0) < tol:
        return 0.0
    # the sign of Im cos only needs the two i-combinations of the unit
    # vectors, a third of the norm evaluations of the full cosine
    u = x / space.norm(x)
    v = y / space.norm(y)

    def im_part(phi):
        w = np.exp(1j * np.asarray(phi))[..., None] * u
        n = space.norm(np.stack([w + 1j * v, w - 1j * v]))
        return 0.25 * (n[0] * n[0] - n[1] * n[1])

    grid = 2 * np.pi * np.arange(scan + 1) / scan
    vals = im_part(grid)
    vals[0] = vals[-1] = f0
    hit = np.flatnonzero(np.abs(vals[:-1]) < tol)
    if hit.size and abs(im_cos(grid[hit[0]])) < tol:
        return float(grid[hit[0]])
    flips = np.flatnonzero(np.sign(vals[:-1]) != np.sign(vals[1:]))
    if not flips.size:  # pragma: no cover - excluded by the antipodal sign flip
        raise DegenerateError("no sign change of the imaginary part on the oval")
    k = flips[0]
    lo, hi = grid[k], grid[k + 1]
    # a coarse root is enough here, the result is checked against the full
    # cosine and refined on that if needed
    phi = brentq(lambda t: float(im_part(t)), lo, hi, xtol=tol / 8, rtol=4 * _EPS, maxiter=200)
    if abs(im_cos(phi)) >= tol and np.sign(im_cos(lo)) != np.sign(im_cos(hi)):
        phi = brentq(im_cos, lo, hi, xtol=4 * _EPS, rtol=4 * _EPS, maxiter=200)
    if abs(im_cos(phi)) >= tol:
        raise ConvergenceError(f"no phase with |Im cos| < {tol:g} found near {phi}")
    return float(phi % (2 * np.pi))


# --------------------------------------------------------------------------
# the map t -> angle(x, y + t x)


def default_theta_grid() -> np.ndarray:
    pos = np.logspace(-3, 4, 50)
    return np.concatenate([-pos[::-1], [0.0], pos])


def complex_independent(x, y, rtol: float = 1e-12) -> bool:
    sv = np.linalg.svd(np.vstack([x, y]), compute_uv=False)
    return bool(sv[0] > 0 and sv[-1] > rtol * sv[0])


@dataclass(frozen=True)
class ThetaProfile:
    t: np.ndarray
    angle: np.ndarray
    re_cos: np.ndarray


def theta_profile(space: NormedSpace, x, y, t_grid=None) -> ThetaProfile:
    """Angles of (x, y + t x) over a grid of real t."""
    x = as_vector(space, x)
    y = as_vector(space, y)
    if not complex_independent(x, y):
        raise DegenerateError("x and y are linearly dependent over C")
    t = default_theta_grid() if t_grid is None else np.asarray(t_grid, dtype=float)
    cos = cosine(space, x, y[None, :] + t[:, None] * x[None, :])
    return ThetaProfile(t, angle_from_cosine(cos, space.accuracy), np.real(cos))


# --------------------------------------------------------------------------
# CSB, parallelogram law, deformation


def csb_margin(space: NormedSpace, x, y):
    """|<x|y>| - ||x|| ||y||; positive means the CSB inequality fails."""
    nx, ny, cos, _ = _cosine_parts(space, x, y)
    out = nx * ny * (np.abs(cos) - 1.0)
    return out[()] if np.ndim(out) == 0 else out


def parallelogram_defect(space: NormedSpace, x, y):
    """||x+y||^2 + ||x-y||^2 - 2 (||x||^2 + ||y||^2)."""
    x, y = np.broadcast_arrays(as_vector(space, x), as_vector(space, y))
    n = space.norm(np.stack([x + y, x - y, x, y])) ** 2
    out = n[0] + n[1] - 2 * (n[2] + n[3])
    return out[()] if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class DeformationEstimate:
    value: float
    a: np.ndarray
    b: np.ndarray


def _unit(space, v):
    return v / space.norm(v)[..., None]


def _golden_max(f, lo, hi, iters=30):
    inv = (math.sqrt(5) - 1) / 2
    c, d = hi - inv * (hi - lo), lo + inv * (hi - lo)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc > fd:
            hi, d, fd = d, c, fc
            c = hi - inv * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + inv * (hi - lo)
            fd = f(d)
    return (c, fc) if fc > fd else (d, fd)


def deformation_estimate(
    space: NormedSpace, n_samples: int = 2000, n_refine: int = 10, seed: int = 0, sweeps: int = 3
) -> DeformationEstimate:
    """Lower estimate of sup |<a|b>| over unit vectors a, b.

    Unit vectors are Gaussian draws normalized by the space's own norm.  The
    best ``n_refine`` pairs are then improved by golden-section search along
    each real coordinate of a and b in turn.
    """
    if n_samples < 1:
        raise DomainError("need at least one sample")
    rng = np.random.default_rng(seed)
    dim = space.dim
    a = _unit(space, _random_vectors(rng, (n_samples,), dim))
    b = _unit(space, _random_vectors(rng, (n_samples,), dim))
    # (a, a) and (a, i a) pin the estimate at >= 1
    a = np.concatenate([a, a[:1], a[:1]])
    b = np.concatenate([b, a[:1], 1j * a[:1]])
    mod = np.abs(cosine(space, a, b))
    order = np.argsort(-mod, kind="stable")[: max(1, n_refine)]
    best_val, best_a, best_b = float(mod[order[0]]), a[order[0]], b[order[0]]

    basis = np.concatenate([np.eye(dim), 1j * np.eye(dim)]).astype(complex)
    for idx in order:
        ca, cb = a[idx].copy(), b[idx].copy()
        cur = float(mod[idx])
        step = 0.5
        for _ in range(sweeps):
            for which in (0, 1):
                for e in basis:
                    base = ca if which == 0 else cb

                    def f(t, base=base, e=e, which=which):
                        moved = _unit(space, base + t * e)
                        pa, pb = (moved, cb) if which == 0 else (ca, moved)
                        return float(np.abs(cosine(space, pa, pb)))

                    t, val = _golden_max(f, -step, step)
                    if val > cur:
                        cur = val
                        moved = _unit(space, base + t * e)
                        if which == 0:
                            ca = moved
                        else:
                            cb = moved
            step *= 0.3
        if cur > best_val:
            best_val, best_a, best_b = cur, ca, cb
    return DeformationEstimate(best_val, best_a, best_b)


# --------------------------------------------------------------------------
# the l-infinity example where exp(i phi) does not factor out


@dataclass(frozen=True)
class LinfCounterexample:
    x: np.ndarray
    y: np.ndarray
    phase: complex
    product: complex
    product_exact: complex
    twisted: complex
    twisted_exact: complex
    rotated_product: complex

    @property
    def moduli(self) -> tuple[float, float]:
        return abs(self.rotated_product), abs(self.twisted)


def linf_counterexample() -> LinfCounterexample:
    """Two unit vectors of (C^2, max-norm) with <e x|y> != e <x|y> in modulus."""
    r3, r7, r15, r21, r45 = (math.sqrt(v) for v in (3, 7, 15, 21, 45))
    x = np.array([1 + 1j * r15, 2 + 2j]) / 4
    y = np.array([2 + 1j, 3 + 1j * r7]) / 4
    phase = complex(0.5, 0.5 * r3)
    space = linf_space(2)
    product = complex(gproduct(space, x, y))
    twisted = complex(gproduct(space, phase * x, y))
    product_exact = complex(19 + 4 * r7 + 2 * r15, 7 - 4 * r7 + 4 * r15) / 64
    p = 11 + 2 * (r7 + r21 - r45) - 5 * r3 + r15
    q = 8 + 2 * (4 * r3 - r7 + r15 + r21) + r45
    return LinfCounterexample(
        x=x,
        y=y,
        phase=phase,
        product=product,
        product_exact=product_exact,
        twisted=twisted,
        twisted_exact=complex(p, q) / 64,
        rotated_product=phase * product,
    )
