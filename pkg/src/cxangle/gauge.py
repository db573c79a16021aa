"""Minkowski gauge of conv(twist(S)) for a finite generator set S in C^n.

For ``M = conv(twist(S))`` the gauge is the atomic norm

    ||x||_S = min { sum_j |c_j| : sum_j c_j s_j = x,  c in C^k }

(group a convex combination of twisted atoms by generator).  Its dual is

    max { Re f(x) : |f(s_j)| <= 1 for all j },   f(z) = sum_l f_l z_l,

so any feasible functional gives a lower bound and any representation an
upper bound.  :func:`atomic_gauge` solves the primal with ADMM and returns
both sides as a :class:`GaugeCertificate`.  :func:`atomic_gauge_oracle`
is an independent check through a linear program over a phase grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from .errors import ConvergenceError, DimensionError, DomainError

DEFAULT_TOL = 1e-9
MAX_ITER = 100_000
_CHECK_EVERY = 10
# floor for the normalized duality-gap target; below this ADMM stalls in float64
_GAP_FLOOR = 1e-13
# rows are solved at unit 2-norm; a quarter of tol keeps the absolute gap
# below 2 tol for ||x||_2 <= 8
_TARGET_FRACTION = 0.25


def _rank(mat):
    sv = np.linalg.svd(mat, compute_uv=False)
    if sv.size == 0 or sv[0] == 0:
        return 0
    return int(np.sum(sv > sv[0] * 1e-12))


def check_absorbing(gens) -> bool:
    """True iff the complex span of the generators is all of C^n."""
    gens = np.atleast_2d(np.asarray(gens, dtype=complex))
    return _rank(gens) == gens.shape[1]


@dataclass(frozen=True, eq=False)
class GeneratorSet:
    """Finite generator set; rows of ``gens`` are the vectors s_j."""

    gens: np.ndarray
    tol: float = DEFAULT_TOL
    _pinv: np.ndarray = field(init=False, repr=False)
    _unit: np.ndarray = field(init=False, repr=False)
    _weights: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        gens = np.atleast_2d(np.array(self.gens, dtype=complex))
        if gens.size == 0:
            raise DomainError("generator set must be nonempty")
        if not np.all(np.isfinite(gens)):
            raise DomainError("generators must be finite")
        if not self.tol > 0:
            raise DomainError(f"tol must be positive, got {self.tol}")
        lengths = np.linalg.norm(gens, axis=1)
        if np.any(lengths == 0):
            raise DomainError(f"zero generator at index {int(np.argmin(lengths))}")
        if not check_absorbing(gens):
            raise DomainError("generators do not span C^n, the set is not absorbing")
        gens.setflags(write=False)
        unit = gens / lengths[:, None]
        object.__setattr__(self, "gens", gens)
        object.__setattr__(self, "_unit", unit)
        object.__setattr__(self, "_weights", 1.0 / lengths)
        # columns of A are the unit generators; pinv(A) is k x n
        object.__setattr__(self, "_pinv", np.linalg.pinv(unit.T))

    @property
    def dim(self) -> int:
        return self.gens.shape[1]

    def __len__(self):
        return self.gens.shape[0]


@dataclass(frozen=True)
class GaugeCertificate:
    """Primal representation and dual functional bracketing the gauge.

    ``primal`` holds c_j with ``sum_j c_j s_j = x``; ``dual`` holds f_l with
    ``max_j |sum_l f_l s_jl| <= 1``.
    """

    primal: np.ndarray
    dual: np.ndarray
    upper: float
    lower: float

    @property
    def gap(self) -> float:
        return self.upper - self.lower


def sr_generators(r: float, tol: float = DEFAULT_TOL) -> GeneratorSet:
    """The four generators (1,0), (0,1), (r,-r), (r,-ir) in C^2."""
    if not r > 0:
        raise DomainError(f"r must be positive, got {r}")
    return GeneratorSet(
        np.array([[1, 0], [0, 1], [r, -r], [r, -1j * r]], dtype=complex), tol=tol
    )


def _shrink(w, thresh):
    mag = np.abs(w)
    scale = np.where(mag > thresh, 1.0 - thresh / np.where(mag > 0, mag, 1.0), 0.0)
    return scale * w


def _solve(G: GeneratorSet, X: np.ndarray, rho: float = 1.0, max_iter: int | None = None):
    """ADMM on min sum w_j |c_j| s.t. A c = x for rows x of X (unit-norm rows).

    Returns (upper, lower, primal coefficients for unit generators, dual g)
    where the dual functional is ``f = conj(g)``.
    """
    A = G._unit.T  # n x k
    Ap = G._pinv  # k x n
    w = G._weights
    m, k = X.shape[0], len(G)
    target = max(_TARGET_FRACTION * G.tol, _GAP_FLOOR)
    max_iter = MAX_ITER if max_iter is None else max_iter

    z = X @ Ap.T
    u = np.zeros((m, k), dtype=complex)
    upper = np.full(m, np.inf)
    lower = np.full(m, -np.inf)
    coef = np.array(z)
    dual = np.zeros((m, A.shape[0]), dtype=complex)
    active = np.arange(m)
    AH_pinv = np.linalg.pinv(np.conj(G.gens))  # maps lambda in C^k to g in C^n

    it = 0
    while active.size and it < max_iter:
        x = X[active]
        zz, uu = z[active], u[active]
        for _ in range(_CHECK_EVERY):
            v = zz - uu
            c = v + (x - v @ A.T) @ Ap.T
            zz = _shrink(c + uu, w / rho)
            uu = uu + c - zz
        it += _CHECK_EVERY
        z[active], u[active] = zz, uu

        # certificates: project z onto the affine set, rescale the multiplier
        cf = zz + (x - zz @ A.T) @ Ap.T
        up = np.sum(w * np.abs(cf), axis=1)
        lam = rho * uu / w  # multiplier in terms of the original generators
        g = lam @ AH_pinv.T
        peak = np.max(np.abs(g @ np.conj(G.gens).T), axis=1)
        g = g / np.maximum(peak, 1.0)[:, None]
        lo = np.real(np.sum(np.conj(g) * x, axis=1))

        better_up = up < upper[active]
        upper[active] = np.where(better_up, up, upper[active])
        coef[active] = np.where(better_up[:, None], cf, coef[active])
        better_lo = lo > lower[active]
        lower[active] = np.where(better_lo, lo, lower[active])
        dual[active] = np.where(better_lo[:, None], g, dual[active])

        done = upper[active] - lower[active] <= target
        active = active[~done]

    return upper, lower, coef * w, dual, active


def _prepare(G: GeneratorSet, x):
    x = np.asarray(x, dtype=complex)
    if x.shape[-1] != G.dim:
        raise DimensionError(f"vector length {x.shape[-1]} != generator dimension {G.dim}")
    if not np.all(np.isfinite(x)):
        raise DomainError("vector must be finite")
    return x


def gauge_batch(G: GeneratorSet, X, return_certificates: bool = False):
    """Gauge of every row of ``X`` (any leading shape, last axis = dimension).

    Values are primal objective values, i.e. attained upper bounds.  The
    certified gap is at most ``tol * ||x||_2 / 4``.
    """
    X = _prepare(G, X)
    lead = X.shape[:-1]
    flat = X.reshape(-1, G.dim)
    scale = np.linalg.norm(flat, axis=1)
    nz = scale > 0
    values = np.zeros(flat.shape[0])
    lowers = np.zeros(flat.shape[0])
    coefs = np.zeros((flat.shape[0], len(G)), dtype=complex)
    duals = np.zeros((flat.shape[0], G.dim), dtype=complex)
    if np.any(nz):
        Xn = flat[nz] / scale[nz, None]
        # rotate each row so its largest coordinate is real positive; the
        # gauge is phase invariant, and phase-related inputs then give
        # identical solver runs
        lead_idx = np.argmax(np.abs(Xn), axis=1)
        top = Xn[np.arange(Xn.shape[0]), lead_idx]
        rot = np.conj(top) / np.abs(top)
        Xn = Xn * rot[:, None]
        up, lo, cf, g, stalled = _solve(G, Xn)
        cf = cf * np.conj(rot)[:, None]
        g = g * np.conj(rot)[:, None]
        if stalled.size:
            i = stalled[0]
            raise ConvergenceError(
                f"ADMM did not reach gap {G.tol:g} in {MAX_ITER} iterations",
                lower=float(lo[i] * scale[nz][i]),
                upper=float(up[i] * scale[nz][i]),
            )
        s = scale[nz]
        values[nz] = up * s
        lowers[nz] = lo * s
        coefs[nz] = cf * s[:, None]
        # dual functional f = conj(g); it is scale-free
        duals[nz] = np.conj(g)
    values = values.reshape(lead)
    if not return_certificates:
        return values[()] if values.ndim == 0 else values
    return values, lowers.reshape(lead), coefs.reshape(lead + (len(G),)), duals.reshape(lead + (G.dim,))


def atomic_gauge(G: GeneratorSet, x) -> tuple[float, GaugeCertificate]:
    """Gauge of a single vector together with its primal/dual certificate."""
    x = _prepare(G, x)
    if x.ndim != 1:
        raise DimensionError("atomic_gauge takes one vector; use gauge_batch for arrays")
    val, lo, coef, dual = gauge_batch(G, x, return_certificates=True)
    cert = GaugeCertificate(primal=coef, dual=dual, upper=float(val), lower=float(lo))
    return float(val), cert


def atomic_gauge_oracle(G: GeneratorSet, x, m: int = 720) -> tuple[float, float]:
    """Phase-grid LP overestimate of the gauge and its worst-case factor.

    Replaces each generator by the m rotated copies ``exp(2 pi i l/m) s_j`` and
    minimizes the total nonnegative weight.  The returned value ``v``
    satisfies ``gauge <= v <= gauge / cos(pi/m)``.
    """
    if m < 8:
        raise DomainError(f"phase count must be >= 8, got {m}")
    x = _prepare(G, x)
    factor = 1.0 / math.cos(math.pi / m)
    if not np.any(x):
        return 0.0, factor
    phases = np.exp(2j * np.pi * np.arange(m) / m)
    atoms = (phases[:, None, None] * G.gens[None, :, :]).reshape(-1, G.dim)
    a_eq = np.vstack([atoms.real.T, atoms.imag.T])
    b_eq = np.concatenate([x.real, x.imag])
    res = linprog(np.ones(atoms.shape[0]), A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method="highs-ds")
    if res.status != 0:
        raise RuntimeError(f"phase-grid LP failed: {res.message}")
    return float(res.fun), factor


def relative_accuracy(G: GeneratorSet) -> float:
    """Bound on the relative error of values returned by :func:`gauge_batch`.

    The normalized gap target bounds the absolute error for unit 2-norm
    input, and the gauge of such input is at least ``1 / max_j ||s_j||_2``.
    """
    target = max(_TARGET_FRACTION * G.tol, _GAP_FLOOR)
    return float(target * np.max(np.linalg.norm(G.gens, axis=1)))


def in_conv_twist(G: GeneratorSet, x) -> bool:
    """Membership of x in conv(twist(S)), decided through the gauge."""
    return bool(gauge_batch(G, x) <= 1.0 + G.tol)
