"""Geometry in finite-dimensional complex inner-product spaces.

The inner product is ``<x|y> = x H conj(y)`` for a Hermitian positive
definite matrix H, linear in the first argument.  Angles are those of the
induced norm, so everything here can be checked against the norm-only
formulas in :mod:`cxangle.angle_core`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import angle_core
from .cxfn import carccos
from .errors import DegenerateError, DimensionError, DomainError, RankError

_HERMITIAN_TOL = 1e-12
_REPASS_LOSS = 1e-8


@dataclass(frozen=True, eq=False)
class HermitianSpace:
    gram: np.ndarray
    _chol: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        H = np.array(self.gram, dtype=complex)
        if H.ndim != 2 or H.shape[0] != H.shape[1] or H.shape[0] < 1:
            raise DimensionError(f"Gram matrix must be square and nonempty, got shape {H.shape}")
        if np.max(np.abs(H - H.conj().T)) > _HERMITIAN_TOL:
            raise DomainError("Gram matrix is not Hermitian")
        try:
            L = np.linalg.cholesky(H)
        except np.linalg.LinAlgError as exc:
            raise DomainError("Gram matrix is not positive definite") from exc
        H.setflags(write=False)
        object.__setattr__(self, "gram", H)
        object.__setattr__(self, "_chol", L)

    @classmethod
    def identity(cls, dim: int) -> "HermitianSpace":
        return cls(np.eye(dim))

    @property
    def dim(self) -> int:
        return self.gram.shape[0]

    def normed(self) -> angle_core.NormedSpace:
        return angle_core.gram_space(self.gram)

    def norm(self, x):
        return np.sqrt(np.maximum(np.real(inner_eval(self, x, x)), 0.0))


def _vec(space: HermitianSpace, x) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    if x.ndim == 0 or x.shape[-1] != space.dim:
        raise DimensionError(f"expected vectors of length {space.dim}, got shape {x.shape}")
    return x


def inner_eval(space: HermitianSpace, x, y):
    x, y = _vec(space, x), _vec(space, y)
    out = np.einsum("...i,ij,...j->...", x, space.gram, np.conj(y))
    return out[()] if np.ndim(out) == 0 else out


def _angle(space, x, y):
    return complex(angle_core.angle(space.normed(), x, y))


def _normalized(space, x, y) -> complex:
    nx, ny = space.norm(x), space.norm(y)
    if nx == 0 or ny == 0:
        raise DomainError("angle is undefined for a zero vector")
    return complex(inner_eval(space, x, y)) / (nx * ny)


# --------------------------------------------------------------------------
# orthonormal systems


@dataclass(frozen=True)
class OrthonormalSystem:
    vectors: np.ndarray
    tol: float

    def __len__(self):
        return self.vectors.shape[0]


def is_orthonormal_system(space: HermitianSpace, vectors, tol: float = 1e-9) -> bool:
    V = np.atleast_2d(_vec(space, vectors))
    M = V @ space.gram @ V.conj().T
    return bool(np.max(np.abs(M - np.eye(V.shape[0]))) <= tol)


def gram_schmidt(space: HermitianSpace, vectors, tol: float = 1e-9) -> OrthonormalSystem:
    """Modified Gram-Schmidt in the inner product of ``space``.

    Projections use the full complex coefficient, so the output spans the
    same real subspace as the input exactly when every pairwise product of
    the input is real.  A vector is re-orthogonalized once if its overlap
    with the earlier ones exceeds 1e-8 after the first pass.  A vector whose
    remainder has relative norm below ``tol`` raises :class:`RankError`.
    """
    V = np.array(np.atleast_2d(_vec(space, vectors)), dtype=complex)
    out = []
    for k, v in enumerate(V):
        original = space.norm(v)
        if original == 0:
            raise RankError(f"vector {k} is zero", index=k)
        w = v.copy()
        for _ in range(2):
            for q in out:
                w = w - inner_eval(space, w, q) * q
            loss = max((abs(inner_eval(space, w, q)) for q in out), default=0.0)
            if loss <= _REPASS_LOSS * max(space.norm(w), 1e-300):
                break
        nw = space.norm(w)
        if nw <= tol * original:
            raise RankError(f"vector {k} is dependent on the previous ones", index=k)
        out.append(w / nw)
    return OrthonormalSystem(np.array(out), tol)


def real_orthonormal_combos(T: OrthonormalSystem, coeffs) -> np.ndarray:
    """Real linear combinations sum_i r_i x_i for rows r of ``coeffs``."""
    return np.asarray(coeffs) @ T.vectors


@dataclass(frozen=True)
class RealSpanAudit:
    imag_residual: float
    cosine_residual: float


def real_span_angle_audit(
    space: HermitianSpace, T: OrthonormalSystem, trials: int = 1000, seed: int = 0, coeffs=None
) -> RealSpanAudit:
    """Largest |Im angle| over pairs from the real span of T.

    Also compares the cosine with ``sum r_i s_i / (||y|| ||z||)``.  Passing
    ``coeffs`` (shape (trials, 2, len(T))) overrides the random draw, which is
    how complex coefficients are injected as a negative control.
    """
    if coeffs is None:
        rng = np.random.default_rng(seed)
        coeffs = rng.normal(size=(trials, 2, len(T)))
    coeffs = np.asarray(coeffs)
    Y = coeffs[:, 0] @ T.vectors
    Z = coeffs[:, 1] @ T.vectors
    normed = space.normed()
    cos = angle_core.cosine(normed, Y, Z)
    theta = angle_core.angle_from_cosine(cos)
    ny, nz = normed.norm(Y), normed.norm(Z)
    predicted = np.sum(coeffs[:, 0] * np.conj(coeffs[:, 1]), axis=-1) / (ny * nz)
    return RealSpanAudit(float(np.max(np.abs(np.imag(theta)))), float(np.max(np.abs(cos - predicted))))


# --------------------------------------------------------------------------
# angle identities


def angle_additivity_residual(space: HermitianSpace, x, y) -> complex:
    """``angle(x, x+y) + angle(x+y, y) - angle(x, y)`` for unit x, y."""
    x, y = _vec(space, x), _vec(space, y)
    for name, v in (("x", x), ("y", y)):
        if abs(space.norm(v) - 1.0) > 1e-9:
            raise DomainError(f"{name} must be a unit vector")
    s = x + y
    if space.norm(s) <= 1e-12:
        raise DegenerateError("x = -y, the sum x + y vanishes")
    return _angle(space, x, s) + _angle(space, s, y) - _angle(space, x, y)


def additivity_residual_formula(c: complex) -> complex:
    """The same residual written through the cosine ``c = r + i s`` of (x, y)."""
    r, s = c.real, c.imag
    return complex(carccos(r - s * s / (1.0 + r) + 2j * s) - carccos(c))


def triangle_angle_sum(space: HermitianSpace, x, y) -> complex:
    x, y = _vec(space, x), _vec(space, y)
    if min(space.norm(x), space.norm(y), space.norm(x - y)) == 0:
        raise DegenerateError("degenerate triangle")
    return _angle(space, x, y) + _angle(space, -x, y - x) + _angle(space, -y, x - y)


def law_of_cosines_residual(space: HermitianSpace, x, y, symmetrized: bool = False) -> complex:
    """``||x-y||^2 - (||x||^2 + ||y||^2 - 2 ||x|| ||y|| cos)``.

    The symmetrized form uses ``(cos angle(x,y) + cos angle(y,x)) / 2``.
    """
    x, y = _vec(space, x), _vec(space, y)
    nx, ny = space.norm(x), space.norm(y)
    normed = space.normed()
    c = complex(angle_core.cosine(normed, x, y))
    if symmetrized:
        c = 0.5 * (c + complex(angle_core.cosine(normed, y, x)))
    return complex(space.norm(x - y) ** 2 - (nx * nx + ny * ny - 2 * nx * ny * c))


@dataclass(frozen=True)
class RealAnglePhases:
    phi: float
    angle_plus: float
    angle_minus: float
    orthogonal: bool = False


def two_real_angle_phases(space: HermitianSpace, x, y, tol: float = 1e-12) -> RealAnglePhases:
    """Phase phi with angle(e^{i phi} x, y) = pi/2 + a real, 0 < a <= pi/2.

    Rotating by a further pi gives the second real angle pi/2 - a.  For an
    orthogonal pair every phase gives pi/2; then phi = 0 and ``orthogonal``
    is set.
    """
    x, y = _vec(space, x), _vec(space, y)
    c = _normalized(space, x, y)
    if abs(c) <= tol:
        return RealAnglePhases(0.0, math.pi / 2, math.pi / 2, orthogonal=True)
    # e^{i phi} c = -|c| gives the obtuse angle pi/2 + a
    phi = (math.pi - math.atan2(c.imag, c.real)) % (2 * math.pi)
    if abs(phi - 2 * math.pi) < 1e-15:
        phi = 0.0
    # the product rotates exactly with the phase, so both cosines are -+|c|
    rho = min(abs(c), 1.0)
    return RealAnglePhases(phi, math.acos(-rho), math.acos(rho))


@dataclass(frozen=True)
class AltAngles:
    re_part: float
    arccos_re: float
    arccos_modulus: float
    split: complex

    def as_tuple(self):
        return (self.re_part, self.arccos_re, self.arccos_modulus, self.split)


def alt_angles_from_cosine(c: complex) -> AltAngles:
    """The four alternative angle notions for a normalized product c = r + is.

    Re of the angle, arccos r, arccos rho and arccos r + i arcsin s, where
    ``c = rho e^{i phi}`` with phi in (-pi/2, pi/2] and rho real of either
    sign, so a negative real product keeps arccos rho = pi.
    """
    # same rounding snap as the angle itself, so parallel pairs give 0 exactly
    c = complex(angle_core._into_b(complex(c)))
    r = min(1.0, max(-1.0, c.real))
    s = min(1.0, max(-1.0, c.imag))
    rho = min(1.0, abs(c))
    if c.real < 0 or (c.real == 0 and c.imag < 0):
        rho = -rho
    return AltAngles(
        re_part=float(np.real(carccos(c))),
        arccos_re=math.acos(r),
        arccos_modulus=math.acos(rho),
        split=complex(math.acos(r), math.asin(s)),
    )


def alt_angles(space: HermitianSpace, x, y) -> AltAngles:
    return alt_angles_from_cosine(_normalized(space, x, y))
