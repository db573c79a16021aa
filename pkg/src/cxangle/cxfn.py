"""Complex cos, sin, arcsin and arccos with explicit principal branches.

The strip ``A = {0 < Re z < pi} | {0, pi}`` and the slit plane
``B = C minus the real rays (-inf, -1) and (1, inf)`` are mapped onto
each other by :func:`ccos` and :func:`carccos`.  Everything here accepts
Python scalars or numpy arrays and works elementwise; scalar input gives
a numpy scalar back.

The inverse functions are written through the two auxiliary numbers

    G-/+ = sqrt((r^2 + s^2 - 1)^2 + 4 s^2) -/+ (r^2 + s^2)

for ``w = r + i s``, as ``arcsin w = (sgn r * arccos G- + i sgn s * arcosh G+) / 2``.
The half angles are evaluated from ``1 - G-``, ``1 + G-`` and ``G+ - 1``
rearranged so that no two nearly equal terms are subtracted.
"""

from __future__ import annotations

import enum
import math

import numpy as np

from .errors import DomainError, RangeError

HALF_PI = 0.5 * math.pi
#: log(sqrt(2) + 1), the modulus of the imaginary part of arccos(+-i)
LOG_SQRT2_PLUS_1 = math.log(math.sqrt(2.0) + 1.0)

# rounding slack for arguments of the real arccos, in units of eps
_CLAMP_ULPS = 4


class Region(enum.Enum):
    A_INTERIOR = "A_interior"
    A_BOUNDARY = "A_boundary"
    B = "B"
    SQ = "SQ"
    OUTSIDE = "outside"


def _finish(arr):
    return arr[()] if arr.ndim == 0 else arr


def sgn(x):
    """Signum with ``sgn(0) = 0``; negative zero also maps to 0."""
    x = np.asarray(x, dtype=float)
    return _finish(np.where(x > 0, 1.0, np.where(x < 0, -1.0, 0.0)))


def _check_finite_input(z):
    if not np.all(np.isfinite(z)):
        raise DomainError(f"non-finite argument: {z!r}")


def _check_finite_output(out, z):
    if not np.all(np.isfinite(out)):
        raise RangeError(f"result not representable for argument {z!r}")


def ccos(z):
    """cos(a + ib) = cos(a) cosh(b) - i sin(a) sinh(b)."""
    z = np.asarray(z, dtype=complex)
    _check_finite_input(z)
    a, b = z.real, z.imag
    with np.errstate(over="ignore", invalid="ignore"):
        out = np.cos(a) * np.cosh(b) - 1j * (np.sin(a) * np.sinh(b))
        # keep the exact zero imaginary part on the real axis
        out = np.where(b == 0, np.cos(a) + 0j, out)
    _check_finite_output(out, z)
    return _finish(out)


def csin(z):
    """sin(a + ib) = sin(a) cosh(b) + i cos(a) sinh(b)."""
    z = np.asarray(z, dtype=complex)
    _check_finite_input(z)
    a, b = z.real, z.imag
    with np.errstate(over="ignore", invalid="ignore"):
        out = np.sin(a) * np.cosh(b) + 1j * (np.cos(a) * np.sinh(b))
        out = np.where(b == 0, np.sin(a) + 0j, out)
    _check_finite_output(out, z)
    return _finish(out)


def arcosh_r(x):
    """Real area hyperbolic cosine ``log(x + sqrt(x^2 - 1))`` for ``x >= 1``."""
    x = np.asarray(x, dtype=float)
    if np.any(np.isnan(x)) or np.any(x < 1.0):
        raise DomainError(f"arcosh needs x >= 1, got {x!r}")
    with np.errstate(over="ignore", invalid="ignore"):
        big = x > 1e8
        xs = np.where(big, 2.0, x)
        small = np.log(xs + np.sqrt((xs - 1.0) * (xs + 1.0)))
        out = np.where(big, np.log(2.0) + np.log(np.where(big, x, 1.0)), small)
    _check_finite_output(out, x)
    return _finish(out)


def clamp_unit(x):
    """Pull a real arccos argument back into [-1, 1] if it left by rounding only.

    Excursions of at most a few ulps are clamped; anything larger is a real
    domain violation and raises.
    """
    x = np.asarray(x, dtype=float)
    slack = _CLAMP_ULPS * np.finfo(float).eps
    if np.any(np.isnan(x)) or np.any(np.abs(x) > 1.0 + slack):
        raise DomainError(f"real arccos argument outside [-1, 1]: {x!r}")
    return _finish(np.clip(x, -1.0, 1.0))


def in_b(w):
    """Elementwise membership in B (exact comparisons)."""
    w = np.asarray(w, dtype=complex)
    return _finish(np.isfinite(w) & ~((w.imag == 0) & (np.abs(w.real) > 1.0)))


def _check_b(w):
    if not np.all(in_b(w)):
        bad = np.asarray(w)[~np.asarray(in_b(w))]
        raise DomainError(f"argument outside B (real with |r| > 1): {bad!r}")


def _half_parts(r_abs, s_abs, rho, rho_m1):
    """Return (arccos(G-)/2, arcosh(G+)/2, pi/2 - arccos(G-)/2).

    Here G-/+ = sqrt((rho-1)^2 + 4 s^2) -/+ rho.  The complement is returned
    separately so that arccos never subtracts two nearly equal angles.

    ``rho = r^2 + s^2`` and ``rho_m1 = rho - 1`` are passed separately
    because callers can form them without cancellation.  Only the square roots of ``1 -+ G-`` and
    ``G+ - 1`` are needed; they are built from |r| and |s| directly so that
    tiny components do not underflow through squaring.
    """
    h = np.hypot(rho_m1, 2.0 * s_abs)
    sq_omg = 2.0 * r_abs / np.sqrt(1.0 + rho + h)
    with np.errstate(divide="ignore", invalid="ignore"):
        # rho >= 1: G+ - 1 has no cancellation, 1 + G- is recovered from it
        gp1_hi = h + rho_m1
        root_hi = np.sqrt(gp1_hi)
        sq_opg_hi = np.where(root_hi > 0, 2.0 * s_abs / root_hi, 0.0)
        # rho < 1: the other way round
        opg_lo = h - rho_m1
        root_lo = np.sqrt(opg_lo)
        sq_gp1_lo = np.where(root_lo > 0, 2.0 * s_abs / root_lo, 0.0)
    hi = rho_m1 >= 0.0
    sq_opg = np.where(hi, sq_opg_hi, root_lo)
    sq_gp1 = np.where(hi, root_hi, sq_gp1_lo)
    alpha = np.arctan2(sq_omg, sq_opg)
    beta = np.arcsinh(sq_gp1 / math.sqrt(2.0))
    return alpha, beta, np.arctan2(sq_opg, sq_omg)


def _parts(r, s):
    ra, sa = np.abs(r), np.abs(s)
    return ra, sa, ra * ra + sa * sa, (ra - 1.0) * (ra + 1.0) + sa * sa


def carcsin(w):
    """Principal arcsin on B, built from the real arccos and arcosh."""
    w = np.asarray(w, dtype=complex)
    _check_b(w)
    r, s = w.real, w.imag
    with np.errstate(over="ignore", invalid="ignore"):
        alpha, beta, _ = _half_parts(*_parts(r, s))
        out = sgn(r) * alpha + 1j * (sgn(s) * beta)
    _check_finite_output(out, w)
    return _finish(out)


def carccos(w):
    """Principal arccos ``pi/2 - arcsin(w)`` on B; the value lies in A."""
    w = np.asarray(w, dtype=complex)
    _check_b(w)
    r, s = w.real, w.imag
    with np.errstate(over="ignore", invalid="ignore"):
        _, beta, comp = _half_parts(*_parts(r, s))
        real = np.where(r > 0, comp, np.where(r < 0, math.pi - comp, HALF_PI))
        # a real part within an ulp of 0 or pi can round onto the boundary
        # lines, which belong to A only at Im = 0; step one ulp inward
        edge = (s != 0) & ((real <= 0.0) | (real >= math.pi))
        real = np.where(edge, np.nextafter(np.clip(real, 0.0, math.pi), HALF_PI), real)
        out = real - 1j * (sgn(s) * beta)
    _check_finite_output(out, w)
    return _finish(out)


def region_classify(z, which):
    """Classify a scalar against region ``"A"``, ``"B"`` or ``"SQ"``.

    Membership is decided with exact comparisons, no tolerance.
    """
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        return Region.OUTSIDE
    if which == "A":
        if 0.0 < z.real < math.pi:
            return Region.A_INTERIOR
        if z.imag == 0.0 and z.real in (0.0, math.pi):
            return Region.A_BOUNDARY
        return Region.OUTSIDE
    if which == "B":
        return Region.B if bool(in_b(z)) else Region.OUTSIDE
    if which == "SQ":
        ok = -1.0 <= z.real <= 1.0 and -1.0 <= z.imag <= 1.0
        return Region.SQ if ok else Region.OUTSIDE
    raise ValueError(f"unknown region {which!r}; expected 'A', 'B' or 'SQ'")
