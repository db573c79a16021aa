"""Audit of the asserted norm values for the four-generator family S_r.

Each asserted value comes from one explicit convex combination, so it is an
upper bound on the gauge.  The report puts it next to the solver's value and
the solver's dual lower bound and labels the outcome:

* ``confirmed``: the certified bracket sits on the asserted value;
* ``upper-bound-only``: the assertion is not beaten but not certified either;
* ``refuted-numerically``: the solver found a strictly cheaper representation.

Derived quantities carry no dual bound; they are confirmed when the
recomputed value agrees.  The product values are asserted for (1,0) and (0,1)
taken as unit vectors, so they are compared with the normalized product
``<a|b> / (||a|| ||b||)``, which coincides with ``<a|b>`` exactly when both
norms are 1.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .angle_core import cosine, csb_margin, gauge_space
from .errors import DomainError
from .gauge import DEFAULT_TOL, gauge_batch, sr_generators

CONFIRMED = "confirmed"
UPPER_BOUND_ONLY = "upper-bound-only"
REFUTED = "refuted-numerically"

# r at which the limit of the product modulus is evaluated
_LIMIT_R = 1e4


@dataclass(frozen=True)
class Claim:
    name: str
    paper_value: float
    solver_value: float
    lower_bound: float | None
    verdict: str


@dataclass(frozen=True)
class ClaimReport:
    r: float
    claims: list[Claim]
    csb_margin: float

    def to_dict(self) -> dict:
        return {"r": self.r, "claims": [asdict(c) for c in self.claims], "csb_margin": self.csb_margin}

    @classmethod
    def from_dict(cls, data: dict) -> "ClaimReport":
        return cls(
            r=float(data["r"]),
            claims=[Claim(**c) for c in data["claims"]],
            csb_margin=float(data["csb_margin"]),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False)

    @classmethod
    def from_json(cls, text: str) -> "ClaimReport":
        return cls.from_dict(json.loads(text))

    def claim(self, name: str) -> Claim:
        for c in self.claims:
            if c.name == name:
                return c
        raise KeyError(name)


def norm_verdict(paper: float, upper: float, lower: float, tol: float) -> str:
    if upper < paper - tol:
        return REFUTED
    if lower >= paper - tol and upper <= paper + tol:
        return CONFIRMED
    return UPPER_BOUND_ONLY


def value_verdict(paper: float, computed: float, tol: float) -> str:
    return CONFIRMED if abs(computed - paper) <= 10 * tol else REFUTED


def _product_at(r: float, tol: float) -> complex:
    space = gauge_space(sr_generators(r, tol))
    return complex(cosine(space, np.array([1, 0]), np.array([0, 1])))


def paper_claim_report(r: float, tol: float = DEFAULT_TOL) -> ClaimReport:
    """Compare the asserted S_r norms and product values with computed ones.

    The values 1/r for (1,-1) and (1,-i), and the product formulas built on
    them, are asserted only for r >= 1/2 and are left out below that.
    """
    if not r > 0:
        raise DomainError(f"r must be positive, got {r}")
    G = sr_generators(r, tol)
    asserted = [
        ("norm(1,1)", (1, 1), 2.0),
        ("norm(1,i)", (1, 1j), 2.0),
    ]
    if r >= 0.5:
        asserted += [("norm(1,-1)", (1, -1), 1.0 / r), ("norm(1,-i)", (1, -1j), 1.0 / r)]
    asserted += [("norm(1,0)", (1, 0), 1.0), ("norm(0,1)", (0, 1), 1.0)]

    X = np.array([v for _, v, _ in asserted], dtype=complex)
    upper, lower, _, _ = gauge_batch(G, X, return_certificates=True)
    claims = [
        Claim(name, paper, float(up), float(lo), norm_verdict(paper, float(up), float(lo), tol))
        for (name, _, paper), up, lo in zip(asserted, upper, lower)
    ]

    if r >= 0.5:
        q = 1.0 / r
        paper_part = 0.25 * (4.0 - q * q)
        paper_mod = math.sqrt(2.0) * (1.0 - (0.5 * q) ** 2)
        prod = _product_at(r, tol)
        claims += [
            Claim("product_re", paper_part, prod.real, None, value_verdict(paper_part, prod.real, tol)),
            Claim("product_im", paper_part, prod.imag, None, value_verdict(paper_part, prod.imag, tol)),
            Claim("product_modulus", paper_mod, abs(prod), None, value_verdict(paper_mod, abs(prod), tol)),
        ]
    far = abs(_product_at(_LIMIT_R, tol))
    claims.append(Claim("modulus_limit", math.sqrt(2.0), far, None, value_verdict(math.sqrt(2.0), far, tol)))

    space = gauge_space(G)
    margin = float(csb_margin(space, np.array([1, 0]), np.array([0, 1])))
    return ClaimReport(r=float(r), claims=claims, csb_margin=margin)
