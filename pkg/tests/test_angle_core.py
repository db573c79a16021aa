import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cxangle import angle_core as ac
from cxangle.cxfn import LOG_SQRT2_PLUS_1
from cxangle.errors import DegenerateError, DimensionError, DomainError
from conftest import random_pairs

PI = math.pi
IX_X = PI / 2 - 1j * LOG_SQRT2_PLUS_1

coord = st.floats(-10, 10, allow_nan=False).filter(lambda v: v == 0 or abs(v) > 1e-3)
vec2 = st.lists(st.builds(complex, coord, coord), min_size=2, max_size=2).map(np.array).filter(
    lambda v: np.linalg.norm(v) > 1e-2
)


def literal_ix(a, b):
    """Angle of (ix, y) from H-/+ exactly as written, with math functions."""
    c = math.cos(PI / 2 + a)
    ch = math.cosh(b)
    p = c * c + ch * ch - 1
    root = math.sqrt((c * c + ch * ch - 2) ** 2 + 4 * c * c * ch * ch)
    hm, hp = root - p, root + p
    sb = math.copysign(1.0, b) if b else 0.0
    sa = math.copysign(1.0, a) if a else 0.0
    return PI / 2 + 0.5 * (-sb * math.acos(max(-1.0, min(1.0, hm))) + 1j * sa * math.acosh(max(1.0, hp)))


# ---------------------------------------------------------------- spaces


def test_norm_examples():
    assert ac.l2_space(2).norm([3, 4j]) == pytest.approx(5)
    x = np.array([1 + 1j * math.sqrt(15), 2 + 2j]) / 4
    assert ac.linf_space(2).norm(x) == pytest.approx(1, abs=1e-15)
    assert ac.lp_space(2, 4).norm([1, 1]) == pytest.approx(2 ** 0.25)
    assert ac.norm_eval(ac.gram_space(np.diag([4.0, 1.0])), [1, 0]) == pytest.approx(2)


def test_lp_extremes():
    assert ac.lp_space(2, 1).norm([3, 4j]) == pytest.approx(7)
    assert ac.lp_space(2, math.inf).kind == "linf"
    assert ac.lp_space(2, 200).norm([1e300, 1e300]) == pytest.approx(1e300 * 2 ** (1 / 200))
    with pytest.raises(DomainError):
        ac.lp_space(2, 0.5)


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        ac.l2_space(3).norm([1, 2])
    with pytest.raises(DimensionError):
        ac.gproduct(ac.l2_space(2), [1, 2, 3], [1, 2, 3])


def test_gram_space_rejects_bad_matrices():
    with pytest.raises(DomainError):
        ac.gram_space([[1, 1j], [1j, 1]])
    with pytest.raises(DomainError):
        ac.gram_space([[1, 0], [0, -1]])
    with pytest.raises(DimensionError):
        ac.gram_space([[1, 0, 0]])


@pytest.mark.parametrize("name", ["l2", "l4", "linf", "gauge_a", "gauge_b"])
def test_norm_axiom_audit_passes(name):
    from conftest import SPACES

    assert ac.audit_norm_axioms(SPACES[name], trials=100) == {}


def test_debug_audit_rejects_a_non_norm():
    # squared length: fails absolute homogeneity
    bogus = ac.NormedSpace(2, "l2", lambda x: np.sum(np.abs(x) ** 2, axis=-1))
    with pytest.raises(DomainError):
        ac._build(bogus, debug=True)
    assert ac.l2_space(2, debug=True).dim == 2


# ---------------------------------------------------------------- product


def test_product_examples():
    L = ac.l2_space(2)
    assert ac.gproduct(L, [1, 0], [0, 1]) == 0
    assert ac.gproduct(L, [1, 0], [1, 0]) == pytest.approx(1)
    assert ac.gproduct(L, [0, 0], [1, 2]) == 0


def test_product_is_inner_product_for_l2():
    x, y = random_pairs(3, 200, 3)
    direct = np.sum(x * np.conj(y), axis=-1)
    np.testing.assert_allclose(ac.gproduct(ac.l2_space(3), x, y), direct, rtol=1e-12, atol=1e-12)


def test_linf_product_radicals():
    e = ac.linf_counterexample()
    assert abs(e.product - e.product_exact) < 1e-12
    assert abs(e.twisted - e.twisted_exact) < 1e-12
    assert e.product == pytest.approx(0.58327 + 0.18608j, abs=1e-5)
    assert e.twisted == pytest.approx(0.11333 + 0.62788j, abs=1e-5)
    a, b = e.moduli
    assert abs(a - b) > 0.02


def test_product_properties(space):
    x, y = random_pairs(5, 150, space.dim)
    p = ac.gproduct(space, x, y)
    # conjugate symmetry, pure-imaginary and real homogeneity, norm recovery
    np.testing.assert_allclose(ac.gproduct(space, y, x), np.conj(p), atol=1e-9)
    np.testing.assert_allclose(ac.gproduct(space, 1j * x, y), 1j * p, atol=1e-9)
    np.testing.assert_allclose(ac.gproduct(space, -x, y), -p, atol=1e-9)
    np.testing.assert_allclose(ac.gproduct(space, 2.5 * x, y), 2.5 * p, atol=1e-8)
    nx = space.norm(x)
    np.testing.assert_allclose(np.sqrt(ac.gproduct(space, x, x).real), nx, rtol=1e-9)
    assert np.max(np.abs(ac.gproduct(space, x, x).imag)) < 1e-9


def test_phase_homogeneity_on_the_diagonal(space):
    x, _ = random_pairs(6, 100, space.dim)
    phi = np.linspace(0, 2 * PI, 100)
    rot = np.exp(1j * phi)[:, None]
    lhs = ac.gproduct(space, rot * x, x)
    rhs = np.exp(1j * phi) * ac.gproduct(space, x, x)
    assert np.max(np.abs(lhs - rhs) / space.norm(x) ** 2) < 1e-10


def test_cosine_in_square(space):
    x, y = random_pairs(7, 300, space.dim)
    c = ac.cosine(space, x, y)
    assert np.all(np.abs(c.real) <= 1 + 1e-12) and np.all(np.abs(c.imag) <= 1 + 1e-12)
    assert np.all(np.abs(c) <= math.sqrt(2) + 1e-12)


@settings(max_examples=150, deadline=None)
@given(vec2, vec2)
def test_product_properties_lp3(x, y):
    sp = ac.lp_space(2, 3)
    p = complex(ac.gproduct(sp, x, y))
    assert abs(complex(ac.gproduct(sp, y, x)) - p.conjugate()) <= 1e-9 * (1 + abs(p))
    assert abs(complex(ac.gproduct(sp, 1j * x, y)) - 1j * p) <= 1e-9 * (1 + abs(p))


# ---------------------------------------------------------------- angle


def test_angle_examples():
    L = ac.l2_space(2)
    x = np.array([0.3 - 1j, 2])
    assert ac.angle(L, x, x) == 0
    assert ac.angle(L, -x, x) == PI
    assert ac.angle(L, [1, 0], [1, 1]) == pytest.approx(PI / 4)
    for sp in (L, ac.linf_space(2), ac.lp_space(2, 1.5)):
        assert ac.angle(sp, 1j * x, x) == pytest.approx(IX_X, abs=1e-15)


def test_angle_rejects_zero():
    with pytest.raises(DomainError):
        ac.angle(ac.l2_space(2), [0, 0], [1, 0])


def test_near_parallel_rounding_is_clamped():
    eps = np.finfo(float).eps
    assert ac.angle_from_cosine(1 + 2 * eps) == 0
    assert ac.angle_from_cosine(-1 - 2 * eps) == PI
    with pytest.raises(DomainError):
        ac.angle_from_cosine(1 + 1e-6)
    # off the axis, values away from +-1 are left alone
    assert ac.angle_from_cosine(1 + 1e-6j) != 0


def test_decompositions():
    d = ac.decompose_angle(PI / 2)
    assert (d.a, d.b) == (0, 0)
    d = ac.decompose_angle(0.0)
    assert d.a == -PI / 2 and d.b == 0
    d = ac.decompose_angle(IX_X)
    assert d.a == 0 and d.b == -LOG_SQRT2_PLUS_1
    assert d.value == IX_X
    c = ac.decompose_cos(0.25 - 1j)
    assert (c.r, c.s) == (0.25, -1.0) and c.value == 0.25 - 1j
    for bad in (-0.1, PI + 0.1, 1j, PI - 2j):
        with pytest.raises(DomainError):
            ac.decompose_angle(bad)
    with pytest.raises(DomainError):
        ac.decompose_cos(1.1)


def test_decompose_vectorized():
    d = ac.decompose_angle(np.array([0.5, 1 + 1j]))
    np.testing.assert_array_equal(d.b, [0, 1])


# ---------------------------------------------------------------- (ix, y)


def test_ix_examples():
    assert ac.angle_ix_predicted(ac.AngleDecomposition(0.0, 0.0)) == pytest.approx(PI / 2)
    assert ac.angle_ix_predicted(ac.AngleDecomposition(-PI / 2, 0.0)) == pytest.approx(IX_X, abs=1e-15)
    v = ac.angle_ix_predicted(ac.AngleDecomposition(0.0, 0.5))
    assert v == pytest.approx(math.acos(math.sinh(0.5)), abs=1e-15)
    assert v == pytest.approx(1.022663, abs=1e-6)


def test_ix_rejects_invalid():
    for a, b in ((PI / 2, 0.1), (2.0, 0.0)):
        with pytest.raises(DomainError):
            ac.angle_ix_predicted(ac.AngleDecomposition(a, b))


def test_ix_matches_literal_formula():
    rng = np.random.default_rng(8)
    a = rng.uniform(-1.5, 1.5, 300)
    b = rng.uniform(-2, 2, 300)
    ours = ac.angle_ix_predicted(ac.AngleDecomposition(a, b))
    ref = np.array([literal_ix(u, v) for u, v in zip(a, b)])
    np.testing.assert_allclose(ours, ref, atol=1e-7)


def test_ix_direct_vs_formula(space):
    x, y = random_pairs(9, 200, space.dim)
    theta = ac.angle(space, x, y)
    direct = ac.angle(space, 1j * x, y)
    predicted = ac.angle_ix_predicted(ac.decompose_angle(theta))
    assert np.max(np.abs(direct - predicted)) < 1e-8


def test_ix_corollaries():
    b = np.linspace(-0.88, 0.88, 41)
    v = ac.angle_ix_predicted(ac.AngleDecomposition(np.zeros_like(b), b))
    np.testing.assert_allclose(v, np.arccos(np.sinh(b)), atol=1e-12)
    a = np.linspace(-1.5, 1.5, 41)
    v = ac.angle_ix_predicted(ac.AngleDecomposition(a, np.zeros_like(a)))
    np.testing.assert_allclose(v.real, PI / 2, atol=1e-15)


def test_b_bounded_when_a_vanishes(space):
    # with phi from the real crossing, (i e^{i phi} x, y) has a purely
    # imaginary cosine, i.e. a = 0
    x, y = random_pairs(10, 4, space.dim)
    for u, v in zip(x, y):
        phi = ac.find_real_angle_phase(space, u, v, tol=1e-12)
        w = 1j * np.exp(1j * phi) * u
        theta = complex(ac.angle(space, w, v))
        assert abs(theta.real - PI / 2) < 1e-9
        assert abs(theta.imag) <= LOG_SQRT2_PLUS_1 + 1e-12
    s = np.linspace(-1, 1, 201)
    assert np.max(np.abs(ac.angle_from_cosine(1j * s).imag)) <= LOG_SQRT2_PLUS_1 + 1e-12


# ---------------------------------------------------------------- table


def test_table_x_equals_y():
    rows = ac.angle_table(ac.l2_space(2), [1, 0], [1, 0])
    angles = [r.angle for r in rows]
    assert angles[:4] == [0, PI, 0, PI]
    for got, want in zip(angles[4:], [IX_X, IX_X.conjugate(), IX_X.conjugate(), IX_X]):
        assert abs(got - want) < 1e-15
    assert [r.cosine for r in rows[4:]] == [1j, -1j, -1j, 1j]


def test_table_relations(space):
    x, y = random_pairs(12, 30, space.dim)
    for u, v in zip(x, y):
        res = ac.table_residuals(ac.angle_table(space, u, v))
        assert max(res.values()) < 1e-9


def test_table_row_examples():
    rows = {r.label: r for r in ac.angle_table(ac.lp_space(2, 3), [1, 2j], [0.5 - 1j, 1])}
    t, c = rows["(x,y)"].angle, rows["(x,y)"].cosine
    a, b = t.real - PI / 2, t.imag
    assert rows["(-x,y)"].angle == pytest.approx(PI / 2 - a - 1j * b, abs=1e-12)
    assert rows["(iy,x)"].cosine == pytest.approx(c.imag + 1j * c.real, abs=1e-12)


# ---------------------------------------------------------------- oval and real crossing


def test_oval_quarter_turns():
    s = ac.oval_sample(ac.l2_space(2), [1, 0], [1, 0], 4)
    assert s.angle[0] == 0 and s.angle[2] == PI
    assert s.cosine[1] == 1j and s.cosine[3] == -1j
    assert abs(s.angle[1] - IX_X) < 1e-15


def test_oval_imaginary_part_changes_sign(space):
    x, y = random_pairs(13, 1, space.dim)
    s = ac.oval_sample(space, x[0], y[0], 64)
    assert s.angle.imag.max() > 0 > s.angle.imag.min()


def test_oval_gram_circle():
    H = np.array([[2, 0.5j], [-0.5j, 1]])
    sp = ac.gram_space(H)
    x, y = np.array([1, 1j]), np.array([0.3, 2 - 1j])
    s = ac.oval_sample(sp, x, y, 90)
    radius = abs(x @ H @ np.conj(y)) / (sp.norm(x) * sp.norm(y))
    assert np.max(np.abs(np.abs(s.cosine) - radius)) < 1e-10


def test_oval_needs_two_samples():
    with pytest.raises(DomainError):
        ac.oval_sample(ac.l2_space(2), [1, 0], [0, 1], 1)


def test_real_phase_examples():
    L = ac.l2_space(2)
    phi = ac.find_real_angle_phase(L, [1, 0], [np.exp(1j * PI / 4), 0])
    assert min(abs(phi - PI / 4), abs(phi - 5 * PI / 4)) < 1e-9
    assert ac.find_real_angle_phase(L, [1, 0], [2, 1]) == 0.0
    e = ac.linf_counterexample()
    sp = ac.linf_space(2)
    phi = ac.find_real_angle_phase(sp, e.x, e.y)
    assert abs(ac.gproduct(sp, np.exp(1j * phi) * e.x, e.y).imag) < 1e-9


def test_real_phase_on_random_pairs(space):
    x, y = random_pairs(14, 10, space.dim)
    for u, v in zip(x, y):
        phi = ac.find_real_angle_phase(space, u, v)
        assert 0 <= phi < 2 * PI
        im = ac.gproduct(space, np.exp(1j * phi) * u, v).imag
        assert abs(im) < 1e-9 * space.norm(u) * space.norm(v)


# ---------------------------------------------------------------- theta


def test_theta_l2_explicit():
    t = np.array([-1e4, 0.0, 1e4])
    prof = ac.theta_profile(ac.l2_space(2), [1, 0], [0, 1], t)
    np.testing.assert_allclose(prof.angle.real, np.arccos(t / np.sqrt(1 + t * t)), atol=1e-12)
    assert prof.angle[1] == pytest.approx(PI / 2)


def test_theta_default_grid():
    g = ac.default_theta_grid()
    assert g.size == 101 and g[50] == 0 and g[0] == -1e4 and g[-1] == 1e4
    np.testing.assert_array_equal(g, -g[::-1])


def test_theta_monotone(space):
    x, y = random_pairs(15, 3, space.dim)
    for u, v in zip(x, y):
        prof = ac.theta_profile(space, u, v)
        assert np.all(np.diff(prof.re_cos) > 0)
        assert prof.re_cos[0] < -0.999 and prof.re_cos[-1] > 0.999
        assert prof.re_cos[50] == pytest.approx(ac.cosine(space, u, v).real, abs=1e-12)


def test_theta_rejects_dependent():
    with pytest.raises(DegenerateError):
        ac.theta_profile(ac.l2_space(2), [1, 1j], [2j, -2])


# ---------------------------------------------------------------- CSB, parallelogram, deformation


def test_csb_margin():
    x, y = random_pairs(16, 200, 3)
    assert np.max(ac.csb_margin(ac.l2_space(3), x, y)) <= 1e-12
    assert ac.csb_margin(ac.l2_space(2), [0, 0], [1, 1]) <= 0


def test_parallelogram_defect():
    x, y = random_pairs(17, 100, 3)
    assert np.max(np.abs(ac.parallelogram_defect(ac.l2_space(3), x, y))) < 1e-11
    Li = ac.linf_space(2)
    # ||(1, +-1)||_inf = 1, so the defect is 1 + 1 - 2 (1 + 1)
    assert ac.parallelogram_defect(Li, [1, 0], [0, 1]) == -2
    assert ac.parallelogram_defect(Li, [1, 1], [1, -1]) == 4
    assert abs(ac.parallelogram_defect(ac.lp_space(2, 4), [1, 0.5j], [0.2, 1])) > 1e-3


def test_deformation_l2_and_bounds():
    est = ac.deformation_estimate(ac.l2_space(2), n_samples=200, seed=1)
    assert est.value == pytest.approx(1, abs=1e-9)
    for sp in (ac.linf_space(2), ac.lp_space(2, 1)):
        v = ac.deformation_estimate(sp, n_samples=200, n_refine=3, seed=2).value
        assert 1 - 1e-12 <= v <= math.sqrt(2) + 1e-9


def test_deformation_is_seed_deterministic():
    sp = ac.lp_space(2, 3)
    a = ac.deformation_estimate(sp, n_samples=100, n_refine=2, seed=4)
    b = ac.deformation_estimate(sp, n_samples=100, n_refine=2, seed=4)
    assert a.value == b.value and np.array_equal(a.a, b.a)


def test_deformation_witness_realizes_value():
    sp = ac.linf_space(2)
    est = ac.deformation_estimate(sp, n_samples=100, n_refine=2, seed=5)
    assert sp.norm(est.a) == pytest.approx(1) and sp.norm(est.b) == pytest.approx(1)
    assert abs(ac.gproduct(sp, est.a, est.b)) == pytest.approx(est.value, abs=1e-12)


def test_deformation_needs_samples():
    with pytest.raises(DomainError):
        ac.deformation_estimate(ac.l2_space(2), n_samples=0)
