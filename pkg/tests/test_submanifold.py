from itertools import product

import pytest
from helpers import frame_vec, golden, session
from hypothesis import given, settings
from hypothesis import strategies as st

from transsasakian.checks import FAIL, FALSE, NONZERO, PASS, TRUE, ZERO
from transsasakian.expr import DomainError
from transsasakian.submanifold import (
    NotInvariant,
    Submanifold,
    SubmanifoldSpec,
    check_invariant,
    gauss_equation_check,
    gauss_split,
    normal_complement,
    shape_operator,
    sigma_zero_check,
    verify_theorem1,
)

EX = session("example5d")
D = EX.submanifold("D")

CASES = [
    ("example5d", "D"),
    ("example5d", "N"),
    ("negcontrol5d", "W"),
    ("negcontrol5d", "P"),
    ("milne5d", "V"),
    ("flat5d", "P"),
]


def spec(sess, *rows, name="S"):
    return SubmanifoldSpec(name, [frame_vec(r, sess) for r in rows])


# -- normal frames --------------------------------------------------------------


def test_normals_of_d():
    assert D.normals == [frame_vec([1, 0, -1, 0, 0]), frame_vec([0, 1, 0, -1, 0])]
    assert [str(q) for q in D.normal_frame.norms] == ["2", "2"]


def test_normal_complement_matches_method():
    assert normal_complement(EX.M, EX.manifest.submanifolds["D"]).fields == D.normals


def test_flat_normal_frame_keeps_timelike_direction():
    P = session("flat5d").submanifold("P")
    assert [str(q) for q in P.normal_frame.norms] == ["1", "1", "-1"]


@pytest.mark.parametrize("fixture, name", CASES)
def test_tangent_normal_decomposition(fixture, name):
    s = session(fixture)
    sub = s.submanifold(name)
    assert len(sub.normals) + sub.m == s.M.dim
    for k in range(s.M.dim):
        v = s.M.unit(k)
        assert sub.tan(v) + sub.nor(v) == v
        assert all(s.M.g(sub.nor(v), e).is_zero() for e in sub.tangent)


# -- distribution checks -----------------------------------------------------------


def test_non_involutive_distribution():
    s = session("flat5d")
    sub = Submanifold(s.M, spec(s, [1, 0, 0, 0, 0], [0, 1, "x1", 0, 0]))
    check = sub.involutivity_check()
    assert check.status == FAIL and check.witnesses
    with pytest.raises(DomainError):
        sub.sigma


def test_dependent_tangent_fields_rejected():
    with pytest.raises(DomainError, match="dependent"):
        Submanifold(EX.M, spec(EX, [1, 0, 0, 0, 0], [2, 0, 0, 0, 0]))


def test_empty_tangent_rejected():
    with pytest.raises(DomainError):
        Submanifold(EX.M, SubmanifoldSpec("empty", []))


def test_default_tangent_names():
    assert spec(EX, [1, 0, 0, 0, 0], [0, 1, 0, 0, 0]).names == ["e1", "e2"]


# -- invariance ----------------------------------------------------------------------


def test_d_is_invariant():
    st_ = EX.manifest.structure
    assert check_invariant(st_, D).status == TRUE
    e1, e2 = D.tangent[0], D.tangent[1]
    assert st_.phi_apply(e1) == -e2
    assert st_.phi_apply(e2) == e1
    assert D.in_span(st_.xi)


def test_n_is_not_invariant():
    c = check_invariant(EX.manifest.structure, EX.submanifold("N"))
    assert c.status == FALSE
    assert [w.value for w in c.witnesses] == ["phi E1 leaves the distribution"]


def test_distribution_without_xi_is_not_invariant():
    sub = Submanifold(EX.M, spec(EX, [1, 0, 1, 0, 0], [0, 1, 0, 1, 0]))
    c = check_invariant(EX.manifest.structure, sub)
    assert c.status == FALSE and c.witnesses[0].value == "xi is not tangent"


def test_theorem1_refuses_non_invariant():
    with pytest.raises(NotInvariant):
        verify_theorem1(EX.manifest.structure, EX.submanifold("N"), EX.R)


# -- second fundamental form --------------------------------------------------------------


def _assert_sigma(sub, sess, gold):
    for key, comps in gold.items():
        a, b = (int(k) - 1 for k in key.split(","))
        assert sub.sigma[a, b] == frame_vec(comps, sess), key
        assert sub.sigma[b, a] == frame_vec(comps, sess), key


def test_sigma_of_d_matches_oracle():
    _assert_sigma(D, EX, golden()["example5d"]["sigma_D"])


def test_sigma_of_w_matches_oracle():
    s = session("negcontrol5d")
    _assert_sigma(s.submanifold("W"), s, golden()["negcontrol5d"]["sigma_W"])


def test_sigma_of_d_is_not_zero():
    c = sigma_zero_check(D, EX.points)
    assert c.status == NONZERO
    assert not D.totally_geodesic


@pytest.mark.parametrize("fixture, name", [("negcontrol5d", "P"), ("milne5d", "V"), ("flat5d", "P")])
def test_totally_geodesic_controls(fixture, name):
    s = session(fixture)
    sub = s.submanifold(name)
    assert sigma_zero_check(sub, s.points).status == ZERO
    assert sub.totally_geodesic and sub.is_parallel


def test_gauss_split_rejects_normal_argument():
    with pytest.raises(DomainError):
        gauss_split(D, D.normals[0], D.tangent[0])


def test_gauss_split_recovers_connection():
    t, n = gauss_split(D, D.tangent[0], D.tangent[0])
    assert t + n == EX.M.nabla(D.tangent[0], D.tangent[0])
    assert n == D.sigma[0, 0]


def test_shape_operator_is_self_adjoint_for_riemannian_tangent():
    # induced metric on span(e1, e2) is positive, so A_V is symmetric there
    A = shape_operator(D, D.normals[0])
    assert A[0][1] == A[1][0]


def test_shape_operator_rejects_tangent_vector():
    with pytest.raises(DomainError):
        shape_operator(D, D.tangent[0])


@settings(max_examples=20, deadline=None)
@given(
    st.lists(st.sampled_from(["0", "1", "-2", "t", "x2", "1/t"]), min_size=3, max_size=3),
    st.lists(st.sampled_from(["0", "1", "3", "x1", "x4*t"]), min_size=3, max_size=3),
)
def test_sigma_bilinear_symmetric(xs, ys):
    ch = EX.manifest.chart
    x = [ch.expr(v) for v in xs]
    y = [ch.expr(v) for v in ys]
    assert D.sigma_of(x, y) == D.sigma_of(y, x)
    assert D.nor(D.sigma_of(x, y)) == D.sigma_of(x, y)


# -- self-consistency on every fixture ------------------------------------------------------


@pytest.mark.parametrize("fixture, name", CASES)
def test_submanifold_properties(fixture, name):
    s = session(fixture)
    checks = s.submanifold(name).properties(s.points)
    assert {c.id: c.status for c in checks} == {
        "submanifold.normal_orthogonal": PASS,
        "submanifold.sigma_symmetric": PASS,
        "submanifold.shape_reciprocity": PASS,
        "submanifold.normal_metric_compatible": PASS,
        "submanifold.nabla_sigma_symmetric": PASS,
        "submanifold.rperp_antisymmetric": PASS,
    }


@pytest.mark.parametrize("fixture, name", CASES)
def test_gauss_equation(fixture, name):
    s = session(fixture)
    checks = gauss_equation_check(s.submanifold(name), s.R, s.points)
    assert [c.status for c in checks] == [PASS, PASS]


def test_rperp_antisymmetry_componentwise():
    W = session("negcontrol5d").submanifold("W")
    for a, b, al in W.normal_curvature:
        assert W.normal_curvature[a, b, al] == -W.normal_curvature[b, a, al]
        assert W.nor(W.normal_curvature[a, b, al]) == W.normal_curvature[a, b, al]


# -- invariant-submanifold identities ---------------------------------------------------


@pytest.mark.parametrize("fixture, name", [("negcontrol5d", "W"), ("negcontrol5d", "P"), ("milne5d", "V")])
def test_theorem1_on_controls(fixture, name):
    s = session(fixture)
    checks = verify_theorem1(s.manifest.structure, s.submanifold(name), s.R, s.points)
    assert all(c.status == PASS for c in checks), [c.as_dict() for c in checks]


def test_theorem1_on_d():
    got = {c.id: (c.status, c.nonzero_count) for c in verify_theorem1(EX.manifest.structure, D, EX.R, EX.points)}
    assert got == {
        "submanifold.normal_phi_stable": (PASS, 0),
        "theorem1.R_xi": (FAIL, 4),
        "theorem1.sigma_phi_symmetric": (FAIL, 4),
        "theorem1.sigma_phi": (FAIL, 8),
        "theorem1.sigma_xi": (PASS, 0),
        "theorem1.shape_xi": (PASS, 0),
    }


def test_sigma_with_xi_vanishes_on_invariant_examples():
    for fixture, name in [("example5d", "D"), ("negcontrol5d", "W")]:
        s = session(fixture)
        sub = s.submanifold(name)
        xi_t = sub.tangent_coeffs(s.manifest.structure.xi).comps
        for a in range(sub.m):
            unit = [s.manifest.chart.one if k == a else s.manifest.chart.zero for k in range(sub.m)]
            assert sub.sigma_of(unit, xi_t).is_zero()


def test_induced_curvature_antisymmetric():
    for (a, b, c), v in D.induced_curvature.items():
        assert v == -D.induced_curvature[b, a, c]
        assert D.in_span(v)
    assert list(product(range(3), repeat=3)) == sorted(D.induced_curvature)
