import pytest
from helpers import ex, frame_vec, golden, session
from hypothesis import given, settings
from hypothesis import strategies as st

from transsasakian.checks import PASS
from transsasakian.curvature import connection_properties
from transsasakian.expr import Chart, DomainError
from transsasakian.frame import (
    ChartMismatch,
    Frame,
    MetricFrame,
    VectorField,
    covariant_derivative,
    koszul_connection,
    lie_bracket,
    metric_pair,
    to_frame_components,
    vf_apply,
)
from transsasakian.linalg import Vec

S = session("example5d")
M = S.M
CH = S.manifest.chart
E = [M.frame.fields[i] for i in range(5)]


def vf(*coeffs):
    return VectorField(CH, list(coeffs))


# -- vector fields -------------------------------------------------------------


def test_vf_apply_xi_on_alpha():
    assert vf_apply(E[4], ex("t^2/2")) == ex("t")


def test_vf_apply_e2_on_t():
    assert vf_apply(E[1], ex("t")).is_zero()


def test_vf_apply_e1_on_t():
    assert vf_apply(E[0], ex("t")) == ex("t*x2")


def test_chart_mismatch_is_rejected():
    other = Chart(["a", "b", "c", "d", "e"])
    w = VectorField(other, [1, 0, 0, 0, 0])
    with pytest.raises(ChartMismatch):
        lie_bracket(E[0], w)
    with pytest.raises(DomainError):
        vf_apply(w, ex("t"))


def test_vector_field_length_must_match_chart():
    with pytest.raises(DomainError):
        VectorField(CH, [1, 0])


# -- brackets ------------------------------------------------------------------


def test_bracket_e1_e5():
    assert to_frame_components(lie_bracket(E[0], E[4]), M.frame) == frame_vec(["-1/t", 0, 0, 0, 0])


def test_bracket_e1_e2():
    assert to_frame_components(lie_bracket(E[0], E[1]), M.frame) == frame_vec([0, "x2", 0, 0, "-t^2"])


def test_bracket_with_itself_vanishes():
    assert lie_bracket(E[2], E[2]).is_zero()


def test_frame_brackets_match_oracle():
    gold = golden()["example5d"]["brackets"]
    for key, comps in gold.items():
        i, j = (int(k) - 1 for k in key.split(","))
        assert M.bracket(M.unit(i), M.unit(j)) == frame_vec(comps), key


def test_structure_constants_agree_with_coordinate_brackets():
    for i in range(5):
        for j in range(5):
            coord = to_frame_components(lie_bracket(E[i], E[j]), M.frame)
            assert coord == M.frame.structure_constants[i][j]


# -- frames ----------------------------------------------------------------------


def test_to_frame_components_of_frame_field():
    assert to_frame_components(E[0], M.frame) == Vec.unit(CH, 5, 0)


def test_to_frame_components_of_tangent_field():
    e1 = E[0] + E[2]
    assert to_frame_components(e1, M.frame) == frame_vec([1, 0, 1, 0, 0])


def test_singular_frame_rejected():
    fields = [vf(1, 0, 0, 0, 0), vf(0, 1, 0, 0, 0), vf(1, 1, 0, 0, 0), vf(0, 0, 0, 1, 0), vf(0, 0, 0, 0, 1)]
    with pytest.raises(DomainError, match="dependent"):
        Frame(CH, fields)


def test_frame_needs_n_fields():
    with pytest.raises(DomainError):
        Frame(CH, E[:4])


def test_inverse_matrix_is_inverse():
    F = M.frame
    for i in range(5):
        for j in range(5):
            acc = CH.zero
            for k in range(5):
                acc = acc + F.inverse_matrix[i][k] * F.matrix[k][j]
            assert acc == (1 if i == j else 0)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.sampled_from(["0", "1", "-2", "t", "x2", "1/t", "x4*t"]), min_size=5, max_size=5))
def test_frame_components_round_trip(texts):
    v = frame_vec(texts)
    assert M.frame.components(M.frame.field(v)) == v


# -- metric ----------------------------------------------------------------------


def test_metric_values():
    assert metric_pair(M.metric, E[4], E[4]) == -1
    assert metric_pair(M.metric, E[0], E[1]).is_zero()
    assert metric_pair(M.metric, E[0] + E[2], E[0] + E[2]) == 2


def test_metric_is_lorentzian():
    assert M.metric.negative_directions() == 1


def test_asymmetric_metric_rejected():
    rows = [[1 if i == j else 0 for j in range(5)] for i in range(5)]
    rows[0][1] = 1
    with pytest.raises(DomainError, match="symmetric"):
        MetricFrame(M.frame, rows)


def test_degenerate_metric_rejected():
    rows = [[1 if i == j else 0 for j in range(5)] for i in range(5)]
    rows[4][4] = 0
    with pytest.raises(DomainError, match="degenerate"):
        MetricFrame(M.frame, rows)


# -- connection ----------------------------------------------------------------


def test_connection_e1_component_of_nabla_e1_xi():
    assert M.connection.coefficient(0, 0, 4) == ex("-1/t")


def test_connection_e2_component_of_nabla_e1_xi():
    # the hand evaluation of the Koszul formula gives -t^2/2 here
    assert M.connection.coefficient(1, 0, 4) == ex("-t^2/2")


def test_nabla_xi_xi_vanishes():
    assert M.nabla(M.unit(4), M.unit(4)).is_zero()


def test_connection_matches_coordinate_oracle():
    gold = golden()["example5d"]["connection"]
    for key, comps in gold.items():
        i, j = (int(k) - 1 for k in key.split(","))
        assert M.connection.gamma[i][j] == frame_vec(comps), key


def test_covariant_derivative_matches_frame_table():
    field = covariant_derivative(M.connection, E[0], E[4])
    assert to_frame_components(field, M.frame) == M.connection.gamma[0][4]


def test_flat_coordinate_frame_has_zero_connection():
    flat = session("flat5d").M
    assert all(v.is_zero() for row in flat.connection.gamma for v in row)


@pytest.mark.parametrize("name", ["example5d", "flat5d", "negcontrol5d"])
def test_levi_civita_axioms(name):
    s = session(name)
    checks = connection_properties(s.M, s.points)
    assert [c.status for c in checks] == [PASS] * 4, [c.as_dict() for c in checks]


def test_torsion_free_on_random_pairs():
    import random

    rng = random.Random(3)
    pool = ["0", "1", "t", "x1", "x2*t", "1/t", "x3 - x4"]
    for _ in range(5):
        X = frame_vec([rng.choice(pool) for _ in range(5)])
        Y = frame_vec([rng.choice(pool) for _ in range(5)])
        assert (M.nabla(X, Y) - M.nabla(Y, X) - M.bracket(X, Y)).is_zero()


def test_nonconstant_metric_koszul():
    # polar-type patch: frame d/dr, d/dth with metric diag(1, r^2)
    ch = Chart(["r", "th"])
    F = Frame(ch, [VectorField(ch, [1, 0]), VectorField(ch, [0, 1])])
    g = MetricFrame(F, [[1, 0], [0, "r^2"]])
    C = koszul_connection(g)
    r = ch.expr("r")
    assert C.coefficient(0, 1, 1) == -r  # Gamma^r_{th th}
    assert C.coefficient(1, 0, 1) == 1 / r
    assert C.coefficient(1, 1, 0) == 1 / r
