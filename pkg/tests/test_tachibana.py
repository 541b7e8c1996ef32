from itertools import product

import pytest
from helpers import ex, session
from hypothesis import given, settings
from hypothesis import strategies as st

from transsasakian.checks import FALSE, NONZERO, PASS, REFUSED, TRUE, ZERO
from transsasakian.expr import Chart, DomainError
from transsasakian.submanifold import NotInvariant
from transsasakian.tachibana import (
    THEOREMS,
    CovariantTensor,
    TheoremContext,
    curvature_dot,
    refused_report,
    tachibana_Q,
    theorem_report,
    wedge_apply,
)

EX = session("example5d")
NEG = session("negcontrol5d")
CTX = {"D": EX.context("D"), "W": NEG.context("W")}


def metric_tensor(matrix, chart):
    m = len(matrix)
    comps = {(a, b): matrix[a][b] for a, b in product(range(m), repeat=2)}
    return CovariantTensor(chart, m, 2, comps, symmetric=[(0, 1)])


def tensors(ctx):
    return {
        "g": metric_tensor(ctx.g_matrix, ctx.chart),
        "S": metric_tensor(ctx.S_matrix, ctx.chart),
        "sigma": ctx.sigma,
        "nabla_sigma": ctx.nabla_sigma,
    }


# -- wedge ------------------------------------------------------------------------


def test_wedge_with_itself_vanishes():
    ch = EX.manifest.chart
    g = CTX["D"].g_matrix
    x = [ch.expr(s) for s in ("1", "t", "x2")]
    z = [ch.expr(s) for s in ("0", "1", "t")]
    assert all(c.is_zero() for c in wedge_apply(g, x, x, z, ch))


def test_wedge_of_e1_and_xi_on_xi():
    # (e1 wedge_g xi) xi = g(xi,xi) e1 - g(e1,xi) xi = -e1 on D
    ch = EX.manifest.chart
    g = CTX["D"].g_matrix
    e1, xi = [ch.one, ch.zero, ch.zero], [ch.zero, ch.zero, ch.one]
    assert wedge_apply(g, e1, xi, xi, ch) == [-ch.one, ch.zero, ch.zero]


def test_q_on_hand_example():
    ch = Chart(["u"])
    one, zero = ch.one, ch.zero
    A = [[one, zero], [zero, one]]
    T = CovariantTensor(ch, 2, 1, {(0,): one, (1,): zero})
    Q = tachibana_Q(A, T)
    # (e1 ^ e2) e2 = e1, so Q(T)(e2; e1, e2) = -T(e1)
    assert Q[(1, 0, 1)] == -1
    assert Q[(0, 0, 1)].is_zero()
    assert Q[(1, 1, 0)] == 1
    assert all(Q[(u, x, x)].is_zero() for u in range(2) for x in range(2))


# -- algebraic properties --------------------------------------------------------


@pytest.mark.parametrize("name", ["D", "W"])
def test_q_of_metric_with_itself_vanishes(name):
    ctx = CTX[name]
    assert tachibana_Q(ctx.g_matrix, metric_tensor(ctx.g_matrix, ctx.chart)).is_zero()


@pytest.mark.parametrize("name", ["D", "W"])
@pytest.mark.parametrize("A", ["g", "S"])
@pytest.mark.parametrize("T", ["g", "S", "sigma", "nabla_sigma"])
def test_q_antisymmetric_in_last_pair(name, A, T):
    ctx = CTX[name]
    Q = tachibana_Q(ctx.metric(A), tensors(ctx)[T])
    for idx, val in Q.comps.items():
        swapped = idx[:-2] + (idx[-1], idx[-2])
        assert val == -Q.comps[swapped]


@pytest.mark.parametrize("name", ["D", "W"])
@pytest.mark.parametrize("pair", [("g", "S"), ("sigma", "sigma"), ("S", "S")])
def test_q_additive_in_tensor(name, pair):
    ctx = CTX[name]
    T = tensors(ctx)
    a, b = T[pair[0]], T[pair[1]]
    for A in ("g", "S"):
        left = tachibana_Q(ctx.metric(A), a + b)
        right = tachibana_Q(ctx.metric(A), a) + tachibana_Q(ctx.metric(A), b)
        assert all(left[k] == right[k] for k in left.comps)


@settings(max_examples=15, deadline=None)
@given(
    st.sampled_from(["D", "W"]),
    st.lists(st.sampled_from(["0", "1", "-1", "2", "t", "x1", "1/t"]), min_size=3, max_size=3),
)
def test_q_antisymmetric_on_random_arguments(name, texts):
    ctx = CTX[name]
    ch = ctx.chart
    y = [ch.expr(s) for s in texts]
    x = [ch.one, ch.expr("x2"), ch.zero]
    u = [ch.zero, ch.one, ch.one]
    v = [ch.one, ch.zero, ch.expr("t")]
    Q = tachibana_Q(ctx.g_matrix, ctx.sigma)
    assert Q.evaluate([u, v, x, y]) == -Q.evaluate([u, v, y, x])


@settings(max_examples=15, deadline=None)
@given(st.integers(-3, 3), st.integers(-3, 3))
def test_q_linear_in_a(p, q):
    ctx = CTX["W"]
    m = ctx.sub.m
    A = [[ctx.g_matrix[i][j] * p + ctx.S_matrix[i][j] * q for j in range(m)] for i in range(m)]
    T = ctx.sigma
    combined = tachibana_Q(A, T)
    qg, qs = tachibana_Q(ctx.g_matrix, T), tachibana_Q(ctx.S_matrix, T)
    assert all(combined[k] == qg[k] * p + qs[k] * q for k in combined.comps)


def test_q_needs_a_slot():
    ch = EX.manifest.chart
    T = CovariantTensor(ch, 3, 0, {(): ch.one})
    with pytest.raises(DomainError):
        tachibana_Q(CTX["D"].g_matrix, T)


def test_q_needs_symmetric_a():
    ctx = CTX["D"]
    A = [row[:] for row in ctx.g_matrix]
    A[0][1] = ctx.chart.one
    with pytest.raises(DomainError, match="symmetric"):
        tachibana_Q(A, ctx.sigma)


def test_declared_symmetry_is_enforced():
    ch = EX.manifest.chart
    comps = {(a, b): ch.const(a) for a, b in product(range(2), repeat=2)}
    with pytest.raises(DomainError, match="symmetry"):
        CovariantTensor(ch, 2, 2, comps, symmetric=[(0, 1)])


def test_missing_component_rejected():
    ch = EX.manifest.chart
    with pytest.raises(DomainError, match="missing"):
        CovariantTensor(ch, 2, 1, {(0,): ch.one})


# -- curvature action --------------------------------------------------------------


@pytest.mark.parametrize("name", ["D", "W"])
def test_curvature_dot_vanishes_on_equal_arguments(name):
    ctx = CTX[name]
    for F in (ctx.R_sigma, ctx.C_sigma):
        for x, u, v in product(range(ctx.sub.m), repeat=3):
            assert F[(x, x, u, v)].is_zero()


def test_curvature_dot_is_symmetric_in_value_slots():
    ctx = CTX["W"]
    F = ctx.R_sigma
    for x, y, u, v in F.comps:
        assert F[(x, y, u, v)] == F[(x, y, v, u)]


def test_curvature_dot_rejects_other_ranks():
    with pytest.raises(DomainError):
        curvature_dot({}, lambda x, y, v: v, CTX["D"].nabla_sigma)


def test_curvature_dot_on_scalar_identity():
    # the zero operator acting on any tensor gives zero
    ctx = CTX["D"]
    m = ctx.sub.m
    op = {k: ctx.sub.tangent_coeffs(EX.M.zero_vec()) for k in product(range(m), repeat=3)}
    out = curvature_dot(op, lambda x, y, v: EX.M.zero_vec(), ctx.sigma)
    assert out.is_zero()


# -- theorem evaluators ----------------------------------------------------------


def _report(ctx, k, sess):
    return theorem_report(ctx, k, sess.points)


@pytest.mark.parametrize("k", sorted(THEOREMS))
def test_example_hypotheses_do_not_vanish(k):
    r = _report(CTX["D"], k, EX)
    assert r.hypothesis.status == NONZERO
    assert r.verdict.status == PASS
    assert r.verdict.payload["rescuing_disjuncts"] == []


def test_example_hypothesis_sizes():
    sizes = {k: _report(CTX["D"], k, EX).hypothesis.nonzero_count for k in THEOREMS}
    assert sizes == {2: 44, 3: 16, 4: 264, 5: 128, 6: 384, 7: 680, 8: 384, 9: 680}


def test_theorem2_gap_on_example():
    r = _report(CTX["D"], 2, EX)
    gap = {d.id: d for d in r.disjuncts}["theorem2.xi_beta"]
    assert gap.status == FALSE
    assert gap.payload["expression"] == "t^4/4"
    assert gap.payload["expression_with_reference_values"] == "t^4/4"


def test_gap_from_fitted_functions():
    p = EX.params
    assert p.alpha**2 + p.beta**2 - p.xi_beta == ex("t^4/4")


NEG_EXPECTED = {
    2: (ZERO, ["xi_beta"]),
    3: (NONZERO, []),
    4: (ZERO, ["xi_beta", "alpha2_beta2"]),
    5: (NONZERO, ["alpha2_beta2"]),
    6: (NONZERO, ["minus", "plus"]),
    7: (ZERO, ["xi_beta", "minus", "plus"]),
    8: (NONZERO, ["tau_plus", "tau_minus"]),
    9: (ZERO, ["tau_B_plus", "tau_B_minus", "tau_plus", "tau_minus"]),
}


@pytest.mark.parametrize("k", sorted(THEOREMS))
def test_negative_control_reports(k):
    r = _report(CTX["W"], k, NEG)
    assert (r.hypothesis.status, r.verdict.payload["rescuing_disjuncts"]) == NEG_EXPECTED[k]
    assert r.verdict.status == PASS
    assert {d.id: d.status for d in r.disjuncts}[f"theorem{k}.totally_geodesic"] == FALSE


def test_negative_control_has_nonzero_hypothesis_with_witnesses():
    r = _report(CTX["W"], 3, NEG)
    assert r.hypothesis.witnesses and r.hypothesis.nonzero_count == 72


@pytest.mark.parametrize("k", sorted(THEOREMS))
def test_totally_geodesic_control(k):
    s = session("milne5d")
    r = _report(s.context("V"), k, s)
    assert r.hypothesis.status == ZERO
    assert r.verdict.status == PASS
    assert "totally_geodesic" in r.verdict.payload["rescuing_disjuncts"]


def test_theorem3_equivalence():
    for ctx, sess in ((CTX["D"], EX), (CTX["W"], NEG), (NEG.context("P"), NEG)):
        r = _report(ctx, 3, sess)
        assert (r.hypothesis.status == ZERO) == ctx.sub.totally_geodesic
        assert r.verdict.status == PASS


def test_non_invariant_is_refused():
    with pytest.raises(NotInvariant):
        EX.context("N")
    rep = EX.run("theorem", ["4", "N"])
    statuses = {c.id: c.status for c in rep.all_checks()}
    assert statuses["theorem4.verdict"] == REFUSED
    assert statuses["theorem4.hypothesis"] == REFUSED


def test_refused_report_shape():
    r = refused_report(5, "X", "reason")
    assert [c.status for c in r.checks] == [REFUSED, REFUSED]


def test_context_requires_invariance():
    sub = EX.submanifold("N")
    with pytest.raises(NotInvariant):
        TheoremContext(sub, EX.manifest.structure, EX.params, EX.R, EX.S, EX.tau)


def test_theorem_index_out_of_range():
    with pytest.raises(DomainError):
        theorem_report(CTX["D"], 10)


def test_disjunct_sources_are_labelled():
    r = _report(CTX["W"], 8, NEG)
    sources = {d.id.split(".")[1]: d.payload["source"] for d in r.disjuncts}
    assert sources["tau_plus"] == "stated" and sources["derived_final"] == "derived"
    assert any(c.status == TRUE for c in r.disjuncts)
