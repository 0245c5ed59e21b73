from fractions import Fraction

import pytest
from mpmath import ldexp, mpf, workprec

from hpcert import (
    CatalogError,
    ClosedForm,
    ParamFunction,
    Precision,
    catalog,
    check_param_derivative,
    closed_derivative,
    eval_param,
    run_catalog,
    run_check,
)
from hpcert.identities import (
    CheckContext,
    IdentityCheck,
    Tol,
    _quad_pipe,
    get_integrand,
)
from hpcert.quadrature import TanhSinh, integrate
from oracle_values import (
    A_VALUE,
    B_VALUE,
    C_VALUE,
    EQ16,
    F_PRIME_1,
    H_PRIME_1,
    I2,
    I3,
    SIGMA,
    assert_close,
)

SPEC_IDS = {
    "eq01_sigma_series",
    "eq03_ln2",
    "eq04_tail_routes",
    "eq05_sigma_2d",
    "eq06_inner",
    "eq07_assembly",
    "eq08_A",
    "eq09_B_split",
    "eq10",
    "app1_I1",
    "app1_I1_substitution",
    "app1_logsine",
    "app1_logsine_funceq",
    "app2_I2",
    "app2_middle",
    "app2_li2",
    "eq13_B",
    "eq14_C_split",
    "app3_I3",
    "eq16",
    "eq17",
    "eq18_C",
}


def by_id(cid):
    return {c.id: c for c in catalog()}[cid]


def test_catalog_contents():
    checks = catalog()
    ids = [c.id for c in checks]
    assert len(ids) == len(set(ids))
    assert len(checks) >= 21
    assert SPEC_IDS <= set(ids)


def test_catalog_rhs_stays_in_basis():
    for c in catalog():
        if isinstance(c.rhs, ClosedForm):
            assert all(coeff != 0 for _, coeff in c.rhs.items)
            # constructing the form already rejects foreign tags; spot-check
            assert len(c.rhs.items) <= 7


def test_run_check_eq08(p128):
    r = run_check(by_id("eq08_A"), p128)
    assert r.passed
    assert_close(r.lhs_value.value, A_VALUE, mpf(10) ** -35)
    assert r.abs_error.value <= mpf(10) ** -40
    assert r.evaluations > 0
    assert r.elapsed_ms >= 0


def test_run_check_app1_I1_and_eq16(p128):
    ctx = CheckContext(p128)
    i1 = run_check(by_id("app1_I1"), p128, ctx=ctx)
    e16 = run_check(by_id("eq16"), p128, ctx=ctx)
    assert i1.passed and e16.passed
    assert_close(i1.lhs_value.value, "0.17282745097458205019574093418642286289514247590297", mpf(10) ** -35)
    assert_close(e16.lhs_value.value, EQ16, mpf(10) ** -35)


def test_run_check_eq13_eq18_frozen(p128):
    ctx = CheckContext(p128)
    b = run_check(by_id("eq13_B"), p128, ctx=ctx)
    c = run_check(by_id("eq18_C"), p128, ctx=ctx)
    assert b.passed and c.passed
    assert_close(b.lhs_value.value, B_VALUE, mpf(10) ** -35)
    assert_close(c.lhs_value.value, C_VALUE, mpf(10) ** -35)


def test_eq05_reference_resolution(p128):
    ctx = CheckContext(p128)
    r = run_check(by_id("eq05_sigma_2d"), p128, ctx=ctx)
    assert r.passed
    assert_close(r.lhs_value.value, SIGMA, mpf(10) ** -25)
    assert abs(r.lhs_value.value - r.rhs_value.value) <= mpf(10) ** -20


def test_eq07_exact_assembly(p64):
    r = run_check(by_id("eq07_assembly"), p64)
    assert r.passed
    assert r.abs_error.value == 0
    assert r.tolerance.value == 0


def test_sigma_triple_route(p128):
    ctx = CheckContext(p128)
    series_r = run_check(by_id("eq01_sigma_series"), p128, ctx=ctx)
    double_r = run_check(by_id("eq05_sigma_2d"), p128, ctx=ctx)
    closed = series_r.rhs_value.value
    assert abs(series_r.lhs_value.value - closed) <= mpf(10) ** -20
    assert abs(double_r.lhs_value.value - closed) <= mpf(10) ** -20
    assert abs(series_r.lhs_value.value - double_r.lhs_value.value) <= mpf(10) ** -20


def test_catalog_error_on_unregistered():
    with pytest.raises(CatalogError):
        get_integrand("no_such_integrand")
    bogus = IdentityCheck(
        id="bogus",
        description="refers to a missing integrand",
        ref="-",
        lhs=_quad_pipe("no_such_integrand"),
        rhs=ClosedForm.zero(),
        tolerance_policy=Tol(-10),
    )
    with pytest.raises(CatalogError):
        run_check(bogus, Precision(64))


def test_run_catalog_selection_and_order(p128):
    rs = run_catalog(p128, ids=["eq10", "eq08_A"])
    assert [r.id for r in rs] == ["eq08_A", "eq10"]  # catalog order, not request order
    with pytest.raises(CatalogError):
        run_catalog(p128, ids=["nope"])


def test_tolerance_override(p128):
    r = run_check(by_id("eq03_ln2"), p128, tolerance_exponent_override=-10)
    assert not r.passed
    with workprec(200):
        assert abs(r.tolerance.value - mpf(10) ** -10) <= ldexp(1, -150)


def test_monotone_refinement_under_level_raise(p128):
    # once converged, a higher level cap must not change the result at all
    rs = []
    for cap in (11, 12):
        q = integrate(get_integrand("a_integrand"), TanhSinh(cap), Precision(p128.guarded))
        rs.append(q)
    assert rs[0].value.value == rs[1].value.value
    assert rs[0].level_or_order == rs[1].level_or_order


# --- parameter functions ----------------------------------------------------


def test_param_validation():
    with pytest.raises(ValueError):
        ParamFunction("G", Fraction(1, 2))
    with pytest.raises(ValueError):
        ParamFunction("F", Fraction(3, 2))


def test_param_endpoints_zero(p128):
    assert eval_param(ParamFunction("F", 0), p128).value == 0
    assert eval_param(ParamFunction("H", 0), p128).value == 0


def test_param_f1_h1_frozen(p256):
    assert_close(eval_param(ParamFunction("F", 1), p256).value, I2, mpf(10) ** -40)
    assert_close(eval_param(ParamFunction("H", 1), p256).value, I3, mpf(10) ** -40)


def test_closed_derivative_at_one(p128):
    assert_close(closed_derivative(ParamFunction("F", 1), p128).value, F_PRIME_1, mpf(10) ** -30)
    assert_close(closed_derivative(ParamFunction("H", 1), p128).value, H_PRIME_1, mpf(10) ** -30)


def test_check_param_derivative_h_midpoint(p128):
    rs = check_param_derivative(ParamFunction("H", 1), [Fraction(1, 2)], p128)
    assert [r.id for r in rs] == ["H_prime_at_1_2", "H_reconstruct_endpoint"]
    assert all(r.passed for r in rs)
    fd = rs[0]
    assert fd.abs_error.value <= ldexp(1, -(128 // 2))


def test_check_param_derivative_rejects_zero(p128):
    with pytest.raises(ValueError):
        check_param_derivative(ParamFunction("F", 1), [Fraction(0)], p128)


def test_param_monotone_on_grid(p128):
    for name in ("F", "H"):
        values = [
            eval_param(ParamFunction(name, Fraction(k, 10)), p128).value for k in range(11)
        ]
        assert all(b >= a for a, b in zip(values, values[1:]))
