import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import converges
from sliceconf.errors import DomainError, GridMismatchError, InvalidProfileError
from sliceconf.profiles import (Grid, Profile, SliceState, as_profile, definite_integral, derivative,
                                hat, integrate_from, is_constant, read_csv, write_csv)
from sliceconf.stencils import centered_offsets, fd_weights


def _hat_error(n, order):
    g = Grid(0.3, 2.8, n, "interval", order)
    p = Profile(g, np.sin(g.chi) * np.exp(0.3 * g.chi))
    want = (np.cos(g.chi) + 0.3 * np.sin(g.chi)) * np.exp(0.3 * g.chi)
    return np.abs(hat(p).values - want).max()


def test_fd_weights_are_exact_fractions():
    w = fd_weights(centered_offsets(1, 4), 1)
    print("weights", w)
    assert [str(x) for x in w] == ["1/12", "-2/3", "0", "2/3", "-1/12"]


@pytest.mark.parametrize("order", [2, 4])
def test_hat_converges_at_stated_order(order):
    e1, e2 = _hat_error(201, order), _hat_error(401, order)
    print(f"order {order}: {e1:.3e} -> {e2:.3e}, ratio {e1 / e2:.2f}")
    assert converges(e1, e2, order)


def test_higher_derivatives_without_closed_form():
    g = Grid(0.0, 2.0, 801)
    p = Profile(g, g.chi**5)
    for m, want in [(2, 20 * g.chi**3), (3, 60 * g.chi**2)]:
        # relative, since round-off grows like eps / h**m
        err = np.abs(derivative(p, m).values - want).max() / np.abs(want).max()
        print(m, err)
        assert err < 1e-6


def test_closed_form_derivatives_are_used():
    g = Grid(0.5, 2.0, 64)
    p = Profile.from_expr(g, "chi^3", ("3*chi^2", "6*chi"))
    assert np.array_equal(hat(p).values, 3 * g.chi**2)
    assert np.array_equal(derivative(p, 2).values, 6 * g.chi)


def test_exact_constant_has_exact_zero_derivative():
    g = Grid(0.0, 1.0, 50)
    p = Profile(g, np.full(50, 0.7))
    assert np.all(hat(p).values == 0.0)


def test_periodic_derivative_is_spectral_like():
    g = Grid(0.0, 2 * np.pi, 128, "periodic")
    err = np.abs(hat(Profile(g, np.sin(3 * g.chi))).values - 3 * np.cos(3 * g.chi)).max()
    print("periodic err", err)
    assert err < 1e-4
    assert abs(definite_integral(Profile(g, np.cos(g.chi) ** 2)) - np.pi) < 1e-12


def test_integrate_from_node_and_off_node_anchor():
    g = Grid(0.0, np.pi, 1001)
    c = Profile(g, np.cos(g.chi))
    on = integrate_from(c, g.chi[500])
    off = integrate_from(c, 1.0)
    e_on = np.abs(on.values - (np.sin(g.chi) - np.sin(g.chi[500]))).max()
    e_off = np.abs(off.values - (np.sin(g.chi) - np.sin(1.0))).max()
    print("on", e_on, "off", e_off)
    assert e_on < 1e-13 and e_off < 1e-12
    with pytest.raises(DomainError):
        integrate_from(c, 4.0)


def test_definite_integral_of_polynomial_is_exact():
    g = Grid(-1.0, 2.0, 31)
    v = definite_integral(Profile(g, g.chi**5 - g.chi**2))
    want = (2**6 - 1) / 6 - (8 + 1) / 3
    print(v, want)
    assert abs(v - want) < 1e-12


def test_is_constant_reports_deviation():
    g = Grid(0.0, 1.0, 20)
    ok, dev = is_constant(Profile(g, np.full(20, 2.0)), 1e-12)
    assert ok and dev == 0.0
    ok, dev = is_constant(Profile(g, g.chi), 1e-3)
    assert not ok and dev > 0.3


def test_grid_validation():
    for args in [(0, 1, 8), (1, 0, 32), (0, np.inf, 32)]:
        with pytest.raises(InvalidProfileError):
            Grid(*args)
    with pytest.raises(InvalidProfileError):
        Grid(0, 1, 32, "torus")
    with pytest.raises(InvalidProfileError):
        Grid(0, 1, 32, fd_order=6)


def test_profile_validation_and_grid_mismatch():
    g = Grid(0, 1, 32)
    with pytest.raises(InvalidProfileError):
        Profile(g, np.zeros(31))
    with pytest.raises(InvalidProfileError):
        Profile(g, np.full(32, np.nan))
    with pytest.raises(GridMismatchError):
        Profile(g, 1.0) + Profile(g.with_n(33), 1.0)


def test_as_profile_accepts_every_form():
    g = Grid(0.1, 1, 32)
    forms = [2.0, "2 + 0*chi", {"expr": "2", "derivs": ["0"]}, np.full(32, 2.0), Profile(g, 2.0)]
    for f in forms:
        assert np.allclose(as_profile(g, f).values, 2.0)
    with pytest.raises(InvalidProfileError):
        as_profile(g, object())


def test_csv_round_trip_is_bit_exact(tmp_path):
    g = Grid(0.1, 3.0, 57)
    cols = {"a": Profile(g, np.sin(g.chi)), "b": np.exp(g.chi) / 3}
    path = tmp_path / "x.csv"
    write_csv(path, g, cols)
    assert path.read_text().splitlines()[0] == "chi,a,b"
    g2, back = read_csv(path)
    assert g2 == g
    assert np.array_equal(back["a"].values, cols["a"].values)
    assert np.array_equal(back["b"].values, cols["b"])


def test_slice_state_defaults_to_zero():
    g = Grid(0, 1, 32)
    s = SliceState.build(g, rho=3.0)
    assert s.rho.values[0] == 3.0 and s.Theta.max_abs() == 0.0
    s2 = s.replace(p=-1.0)
    assert s2.p.values[5] == -1.0 and s.p.values[5] == 0.0


@settings(max_examples=40, deadline=None)
@given(a=st.floats(-5, 5), b=st.floats(-5, 5), k=st.floats(0.2, 3.0))
def test_hat_is_linear(a, b, k):
    g = Grid(0.0, 2.0, 101)
    f, h = Profile(g, np.sin(k * g.chi)), Profile(g, g.chi**3)
    lhs = hat(a * f + b * h).values
    rhs = a * hat(f).values + b * hat(h).values
    assert np.allclose(lhs, rhs, rtol=0, atol=1e-9 * (1 + abs(a) + abs(b)) * 50)


@settings(max_examples=30, deadline=None)
@given(k=st.floats(0.1, 2.0), c=st.floats(0.0, 2.0))
def test_integrate_then_differentiate_recovers_profile(k, c):
    g = Grid(0.0, 2.0, 801)
    f = Profile(g, np.cos(k * g.chi) + g.chi)
    back = hat(integrate_from(f, c)).values
    assert np.abs(back - f.values).max() < 1e-8
