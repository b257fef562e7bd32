import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from circtoep.errors import DomainError
from circtoep.symbols import (
    BandSymbol,
    Constant,
    KacMurdockSzego,
    PSeries,
    SampledSequence,
    Scaled,
    ShiftedCosine,
    SymbolSyntaxError,
    evaluate,
    fourier_coefficient,
    parse_symbol,
    parseval_check,
    quadrature_coefficient,
    sample_grid,
    scaled,
    truncated_symbol,
)

CATALOG = [
    Constant(3.0),
    ShiftedCosine(2.0, 1.0),
    ShiftedCosine(5.0, -2.0),
    KacMurdockSzego(0.5),
    KacMurdockSzego(0.9),
    PSeries(2.0, 4.0),
    PSeries(3.0, 3.0),
    scaled(KacMurdockSzego(0.5), 1 / 3),
]


def test_evaluate_examples():
    assert evaluate(Constant(3), 1.7) == 3
    assert evaluate(ShiftedCosine(2, 1), math.pi) == pytest.approx(1, abs=1e-15)
    assert evaluate(KacMurdockSzego(0.5), 0.0) == pytest.approx(3, rel=1e-15)


def test_coefficient_examples():
    assert fourier_coefficient(Constant(3), 0) == 3
    assert fourier_coefficient(Constant(3), 1) == 0
    assert fourier_coefficient(ShiftedCosine(2, 1), 1) == 0.5
    assert fourier_coefficient(ShiftedCosine(2, 1), -1) == 0.5
    assert fourier_coefficient(KacMurdockSzego(0.5), 2) == 0.25


def test_grid_examples():
    np.testing.assert_allclose(sample_grid(ShiftedCosine(2, 1), 4), [3, 2, 1, 2], atol=1e-15)
    np.testing.assert_allclose(sample_grid(Constant(1.5), 5), [1.5] * 5)
    np.testing.assert_allclose(sample_grid(KacMurdockSzego(0.5), 2), [3, 1 / 3], rtol=1e-15)


def test_grid_is_read_only():
    g = sample_grid(KacMurdockSzego(0.5), 8)
    with pytest.raises(ValueError):
        g[0] = 1.0


def test_truncated_examples():
    fh = truncated_symbol([0.5, 2, 0.5])
    assert isinstance(fh, SampledSequence)
    assert evaluate(fh, math.pi) == pytest.approx(1.0, abs=1e-14)
    assert evaluate(fh, 0.3) == pytest.approx(2 + math.cos(0.3), abs=1e-14)
    c = truncated_symbol([2.5])
    assert evaluate(c, 1.0) == 2.5 and c.f_min == c.f_max == 2.5
    t = [0.5 ** abs(k) for k in range(-7, 8)]
    assert evaluate(truncated_symbol(t), 0.0) == pytest.approx(2.984375, abs=1e-14)


def test_truncated_rejects_bad_sequences():
    with pytest.raises(DomainError):
        truncated_symbol([1, 2])
    with pytest.raises(DomainError):
        truncated_symbol([0.1, 2, 0.5])
    with pytest.raises(DomainError):
        truncated_symbol([1.5, 1, 1.5])  # 1 + 3 cos is not positive


def test_parseval_examples():
    r = parseval_check(ShiftedCosine(2, 1), 3)
    assert r.lhs == pytest.approx(4.5) and r.rhs == pytest.approx(4.5, abs=1e-9)
    r = parseval_check(Constant(3), 0)
    assert r.lhs == 9 and r.rhs == pytest.approx(9)
    r = parseval_check(KacMurdockSzego(0.5), 20)
    assert r.rhs == pytest.approx(5 / 3, abs=1e-10)
    assert abs(r.lhs - r.rhs) < 1e-9


def test_parseval_increases_to_rhs():
    f = PSeries(2.0, 4.0)
    prev = 0.0
    for K in (1, 4, 16, 64):
        r = parseval_check(f, K)
        assert prev <= r.lhs <= r.rhs + r.quadrature_error + 1e-12
        prev = r.lhs
    assert r.rhs - r.lhs < 1e-5


def test_pseries_closed_forms():
    f = PSeries(2.0, 4.0)
    z2 = math.pi ** 2 / 6
    assert f.f_max == pytest.approx(4 + 2 * z2, rel=1e-15)
    # sum (-1)^k / k^2 = -pi^2/12
    assert f.f_min == pytest.approx(4 - math.pi ** 2 / 6, rel=1e-15)
    assert evaluate(f, 0.0) == pytest.approx(f.f_max, rel=1e-14)
    assert evaluate(f, math.pi) == pytest.approx(f.f_min, rel=1e-14)
    # Clausen sum at pi/2: t0 + 2 * sum cos(k pi/2)/k^2 = t0 - pi^2/24
    assert evaluate(f, math.pi / 2) == pytest.approx(4 - math.pi ** 2 / 24, rel=1e-14)


@pytest.mark.parametrize("n", [1, 2, 3, 8, 33, 1024])
def test_pseries_grid_matches_series(n):
    f = PSeries(2.5, 4.0)
    lam = 2 * np.pi * np.arange(n) / n
    # sum_k cos(k lam) / k^p = Re Li_p(e^{i lam})
    with mpmath.workdps(30):
        ref = [float(4 + 2 * mpmath.re(mpmath.polylog(2.5, mpmath.expj(x)))) for x in lam[:8]]
    np.testing.assert_allclose(sample_grid(f, n)[:8], ref, rtol=1e-13)


def test_pseries_domain():
    with pytest.raises(DomainError):
        PSeries(1.0, 10.0)
    with pytest.raises(DomainError):
        PSeries(2.0, 1.0)  # t0 must exceed 2 zeta(2)


@pytest.mark.parametrize("bad", [lambda: ShiftedCosine(1, 1), lambda: KacMurdockSzego(1.0),
                                 lambda: KacMurdockSzego(0.0), lambda: Constant(0.0), lambda: Constant(-1)])
def test_catalog_domains(bad):
    with pytest.raises(DomainError):
        bad()


def test_lambda_outside_domain_rejected():
    f = KacMurdockSzego(0.5)
    for lam in (-0.1, 2 * math.pi + 1e-9, float("nan")):
        with pytest.raises(DomainError):
            evaluate(f, lam)
    assert evaluate(f, 2 * math.pi) == pytest.approx(3.0)


@pytest.mark.parametrize("f", CATALOG, ids=lambda f: f.spec)
def test_hermitian_coefficients(f):
    for k in range(-8, 9):
        assert fourier_coefficient(f, -k) == fourier_coefficient(f, k)


@pytest.mark.parametrize("f", CATALOG, ids=lambda f: f.spec)
def test_extrema_contain_fine_grid(f):
    lam = np.linspace(0, 2 * np.pi, 10_000)
    v = evaluate(f, lam)
    assert v.min() >= f.f_min - 1e-9
    assert v.max() <= f.f_max + 1e-9


@pytest.mark.parametrize("f", CATALOG, ids=lambda f: f.spec)
def test_quadrature_matches_closed_form(f):
    ks = np.arange(-32, 33)
    res = quadrature_coefficient(f, ks)
    closed = np.array([f.coefficient(int(k)) for k in ks])
    assert np.max(np.abs(res.value - closed)) < 1e-9
    assert res.aliasing_estimate <= 1e-10 or res.samples >= 1 << 20


def test_quadrature_scalar_and_method_switch():
    f = KacMurdockSzego(0.5)
    r = quadrature_coefficient(f, 3)
    assert isinstance(r.value, float)
    assert r.value == pytest.approx(0.125, abs=1e-12)
    assert r.samples >= 256
    assert fourier_coefficient(f, 3, method="quadrature") == pytest.approx(0.125, abs=1e-12)
    with pytest.raises(ValueError):
        fourier_coefficient(f, 3, method="simpson")


def test_quadrature_exact_for_trig_polynomial():
    b = BandSymbol((2.0, 0.3, -0.1))
    r = quadrature_coefficient(b, [0, 1, 2, 3])
    np.testing.assert_allclose(r.value, [2.0, 0.3, -0.1, 0.0], atol=1e-15)


def test_band_symbol_extrema():
    b = BandSymbol.from_coefficients([0.25, 0.5, 1.5, 0.5, 0.25])
    # f = 1.5 + cos(lam) + 0.5 cos(2 lam); minimum at cos(lam) = -1/2
    assert b.f_min == pytest.approx(0.75, abs=1e-10)
    assert b.f_max == pytest.approx(3.0, abs=1e-12)
    assert b.band_radius == 2


@pytest.mark.parametrize("n", [3, 4, 5, 9, 64])
def test_truncation_of_full_band_reproduces_symbol(n):
    b = BandSymbol.from_coefficients([0.25, 0.5, 1.5, 0.5, 0.25])
    taps = list(b.coefficients(n))
    fh = truncated_symbol(taps[:0:-1] + taps)
    if n - 1 >= b.band_radius:
        np.testing.assert_allclose(sample_grid(fh, n), sample_grid(b, n), atol=1e-12)
        lam = 2 * np.pi * np.arange(n) / n
        np.testing.assert_allclose(sample_grid(b, n), evaluate(b, lam), atol=1e-12)


def test_effective_radius_frozen():
    assert Constant(1).effective_radius() == 0
    assert ShiftedCosine(2, 1).effective_radius() == 1
    assert KacMurdockSzego(0.5).effective_radius() == 26
    assert PSeries(2.0, 4.0).effective_radius() == 71597


def test_tail_energy_consistency():
    for f in (KacMurdockSzego(0.7), PSeries(3.0, 3.0), BandSymbol((2.0, 0.5, 0.1))):
        t = f.coefficients(400)
        for N in (0, 1, 5, 50):
            head = t[0] ** 2 + 2 * np.sum(t[1:N + 1] ** 2)
            assert head + f.tail_energy(N) == pytest.approx(f.energy, rel=1e-6 if isinstance(f, PSeries) else 1e-12)


def test_scaled_kind():
    f = scaled(KacMurdockSzego(0.5), 0.5)
    assert isinstance(f, Scaled) and f.catalog
    assert f.f_max == 1.5 and f.coefficient(1) == 0.25
    assert scaled(ShiftedCosine(2, 1), 2) == ShiftedCosine(4, 2)
    assert scaled(f, 4) == Scaled(KacMurdockSzego(0.5), 2.0)
    with pytest.raises(DomainError):
        scaled(Constant(1), -1)


@pytest.mark.parametrize("spec,expected", [
    ("const:3", Constant(3.0)),
    ("cos:2,1", ShiftedCosine(2.0, 1.0)),
    ("kms:0.5", KacMurdockSzego(0.5)),
    ("pseries:2,4", PSeries(2.0, 4.0)),
    ("band:0.5,2,0.5", BandSymbol((2.0, 0.5))),
    ("kms:0.5*0.25", Scaled(KacMurdockSzego(0.5), 0.25)),
])
def test_parse_symbol(spec, expected):
    f = parse_symbol(spec)
    assert f == expected
    assert parse_symbol(f.spec) == f


@pytest.mark.parametrize("spec", ["", "kms", "kms:", "kms:a", "cos:1", "foo:1", "band:1,2", "kms:0.5*x"])
def test_parse_symbol_syntax_errors(spec):
    with pytest.raises((SymbolSyntaxError, DomainError)):
        parse_symbol(spec)


def test_parse_symbol_domain_errors():
    with pytest.raises(DomainError):
        parse_symbol("kms:1.5")
    with pytest.raises(DomainError):
        parse_symbol("band:0.5,2,0.4")


@settings(max_examples=40, deadline=None)
@given(st.floats(0.05, 0.95), st.floats(0, 2 * math.pi))
def test_kms_bounds_property(rho, lam):
    f = KacMurdockSzego(rho)
    v = evaluate(f, lam)
    assert f.f_min - 1e-12 <= v <= f.f_max * (1 + 1e-12)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(-0.3, 0.3), min_size=1, max_size=5), st.integers(1, 40))
def test_band_grid_matches_evaluation(tail, n):
    taps = (2.0,) + tuple(tail)
    b = BandSymbol(taps)
    lam = 2 * np.pi * np.arange(n) / n
    np.testing.assert_allclose(sample_grid(b, n), evaluate(b, lam), atol=1e-12)
