import math

import mpmath
import pytest

from signedlp.curves import (
    a_bad_prime,
    a_ell,
    an_expansion,
    classify_reduction,
    curve_from_dict,
    period_integral_oracle,
    periods,
    verify_conductor,
)
from signedlp.errors import BadReduction, ParseError, SingularCurve
from signedlp.lseries import SymbolNumerics


def test_ingest_37a1(store):
    c = store.curve("37a1")
    assert c.a_invariants == (0, 0, 1, -1, 0)
    assert c.discriminant == 37
    assert c.conductor == 37 and c.rank == 1
    assert verify_conductor(c)


def test_ingest_53a1_conductor_oracle(store):
    c = store.curve("53a1")
    assert c.discriminant == -53
    assert verify_conductor(c)


def test_singular_curve_rejected():
    with pytest.raises(SingularCurve):
        curve_from_dict({
            "label": "cusp", "a_invariants": [0, 0, 0, 0, 0],
            "conductor": 1, "rank": 0,
        })


def test_default_e_sequence():
    c = curve_from_dict({
        "label": "37a1", "a_invariants": [0, 0, 1, -1, 0],
        "conductor": 37, "rank": 1,
    })
    assert list(c.e_sequence.e) == [1]
    with pytest.raises(ParseError):
        curve_from_dict({
            "label": "x", "a_invariants": [0, 0, 1, -1, 0],
            "conductor": 37, "rank": 1, "e_sequence": [2],
        })


def test_a_ell_values(store):
    c37, c53 = store.curve("37a1"), store.curve("53a1")
    assert a_ell(c37, 3) == -3
    assert a_ell(c37, 17) == 0
    assert a_ell(c37, 19) == 0
    assert a_ell(c37, 2) == -2
    assert a_ell(c53, 3) == -3
    assert a_ell(c53, 5) == 0
    assert a_ell(c53, 11) == 0
    with pytest.raises(BadReduction):
        a_ell(c37, 37)


def test_hasse_bound(store):
    c = store.curve("53a1")
    for ell in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 41, 97, 101):
        if 53 % ell == 0:
            continue
        a = a_ell(c, ell)
        assert a * a <= 4 * ell


def test_an_expansion_multiplicative(store):
    c = store.curve("37a1")
    an = an_expansion(c, 200)
    assert an[1] == 1
    assert an[9] == (-3) ** 2 - 3  # Hecke recursion at 3
    assert an[6] == an[2] * an[3]
    for m in range(2, 15):
        for n in range(2, 200 // m):
            if math.gcd(m, n) == 1:
                assert an[m * n] == an[m] * an[n]


def test_bad_prime_coefficients(store):
    # rank-one prime-conductor curves are nonsplit multiplicative
    assert a_bad_prime(store.curve("37a1"), 37) == -1
    assert a_bad_prime(store.curve("53a1"), 53) == -1


def test_classify_reduction(store):
    c37 = store.curve("37a1")
    r = classify_reduction(c37, 17)
    assert r.kind == "good-supersingular" and r.a_p == 0 and r.v_p_of_ap is None
    r = classify_reduction(c37, 3)
    assert r.kind == "good-supersingular" and r.a_p == -3 and r.v_p_of_ap == 1
    assert classify_reduction(c37, 37).kind == "multiplicative"
    assert classify_reduction(c37, 5).kind == "good-ordinary"


def test_supersingular_ap_shape(store):
    # at p = 3 supersingularity allows a_p in {0, +-3}; p >= 5 forces a_p = 0
    for label, p in (("37a1", 3), ("53a1", 3)):
        r = classify_reduction(store.curve(label), p)
        assert r.a_p in (0, 3, -3)
    for label, p in (("53a1", 5), ("53a1", 11), ("37a1", 17), ("37a1", 19)):
        r = classify_reduction(store.curve(label), p)
        assert r.a_p == 0


def test_periods_37a1(store):
    per = periods(store.curve("37a1"), 25)
    assert per.real_components == 2
    assert per.omega_plus > 0
    assert abs(float(per.omega_plus) - 5.986917292463919) < 1e-12
    assert float(per.omega_minus.imag) > 0


def test_periods_against_quadrature_oracle(store):
    digits = 25
    for label in ("37a1", "53a1"):
        c = store.curve(label)
        per = periods(c, digits)
        oracle = period_integral_oracle(c, digits)
        with mpmath.workdps(digits + 10):
            least = per.omega_plus / per.real_components
            err = abs(least - mpmath.re(oracle))
            assert err < mpmath.mpf(10) ** (-(digits - 2))


def test_l_value_vanishes_at_one(store):
    # L(E, 1) = 0 for both rank-one fixtures
    for label, p in (("37a1", 17), ("53a1", 5)):
        c = store.curve(label)
        num = SymbolNumerics(c, p, digits=14)
        lam0 = num.lambda_zero()
        per = periods(c, 20)
        assert abs(lam0) / float(per.omega_plus) < 1e-12


def test_fricke_sign_verified_numerically(store):
    for label in ("37a1", "53a1"):
        c = store.curve(label)
        num = SymbolNumerics(c, 3, digits=14)
        assert num.verify_fricke() < 1e-9
        # flipping the sign must break the functional equation badly
        flipped = curve_from_dict({
            "label": c.label, "a_invariants": list(c.a_invariants),
            "conductor": c.conductor, "rank": c.rank,
            "e_sequence": list(c.e_sequence.e),
            "fricke_sign": -c.fricke_sign,
            "torsion_bound": c.torsion_bound,
        })
        bad = SymbolNumerics(flipped, 3, digits=14)
        assert bad.verify_fricke() > 1e-3
