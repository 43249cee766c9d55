import itertools
import random

import pytest

from qtlie.derivations import (
    bracket_d,
    bracket_witt,
    deriv,
    deriv_along,
    derivations_to_witt,
    inner,
    is_generic,
    parse_d_element,
    parse_witt_element,
    solenoidal_span_check,
    witt,
    witt_along,
)
from qtlie.errors import ExponentNotInR, MalformedBasisKey, NotGeneric, ParseError
from qtlie.torus import canonical_rep, exp_add, in_R, make_torus
from qtlie.verify import suite_jacobi_derivations, suite_jacobi_witt, suite_witt_embedding
from qtlie.xmatrix import x_power


def test_degree_degree_bracket(e1):
    got = bracket_d(e1, deriv(e1, 1, (2, 0)), deriv(e1, 2, (2, 2)))
    assert got == deriv(e1, 2, (4, 2), 2)


def test_degree_inner_bracket(e1):
    got = bracket_d(e1, deriv(e1, 1, (0, 0)), inner(e1, (1, 0)))
    assert got == inner(e1, (1, 0))


def test_inner_inner_bracket(e1):
    got = bracket_d(e1, inner(e1, (1, 0)), inner(e1, (0, 1)))
    assert got == inner(e1, (1, 1), 2)


def test_inner_bracket_vanishes_when_sum_central(e1):
    got = bracket_d(e1, inner(e1, (1, 0)), inner(e1, (1, 2)))
    assert got.is_zero()


def test_antisymmetry_samples(e1, e2):
    rng = random.Random(0)
    for spec in (e1, e2):
        for _ in range(40):
            elts = []
            for _ in range(2):
                if rng.random() < 0.5:
                    m = tuple(rng.randint(-2, 2) * spec.k[0] for _ in range(spec.d))
                    elts.append(deriv(spec, rng.randint(1, spec.d), m))
                else:
                    while True:
                        s = tuple(rng.randint(-3, 3) for _ in range(spec.d))
                        if not in_R(spec, s):
                            break
                    elts.append(inner(spec, s))
            a, b = elts
            assert bracket_d(spec, a, b) == -bracket_d(spec, b, a)
            assert bracket_d(spec, a, a).is_zero()


@pytest.mark.parametrize("fixture", ["e1", "e2", "e3"])
def test_jacobi_derivations(fixture, request):
    spec = request.getfixturevalue(fixture)
    assert suite_jacobi_derivations(spec, triples=200, box=4).passed


@pytest.mark.parametrize("fixture", ["e1", "e2", "e3"])
def test_jacobi_witt(fixture, request):
    spec = request.getfixturevalue(fixture)
    assert suite_jacobi_witt(spec, triples=200, box=4).passed


def test_witt_bracket_frozen(e1):
    fld = e1.field
    # [x^{(1,0)} x_1 d_1, x^{(0,1)} x_2 d_2]: both coefficients vanish
    assert bracket_witt(witt(fld, 1, (1, 0)), witt(fld, 2, (0, 1))).is_zero()
    got = bracket_witt(witt(fld, 1, (0, 0)), witt(fld, 2, (1, 1)))
    assert got == witt(fld, 2, (1, 1))
    a = witt(fld, 1, (2, -1))
    assert bracket_witt(a, a).is_zero()


def test_witt_bracket_same_direction(e1):
    fld = e1.field
    got = bracket_witt(witt(fld, 1, (1, 0)), witt(fld, 1, (0, 1)))
    # x^{m+n}(n_1 - m_1) x_1 d_1 with n_1 = 0, m_1 = 1
    assert got == witt(fld, 1, (1, 1), -1)


def test_witt_map_frozen(e1):
    assert derivations_to_witt(e1, deriv(e1, 1, (2, 0))) == witt(e1.field, 1, (1, 0), 2)
    assert derivations_to_witt(e1, deriv(e1, 2, (0, 0))) == witt(e1.field, 2, (0, 0), 2)


def test_witt_map_respects_example_bracket(e1):
    a = deriv(e1, 1, (2, 0))
    b = deriv(e1, 2, (2, 2))
    lhs = derivations_to_witt(e1, bracket_d(e1, a, b))
    rhs = bracket_witt(derivations_to_witt(e1, a), derivations_to_witt(e1, b))
    assert lhs == rhs


@pytest.mark.parametrize("fixture", ["e1", "e3"])
def test_witt_map_is_homomorphism(fixture, request):
    spec = request.getfixturevalue(fixture)
    assert suite_witt_embedding(spec, pairs=100).passed


def test_witt_map_rejects_inner_terms(e1):
    with pytest.raises(ExponentNotInR):
        derivations_to_witt(e1, inner(e1, (1, 0)))
    with pytest.raises(ExponentNotInR):
        deriv(e1, 1, (1, 0))


def test_malformed_keys(e1):
    with pytest.raises(MalformedBasisKey):
        inner(e1, (2, 0))  # central exponent
    with pytest.raises(MalformedBasisKey):
        deriv(e1, 3, (0, 0))  # index out of range


def test_adjoint_matches_matrix_bracket(e1):
    """Inner-part brackets agree with matrix commutators after class reduction."""
    noncentral = [
        s for s in itertools.product(range(-2, 3), repeat=2) if not in_R(e1, s)
    ]
    for r in noncentral:
        xr = x_power(e1, r)
        for s in noncentral:
            xs = x_power(e1, s)
            res = bracket_d(e1, inner(e1, r), inner(e1, s))
            commut = xr * xs - xs * xr
            if res.is_zero():
                assert commut.is_zero(), (r, s)
            else:
                ((_, key_exp),) = [(k[0], k[1]) for k in res.terms]
                coeff = res.terms[("t", key_exp)]
                assert key_exp == exp_add(r, s)
                assert commut == x_power(e1, canonical_rep(e1, key_exp)).scale(coeff)


def test_is_generic(e1_wide):
    fld = e1_wide.field
    assert is_generic(e1_wide, (fld.one, fld.root(1)))
    assert not is_generic(e1_wide, (1, 2))
    spec = make_torus(4, 0, [], L=3)  # phi(3) = 2 < 4 caps the rational rank
    mu = (spec.field.one, spec.field.root(1), spec.field.from_rational(2), spec.field.root(2))
    assert not is_generic(spec, mu)


def test_solenoidal_closure(e1_wide):
    mu = (e1_wide.field.one, e1_wide.field.root(1))
    assert solenoidal_span_check(e1_wide, mu, "quantum", 1).closed
    assert solenoidal_span_check(e1_wide, mu, "commutative", 2).closed
    with pytest.raises(NotGeneric):
        solenoidal_span_check(e1_wide, (1, 2), "quantum", 1)
    with pytest.raises(ValueError):
        solenoidal_span_check(e1_wide, mu, "sideways", 1)


def test_deriv_along_expands(e1):
    got = deriv_along(e1, (2, -1), (2, 0))
    assert got == deriv(e1, 1, (2, 0), 2) - deriv(e1, 2, (2, 0))
    fld = e1.field
    assert witt_along(fld, (0, 3), (1, 1)) == witt(fld, 2, (1, 1), 3)


def test_element_grammar(e1):
    elt = parse_d_element(e1, "2*D(1;2,0) - 1/2*T(1,0) + T(0,1)")
    want = deriv(e1, 1, (2, 0), 2) + inner(e1, (0, 1)) - inner(e1, (1, 0)).scale(
        e1.field.from_rational(1) / e1.field.from_rational(2)
    )
    assert elt == want
    welt = parse_witt_element(e1.field, "W(1;1,0) - 3*W(2;0,-1)")
    assert welt == witt(e1.field, 1, (1, 0)) - witt(e1.field, 2, (0, -1), 3)
    with pytest.raises(ParseError):
        parse_d_element(e1, "W(1;0,0)")
    with pytest.raises(ParseError):
        parse_d_element(e1, "D(oops)")


def test_element_string_round_trip(e1):
    elt = deriv(e1, 1, (2, 0), 2) - inner(e1, (1, 0))
    assert parse_d_element(e1, str(elt)) == elt
