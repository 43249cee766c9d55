from fractions import Fraction

import pytest

from qtlie.cuspidal import (
    CuspidalModule,
    OperatorFamily,
    build_module,
    bracket_symbols,
    coefficients_to_representation,
    dump_module,
    extract_coefficients,
    modules_equal_on_box,
    mv_eq,
    sym_central,
    sym_deg,
    sym_inner,
    tensor_field_module,
    verify_module_axioms,
    weight_multiplicities,
)
from qtlie.errors import (
    ConstantTermMismatch,
    DegreeBoundViolated,
    DimensionMismatch,
    InvalidRepresentation,
    MalformedBasisKey,
    OutOfBox,
    RelationViolated,
)
from qtlie.matrices import ExactMatrix
from qtlie.repn import (
    GLdGLNModule,
    GRepresentation,
    graded_regular_glN,
    natural_gld,
    pullback,
    truncated_polynomial_rep,
    trivial_gld,
)
from qtlie.torus import canonical_rep


@pytest.fixture(scope="module")
def setup_e1(e1):
    wmats, wclasses = graded_regular_glN(e1)
    vw = GLdGLNModule(e1, natural_gld(e1), wmats, wclasses)
    rep = pullback(e1, vw)
    module = build_module(e1, (0, 0), rep, box=3)
    return vw, rep, module


def _unit(spec, module, w, local):
    col = [spec.field.zero] * module.space.dims[w]
    col[local] = spec.field.one
    return {(w, (0,) * spec.d): col}


def test_degree_action_frozen(e1, setup_e1):
    """The weight scalar plus the matrix jet, applied to the second V slot."""
    _, _, module = setup_e1
    vec = _unit(e1, module, (1, 1), 1)
    res = module.act(sym_deg(e1, (1, 0), (2, 0)), vec)
    assert set(res) == {((1, 1), (2, 0))}
    assert [str(x) for x in res[((1, 1), (2, 0))]] == ["0", "1"]


def test_degree_action_hits_matrix_part(e1, setup_e1):
    _, _, module = setup_e1
    vec = _unit(e1, module, (1, 1), 0)  # first V slot feels E_11
    res = module.act(sym_deg(e1, (1, 0), (2, 0)), vec)
    assert [str(x) for x in res[((1, 1), (2, 0))]] == ["3", "0"]


def test_inner_action_frozen(e1, setup_e1):
    _, _, module = setup_e1
    vec = _unit(e1, module, (1, 1), 0)
    res = module.act(sym_inner(e1, (1, 0)), vec)
    assert set(res) == {((2, 1), (0, 0))}
    assert [str(x) for x in res[((2, 1), (0, 0))]] == ["1", "0"]


def test_central_action_is_label_shift(e1, setup_e1):
    _, _, module = setup_e1
    vec = _unit(e1, module, (1, 1), 0)
    res = module.act(sym_central(e1, (2, 0)), vec)
    assert res == {((1, 1), (2, 0)): vec[((1, 1), (0, 0))]}


def test_central_action_is_free_and_associative(e1, setup_e1):
    _, _, module = setup_e1
    vec = _unit(e1, module, (2, 1), 1)
    za = sym_central(e1, (2, -2))
    zb = sym_central(e1, (-4, 0))
    zc = sym_central(e1, (-2, -2))
    assert mv_eq(module.act(za, module.act(zb, vec)), module.act(zc, vec))


def test_symbol_validation(e1):
    with pytest.raises(MalformedBasisKey):
        sym_deg(e1, (1, 0), (1, 0))
    with pytest.raises(MalformedBasisKey):
        sym_inner(e1, (2, 0))
    with pytest.raises(MalformedBasisKey):
        sym_central(e1, (1, 0))


def test_bracket_symbols_cover_the_semidirect_structure(e1):
    fld = e1.field
    terms = bracket_symbols(e1, sym_deg(e1, (1, 0), (0, 0)), sym_central(e1, (2, 0)))
    assert terms == [(fld.from_rational(2), ("z", (2, 0)))]
    assert bracket_symbols(e1, sym_inner(e1, (1, 0)), sym_central(e1, (2, 0))) == []
    flipped = bracket_symbols(e1, sym_central(e1, (2, 0)), sym_deg(e1, (1, 0), (0, 0)))
    assert flipped == [(fld.from_rational(-2), ("z", (2, 0)))]


def test_module_axioms(e1, setup_e1):
    _, _, module = setup_e1
    report = verify_module_axioms(module, symbol_box=2, sample_count=40, seed=7,
                                  vector_box=2)
    assert report.passed


def test_module_axioms_catch_corruption(e1, setup_e1):
    _, rep, _ = setup_e1
    action = {k: m.copy() for k, m in rep.action.items()}
    key = ("XD", (1, 0), 1)
    bad = action[key].copy()
    bad[0, 0] = bad[0, 0] + e1.field.one
    action[key] = bad
    broken = GRepresentation(rep.space, action, 1)
    module = CuspidalModule(e1, (0, 0), broken, box=2)
    report = verify_module_axioms(module, symbol_box=2, sample_count=40, seed=7,
                                  vector_box=1)
    assert not report.passed
    with pytest.raises(InvalidRepresentation):
        build_module(e1, (0, 0), broken)


def test_jet_module_axioms(e1):
    """Torus symbols act as zero here; only the central shift moves labels."""
    jet = truncated_polynomial_rep(e1, order=2)
    module = build_module(e1, (0, 0), jet, box=2)
    report = verify_module_axioms(module, symbol_box=2, sample_count=40, seed=3,
                                  vector_box=1)
    assert report.passed


def test_tensor_field_action_frozen(e1, setup_e1):
    vw, _, _ = setup_e1
    tf = tensor_field_module(e1, (0, 0), vw, box=3)
    vec = _unit(e1, tf, (1, 1), 0)
    res = tf.act(sym_deg(e1, (1, 0), (2, 0)), vec)
    assert [str(x) for x in res[((1, 1), (2, 0))]] == ["3", "0"]
    res = tf.act(sym_inner(e1, (1, 0)), vec)
    assert set(res) == {((2, 1), (0, 0))}
    assert [str(x) for x in res[((2, 1), (0, 0))]] == ["1", "0"]


def test_functor_image_equals_tensor_field(e1, setup_e1):
    vw, rep, module = setup_e1
    tf = tensor_field_module(e1, (0, 0), vw, box=3)
    assert modules_equal_on_box(module, tf, 2)


def test_modules_differ_for_different_alpha(e1, setup_e1):
    vw, rep, module = setup_e1
    shifted = tensor_field_module(e1, (Fraction(1, 2), 0), vw, box=3)
    assert not modules_equal_on_box(module, shifted, 1)


def test_modules_differ_for_regraded_w(e1, setup_e1):
    vw, rep, module = setup_e1
    rotate = {(1, 1): (1, 2), (1, 2): (2, 1), (2, 1): (2, 2), (2, 2): (1, 1)}
    wclasses2 = [rotate[c] for c in vw.W_classes]
    wmats2 = {}
    for w, mat in vw.W_mats.items():
        wmats2[w] = mat  # same matrices, relabeled grading: not a valid module
    with pytest.raises(Exception):
        GLdGLNModule(e1, vw.V_mats, wmats2, wclasses2).validate()


def test_dimension_mismatch(e1, e2, setup_e1):
    vw, _, module = setup_e1
    wmats, wclasses = graded_regular_glN(e1)
    small = GLdGLNModule(e1, trivial_gld(e1), wmats, wclasses)
    other = tensor_field_module(e1, (0, 0), small, box=2)
    with pytest.raises(DimensionMismatch):
        modules_equal_on_box(module, other, 1)


def test_strict_box(e1, setup_e1):
    _, rep, _ = setup_e1
    module = CuspidalModule(e1, (0, 0), rep, box=1, strict_box=True)
    vec = _unit(e1, module, (1, 1), 0)
    with pytest.raises(OutOfBox):
        module.act(sym_central(e1, (4, 0)), vec)


def test_weight_multiplicities(e1, e2, setup_e1):
    _, _, module = setup_e1
    mults, bound = weight_multiplicities(module, 4)
    assert bound == 2
    assert set(mults.values()) == {2}
    assert len(mults) == 4 * 9**2

    wmats, wclasses = graded_regular_glN(e2)
    vw2 = GLdGLNModule(e2, natural_gld(e2), wmats, wclasses)
    module2 = build_module(e2, (0, 0), pullback(e2, vw2), box=2)
    mults2, bound2 = weight_multiplicities(module2, 2)
    assert bound2 == 2 and set(mults2.values()) == {2}


def test_zero_module_multiplicities(e1):
    w0 = canonical_rep(e1, (0, 0))
    from qtlie.repn import GradedSpace

    rep = GRepresentation(GradedSpace(e1, {w0: 1}), {}, 1)
    module = CuspidalModule(e1, (0, 0), rep, box=1)
    mults, bound = weight_multiplicities(module, 1)
    assert bound == 1  # one-dimensional space sits at every central label
    assert set(mults.values()) == {1}


# ---------------------------------------------------------------------------
# operator families and the extraction round trip
# ---------------------------------------------------------------------------


def test_family_constant_term(e1, setup_e1):
    _, _, module = setup_e1
    fam = OperatorFamily(module, degree_bound=3)
    zero = (0, 0)
    mat = fam.matrix_D((1, 0), zero)
    sp = module.space
    for c in sp.classes:
        blk = sp.block(mat, c, c)
        want = ExactMatrix.identity(e1.field, sp.dims[c]).scale(c[0])
        assert blk == want, c


def test_family_matrix_d_jet_coefficient(e1, setup_e1):
    _, rep, module = setup_e1
    fam = OperatorFamily(module, degree_bound=3)
    mat = fam.matrix_D((1, 0), (2, 0))
    # D(e_1, (2,0)) = (e_1 | w) Id + 2 rho(x_1 d_1) blockwise
    expected = rep.rho(("XD", (1, 0), 1)).scale(2)
    sp = module.space
    for c in sp.classes:
        blk = sp.block(mat, c, c)
        want = sp.block(expected, c, c) + ExactMatrix.identity(e1.field, sp.dims[c]).scale(c[0])
        assert blk == want


def test_family_matrix_l_is_class_shift(e1, setup_e1):
    _, rep, module = setup_e1
    fam = OperatorFamily(module, degree_bound=3)
    assert fam.matrix_L((0, 0), (1, 2)) == rep.rho(("XT", (0, 0), (1, 2)))
    # raw second argument: reduced through the central tail
    assert fam.matrix_L((0, 0), (3, 1)) == rep.rho(("XT", (0, 0), (1, 1)))
    # central argument: the identity label shift
    assert fam.matrix_L((2, 0), (2, 2)) == ExactMatrix.identity(e1.field, module.space.dim)


def test_extraction_values(e1, setup_e1):
    _, rep, module = setup_e1
    fam = OperatorFamily(module, degree_bound=3)
    coeffs = extract_coefficients(fam, e1, (0, 0))
    assert coeffs.f[(1, (1, 0))] == rep.rho(("XD", (1, 0), 1))
    assert coeffs.f[(2, (0, 1))] == rep.rho(("XD", (0, 1), 2))
    assert set(coeffs.g) == {((1, 1), (0, 0)), ((1, 2), (0, 0)), ((2, 1), (0, 0))}
    for (r, l), mat in coeffs.g.items():
        assert mat == rep.rho(("XT", l, r))


def test_roundtrip_exact(e1, setup_e1):
    _, rep, module = setup_e1
    fam = OperatorFamily(module, degree_bound=3)
    back = coefficients_to_representation(e1, extract_coefficients(fam, e1, (0, 0)))
    assert back == rep


def test_roundtrip_with_offset_weight(e1, setup_e1):
    vw, rep, _ = setup_e1
    alpha = (Fraction(1, 2), Fraction(-1, 3))
    module = build_module(e1, alpha, rep, box=3)
    fam = OperatorFamily(module, degree_bound=3)
    coeffs = extract_coefficients(fam, e1, alpha)
    assert coefficients_to_representation(e1, coeffs) == rep


def test_roundtrip_jet_module(e1):
    """Cutoff-two representation: the degree-one jets survive the round trip."""
    jet = truncated_polynomial_rep(e1, order=2)
    module = build_module(e1, (0, 0), jet, box=3)
    fam = OperatorFamily(module, degree_bound=3)
    coeffs = extract_coefficients(fam, e1, (0, 0))
    back = coefficients_to_representation(e1, coeffs)
    for key in jet.action:
        assert back.rho(key) == jet.rho(key)
    # the central class carries the hardwired identity shift after extraction
    w0 = canonical_rep(e1, (0, 0))
    assert back.rho(("XT", (0, 0), w0)) == ExactMatrix.identity(e1.field, 6)


def test_extraction_wrong_alpha_fails(e1, setup_e1):
    _, _, module = setup_e1
    fam = OperatorFamily(module, degree_bound=3)
    with pytest.raises(ConstantTermMismatch):
        extract_coefficients(fam, e1, (1, 0))


def test_extraction_degree_bound_violated(e1):
    """A cutoff-two module is quadratic in the lattice variable; bound 1 fails."""
    jet = truncated_polynomial_rep(e1, order=2)
    module = build_module(e1, (0, 0), jet, box=3)
    fam = OperatorFamily(module, degree_bound=1)
    with pytest.raises(DegreeBoundViolated):
        extract_coefficients(fam, e1, (0, 0))


def test_corrupted_coefficients_rejected(e1, setup_e1):
    _, _, module = setup_e1
    fam = OperatorFamily(module, degree_bound=2)
    coeffs = extract_coefficients(fam, e1, (0, 0))
    mat = coeffs.f[(1, (1, 0))].copy()
    mat[0, 0] = mat[0, 0] + e1.field.one
    coeffs.f[(1, (1, 0))] = mat
    with pytest.raises(RelationViolated):
        coefficients_to_representation(e1, coeffs)


def test_zero_coefficients_give_zero_representation(e1, setup_e1):
    _, _, module = setup_e1
    fam = OperatorFamily(module, degree_bound=2)
    coeffs = extract_coefficients(fam, e1, (0, 0))
    coeffs.f.clear()
    coeffs.g.clear()
    rep = coefficients_to_representation(e1, coeffs)
    assert [k for k in rep.action if k[0] == "XD"] == []


def test_dump_is_deterministic(e1, setup_e1):
    _, _, module = setup_e1
    import json

    d1 = json.dumps(dump_module(module, 1), sort_keys=True)
    d2 = json.dumps(dump_module(module, 1), sort_keys=True)
    assert d1 == d2


# ---------------------------------------------------------------------------
# shifted-family commutators, checked through act-composition
# ---------------------------------------------------------------------------


def _apply_D(module, u, m, vec):
    spec = module.spec
    shifted = module.act(sym_deg(spec, u, m), vec)
    return module.act(sym_central(spec, tuple(-x for x in m)), shifted)


def _apply_L(module, m, e, vec):
    """z^{-m} after the action of t^{m+e}; e need not be a class representative."""
    spec = module.spec
    total = tuple(a + b for a, b in zip(m, e))
    from qtlie.torus import in_R

    if in_R(spec, total):
        moved = module.act(sym_central(spec, total), vec)
    else:
        moved = module.act(sym_inner(spec, total), vec)
    return module.act(sym_central(spec, tuple(-x for x in m)), moved)


def _mv_combine(*scaled):
    out = {}
    for coeff, vec in scaled:
        from qtlie.cuspidal import mv_add, mv_scale

        out = mv_add(out, mv_scale(coeff, vec))
    return out


def test_shifted_family_relations(e1, setup_e1):
    """The three commutation relations of the shifted operator families."""
    from qtlie.cuspidal import mv_add, mv_scale
    from qtlie.derivations import inner_product
    from qtlie.torus import exp_add, sigma_skew

    _, _, module = setup_e1
    fld = e1.field
    minus = fld.from_rational(-1)
    vectors = [wv.as_map() for wv in module.basis_vectors(1)]

    def commute(f, g, vec):
        return mv_add(f(g(vec)), mv_scale(minus, g(f(vec))))

    u, v = (1, 0), (0, 1)
    m, n = (2, 0), (0, -2)
    r, s = (1, 2), (2, 1)
    for vec in vectors[:: max(1, len(vectors) // 6)]:
        # [D(u,m), D(v,n)] = (u|n)(D(v,m+n) - D(v,n)) - (v|m)(D(u,m+n) - D(u,m))
        lhs = commute(lambda w: _apply_D(module, u, m, w),
                      lambda w: _apply_D(module, v, n, w), vec)
        rhs = _mv_combine(
            (inner_product(fld, u, n), _apply_D(module, v, exp_add(m, n), vec)),
            (minus * inner_product(fld, u, n), _apply_D(module, v, n, vec)),
            (minus * inner_product(fld, v, m), _apply_D(module, u, exp_add(m, n), vec)),
            (inner_product(fld, v, m), _apply_D(module, u, m, vec)),
        )
        assert mv_eq(lhs, rhs)
        # [D(u,m), L(n,s)] = (u|n+s) L(m+n, s) - (u|n) L(n, s)
        lhs = commute(lambda w: _apply_D(module, u, m, w),
                      lambda w: _apply_L(module, n, s, w), vec)
        rhs = _mv_combine(
            (inner_product(fld, u, exp_add(n, s)), _apply_L(module, exp_add(m, n), s, vec)),
            (minus * inner_product(fld, u, n), _apply_L(module, n, s, vec)),
        )
        assert mv_eq(lhs, rhs)
        # [L(m,r), L(n,s)] = (sig(r,s) - sig(s,r)) L(m+n, r+s), raw second index
        lhs = commute(lambda w: _apply_L(module, m, r, w),
                      lambda w: _apply_L(module, n, s, w), vec)
        rhs = mv_scale(sigma_skew(e1, r, s), _apply_L(module, exp_add(m, n), exp_add(r, s), vec))
        assert mv_eq(lhs, rhs)


def test_commutative_torus_module(commutative):
    """Degenerate case: no inner derivations at all, only weights and shifts."""
    wmats, wclasses = graded_regular_glN(commutative)
    vw = GLdGLNModule(commutative, natural_gld(commutative), wmats, wclasses)
    module = build_module(commutative, (0, 0), pullback(commutative, vw), box=1)
    report = verify_module_axioms(module, symbol_box=1, sample_count=10, seed=1,
                                  vector_box=1)
    assert report.passed


def test_rank_three_module(e3):
    wmats, wclasses = graded_regular_glN(e3)
    vw = GLdGLNModule(e3, natural_gld(e3), wmats, wclasses)
    rep = pullback(e3, vw)
    module = build_module(e3, (0, 0, 0), rep, box=1)
    tf = tensor_field_module(e3, (0, 0, 0), vw, box=1)
    assert modules_equal_on_box(module, tf, 1)
    report = verify_module_axioms(module, symbol_box=1, sample_count=20, seed=1,
                                  vector_box=1)
    assert report.passed
