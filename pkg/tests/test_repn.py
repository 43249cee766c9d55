import random

import pytest

from qtlie.errors import (
    InvalidModuleData,
    InvalidRepresentation,
    NotIrreducible,
    SplittingNeedsFieldExtension,
)
from qtlie.matrices import ExactMatrix
from qtlie.repn import (
    GLdGLNModule,
    GRepresentation,
    GradedSpace,
    _try_split,
    commutant,
    decompose_tensor,
    graded_regular_glN,
    is_absolutely_irreducible,
    min_annihilation_degree,
    natural_gld,
    probe_submodules_isomorphic,
    pullback,
    rep_from_dict,
    rep_to_dict,
    scramble_representation,
    trivial_gld,
    truncated_polynomial_rep,
    verify_representation,
)
from qtlie.torus import canonical_rep, class_representatives, exp_add, sigma_hat
from qtlie.cyclo import make_field


@pytest.fixture(scope="module")
def vw_e1(e1):
    wmats, wclasses = graded_regular_glN(e1)
    return GLdGLNModule(e1, natural_gld(e1), wmats, wclasses)


@pytest.fixture(scope="module")
def rep_e1(e1, vw_e1):
    return pullback(e1, vw_e1)


def test_natural_module_matrices(e1):
    V = natural_gld(e1)
    assert V[(1, 2)] == ExactMatrix(e1.field, [[0, 1], [0, 0]])


def test_regular_module_shape(e1):
    wmats, wclasses = graded_regular_glN(e1)
    assert len(wclasses) == 4
    assert sorted(set(wclasses)) == class_representatives(e1)
    # X^{(1,2)} sends the basis vector of class (1,1) to the one of class (2,1)
    idx = {w: i for i, w in enumerate(wclasses)}
    mat = wmats[(1, 2)]
    col = idx[(1, 1)]
    target = idx[canonical_rep(e1, (2, 3))]
    assert target == idx[(2, 1)]
    assert mat[target, col] == sigma_hat(e1, (1, 2), (1, 1))
    nonzero = [i for i in range(4) if not mat[i, col].is_zero()]
    assert nonzero == [target]


def test_regular_module_relations(e1, e2):
    for spec in (e1, e2):
        wmats, wclasses = graded_regular_glN(spec)
        GLdGLNModule(spec, natural_gld(spec), wmats, wclasses).validate()


def test_invalid_module_data(e1):
    wmats, wclasses = graded_regular_glN(e1)
    bad = {k: v.copy() for k, v in wmats.items()}
    bad[(1, 1)] = bad[(1, 1)].scale(2)
    with pytest.raises(InvalidModuleData):
        GLdGLNModule(e1, natural_gld(e1), bad, wclasses).validate()


def test_pullback_dimensions(e1, rep_e1):
    assert rep_e1.space.dim == 8
    assert [rep_e1.space.dims[c] for c in rep_e1.space.classes] == [2, 2, 2, 2]
    assert rep_e1.cutoff == 1


def test_pullback_satisfies_brackets(e1, rep_e1):
    report = verify_representation(e1, rep_e1, 3)
    assert report.passed
    assert report.cases > 1000


def test_trivial_pullback(e1):
    wmats, wclasses = graded_regular_glN(e1)
    rep = pullback(e1, GLdGLNModule(e1, trivial_gld(e1), wmats, wclasses))
    assert rep.space.dim == 4
    assert verify_representation(e1, rep, 2).passed
    # only the torus side acts
    assert all(key[0] == "XT" for key in rep.action)


def test_corrupted_representation_fails_verification(e1, rep_e1):
    action = {k: m.copy() for k, m in rep_e1.action.items()}
    key = ("XT", (0, 0), (1, 1))
    bad = action[key].copy()
    bad[0, 0] = bad[0, 0] + e1.field.one
    action[key] = bad
    with pytest.raises(InvalidRepresentation):
        # the corruption breaks the grading block structure
        GRepresentation(rep_e1.space, action, 1)
    # a grading-compatible corruption passes construction but fails the brackets
    mat = action[("XD", (1, 0), 1)].copy()
    mat[0, 0] = mat[0, 0] + e1.field.one
    action[key] = rep_e1.action[key]
    action[("XD", (1, 0), 1)] = mat
    rep = GRepresentation(rep_e1.space, action, 1)
    report = verify_representation(e1, rep, 2)
    assert not report.passed
    assert report.first_failure is not None


def test_raw_index_reduction(e1, rep_e1):
    assert rep_e1.rho_raw(("XT", (0, 0), (3, 3))) == rep_e1.rho(("XT", (0, 0), (1, 1)))
    assert rep_e1.rho_raw(("XT", (0, 0), (-1, 0))) == rep_e1.rho(("XT", (0, 0), (1, 2)))


def test_raw_index_reduction_with_tail(e1):
    jet = truncated_polynomial_rep(e1, order=2)
    w0 = canonical_rep(e1, (0, 0))
    # with all torus symbols acting as zero the tail collapses to zero
    assert jet.rho_raw(("XT", (0, 0), exp_add(w0, (2, 0)))).is_zero()


def test_action_keys_must_be_canonical(e1, rep_e1):
    action = dict(rep_e1.action)
    action[("XT", (0, 0), (3, 3))] = rep_e1.action[("XT", (0, 0), (1, 1))]
    with pytest.raises(InvalidRepresentation):
        GRepresentation(rep_e1.space, action, 1)


def test_commutant_of_pullback_is_scalar(rep_e1):
    basis = commutant(rep_e1)
    assert len(basis) == 1
    assert is_absolutely_irreducible(rep_e1)


def test_commutant_of_double_copy(e1, rep_e1):
    sp = rep_e1.space
    dims2 = {c: 2 * sp.dims[c] for c in sp.classes}
    sp2 = GradedSpace(e1, dims2)
    action2 = {}
    for key, mat in rep_e1.action.items():
        big = ExactMatrix.zeros(e1.field, sp2.dim)
        for c_from in sp.classes:
            for c_to in sp.classes:
                blk = sp.block(mat, c_from, c_to)
                if blk.is_zero():
                    continue
                for copy in range(2):
                    big.paste(
                        sp2.offset[c_to] + copy * sp.dims[c_to],
                        sp2.offset[c_from] + copy * sp.dims[c_from],
                        blk,
                    )
        action2[key] = big
    rep2 = GRepresentation(sp2, action2, 1)
    assert len(commutant(rep2)) == 4
    assert not is_absolutely_irreducible(rep2)
    with pytest.raises(NotIrreducible):
        decompose_tensor(e1, rep2)


def test_commutant_of_trivial_module(e1):
    w0 = canonical_rep(e1, (0, 0))
    rep = GRepresentation(GradedSpace(e1, {w0: 1}), {}, 1)
    assert len(commutant(rep)) == 1


def test_min_annihilation_degree(e1, rep_e1):
    assert min_annihilation_degree(rep_e1) == 1
    w0 = canonical_rep(e1, (0, 0))
    zero_rep = GRepresentation(GradedSpace(e1, {w0: 2}), {}, 1)
    assert min_annihilation_degree(zero_rep) == 0
    jet = truncated_polynomial_rep(e1, order=2)
    assert min_annihilation_degree(jet) == 2


def test_truncated_polynomial_rep_is_valid(e1, e3):
    for spec in (e1, e3):
        jet = truncated_polynomial_rep(spec, order=2)
        assert verify_representation(spec, jet, 3).passed


def test_scramble_preserves_structure(e1, rep_e1):
    sc = scramble_representation(rep_e1, seed=42)
    assert verify_representation(e1, sc, 2).passed
    assert sc.space.dims == rep_e1.space.dims
    assert sc.action.keys() == rep_e1.action.keys()
    assert any(sc.action[k] != rep_e1.action[k] for k in sc.action)


def test_decompose_scrambled_pullback(e1, rep_e1):
    sc = scramble_representation(rep_e1, seed=42)
    assert len(commutant(sc)) == 1
    vw, phi = decompose_tensor(e1, sc, probes=8, seed=42)
    assert (vw.dim_V, vw.dim_W) == (2, 4)
    assert phi.rank() == 8
    rebuilt = pullback(e1, vw)
    for key in set(sc.nonzero_keys()) | set(rebuilt.nonzero_keys()):
        assert sc.rho(key) * phi == phi * rebuilt.rho(key)


def test_decompose_trivial_v(e1):
    wmats, wclasses = graded_regular_glN(e1)
    rep = pullback(e1, GLdGLNModule(e1, trivial_gld(e1), wmats, wclasses))
    vw, _ = decompose_tensor(e1, rep, seed=3)
    assert (vw.dim_V, vw.dim_W) == (1, 4)


def test_decompose_e2(e2):
    wmats, wclasses = graded_regular_glN(e2)
    rep = pullback(e2, GLdGLNModule(e2, natural_gld(e2), wmats, wclasses))
    sc = scramble_representation(rep, seed=9)
    vw, phi = decompose_tensor(e2, sc, seed=9)
    assert (vw.dim_V, vw.dim_W) == (2, 9)
    assert phi.rank() == 18


def test_probe_submodules_isomorphic(e1, rep_e1):
    sc = scramble_representation(rep_e1, seed=5)
    assert probe_submodules_isomorphic(e1, sc, count=4, seed=5)


def test_splitting_needs_field_extension():
    """A commutant isomorphic to Q(i) cannot be split over the rationals."""
    fld = make_field(1)
    rotation = ExactMatrix(fld, [[0, -1], [1, 0]])
    with pytest.raises(SplittingNeedsFieldExtension):
        _try_split(fld, [rotation], 2, random.Random(0))


def test_rep_serialization_round_trip(e1, rep_e1):
    alpha = (e1.field.from_rational(1), e1.field.from_rational(-2))
    data = rep_to_dict(rep_e1, alpha)
    spec2, rep2, alpha2 = rep_from_dict(data)
    assert spec2 == e1
    assert rep2 == rep_e1
    assert alpha2 == alpha
    # deterministic dump
    assert rep_to_dict(rep2, alpha2) == data
