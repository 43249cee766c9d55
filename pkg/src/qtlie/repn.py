"""Finite-dimensional graded modules over the jet algebra and over gl_d + gl_N.

A representation stores one exact matrix per canonical basis symbol below its
cutoff; symbols of filtration degree >= cutoff act as zero.  Raw torus-side
symbols (second index not a class representative) act through the tail rule

    rho(XT(l, w + n)) = sum_j (n^j / j!) rho(XT(l + j, w)),

which is a finite sum thanks to the cutoff and is exactly what compatibility
with the weight-module construction forces.
"""
from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .cyclo import CycloNum, parse_cyclonum
from .errors import (
    InvalidModuleData,
    InvalidRepresentation,
    NotIrreducible,
    ParseError,
    SplittingNeedsFieldExtension,
)
from .jetalg import canonical_keys, degree_basis, key_class, key_degree, key_from_string, key_to_string, _bracket_jet_keys
from .matrices import ExactMatrix, RowSpace, basis_matrix, vec_is_zero
from .torus import (
    TorusSpec,
    canonical_rep,
    class_representatives,
    dump_torus,
    exp_add,
    load_torus,
    sigma_hat,
    sigma_skew,
)


class GradedSpace:
    """Finite-dimensional space graded by torus classes, with a fixed basis order."""

    def __init__(self, spec: TorusSpec, dims: dict[tuple, int]):
        self.spec = spec
        self.field = spec.field
        self.dims = {c: n for c, n in dims.items() if n > 0}
        self.classes = sorted(self.dims)
        self.offset = {}
        total = 0
        for c in self.classes:
            self.offset[c] = total
            total += self.dims[c]
        self.dim = total

    def __eq__(self, other):
        return isinstance(other, GradedSpace) and self.spec == other.spec and self.dims == other.dims

    def class_of_index(self, i: int) -> tuple:
        for c in self.classes:
            if self.offset[c] <= i < self.offset[c] + self.dims[c]:
                return c
        raise IndexError(i)

    def block(self, mat: ExactMatrix, c_from: tuple, c_to: tuple) -> ExactMatrix:
        return mat.submatrix(
            self.offset.get(c_to, 0),
            self.offset.get(c_from, 0),
            self.dims.get(c_to, 0),
            self.dims.get(c_from, 0),
        )

    def shifted_class(self, c: tuple, w: tuple) -> tuple:
        return canonical_rep(self.spec, exp_add(c, w))


class GRepresentation:
    """Graded representation of the jet algebra by exact matrices."""

    def __init__(self, space: GradedSpace, action: dict, cutoff: int):
        self.space = space
        self.cutoff = cutoff
        self.action = {}
        for key, mat in action.items():
            if mat.is_zero():
                continue
            if key_degree(key) >= cutoff:
                raise InvalidRepresentation(
                    f"symbol {key_to_string(key)} has degree >= cutoff {cutoff} but acts non-trivially"
                )
            self.action[key] = mat
        self._zero = ExactMatrix.zeros(space.field, space.dim)
        self._check_block_structure()

    def _check_block_structure(self):
        sp = self.space
        for key, mat in self.action.items():
            if mat.rows != sp.dim or mat.cols != sp.dim:
                raise InvalidRepresentation(f"matrix for {key_to_string(key)} has wrong size")
            if key[0] == "XT" and key[2] != canonical_rep(sp.spec, key[2]):
                raise InvalidRepresentation(
                    f"action key {key_to_string(key)} must use the class representative"
                )
            w = key_class(sp.spec, key) if key[0] == "XT" else None
            for j in range(sp.dim):
                c_from = sp.class_of_index(j)
                c_to = sp.shifted_class(c_from, w) if w is not None else c_from
                for i in range(sp.dim):
                    if not mat[i, j].is_zero() and sp.class_of_index(i) != c_to:
                        raise InvalidRepresentation(
                            f"matrix for {key_to_string(key)} breaks the grading at ({i},{j})"
                        )

    def rho(self, key) -> ExactMatrix:
        if key_degree(key) >= self.cutoff:
            return self._zero
        return self.action.get(key, self._zero)

    def rho_raw(self, key) -> ExactMatrix:
        """Action of a symbol whose torus index need not be a class representative."""
        if key[0] == "XD":
            return self.rho(key)
        _, l, s = key
        spec = self.space.spec
        w = canonical_rep(spec, s)
        shift = tuple(a - b for a, b in zip(s, w))
        if all(x == 0 for x in shift):
            return self.rho(("XT", l, w))
        out = None
        budget = self.cutoff - sum(l)
        for total in range(0, max(budget, 0)):
            for j in degree_basis(spec.d, total):
                num = 1
                den = 1
                for ni, ji in zip(shift, j):
                    num *= ni**ji
                    den *= math.factorial(ji)
                if num == 0:
                    continue
                term = self.rho(("XT", exp_add(l, j), w))
                if term.is_zero():
                    continue
                term = term.scale(Fraction(num, den))
                out = term if out is None else out + term
        return out if out is not None else self._zero

    def rho_element(self, element) -> ExactMatrix:
        out = self._zero
        for key, coeff in element.terms.items():
            mat = self.rho_raw(key)
            if not mat.is_zero():
                out = out + mat.scale(coeff)
        return out

    def nonzero_keys(self):
        return sorted(self.action, key=key_to_string)

    def __eq__(self, other):
        return (
            isinstance(other, GRepresentation)
            and self.space == other.space
            and self.cutoff == other.cutoff
            and self.action.keys() == other.action.keys()
            and all(self.action[k] == other.action[k] for k in self.action)
        )


@dataclass
class VerifyReport:
    passed: bool
    cases: int
    first_failure: str | None = None


def verify_representation(spec: TorusSpec, rep: GRepresentation, degree_bound: int) -> VerifyReport:
    """Check rho([a,b]) = [rho(a), rho(b)] over canonical symbol pairs.

    Pairs where either symbol has degree >= cutoff are counted but need no
    matrix work: both sides vanish identically because brackets never lower
    the filtration degree.
    """
    keys = canonical_keys(spec, degree_bound)
    cases = 0
    for ka in keys:
        deg_a = key_degree(ka)
        mat_a = rep.rho(ka)
        for kb in keys:
            cases += 1
            if max(deg_a, key_degree(kb)) >= rep.cutoff:
                continue
            expected = rep.rho_element(_bracket_jet_keys(spec, ka, kb))
            actual = mat_a.commutator(rep.rho(kb))
            if expected != actual:
                return VerifyReport(
                    False, cases, f"[{key_to_string(ka)}, {key_to_string(kb)}]"
                )
    return VerifyReport(True, cases)


# ---------------------------------------------------------------------------
# standard gl_d and gl_N module data
# ---------------------------------------------------------------------------


@dataclass
class GLdGLNModule:
    """Module data for the quotient pair: gl_d matrices on V, graded gl_N data on W."""

    spec: TorusSpec
    V_mats: dict[tuple[int, int], ExactMatrix]
    W_mats: dict[tuple, ExactMatrix]
    W_classes: list[tuple]

    @property
    def dim_V(self) -> int:
        return next(iter(self.V_mats.values())).rows

    @property
    def dim_W(self) -> int:
        return len(self.W_classes)

    def validate(self):
        d = self.spec.d
        fld = self.spec.field
        dV = self.dim_V
        for i in range(1, d + 1):
            for j in range(1, d + 1):
                if (i, j) not in self.V_mats or self.V_mats[(i, j)].rows != dV:
                    raise InvalidModuleData(f"missing or misshapen V generator ({i},{j})")
        for i in range(1, d + 1):
            for j in range(1, d + 1):
                for k in range(1, d + 1):
                    for l in range(1, d + 1):
                        got = self.V_mats[(i, j)].commutator(self.V_mats[(k, l)])
                        want = ExactMatrix.zeros(fld, dV)
                        if j == k:
                            want = want + self.V_mats[(i, l)]
                        if l == i:
                            want = want - self.V_mats[(k, j)]
                        if got != want:
                            raise InvalidModuleData(f"V relations fail at ({i},{j}),({k},{l})")
        reps = class_representatives(self.spec)
        dW = self.dim_W
        for w in reps:
            if w not in self.W_mats or self.W_mats[w].rows != dW:
                raise InvalidModuleData(f"missing or misshapen W generator {w}")
            mat = self.W_mats[w]
            for b in range(dW):
                target = canonical_rep(self.spec, exp_add(self.W_classes[b], w))
                for a in range(dW):
                    if not mat[a, b].is_zero() and self.W_classes[a] != target:
                        raise InvalidModuleData(f"W generator {w} breaks the grading")
        for r in reps:
            for s in reps:
                got = self.W_mats[r].commutator(self.W_mats[s])
                coeff = sigma_skew(self.spec, r, s)
                want = self.W_mats[canonical_rep(self.spec, exp_add(r, s))].scale(coeff)
                if got != want:
                    raise InvalidModuleData(f"W relations fail at {r},{s}")


def natural_gld(spec: TorusSpec) -> dict[tuple[int, int], ExactMatrix]:
    """The natural d-dimensional module: E_ij acts as the matrix unit."""
    d = spec.d
    out = {}
    for i in range(1, d + 1):
        for j in range(1, d + 1):
            m = ExactMatrix.zeros(spec.field, d)
            m[i - 1, j - 1] = spec.field.one
            out[(i, j)] = m
    return out


def trivial_gld(spec: TorusSpec) -> dict[tuple[int, int], ExactMatrix]:
    d = spec.d
    z = ExactMatrix.zeros(spec.field, 1)
    return {(i, j): z for i in range(1, d + 1) for j in range(1, d + 1)}


def graded_regular_glN(spec: TorusSpec) -> tuple[dict[tuple, ExactMatrix], list[tuple]]:
    """Left multiplication of gl_N on itself, graded by class representatives."""
    reps = class_representatives(spec)
    index = {w: i for i, w in enumerate(reps)}
    mats = {}
    for w in reps:
        m = ExactMatrix.zeros(spec.field, len(reps))
        for c in reps:
            target = canonical_rep(spec, exp_add(w, c))
            m[index[target], index[c]] = sigma_hat(spec, w, c)
        mats[w] = m
    return mats, list(reps)


def pullback(spec: TorusSpec, vw: GLdGLNModule) -> GRepresentation:
    """Inflate a gl_d + gl_N module to the jet algebra through its quotient.

    Degree-zero symbols act by E_ij (x) id and id (x) X^w; everything of
    positive filtration degree acts as zero (cutoff 1).
    """
    vw.validate()
    dV = vw.dim_V
    dW = vw.dim_W
    dims: dict[tuple, int] = {}
    for c in vw.W_classes:
        dims[c] = dims.get(c, 0) + dV
    space = GradedSpace(spec, dims)
    # global index of (W index b, V index a): class-major, then W order, then V
    position = {}
    counters = {c: 0 for c in space.classes}
    for b, c in enumerate(vw.W_classes):
        base = space.offset[c] + counters[c]
        counters[c] += dV
        for a in range(dV):
            position[(b, a)] = base + a
    action = {}
    fld = spec.field
    unit = [0] * spec.d
    for i in range(1, spec.d + 1):
        p = list(unit)
        p[i - 1] = 1
        for j in range(1, spec.d + 1):
            vmat = vw.V_mats[(i, j)]
            m = ExactMatrix.zeros(fld, space.dim)
            for b in range(dW):
                for a2 in range(dV):
                    for a in range(dV):
                        if not vmat[a2, a].is_zero():
                            m[position[(b, a2)], position[(b, a)]] = vmat[a2, a]
            action[("XD", tuple(p), j)] = m
    for w in class_representatives(spec):
        wmat = vw.W_mats[w]
        m = ExactMatrix.zeros(fld, space.dim)
        for b in range(dW):
            for b2 in range(dW):
                if not wmat[b2, b].is_zero():
                    for a in range(dV):
                        m[position[(b2, a)], position[(b, a)]] = wmat[b2, b]
        action[("XT", (0,) * spec.d, w)] = m
    return GRepresentation(space, action, cutoff=1)


# ---------------------------------------------------------------------------
# commutant, irreducibility, annihilation degree
# ---------------------------------------------------------------------------


def commutant(rep: GRepresentation) -> list[ExactMatrix]:
    """Basis of grading-preserving matrices commuting with the whole action."""
    sp = rep.space
    fld = sp.field
    blocks = [(c, sp.dims[c]) for c in sp.classes]
    offsets_u = {}
    total = 0
    for c, n in blocks:
        offsets_u[c] = total
        total += n * n
    rows = []
    for key in rep.nonzero_keys():
        mat = rep.action[key]
        w = key_class(sp.spec, key) if key[0] == "XT" else None
        for c, n in blocks:
            tc = sp.shifted_class(c, w) if w is not None else c
            if tc not in sp.dims:
                continue
            g = sp.block(mat, c, tc)
            if g.is_zero():
                continue
            nt = sp.dims[tc]
            for i in range(nt):
                for j in range(n):
                    row = [fld.zero] * total
                    for a in range(n):
                        if not g[i, a].is_zero():
                            row[offsets_u[c] + a * n + j] = row[offsets_u[c] + a * n + j] + g[i, a]
                    for b in range(nt):
                        if not g[b, j].is_zero():
                            idx = offsets_u[tc] + i * nt + b
                            row[idx] = row[idx] - g[b, j]
                    if any(not x.is_zero() for x in row):
                        rows.append(row)
    if rows:
        kern = ExactMatrix(fld, rows).kernel()
    else:
        kern = ExactMatrix.zeros(fld, 1, total).kernel()
    out = []
    for vec in kern:
        m = ExactMatrix.zeros(fld, sp.dim)
        for c, n in blocks:
            base = sp.offset[c]
            ubase = offsets_u[c]
            for a in range(n):
                for b in range(n):
                    m[base + a, base + b] = vec[ubase + a * n + b]
        out.append(m)
    return out


def is_absolutely_irreducible(rep: GRepresentation) -> bool:
    return len(commutant(rep)) == 1


def min_annihilation_degree(rep: GRepresentation) -> int:
    """Least p such that every symbol of filtration degree >= p acts as zero."""
    degs = [key_degree(k) for k in rep.action]
    return max(degs) + 1 if degs else 0


def truncated_polynomial_rep(spec: TorusSpec, order: int = 2) -> GRepresentation:
    """Vector fields acting on polynomials truncated above total degree `order`.

    All torus-side symbols act as zero; positive-degree vector fields act
    non-trivially, which makes this the standard example with annihilation
    degree `order` (> 1, so it is not a quotient-pair pullback).
    """
    d = spec.d
    fld = spec.field
    monos = [m for total in range(order + 1) for m in degree_basis(d, total)]
    index = {m: i for i, m in enumerate(monos)}
    w0 = canonical_rep(spec, (0,) * d)
    space = GradedSpace(spec, {w0: len(monos)})
    action = {}
    for total in range(1, order + 1):
        for p in degree_basis(d, total):
            for j in range(1, d + 1):
                m = ExactMatrix.zeros(fld, len(monos))
                nonzero = False
                for alpha in monos:
                    if alpha[j - 1] == 0:
                        continue
                    target = list(exp_add(alpha, p))
                    target[j - 1] -= 1
                    target = tuple(target)
                    if sum(target) > order:
                        continue
                    m[index[target], index[alpha]] = fld.from_rational(alpha[j - 1])
                    nonzero = True
                if nonzero:
                    action[("XD", p, j)] = m
    return GRepresentation(space, action, cutoff=order)


def scramble_representation(rep: GRepresentation, seed: int) -> GRepresentation:
    """Conjugate by a random exact block change of basis (grading preserved)."""
    rng = random.Random(seed)
    sp = rep.space
    fld = sp.field
    P = ExactMatrix.zeros(fld, sp.dim)
    for c in sp.classes:
        n = sp.dims[c]
        while True:
            block = ExactMatrix(
                fld, [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)]
            )
            if block.rank() == n:
                break
        P.paste(sp.offset[c], sp.offset[c], block)
    Pinv = P.inverse()
    action = {key: Pinv * mat * P for key, mat in rep.action.items()}
    return GRepresentation(sp, action, rep.cutoff)


# ---------------------------------------------------------------------------
# tensor decomposition (constructive splitting into V and W factors)
# ---------------------------------------------------------------------------


def _gld_keys(spec: TorusSpec):
    keys = []
    for i in range(1, spec.d + 1):
        p = [0] * spec.d
        p[i - 1] = 1
        for j in range(1, spec.d + 1):
            keys.append((("XD", tuple(p), j), (i, j)))
    return keys


def spin_up(field, mats: list[ExactMatrix], start) -> list:
    """Closure of a vector under repeated application of the given matrices."""
    space = RowSpace(field, len(start))
    basis = []
    if space.add(start):
        basis.append(list(start))
    frontier = list(basis)
    while frontier:
        new_frontier = []
        for vec in frontier:
            for m in mats:
                img = m.apply(vec)
                if not vec_is_zero(img) and space.add(img):
                    basis.append(img)
                    new_frontier.append(img)
        frontier = new_frontier
    return basis


def _restriction(field, mats: dict, basis: list) -> dict:
    """Matrices of the given action restricted to span(basis), in that basis."""
    B = basis_matrix(field, basis)
    out = {}
    for key, m in mats.items():
        cols = []
        for vec in basis:
            img = m.apply(vec)
            coords = B.solve(img)
            if coords is None:
                raise InvalidRepresentation("subspace is not invariant")
            cols.append(coords)
        out[key] = ExactMatrix(field, [[cols[j][i] for j in range(len(cols))] for i in range(len(basis))])
    return out


def plain_commutant(field, mats: list[ExactMatrix], n: int) -> list[ExactMatrix]:
    """Ungraded commutant of a list of n x n matrices."""
    rows = []
    for g in mats:
        for i in range(n):
            for j in range(n):
                row = [field.zero] * (n * n)
                for a in range(n):
                    if not g[i, a].is_zero():
                        row[a * n + j] = row[a * n + j] + g[i, a]
                for b in range(n):
                    if not g[b, j].is_zero():
                        row[i * n + b] = row[i * n + b] - g[b, j]
                if any(not x.is_zero() for x in row):
                    rows.append(row)
    kern = ExactMatrix(field, rows).kernel() if rows else ExactMatrix.zeros(field, 1, n * n).kernel()
    return [ExactMatrix(field, [vec[i * n : (i + 1) * n] for i in range(n)]) for vec in kern]


def matrix_minimal_polynomial(field, m: ExactMatrix) -> list[CycloNum]:
    """Monic minimal polynomial coefficients, low degree first (monic omitted)."""
    n = m.rows
    powers = [ExactMatrix.identity(field, n)]
    space = RowSpace(field, n * n)
    space.add(powers[0].flatten())
    cur = powers[0]
    while True:
        cur = cur * m
        flat = cur.flatten()
        if space.contains(flat):
            break
        space.add(flat)
        powers.append(cur)
    B = basis_matrix(field, [p.flatten() for p in powers])
    coords = B.solve(cur.flatten())
    return coords  # x^t = sum coords_i x^i, t = len(powers)


def _try_split(field, mats: list[ExactMatrix], n: int, rng) -> list | None:
    """Find a proper invariant subspace via the commutant, or None if simple.

    Raises SplittingNeedsFieldExtension when a non-scalar commutant element is
    found whose minimal polynomial has no proper factorization over Q.
    """
    comm = plain_commutant(field, mats, n)
    if len(comm) <= 1:
        return None
    candidates = [c for c in comm]
    for _ in range(4):
        mix = ExactMatrix.zeros(field, n)
        for c in comm:
            mix = mix + c.scale(rng.randint(-2, 2))
        candidates.append(mix)
    import sympy

    x = sympy.Symbol("x")
    for k in candidates:
        ident = ExactMatrix.identity(field, n)
        if (k - ident.scale(k[0, 0])).is_zero():
            continue  # scalar
        coeffs = matrix_minimal_polynomial(field, k)
        if any(not c.is_rational() for c in coeffs):
            raise SplittingNeedsFieldExtension(
                "minimal polynomial has irrational cyclotomic coefficients"
            )
        poly = x ** len(coeffs) - sum(
            sympy.Rational(c.as_rational()) * x**i for i, c in enumerate(coeffs)
        )
        factors = sympy.factor_list(sympy.Poly(poly, x, domain="QQ"))[1]
        if len(factors) == 1 and factors[0][1] == 1:
            if factors[0][0].degree() == len(coeffs) and len(coeffs) > 1:
                raise SplittingNeedsFieldExtension(
                    f"minimal polynomial {sympy.pretty(poly)} is irreducible over Q"
                )
            continue
        f0 = factors[0][0]
        fk = ExactMatrix.zeros(field, n)
        for exp_i, coeff in enumerate(reversed(f0.all_coeffs())):
            if coeff == 0:
                continue
            term = ExactMatrix.identity(field, n)
            for _ in range(exp_i):
                term = term * k
            fk = fk + term.scale(Fraction(coeff.p, coeff.q))
        kern = fk.kernel()
        if 0 < len(kern) < n:
            return kern
    return None


def _irreducible_gld_submodule(field, gld_mats, basis, rng):
    """Shrink a submodule (given by a basis of columns) to an irreducible one."""
    mats_list = [m for m in gld_mats.values()]
    while True:
        restricted = _restriction(field, gld_mats, basis)
        n = len(basis)
        split = _try_split(field, list(restricted.values()), n, rng)
        if split is None:
            return basis, restricted
        # lift the invariant subspace back to the ambient coordinates
        lifted = []
        for coords in split:
            vec = [field.zero] * len(basis[0])
            for c, bvec in zip(coords, basis):
                if not c.is_zero():
                    for idx, entry in enumerate(bvec):
                        vec[idx] = vec[idx] + c * entry
            lifted.append(vec)
        basis = spin_up(field, mats_list, lifted[0])


def _probe_vectors(rep: GRepresentation, probes: int, rng) -> list:
    """Homogeneous probe vectors: top-power images of nilpotent gl_d generators,
    then plain basis vectors, then seeded random homogeneous vectors."""
    sp = rep.space
    fld = sp.field
    out = []
    for key, _ in _gld_keys(sp.spec):
        i, j = key[1].index(1) + 1, key[2]
        if i == j:
            continue
        mat = rep.rho(key)
        if mat.is_zero():
            continue
        power = mat
        prev = mat
        for _ in range(sp.dim):  # off-diagonal unit images are nilpotent
            if power.is_zero():
                break
            prev = power
            power = power * mat
        for col in range(sp.dim):
            vec = [prev[r, col] for r in range(sp.dim)]
            if not vec_is_zero(vec):
                out.append(vec)
                break
    for idx in range(sp.dim):
        vec = [fld.zero] * sp.dim
        vec[idx] = fld.one
        out.append(vec)
    for _ in range(4):
        c = sp.classes[rng.randrange(len(sp.classes))]
        vec = [fld.zero] * sp.dim
        for local in range(sp.dims[c]):
            vec[sp.offset[c] + local] = fld.from_rational(rng.randint(-2, 2))
        if not vec_is_zero(vec):
            out.append(vec)
    return out[: max(probes, 1)]


def decompose_tensor(
    spec: TorusSpec, rep: GRepresentation, probes: int = 8, seed: int = 1
) -> tuple[GLdGLNModule, ExactMatrix]:
    """Split an absolutely irreducible quotient-pair module into V and W factors.

    Returns the recovered module data and the exact isomorphism matrix Phi
    with rho_original(key) * Phi = Phi * rho_rebuilt(key) for every generator.
    """
    sp = rep.space
    fld = sp.field
    if len(commutant(rep)) != 1:
        raise NotIrreducible("graded commutant has dimension != 1")
    rng = random.Random(seed)
    gld_mats = {pair: rep.rho(key) for key, pair in _gld_keys(spec)}
    mats_list = list(gld_mats.values())
    best = None
    for vec in _probe_vectors(rep, probes, rng):
        basis = spin_up(fld, mats_list, vec)
        if basis and (best is None or len(basis) < len(best)):
            best = basis
        if best is not None and len(best) == 1:
            break
    if best is None:
        raise NotIrreducible("no nonzero probe vector found")
    v_basis, v_mats = _irreducible_gld_submodule(fld, gld_mats, best, rng)
    dV = len(v_basis)
    # intertwiner spaces Hom_{gl_d}(V, U_c), one per class
    w_basis_per_class = {}
    for c in sp.classes:
        n = sp.dims[c]
        rows = []
        for (i, j), vm in v_mats.items():
            big = sp.block(gld_mats[(i, j)], c, c)
            for r in range(n):
                for s in range(dV):
                    row = [fld.zero] * (n * dV)
                    for a in range(n):
                        if not big[r, a].is_zero():
                            row[a * dV + s] = row[a * dV + s] + big[r, a]
                    for b in range(dV):
                        if not vm[b, s].is_zero():
                            row[r * dV + b] = row[r * dV + b] - vm[b, s]
                    if any(not x.is_zero() for x in row):
                        rows.append(row)
        kern = ExactMatrix(fld, rows).kernel() if rows else ExactMatrix.zeros(fld, 1, n * dV).kernel()
        w_basis_per_class[c] = [
            ExactMatrix(fld, [vec[a * dV : (a + 1) * dV] for a in range(n)]) for vec in kern
        ]
    dW = sum(len(v) for v in w_basis_per_class.values())
    if dV * dW != sp.dim:
        raise NotIrreducible(f"multiplicity count {dV}*{dW} != {sp.dim}")
    W_classes = []
    flat_w = []
    for c in sp.classes:
        for f in w_basis_per_class[c]:
            W_classes.append(c)
            flat_w.append((c, f))
    # action of the torus-side generators on the intertwiner spaces
    W_mats = {}
    for w in class_representatives(spec):
        big = rep.rho(("XT", (0,) * spec.d, w))
        m = ExactMatrix.zeros(fld, dW)
        for b, (c, f) in enumerate(flat_w):
            tc = sp.shifted_class(c, w)
            blk = sp.block(big, c, tc)
            img = blk * f  # Hom(V, U_tc)
            targets = w_basis_per_class.get(tc, [])
            if not targets:
                if not img.is_zero():
                    raise NotIrreducible("torus action leaves the intertwiner spaces")
                continue
            T = basis_matrix(fld, [t.flatten() for t in targets])
            coords = T.solve(img.flatten())
            if coords is None:
                raise NotIrreducible("torus action leaves the intertwiner spaces")
            base = W_classes.index(tc)
            for t_local, coeff in enumerate(coords):
                m[base + t_local, b] = coeff
        W_mats[w] = m
    vw = GLdGLNModule(spec, v_mats, W_mats, W_classes)
    vw.validate()
    rebuilt = pullback(spec, vw)
    if rebuilt.space.dim != sp.dim:
        raise NotIrreducible("rebuilt tensor module has wrong dimension")
    # isomorphism: tensor basis element (b, a) maps to f_b(v_a)
    position = {}
    counters = {c: 0 for c in rebuilt.space.classes}
    for b, c in enumerate(W_classes):
        base = rebuilt.space.offset[c] + counters[c]
        counters[c] += dV
        for a in range(dV):
            position[(b, a)] = base + a
    phi = ExactMatrix.zeros(fld, sp.dim)
    for b, (c, f) in enumerate(flat_w):
        for a in range(dV):
            for r in range(sp.dims[c]):
                phi[sp.offset[c] + r, position[(b, a)]] = f[r, a]
    if phi.rank() != sp.dim:
        raise NotIrreducible("tensor comparison map is singular")
    for key in set(rep.nonzero_keys()) | set(rebuilt.nonzero_keys()):
        if rep.rho(key) * phi != phi * rebuilt.rho(key):
            raise NotIrreducible(f"comparison map fails to intertwine {key_to_string(key)}")
    return vw, phi


def probe_submodules_isomorphic(spec: TorusSpec, rep: GRepresentation, count: int, seed: int) -> bool:
    """Spin several probes to irreducible submodules; check pairwise intertwiners."""
    fld = rep.space.field
    rng = random.Random(seed)
    gld_mats = {pair: rep.rho(key) for key, pair in _gld_keys(spec)}
    mats_list = list(gld_mats.values())
    found = []
    for vec in _probe_vectors(rep, count, rng):
        basis = spin_up(fld, mats_list, vec)
        if not basis:
            continue
        basis, restricted = _irreducible_gld_submodule(fld, gld_mats, basis, rng)
        found.append(restricted)
        if len(found) >= count:
            break
    for first in found[1:]:
        base = found[0]
        n1 = next(iter(base.values())).rows
        n2 = next(iter(first.values())).rows
        rows = []
        for pair in base:
            g1, g2 = base[pair], first[pair]
            for i in range(n2):
                for j in range(n1):
                    row = [fld.zero] * (n2 * n1)
                    for a in range(n1):
                        if not g1[a, j].is_zero():
                            row[i * n1 + a] = row[i * n1 + a] + g1[a, j]
                    for b in range(n2):
                        if not g2[i, b].is_zero():
                            row[b * n1 + j] = row[b * n1 + j] - g2[i, b]
                    if any(not x.is_zero() for x in row):
                        rows.append(row)
        if not rows:
            continue
        if not ExactMatrix(fld, rows).kernel():
            return False
    return True


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def rep_to_dict(rep: GRepresentation, alpha=None) -> dict:
    sp = rep.space
    data = {
        "format": "qtlie-representation",
        "torus": json.loads(dump_torus(sp.spec)),
        "cutoff": rep.cutoff,
        "classes": [{"w": list(c), "dim": sp.dims[c]} for c in sp.classes],
        "action": [
            {"key": key_to_string(k), "matrix": rep.action[k].serialize()}
            for k in rep.nonzero_keys()
        ],
    }
    if alpha is not None:
        data["alpha"] = [a.serialize() for a in alpha]
    return data


def rep_from_dict(data: dict):
    if data.get("format") != "qtlie-representation":
        raise ParseError("not a representation file")
    spec = load_torus(data["torus"])
    dims = {tuple(entry["w"]): int(entry["dim"]) for entry in data["classes"]}
    space = GradedSpace(spec, dims)
    action = {}
    for entry in data["action"]:
        key = key_from_string(entry["key"])
        mat = ExactMatrix(
            spec.field,
            [[parse_cyclonum(s, spec.field) for s in row] for row in entry["matrix"]],
        )
        action[key] = mat
    rep = GRepresentation(space, action, int(data["cutoff"]))
    alpha = None
    if "alpha" in data:
        alpha = tuple(parse_cyclonum(s, spec.field) for s in data["alpha"])
    return spec, rep, alpha
