"""Named verification suites: executable checks of every structural identity.

Each suite returns a VerificationReport whose serialized form is free of wall
time, so identical configurations and seeds produce byte-identical report
files; timing is carried separately for the human summary.
"""
from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field as dc_field

from .cuspidal import (
    OperatorFamily,
    build_module,
    extract_coefficients,
    coefficients_to_representation,
    modules_equal_on_box,
    tensor_field_module,
    verify_module_axioms,
    weight_multiplicities,
)
from .derivations import (
    DElement,
    bracket_d,
    bracket_witt,
    deriv,
    deriv_along,
    derivations_to_witt,
    inner,
    witt,
)
from .jetalg import (
    bracket_jets,
    canonical_keys,
    commutator_span_dims,
    key_degree,
    key_to_string,
    project_quotient,
    xd,
    xt,
)
from .matrices import ExactMatrix
from .repn import (
    GLdGLNModule,
    commutant,
    decompose_tensor,
    graded_regular_glN,
    min_annihilation_degree,
    natural_gld,
    pullback,
    scramble_representation,
)
from .torus import TorusSpec, class_representatives, in_R
from .xmatrix import span_dimension, verify_identity_on_R, verify_product_relation


@dataclass
class VerificationReport:
    suite: str
    cases: int
    failures: list = dc_field(default_factory=list)
    wall_time: float = 0.0  # excluded from serialization on purpose

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "cases": self.cases,
            "failures": self.failures,
            "passed": self.passed,
        }

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = "" if self.passed else f"; first failure: {self.failures[0]}"
        return f"{self.suite}: {status} ({self.cases} cases{extra}) [{self.wall_time:.2f}s]"


def _timed(fn):
    def wrapper(*args, **kwargs) -> VerificationReport:
        start = time.perf_counter()
        report = fn(*args, **kwargs)
        report.wall_time = time.perf_counter() - start
        return report

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


@_timed
def suite_xmatrix(spec: TorusSpec, box: int | None = None, flip: bool = False) -> VerificationReport:
    """Product relation of the matrix realization, over [0, 2 k_1]^d by default."""
    box = 2 * (spec.k[0] if spec.z else 1) if box is None else box
    rel = verify_product_relation(spec, box, flip=flip)
    failures = [] if rel.passed else [{"pair": [list(rel.counterexample[0]), list(rel.counterexample[1])]}]
    return VerificationReport("xmatrix-flip" if flip else "xmatrix", rel.cases, failures)


@_timed
def suite_xmatrix_identity(spec: TorusSpec, box: int | None = None) -> VerificationReport:
    """X^n is the identity on the central lattice, and the classes span M_N."""
    box = 2 * (spec.k[0] if spec.z else 1) if box is None else box
    rel = verify_identity_on_R(spec, box)
    failures = [] if rel.passed else [{"exponent": list(rel.counterexample[0])}]
    cases = rel.cases + 1
    dim = span_dimension(spec)
    if dim != spec.N**2:
        failures.append({"span_dimension": dim, "expected": spec.N**2})
    return VerificationReport("xmatrix-identity", cases, failures)


def _random_d_basis(spec: TorusSpec, rng: random.Random, box: int) -> DElement:
    B = spec.B
    if rng.random() < 0.5:
        m = tuple(rng.randint(-max(box // b, 1), max(box // b, 1)) * b for b in B)
        return deriv(spec, rng.randint(1, spec.d), m)
    while True:
        s = tuple(rng.randint(-box, box) for _ in range(spec.d))
        if not in_R(spec, s):
            return inner(spec, s)


@_timed
def suite_jacobi_derivations(spec: TorusSpec, triples: int = 200, seed: int = 11,
                             box: int = 4) -> VerificationReport:
    """Jacobi identity for the derivation-algebra bracket on random basis triples."""
    rng = random.Random(seed)
    failures = []
    for idx in range(triples):
        a = _random_d_basis(spec, rng, box)
        b = _random_d_basis(spec, rng, box)
        c = _random_d_basis(spec, rng, box)
        total = (
            bracket_d(spec, bracket_d(spec, a, b), c)
            + bracket_d(spec, bracket_d(spec, b, c), a)
            + bracket_d(spec, bracket_d(spec, c, a), b)
        )
        if not total.is_zero():
            failures.append({"triple": [str(a), str(b), str(c)], "index": idx})
            break
    return VerificationReport("jacobi-derivations", triples, failures)


@_timed
def suite_jacobi_witt(spec: TorusSpec, triples: int = 200, seed: int = 13,
                      box: int = 4) -> VerificationReport:
    """Jacobi identity for the Witt-algebra bracket on random basis triples."""
    rng = random.Random(seed)
    fld = spec.field
    failures = []

    def rand_basis():
        return witt(fld, rng.randint(1, spec.d),
                    tuple(rng.randint(-box, box) for _ in range(spec.d)))

    for idx in range(triples):
        a, b, c = rand_basis(), rand_basis(), rand_basis()
        total = (
            bracket_witt(bracket_witt(a, b), c)
            + bracket_witt(bracket_witt(b, c), a)
            + bracket_witt(bracket_witt(c, a), b)
        )
        if not total.is_zero():
            failures.append({"triple": [str(a), str(b), str(c)], "index": idx})
            break
    return VerificationReport("jacobi-witt", triples, failures)


@_timed
def suite_jacobi_jets(spec: TorusSpec, max_total: int = 3, sample: int | None = None,
                      seed: int = 17) -> VerificationReport:
    """Jacobi identity for the jet-algebra bracket.

    Exhaustive over unordered triples of canonical basis symbols with
    polynomial exponents of total degree <= max_total when `sample` is None;
    otherwise a seeded random sample of that many triples (with random
    representative shifts exercising raw torus indices).
    """
    keys = [k for k in canonical_keys(spec, max_total) if
            (k[0] == "XD" and sum(k[1]) <= max_total) or (k[0] == "XT" and sum(k[1]) <= max_total)]

    def elem(key):
        if key[0] == "XD":
            return xd(spec, key[1], key[2])
        return xt(spec, key[1], key[2])

    failures = []
    cases = 0
    if sample is None:
        elems = [elem(k) for k in keys]
        n = len(elems)
        for i in range(n):
            for j in range(i + 1, n):
                ab = bracket_jets(spec, elems[i], elems[j])
                for k in range(j + 1, n):
                    cases += 1
                    total = (
                        bracket_jets(spec, ab, elems[k])
                        + bracket_jets(spec, bracket_jets(spec, elems[j], elems[k]), elems[i])
                        + bracket_jets(spec, bracket_jets(spec, elems[k], elems[i]), elems[j])
                    )
                    if not total.is_zero():
                        failures.append({
                            "triple": [key_to_string(keys[i]), key_to_string(keys[j]),
                                       key_to_string(keys[k])]})
                        return VerificationReport("jacobi-jets", cases, failures)
    else:
        rng = random.Random(seed)
        B = spec.B

        def rand_elem():
            key = keys[rng.randrange(len(keys))]
            if key[0] == "XT" and rng.random() < 0.5:
                shift = tuple(rng.randint(-1, 1) * b for b in B)
                return xt(spec, key[1], tuple(a + b for a, b in zip(key[2], shift)))
            return elem(key)

        for _ in range(sample):
            cases += 1
            a, b, c = rand_elem(), rand_elem(), rand_elem()
            total = (
                bracket_jets(spec, bracket_jets(spec, a, b), c)
                + bracket_jets(spec, bracket_jets(spec, b, c), a)
                + bracket_jets(spec, bracket_jets(spec, c, a), b)
            )
            if not total.is_zero():
                failures.append({"triple": [str(a), str(b), str(c)]})
                break
    return VerificationReport("jacobi-jets", cases, failures)


@_timed
def suite_witt_embedding(spec: TorusSpec, pairs: int = 100, seed: int = 19,
                         box: int = 3) -> VerificationReport:
    """The rescaling map into the Witt algebra is a Lie homomorphism."""
    rng = random.Random(seed)
    failures = []
    B = spec.B
    for idx in range(pairs):
        def rand_deriv():
            m = tuple(rng.randint(-box, box) * b for b in B)
            u = tuple(rng.randint(-2, 2) for _ in range(spec.d))
            elt = deriv_along(spec, u, m)
            return elt if not elt.is_zero() else deriv(spec, 1, m)

        a, b = rand_deriv(), rand_deriv()
        lhs = derivations_to_witt(spec, bracket_d(spec, a, b))
        rhs = bracket_witt(derivations_to_witt(spec, a), derivations_to_witt(spec, b))
        if lhs != rhs:
            failures.append({"pair": [str(a), str(b)], "index": idx})
            break
    return VerificationReport("witt-embedding", pairs, failures)


@_timed
def suite_quotient(spec: TorusSpec) -> VerificationReport:
    """Quotient map onto gl_d + gl_N: bracket preservation and kernel checks."""
    failures = []
    cases = 0
    degree_zero = []
    for i in range(1, spec.d + 1):
        p = [0] * spec.d
        p[i - 1] = 1
        for j in range(1, spec.d + 1):
            degree_zero.append(xd(spec, p, j))
    zero_l = (0,) * spec.d
    for w in class_representatives(spec):
        degree_zero.append(xt(spec, zero_l, w))
    for a in degree_zero:
        ga, na = project_quotient(spec, a)
        for b in degree_zero:
            cases += 1
            gb, nb = project_quotient(spec, b)
            gc, nc = project_quotient(spec, bracket_jets(spec, a, b))
            if ga.commutator(gb) != gc or na.commutator(nb) != nc:
                failures.append({"pair": [str(a), str(b)]})
                return VerificationReport("quotient", cases, failures)
    # surjectivity onto both summands
    rows = []
    for a in degree_zero:
        ga, na = project_quotient(spec, a)
        rows.append(ga.flatten() + na.flatten())
    cases += 1
    if ExactMatrix(spec.field, rows).rank() != spec.d**2 + spec.N**2:
        failures.append({"surjectivity": "image does not span gl_d + gl_N"})
    # positive filtration degree lands in the kernel
    for key in canonical_keys(spec, 2):
        if key_degree(key) < 1:
            continue
        cases += 1
        elt = xd(spec, key[1], key[2]) if key[0] == "XD" else xt(spec, key[1], key[2])
        g, n = project_quotient(spec, elt)
        if not (g.is_zero() and n.is_zero()):
            failures.append({"kernel": key_to_string(key)})
            break
    return VerificationReport("quotient", cases, failures)


@_timed
def suite_span_filtration(spec: TorusSpec, max_degree: int = 3) -> VerificationReport:
    """Commutator span of the vector-field part: traceless at degree 0, full above."""
    dims = commutator_span_dims(spec, max_degree)
    failures = []
    d = spec.d
    for deg, (span, full) in dims.items():
        expected = d * d - 1 if deg == 0 else full
        if span != expected:
            failures.append({"degree": deg, "span": span, "expected": expected})
    return VerificationReport("span-filtration", len(dims), failures)


def _standard_pullback(spec: TorusSpec):
    wmats, wclasses = graded_regular_glN(spec)
    vw = GLdGLNModule(spec, natural_gld(spec), wmats, wclasses)
    return vw, pullback(spec, vw)


@_timed
def suite_annihilation(spec: TorusSpec) -> VerificationReport:
    """Quotient-pair pullbacks are killed by every positive-degree symbol."""
    failures = []
    vw, rep = _standard_pullback(spec)
    cases = 1
    deg = min_annihilation_degree(rep)
    if deg != 1:
        failures.append({"annihilation_degree": deg, "expected": 1})
    for key in canonical_keys(spec, 3):
        if key_degree(key) < 1:
            continue
        cases += 1
        if not rep.rho(key).is_zero():
            failures.append({"nonzero": key_to_string(key)})
            break
    cases += 1
    if len(commutant(rep)) != 1:
        failures.append({"commutant": len(commutant(rep))})
    return VerificationReport("annihilation", cases, failures)


@_timed
def suite_functor(spec: TorusSpec, alpha=None, box: int = 3, pairs: int = 100,
                  seed: int = 23) -> VerificationReport:
    """The weight module built from a pullback satisfies the bracket axioms."""
    alpha = alpha if alpha is not None else (0,) * spec.d
    _, rep = _standard_pullback(spec)
    module = build_module(spec, alpha, rep, box=box)
    report = verify_module_axioms(module, symbol_box=box, sample_count=pairs, seed=seed)
    failures = [] if report.passed else [{"failure": report.first_failure}]
    return VerificationReport("functor-axioms", report.cases, failures)


@_timed
def suite_tensor_compare(spec: TorusSpec, alpha=None, box: int = 3) -> VerificationReport:
    """Functor image of a pullback equals the closed-form tensor-field module."""
    alpha = alpha if alpha is not None else (0,) * spec.d
    vw, rep = _standard_pullback(spec)
    built = build_module(spec, alpha, rep, box=box)
    direct = tensor_field_module(spec, alpha, vw, box=box)
    equal = modules_equal_on_box(built, direct, box)
    failures = [] if equal else [{"mismatch": "entrywise comparison failed"}]
    return VerificationReport("tensor-compare", 1, failures)


@_timed
def suite_roundtrip(spec: TorusSpec, alpha=None, degree_bound: int = 3) -> VerificationReport:
    """Extraction then reassembly reproduces the representation exactly."""
    alpha = alpha if alpha is not None else (0,) * spec.d
    _, rep = _standard_pullback(spec)
    module = build_module(spec, alpha, rep, box=degree_bound + 1)
    family = OperatorFamily(module, degree_bound=degree_bound)
    coeffs = extract_coefficients(family, spec, alpha)
    back = coefficients_to_representation(spec, coeffs)
    failures = []
    if back != rep:
        failures.append({"mismatch": "reassembled representation differs"})
    return VerificationReport("roundtrip", 1, failures)


@_timed
def suite_decompose(spec: TorusSpec, seed: int = 5) -> VerificationReport:
    """Recover tensor factors from a scrambled pullback, with an exact isomorphism."""
    vw, rep = _standard_pullback(spec)
    scrambled = scramble_representation(rep, seed=seed)
    failures = []
    cases = 3
    if len(commutant(scrambled)) != 1:
        failures.append({"commutant": "scrambled module is not absolutely irreducible"})
    recovered, _phi = decompose_tensor(spec, scrambled, probes=8, seed=seed)
    if recovered.dim_V != vw.dim_V or recovered.dim_W != vw.dim_W:
        failures.append({"dims": [recovered.dim_V, recovered.dim_W],
                         "expected": [vw.dim_V, vw.dim_W]})
    return VerificationReport("decompose", cases, failures)


@_timed
def suite_cuspidality(spec: TorusSpec, alpha=None, box: int = 4) -> VerificationReport:
    """Weight multiplicities are uniform and equal dim V times the W class bound."""
    alpha = alpha if alpha is not None else (0,) * spec.d
    vw, rep = _standard_pullback(spec)
    module = build_module(spec, alpha, rep, box=box)
    mults, bound = weight_multiplicities(module, box)
    class_dims = {}
    for c in vw.W_classes:
        class_dims[c] = class_dims.get(c, 0) + 1
    expected = vw.dim_V * max(class_dims.values())
    failures = []
    if bound != expected or any(v != expected for v in mults.values()):
        failures.append({"bound": bound, "expected": expected,
                         "distinct": sorted(set(mults.values()))})
    return VerificationReport("cuspidality", len(mults), failures)


SUITES = {
    "xmatrix": lambda spec, cfg: suite_xmatrix(spec, cfg.get("box"), cfg.get("flip", False)),
    "xmatrix-identity": lambda spec, cfg: suite_xmatrix_identity(spec, cfg.get("box")),
    "jacobi-d": lambda spec, cfg: suite_jacobi_derivations(
        spec, cfg.get("samples", 200), cfg.get("seed", 11), cfg.get("box", 4)),
    "jacobi-wd": lambda spec, cfg: suite_jacobi_witt(
        spec, cfg.get("samples", 200), cfg.get("seed", 13), cfg.get("box", 4)),
    "jacobi-gtilde": lambda spec, cfg: suite_jacobi_jets(
        spec, cfg.get("degree", 3), cfg.get("samples"), cfg.get("seed", 17)),
    "dr-wd": lambda spec, cfg: suite_witt_embedding(
        spec, cfg.get("samples", 100), cfg.get("seed", 19), cfg.get("box", 3)),
    "quotient": lambda spec, cfg: suite_quotient(spec),
    "span-filtration": lambda spec, cfg: suite_span_filtration(spec, cfg.get("degree", 3)),
    "annihilation": lambda spec, cfg: suite_annihilation(spec),
    "functor": lambda spec, cfg: suite_functor(
        spec, None, cfg.get("box", 3), cfg.get("samples", 100), cfg.get("seed", 23)),
    "tensor-compare": lambda spec, cfg: suite_tensor_compare(spec, None, cfg.get("box", 3)),
    "roundtrip": lambda spec, cfg: suite_roundtrip(spec, None, cfg.get("degree", 3)),
    "decompose": lambda spec, cfg: suite_decompose(spec, cfg.get("seed", 5)),
    "cuspidality": lambda spec, cfg: suite_cuspidality(spec, None, cfg.get("box", 4)),
}


def run_suites(spec: TorusSpec, names: list[str], config: dict | None = None) -> list[VerificationReport]:
    config = config or {}
    if names == ["all"]:
        names = list(SUITES)
    reports = []
    for name in names:
        if name not in SUITES:
            raise KeyError(f"unknown suite {name!r}")
        reports.append(SUITES[name](spec, config))
    return reports


def reports_to_json(reports: list[VerificationReport], spec: TorusSpec, seed: int | None) -> str:
    payload = {
        "torus": {"d": spec.d, "z": spec.z, "k": list(spec.k), "L": spec.L},
        "seed": seed,
        "reports": [r.to_dict() for r in reports],
        "passed": all(r.passed for r in reports),
    }
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"
