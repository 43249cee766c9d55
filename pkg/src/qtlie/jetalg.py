"""The auxiliary graded Lie algebra behind bounded weight modules.

Basis symbols:
  ("XD", p, j) -- x^p d_j with p in N^d, |p| >= 1, 1 <= j <= d;
  ("XT", l, s) -- x^l t-bar^s with l in N^d and s in Z^d.

The XT second index is kept raw (not reduced modulo the central sublattice R):
with reduced indices no choice of the scalar in the mixed bracket satisfies
the Jacobi identity.  With raw indices the algebra is the semidirect product
of polynomial vector fields acting on (polynomials tensor the twisted group
algebra), so Jacobi holds identically; representations reduce raw symbols to
class representatives through a cutoff-finite tail (see qtlie.repn).

Brackets of basis symbols:
  [x^m d_a, x^n d_b]   = n_a x^{m+n-e_a} d_b - m_b x^{m+n-e_b} d_a
  [x^m d_a, x^l tb^s]  = l_a x^{m+l-e_a} tb^s + s_a x^{m+l} tb^s
  [x^p tb^r, x^l tb^s] = (sig(r,s) - sig(s,r)) x^{p+l} tb^{r+s}
"""
from __future__ import annotations

import hashlib
import itertools
import json
import os

from .cyclo import CycloNum, parse_cyclonum, parse_scalar
from .derivations import _Combo, _parse_atom, _split_terms
from .errors import MalformedBasisKey, ParseError
from .matrices import ExactMatrix
from .torus import (
    TorusSpec,
    canonical_rep,
    class_representatives,
    exp_add,
    in_R,
    sigma_skew,
)
from .xmatrix import x_power


class JetElement(_Combo):
    """Element of the jet algebra over a fixed torus."""

    def _fmt(self, key):
        if key[0] == "XD":
            return f"XD({','.join(map(str, key[1]))};{key[2]})"
        return f"XT({','.join(map(str, key[1]))};{','.join(map(str, key[2]))})"


def xd(spec: TorusSpec, p, j: int, coeff=1) -> JetElement:
    p = tuple(p)
    if len(p) != spec.d or any(c < 0 for c in p) or sum(p) < 1:
        raise MalformedBasisKey(f"bad vector-field exponent {p}")
    if not 1 <= j <= spec.d:
        raise MalformedBasisKey(f"direction index {j} out of range")
    c = coeff if isinstance(coeff, CycloNum) else spec.field.from_rational(coeff)
    return JetElement(spec.field, {("XD", p, j): c})


def xt(spec: TorusSpec, l, s, coeff=1) -> JetElement:
    l = tuple(l)
    s = tuple(s)
    if len(l) != spec.d or any(c < 0 for c in l):
        raise MalformedBasisKey(f"bad polynomial exponent {l}")
    if len(s) != spec.d:
        raise MalformedBasisKey(f"bad torus exponent {s}")
    c = coeff if isinstance(coeff, CycloNum) else spec.field.from_rational(coeff)
    return JetElement(spec.field, {("XT", l, s): c})


def xd_along(spec: TorusSpec, p, u) -> JetElement:
    """x^p d_u for a coefficient vector u."""
    out = JetElement(spec.field)
    for j, uj in enumerate(u, start=1):
        c = uj if isinstance(uj, CycloNum) else spec.field.from_rational(uj)
        if not c.is_zero():
            out = out + xd(spec, p, j, c)
    return out


def _minus_unit(vec, a):
    out = list(vec)
    out[a] -= 1
    return tuple(out)


def _bracket_jet_keys(spec: TorusSpec, ka, kb) -> JetElement:
    fld = spec.field
    if ka[0] == "XD" and kb[0] == "XD":
        _, m, a = ka
        _, n, b = kb
        out = JetElement(fld)
        if n[a - 1]:
            out = out + xd(spec, _minus_unit(exp_add(m, n), a - 1), b, n[a - 1])
        if m[b - 1]:
            out = out - xd(spec, _minus_unit(exp_add(m, n), b - 1), a, m[b - 1])
        return out
    if ka[0] == "XD" and kb[0] == "XT":
        _, m, a = ka
        _, l, s = kb
        out = JetElement(fld)
        ml = exp_add(m, l)
        if l[a - 1]:
            out = out + xt(spec, _minus_unit(ml, a - 1), s, l[a - 1])
        if s[a - 1]:
            out = out + xt(spec, ml, s, s[a - 1])
        return out
    if ka[0] == "XT" and kb[0] == "XD":
        return -_bracket_jet_keys(spec, kb, ka)
    _, p, r = ka
    _, l, s = kb
    coeff = sigma_skew(spec, r, s)
    if in_R(spec, exp_add(r, s)):
        assert coeff.is_zero(), (r, s)
        return JetElement(fld)
    if coeff.is_zero():
        return JetElement(fld)
    return xt(spec, exp_add(p, l), exp_add(r, s), coeff)


def bracket_jets(spec: TorusSpec, a: JetElement, b: JetElement) -> JetElement:
    out = JetElement(spec.field)
    for ka, ca in a.terms.items():
        for kb, cb in b.terms.items():
            out = out + _bracket_jet_keys(spec, ka, kb).scale(ca * cb)
    return out


def key_class(spec: TorusSpec, key) -> tuple:
    """Grading class (canonical representative) of a basis symbol."""
    if key[0] == "XD":
        return canonical_rep(spec, (0,) * spec.d)
    return canonical_rep(spec, key[2])


def gamma_class(spec: TorusSpec, a: JetElement):
    """Common grading class of all terms, None for zero, "mixed" otherwise."""
    classes = {key_class(spec, key) for key in a.terms}
    if not classes:
        return None
    if len(classes) > 1:
        return "mixed"
    return classes.pop()


def key_degree(key) -> int:
    """Filtration degree: |p| - 1 for vector-field symbols, |l| for the rest."""
    if key[0] == "XD":
        return sum(key[1]) - 1
    return sum(key[1])


def filtration_degree(a: JetElement):
    if not a.terms:
        return None
    return min(key_degree(key) for key in a.terms)


def in_plus_ideal(a: JetElement) -> bool:
    """Membership in the ideal of symbols of filtration degree >= 1."""
    deg = filtration_degree(a)
    return deg is None or deg >= 1


def project_quotient(spec: TorusSpec, a: JetElement) -> tuple[ExactMatrix, ExactMatrix]:
    """Image in gl_d + gl_N: x_i d_j -> E_ij, tb^s -> X^s, higher degrees -> 0."""
    fld = spec.field
    gld = ExactMatrix.zeros(fld, spec.d)
    gln = ExactMatrix.zeros(fld, spec.N)
    for key, coeff in a.terms.items():
        if key_degree(key) >= 1:
            continue
        if key[0] == "XD":
            i = key[1].index(1)
            j = key[2] - 1
            gld[i, j] = gld[i, j] + coeff
        else:
            gln = gln + x_power(spec, key[2]).scale(coeff)
    return gld, gln


def degree_basis(d: int, total: int) -> list[tuple[int, ...]]:
    """All exponent vectors in N^d of total degree `total`, lexicographic."""
    out = []
    for comb in itertools.combinations_with_replacement(range(d), total):
        vec = [0] * d
        for c in comb:
            vec[c] += 1
        out.append(tuple(vec))
    return sorted(out)


def commutator_span_dims(spec: TorusSpec, max_degree: int) -> dict[int, tuple[int, int]]:
    """Per filtration degree: (dim of the commutator span, dim of the whole layer).

    The vector-field part is graded, so the commutator decomposes by degree;
    degree 0 spans the traceless d x d matrices and degrees >= 1 fill their
    whole layer.
    """
    d = spec.d
    fld = spec.field
    out = {}
    for deg in range(max_degree + 1):
        layer = [("XD", p, j) for p in degree_basis(d, deg + 1) for j in range(1, d + 1)]
        index = {key: i for i, key in enumerate(layer)}
        rows = []
        for da in range(deg + 1):
            db = deg - da
            keys_a = [("XD", p, j) for p in degree_basis(d, da + 1) for j in range(1, d + 1)]
            keys_b = [("XD", p, j) for p in degree_basis(d, db + 1) for j in range(1, d + 1)]
            for ka in keys_a:
                for kb in keys_b:
                    res = _bracket_jet_keys(spec, ka, kb)
                    if res.is_zero():
                        continue
                    row = [fld.zero] * len(layer)
                    for key, coeff in res.terms.items():
                        row[index[key]] = coeff
                    rows.append(row)
        span = ExactMatrix(fld, rows).rank() if rows else 0
        out[deg] = (span, len(layer))
    return out


def canonical_keys(spec: TorusSpec, max_degree: int) -> list[tuple]:
    """All basis symbols of filtration degree <= max_degree with class-rep XT index."""
    keys = []
    for total in range(1, max_degree + 2):
        for p in degree_basis(spec.d, total):
            for j in range(1, spec.d + 1):
                keys.append(("XD", p, j))
    reps = class_representatives(spec)
    for total in range(0, max_degree + 1):
        for l in degree_basis(spec.d, total):
            for w in reps:
                keys.append(("XT", l, w))
    return keys


def key_to_string(key) -> str:
    if key[0] == "XD":
        return f"XD({','.join(map(str, key[1]))};{key[2]})"
    return f"XT({','.join(map(str, key[1]))};{','.join(map(str, key[2]))})"


def key_from_string(text: str):
    tag, first, second = _parse_atom(text)
    if tag == "XD":
        return ("XD", second, first)
    if tag == "XT":
        return ("XT", first, second)
    raise ParseError(f"{text!r} is not a jet-algebra symbol")


def parse_jet_element(spec: TorusSpec, text: str) -> JetElement:
    out = JetElement(spec.field)
    for sign, term in _split_terms(text):
        scalar = spec.field.from_rational(sign)
        atom = term
        if "*" in term:
            pre, _, atom = term.rpartition("*")
            scalar = scalar * parse_scalar(pre.strip().strip("()"), spec.field)
        tag, first, second = _parse_atom(atom)
        if tag == "XD":
            out = out + xd(spec, second, first, scalar)
        elif tag == "XT":
            out = out + xt(spec, first, second, scalar)
        else:
            raise ParseError(f"symbol {tag} is not a jet-algebra symbol")
    return out


def element_to_payload(a: JetElement) -> list:
    return sorted([key_to_string(k), c.serialize()] for k, c in a.terms.items())


def element_from_payload(spec: TorusSpec, payload) -> JetElement:
    out = JetElement(spec.field)
    for key_s, coeff_s in payload:
        key = key_from_string(key_s)
        coeff = parse_cyclonum(coeff_s, spec.field)
        out = out + JetElement(spec.field, {key: coeff})
    return out


def structure_constant_table(spec: TorusSpec, max_degree: int) -> dict[str, list]:
    """Brackets of all canonical basis-symbol pairs up to a filtration degree."""
    keys = canonical_keys(spec, max_degree)
    table = {}
    for ka in keys:
        for kb in keys:
            res = _bracket_jet_keys(spec, ka, kb)
            table[f"{key_to_string(ka)}|{key_to_string(kb)}"] = element_to_payload(res)
    return table


def _cache_path(spec: TorusSpec, max_degree: int, directory: str) -> str:
    tag = f"d{spec.d}z{spec.z}k{'-'.join(map(str, spec.k))}L{spec.L}deg{max_degree}"
    return os.path.join(directory, f"jetconsts-{tag}.json")


def cache_structure_constants(spec: TorusSpec, max_degree: int, directory: str) -> tuple[str, bool]:
    """Write (or reuse) the persisted structure-constant table.

    Returns (path, was_cache_hit).  A corrupted file fails its checksum and is
    recomputed in place.
    """
    os.makedirs(directory, exist_ok=True)
    path = _cache_path(spec, max_degree, directory)
    if os.path.exists(path):
        try:
            with open(path, "r", encoding="utf-8") as fh:
                blob = json.load(fh)
            body = json.dumps(blob["table"], sort_keys=True, separators=(",", ":"))
            if hashlib.sha256(body.encode()).hexdigest() == blob.get("checksum"):
                return path, True
        except (OSError, json.JSONDecodeError, KeyError):
            pass
    table = structure_constant_table(spec, max_degree)
    body = json.dumps(table, sort_keys=True, separators=(",", ":"))
    blob = {
        "format": "qtlie-structure-constants",
        "torus": {"d": spec.d, "z": spec.z, "k": list(spec.k), "L": spec.L},
        "max_degree": max_degree,
        "checksum": hashlib.sha256(body.encode()).hexdigest(),
        "table": table,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(blob, fh, sort_keys=True, separators=(",", ":"))
    return path, False


def load_structure_constants(spec: TorusSpec, max_degree: int, directory: str) -> dict:
    path, _ = cache_structure_constants(spec, max_degree, directory)
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)["table"]
