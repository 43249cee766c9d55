# The rational quantum torus in normal form: d Laurent generators, z
# noncommuting pairs with orders k_1 | ... reversed, everything else central.
# Monomials reorder against an explicit root-of-unity factor.

from qtlie import (
    canonical_rep,
    class_representatives,
    decompose,
    in_R,
    make_torus,
    monomial,
    multiply_monomials,
    sigma_hat,
)

spec = make_torus(d=2, z=1, k=[3])
print("torus: d=2, one pair of order 3; N =", spec.N)

# the reordering factor: t^m t^n = sigma(m, n) t^{m+n}
print("sigma((0,1),(1,0)) =", sigma_hat(spec, (0, 1), (1, 0)))   # a cube root
print("sigma((1,0),(0,1)) =", sigma_hat(spec, (1, 0), (0, 1)))   # trivial

# the central sublattice R: both paired exponents divisible by 3
print("(3,3) central?", in_R(spec, (3, 3)))
print("(1,0) central?", in_R(spec, (1, 0)))

# class representatives use the half-open window (0, k]: residue 0 maps to k
print("representative of (0,0): ", canonical_rep(spec, (0, 0)))
print("representative of (4,-1):", canonical_rep(spec, (4, -1)))
print("decompose (4,-1) = central + representative:", decompose(spec, (4, -1)))
print("number of classes:", len(class_representatives(spec)), "= N^2")

# monomial arithmetic carries the factor around automatically
a = monomial(spec, (0, 1))
b = monomial(spec, (1, 0))
print("t^(0,1) * t^(1,0) =", multiply_monomials(spec, a, b).coeff, "* t^(1,1)")
print("t^(1,0) * t^(0,1) =", multiply_monomials(spec, b, a).coeff, "* t^(1,1)")
