# The jet algebra: polynomial vector fields x^p d_j semidirect symbols
# x^l tb^s mixing a polynomial part with a torus class.  The torus index is
# kept raw; reducing it to a class representative inside the algebra breaks
# the Jacobi identity (modules do the reduction instead, see demo 06).

from qtlie import (
    bracket_jets,
    commutator_span_dims,
    filtration_degree,
    gamma_class,
    in_plus_ideal,
    make_torus,
    project_quotient,
    xd,
    xt,
)

spec = make_torus(2, 1, [2])

print("[x1 d2, x2 d1] =", bracket_jets(spec, xd(spec, (1, 0), 2), xd(spec, (0, 1), 1)))
print("[x1 d1, tb^(1,2)] =", bracket_jets(spec, xd(spec, (1, 0), 1), xt(spec, (0, 0), (1, 2))))
print("[tb^(1,2), tb^(2,1)] =", bracket_jets(spec, xt(spec, (0, 0), (1, 2)), xt(spec, (0, 0), (2, 1))))

# the triple that forces raw indices: with reduced indices this is nonzero
a, b, c = xd(spec, (1, 0), 1), xt(spec, (0, 0), (1, 2)), xt(spec, (0, 0), (2, 1))
jac = (bracket_jets(spec, bracket_jets(spec, a, b), c)
       + bracket_jets(spec, bracket_jets(spec, b, c), a)
       + bracket_jets(spec, bracket_jets(spec, c, a), b))
print("jacobiator of the critical triple:", jac)

# grading by torus class, filtration by polynomial degree
print("class of x^(2,0) tb^(1,2):", gamma_class(spec, xt(spec, (2, 0), (1, 2))))
print("degree of x1 d2:", filtration_degree(xd(spec, (1, 0), 2)))
print("degree of x^(1,1) d1:", filtration_degree(xd(spec, (1, 1), 1)),
      "-> in the positive ideal:", in_plus_ideal(xd(spec, (1, 1), 1)))

# killing that ideal lands exactly on gl_d + gl_N
g, n = project_quotient(spec, xd(spec, (1, 0), 2))
print("x1 d2 maps to the matrix unit E_12:")
print(g)
g, n = project_quotient(spec, xt(spec, (0, 0), (1, 1)))
print("tb^(1,1) maps to the class matrix X^(1,1):")
print(n)

# commutators of the vector-field part: traceless in degree 0, everything above
print("commutator span per degree (d=2):", commutator_span_dims(spec, 3))
