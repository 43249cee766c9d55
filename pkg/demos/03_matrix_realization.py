# Classes of the quantum torus act on C^N through clock and shift matrices.
# Multiplying the actual matrices is the oracle that fixes the argument order
# of the reordering factor: the flipped order fails immediately.

from qtlie import make_torus, glN_bracket, span_dimension, verify_product_relation, x_power

spec = make_torus(2, 1, [2])

print("X^(1,0) (clock):")
print(x_power(spec, (1, 0)))
print("X^(0,1) (shift):")
print(x_power(spec, (0, 1)))
print("X^(1,1):")
print(x_power(spec, (1, 1)))
print("X^(2,2) is the identity:")
print(x_power(spec, (2, 2)))

print("relation X^m X^n = sigma(m,n) X^{m+n}:", verify_product_relation(spec, box=4))
print("with swapped arguments:", verify_product_relation(spec, box=4, flip=True))

# the N^2 class matrices span all of M_N
print("span dimension:", span_dimension(spec), "= N^2 =", spec.N**2)

# commutators reduce to class representatives with a skew coefficient
res = glN_bracket(spec, (1, 0), (0, 1))
print("[X^(1,0), X^(0,1)] =", res.coeff, "* X^", res.exp)
