# Exact arithmetic in cyclotomic fields: every value is a vector of
# arbitrary-precision rationals over the power basis of a primitive root,
# so equality is literal equality and nothing is ever rounded.

from qtlie import make_field, parse_cyclonum

fld = make_field(12)
print("field Q(zeta_12), degree over Q:", fld.phi)

z = fld.root(1)
print("zeta^12 =", z**12)           # back to 1, exactly
print("zeta^6  =", z**6)            # -1
print("zeta + zeta^-1 =", z + z**-1)

# Gaussian rationals sit inside Q(zeta_4)
g = make_field(4)
i = g.root(1)
print("(1+i)(1-i) =", (g.one + i) * (g.one - i))
print("1/(1+i)    =", g.one / (g.one + i))

# the textual form round-trips bit for bit
value = (g.one + i) * g.from_rational("3/7")
text = value.serialize()
print("serialized:", text)
print("round trip equal:", parse_cyclonum(text) == value)

# a floating approximation exists for eyeballing only; no decision uses it
print("approx of zeta_12:", z.approx())
