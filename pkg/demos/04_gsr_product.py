"""
A product twisted by the Golay-Shapiro-Rudin sequence
=====================================================

Because r(2n) = r(n) and r(2n+1) = (-1)^n r(n), sums against r collapse into
a telescoping combination.  For a rational R with R(n) -> 0 the combination
is another rational function whose r-twisted sum equals R(1).  Taking
R(n) = log n - log(n+1) and exponentiating gives an infinite product.
"""

import math

from digitseries import LogTerm, SeriesJob, eval_product, parse, parse_sequence, shap_combination, sum_accelerated

r = parse_sequence("gsr")

term, rhs = shap_combination(parse("1/n", {0: 1}))
print("R(n) = 1/n       ->", term, "  sums to", rhs)
res = sum_accelerated(SeriesJob(r, term, 1, 1e-12))
print("numerically      :", res.value.re)

term, rhs = shap_combination(LogTerm(parse("n/(n+1)", {0: 1})))
print()
print("R(n) = log(n/(n+1)) ->", term)
print("sums to", rhs)

# Shifting the start to n = 0 halves the exponents, and the product of the
# corresponding factors raised to the powers r(n) is 1/sqrt(2).
q = parse("(2*n+1)^2/((n+1)*(4*n+1))")
prod = eval_product(SeriesJob(r, LogTerm(q), 0, 1e-12))
print()
print("prod ((2n+1)^2/((n+1)(4n+1)))^r(n) =", prod.value.re)
print("1/sqrt(2)                            =", 1 / math.sqrt(2))
