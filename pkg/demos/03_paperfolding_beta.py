"""
Paperfolding series and Dirichlet beta
======================================

Twisting 1/(n+1)^s by the paperfolding sequence gives a rational multiple of
the Dirichlet beta function.  At odd s = 2d+1 the value is a rational multiple
of pi^(2d+1), with the Euler number E_2d in the numerator.
"""

from digitseries import (
    Ball,
    SeriesJob,
    beta_numeric,
    beta_odd,
    euler_number,
    paperfold_rhs,
    parse,
    parse_sequence,
    reduction_factor,
    sum_accelerated,
)

print("Euler numbers E_0 .. E_20:")
print([euler_number(2 * k) for k in range(11)])
print()

v = parse_sequence("paperfold")
for d in range(4):
    s = 2 * d + 1
    res = sum_accelerated(SeriesJob(v, parse(f"1/(n+1)^{s}"), 0, 1e-15))
    closed = paperfold_rhs(d)
    gap = abs(float(res.value.re.mid - closed.evaluate(128).re.mid))
    print(f"s = {s}:  series = {float(res.value.re.mid):.15f}   closed form {str(closed):<14} gap {gap:.1e}")

# The reduction factor also applies at even s, where no closed form is known.
# At s = 2 the beta value is Catalan's constant.
print()
res = sum_accelerated(SeriesJob(v, parse("1/(n+1)^2"), 0, 1e-15))
catalan = beta_numeric(2, 128)
print("beta(2)            :", catalan)
print("factor             :", reduction_factor(2))
print("factor * beta(2)   :", catalan * Ball(reduction_factor(2), 0, 128))
print("paperfolding series:", res.value.re)

print()
for d in range(3):
    print(f"beta({2 * d + 1}) = {beta_odd(d)}")
