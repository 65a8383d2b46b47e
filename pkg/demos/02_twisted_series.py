"""
Summing a twisted series
========================

Sums of the form sum u(n) f(n) converge slowly: the error after N terms can
decay like N^-1 with an oscillating factor.  Block partial sums at N = B^m
are far better behaved, and an extrapolation in m recovers many digits from a
few thousand terms.
"""

from digitseries import SeriesJob, parse, parse_sequence, sum_accelerated, sum_blocks, sum_direct

seq = parse_sequence("count:B=2;digit=1;sign")  # (-1)^(number of ones in n)
f = parse("(4*n+1)/(2*n*(2*n+1)*(2*n+2))")
job = SeriesJob(seq, f, start=1, tolerance=1e-12)

# A small exact partial sum shows that the terms are rational.
ball = sum_direct(SeriesJob(seq, f, 1, 1e-6), 8)
q = sum(seq(n).to_fraction() * f(n) for n in range(1, 8))
print("terms n = 1..7 sum to", q)
print("ball from sum_direct :", ball.re, " contains it:", ball.re.contains(q))

# Block partial sums approach the limit geometrically in m.
print()
for m, s in enumerate(sum_blocks(job, 12)):
    print(f"N = 2^{m:<2}  partial sum = {float(s.re.mid): .12f}")

# The accelerated result, its radius and how it was obtained.
res = sum_accelerated(job)
print()
print("accelerated :", res.value)
print("radius      :", float(res.radius))
print("terms used  :", res.terms_used)
print("error kind  :", res.error_kind)
print("distance to -1/4:", abs(float(res.value.re.mid) + 0.25))
