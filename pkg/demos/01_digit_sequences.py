"""
Sequences driven by base-B digits
=================================

A strongly B-multiplicative sequence is fixed by its values on single digits.
Two automatic sequences that are *not* of that form round out the library:
the regular paperfolding sequence and the Golay-Shapiro-Rudin sequence.
"""

import numpy as np

from digitseries import kronecker_minus_one, parse_sequence, partial_sum

# (-1)^s_2(n) is the Thue-Morse sequence in +-1 form.  Its digit values are
# u(0) = 1 and u(1) = -1, so the digit sum sigma = u(0) + u(1) vanishes.
tm = parse_sequence("count:B=2;sum;sign")
print("Thue-Morse   ", " ".join("+" if tm(n) == 1 else "-" for n in range(32)))

# Complex digit values are allowed. With u(1) = i the values cycle through
# the fourth roots of unity according to the number of ones in n.
gauss = parse_sequence("strongmult:B=2;u1=i")
print("i^s_2(n)     ", [str(gauss(n)) for n in range(8)])

# Paperfolding: v(2n) = (-1)^n and v(2n+1) = v(n).  Shifted by one it is the
# Kronecker symbol (-1/n), a completely multiplicative character.
v = parse_sequence("paperfold")
print("paperfolding ", " ".join("+" if v(n) == 1 else "-" for n in range(32)))
assert all(v(n - 1) == kronecker_minus_one(n) for n in range(1, 5000))

# Golay-Shapiro-Rudin: the sign of the number of overlapping "11" blocks.
r = parse_sequence("gsr")
print("GSR          ", " ".join("+" if r(n) == 1 else "-" for n in range(32)))

# Partial sums behave very differently.  Thue-Morse pairs 2n and 2n+1 with
# opposite signs, so its sums vanish at every even N.  GSR sums stay within a
# constant times sqrt(N), while paperfolding sums grow only like log N.
print()
print(f"{'N':>8} {'Thue-Morse':>11} {'GSR':>6} {'GSR/sqrt(N)':>12} {'paperfold':>10}")
for N in [10, 100, 1000, 4096, 10**4, 10**5]:
    g = partial_sum(r, N)
    print(f"{N:>8} {str(partial_sum(tm, N)):>11} {g:>6} {g / np.sqrt(N):>12.3f} {partial_sum(v, N):>10}")
