"""
Verifying the identity catalog
==============================

Every closed form shipped with the library is a catalog record.  Verification
evaluates the series, evaluates the right-hand side in ball arithmetic and
compares the two.  The same run is available as ``digitseries verify``.
"""

import time

from digitseries import builtin_catalog, verify_identity
from digitseries.catalog import perturbed

t0 = time.perf_counter()
reports = [verify_identity(rec, raise_on_failure=False) for rec in builtin_catalog()]
elapsed = time.perf_counter() - t0

print(f"{'id':<28} {'status':<6} {'rhs':<14} {'|lhs - rhs|':>12} {'encloses':>9}")
for rep in reports:
    print(f"{rep['id']:<28} {rep['status']:<6} {rep['rhs']['expr']:<14} "
          f"{float(rep['difference']):>12.2e} {str(rep['encloses_rhs']):>9}")
print(f"\n{sum(r['status'] == 'pass' for r in reports)}/{len(reports)} passed in {elapsed:.1f} s")

# A negative control: nudging a right-hand side by 1e-6 must be detected.
rec = next(r for r in builtin_catalog() if r.id == "gsr-product")
print("\nperturbed gsr-product:", verify_identity(perturbed(rec), raise_on_failure=False)["status"])
