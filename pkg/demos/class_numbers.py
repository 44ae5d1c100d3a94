"""Hurwitz class numbers, the Eichler relation, and the CSV cache."""

import tempfile
from pathlib import Path

import numpy as np

from ntlab import (build_hurwitz_table, class_number_h, cohen_coefficient,
                   eichler_lhs, eichler_rhs, hurwitz_hfull, hurwitz_hstar12,
                   hurwitz_rational, load_or_build)
from ntlab.classnumber import read_hurwitz_csv, write_hurwitz_csv

table = build_hurwitz_table(6000)

print("D    h(-D)  H(D)  12*H*(D)")
for D in (3, 4, 7, 11, 12, 15, 16, 20, 23, 47, 71):
    print(f"{D:<4} {class_number_h(D):>5} {hurwitz_hfull(D, table):>5} "
          f"{hurwitz_hstar12(D, table):>9}")
print(f"H*(0) = {hurwitz_rational(0, table)}")

# an exact identity: sum of H*(n - s^2) over s^2 <= n, odd n
for n in (1, 3, 5, 93, 4999):
    lhs = eichler_lhs(n, table)
    rhs = eichler_rhs(n)
    print(f"n={n:<5} eichler lhs {lhs} == rhs {rhs}: {lhs == rhs}")

# the companion coefficient is zero at every odd argument tried
worst = max(abs(cohen_coefficient(ell, table)) for ell in range(1, 2000, 2))
print(f"max |c(l)| over odd l < 2000: {worst}")

# table persistence round trip
with tempfile.TemporaryDirectory() as tmp:
    path = write_hurwitz_csv(table, Path(tmp) / "hurwitz.csv")
    again = read_hurwitz_csv(path)
    intact = (again.bound == table.bound
              and np.array_equal(again.hstar12, table.hstar12))
    print(f"csv round trip intact: {intact}")
    served = load_or_build(100, Path(tmp))
    print(f"load_or_build(100) serves a table of bound {served.bound}")
