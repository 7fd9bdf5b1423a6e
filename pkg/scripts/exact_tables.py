"""Print the exact-oracle values that the test suite freezes."""

from lerwlab.lattice import ball
from lerwlab.oracle import (exact_es, exact_hat_es, exact_length_pmf, lerw_exact_laplacian, paths_to_codes)
from lerwlab.conditioned import exact_MK_mean
from lerwlab.stats import tv_distance

O = (0, 0)

law = lerw_exact_laplacian(ball(O, 2))
pmf = exact_length_pmf(law)
print(f"B_2: {len(law)} exit paths, mean length {sum(k * v for k, v in pmf.items())!r}")
print(f"Es(1) = {exact_es(1)!r} (25/48 = {25 / 48!r})")
print(f"Es(2) = {exact_es(2)!r}")
print(f"hatEs(1) = {exact_hat_es(1)!r}")
print(f"E[M^K] at m=1, n=2, N=5, x=(1,0), K={{0}}: {exact_MK_mean(1, 2, 5, (1, 0), {O})!r}")
prev = None
for n in (4, 8, 16, 32):
    mu = paths_to_codes(lerw_exact_laplacian(ball(O, n), stop=ball(O, 1)))
    vals = sorted(set(round(v, 6) for v in mu.values()))
    tv = "" if prev is None else f", TV from previous {tv_distance(prev, mu):.7f}"
    print(f"one-step truncated law under B_{n}: values {vals}{tv}")
    prev = mu
