"""Rational approximation, major arcs and the minor-arc dichotomy on a bilinear piece."""
import numpy as np

from ffmoduli import circle
from ffmoduli.ff_core import GF, LaurentNum
from ffmoduli.forms import bidegree_from_matrix

F = GF(3)
rng = np.random.default_rng(1)

alpha = LaurentNum.random(F, -1, -9, rng)
approx = circle.rational_approx(alpha, 4)
print(f"alpha = {alpha}")
print(f"best monic denominator of degree <= 4: g = {approx.g}, a = {approx.a}, error exponent {approx.err_exponent}")

G = bidegree_from_matrix(F, [[1, 0], [0, 1]])
params = circle.ArcParams(1, 1, 1, 2, J=1)
for k in range(3):
    a = LaurentNum.random(F, -1, -8, rng)
    E = circle.eval_E(G, params, a)
    on_arc = circle.major_arc_test(a, params)
    verdict = circle.dichotomy_check(G, params, a, sigma=2)
    print(f"alpha_{k}: |E| = {E.magnitude():.3f}, on major arc: {on_arc}, dichotomy: {verdict}")

rep = circle.dichotomy_grid(G, params, sigma=2)
print(f"whole grid ({rep['points']} points): {rep['tally']}, double failures: {len(rep['double_failures'])}")
