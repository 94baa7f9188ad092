"""How N(1) compares with q^dim for the split quadric x1 x2 + x3 x4 as q grows."""
from ffmoduli.counting import ratio_report
from ffmoduli.ff_core import GF
from ffmoduli.forms import Hypersurface

forms = [
    Hypersurface.from_dict({"p": p, "k": 1, "n": 4, "d": 2, "monomials": [{"exps": [1, 1, 0, 0], "c": 1}, {"exps": [0, 0, 1, 1], "c": 1}]})
    for p in (3, 5, 7)
]
for row in ratio_report(forms, 1, "linear-solve"):
    print(f"q = {row['q']}: N = {row['N']}, q^dim = {row['q_muhat']}, ratio = {row['ratio']} ~ {row['ratio_float']:.3f}")
