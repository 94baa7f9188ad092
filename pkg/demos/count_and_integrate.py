"""Count degree-1 maps to a small quadric two ways and compare.

The first count walks the coefficient box directly.  The second evaluates the
exponential sum S(alpha) on the finite grid of alpha values and averages it,
which recovers the same integer exactly.
"""
import json
from pathlib import Path

from ffmoduli import circle
from ffmoduli.counting import count_N
from ffmoduli.forms import Hypersurface

CONFIGS = Path(__file__).resolve().parent.parent / "configs"

for name in ("quadric_q3.json", "xy_q3.json"):
    f = Hypersurface.from_dict(json.loads((CONFIGS / name).read_text()))
    direct = count_N(f, 1)
    via_sums = circle.exact_integral_N(f, 1)
    print(f"{f}: N(1) = {direct.N} by enumeration, {via_sums} from the exponential sum")
    print(f"   expected dimension {direct.muhat}, N / q^dim = {direct.ratio} ({direct.ratio_float:.4f})")
