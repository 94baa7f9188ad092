import json
from pathlib import Path

import numpy as np
import pytest

from ffmoduli.forms import Hypersurface

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def load(name):
    return Hypersurface.from_dict(json.loads((CONFIGS / name).read_text()))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
