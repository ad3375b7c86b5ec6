import functools
import os
import sys
import time

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from azqhm.scenario import load_preset  # noqa: E402
from azqhm.thermo import sweep_modulation  # noqa: E402


@functools.lru_cache(maxsize=None)
def preset_sweep(name: str):
    """Full default-grid sweep of a preset, computed once per session.

    Returns (scenario, records, seconds spent in the sweep).
    """
    sc = load_preset(name)
    t0 = time.perf_counter()
    recs = tuple(sweep_modulation(sc, sc.sweep.grid()))
    return sc, recs, time.perf_counter() - t0


@pytest.fixture(scope="session")
def sweeps():
    return preset_sweep
