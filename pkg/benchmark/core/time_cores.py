import pytest
import numpy as np
from ttbsim.ttb import pack_ttb
from ttbsim.core import SparseCoreConfig, simulate_sparse, lpt_schedule
from ttbsim.harness import synth_workload


@pytest.mark.parametrize("rate", [0.01, 0.05, 0.2])
def test_simulate_sparse(rate, benchmark):
    x = synth_workload(4, 196, 128, rate, 0.0, (2, 4), 0)
    grid = pack_ttb(x, (2, 4))
    rng = np.random.default_rng(0)
    w = rng.integers(-128, 128, (128, 128))
    cfg = SparseCoreConfig()

    psum, stats = benchmark.pedantic(simulate_sparse, args=(grid, w, cfg),
                                     iterations=3, rounds=3, warmup_rounds=1)

    assert(np.array_equal(psum, x.to_numpy(np.int64) @ w))


@pytest.mark.parametrize("n", [1000, 10000, 100000])
def test_lpt_schedule(n, benchmark):
    costs = np.sort(np.random.default_rng(0).integers(1, 40, n))[::-1]

    makespan, _ = benchmark.pedantic(lpt_schedule, args=(costs, 128),
                                     iterations=3, rounds=3, warmup_rounds=1)

    assert(makespan >= costs.sum() / 128)
