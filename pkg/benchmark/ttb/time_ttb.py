import pytest
import numpy as np
from ttbsim.ttb import SpikeTensor, pack_ttb
from ttbsim.harness import synth_workload


@pytest.mark.parametrize("shape", [(4, 196, 128), (10, 64, 384),
                                   (8, 256, 384)])
def test_pack_ttb(shape, benchmark):
    x = synth_workload(*shape, 0.1, 0.5, (2, 4), 0)

    grid = benchmark.pedantic(pack_ttb, args=(x, (2, 4)), iterations=5,
                              rounds=5, warmup_rounds=1)

    assert(int(grid.tags.sum()) == x.popcount())


@pytest.mark.parametrize("D", [128, 384, 1536])
def test_popcount(D, benchmark):
    rng = np.random.default_rng(0)
    x = SpikeTensor(rng.random((8, 256, D)) < 0.1)

    def fun(x):
        return x.count(slice(1, 7), slice(3, 250), slice(5, D - 5))

    n = benchmark.pedantic(fun, args=(x,), iterations=5, rounds=5,
                           warmup_rounds=1)

    assert(n == int(x.to_numpy()[1:7, 3:250, 5:D - 5].sum()))
