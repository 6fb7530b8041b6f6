import pytest
from ttbsim.harness import load_config, run


@pytest.mark.parametrize("preset", ['model3', 'model4'])
@pytest.mark.parametrize("mode", ['heterogeneous', 'dense_only'])
def test_run_one_block(preset, mode, benchmark):
    cfg = load_config({'preset': preset, 'model': {'L': 1},
                       'run': {'mode': mode}})

    report = benchmark.pedantic(run, args=(cfg,), iterations=1, rounds=3,
                                warmup_rounds=1)

    benchmark.extra_info['cycles'] = report.cycles
    benchmark.extra_info['energy_pj'] = report.energy_pj
    assert(report.cycles > 0)
