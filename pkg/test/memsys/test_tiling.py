#!/usr/bin/env python
# -*- coding: utf-8 -*-
import numpy as np
import pytest
from ttbsim.exceptions import CapacityError, ConfigurationError
from ttbsim.ttb import SpikeTensor, pack_ttb
from ttbsim.memsys import MemConfig, MemorySystem, TensorFootprint, \
    plan_tiles, record_plan


def _layer(d_in, d_out, grid, weight_bits=8):
    return [
        TensorFootprint.uniform('W', 'weight', d_in, d_out * weight_bits,
                                'stationary'),
        TensorFootprint('X', 'ttb', grid.row_bits(), 'streamed'),
        TensorFootprint.uniform('Y', 'ttb', grid.T * grid.N, d_out,
                                'output'),
    ]


def test_single_tile():
    rng = np.random.default_rng(0)
    x = SpikeTensor((rng.random((4, 16, 32)) < 0.2).astype(np.uint8))
    fps = _layer(32, 32, pack_ttb(x, (2, 2)))
    plan = plan_tiles(fps, MemConfig())
    assert(plan.n_tiles == 1)
    for f in fps[:2]:
        assert(plan.read_bytes(f.name) == f.nbytes)
    assert(plan.write_bytes() == fps[2].nbytes)
    assert(plan.total_bytes == sum(plan.tile_bytes()))


def test_weights_twice_the_partition():
    cfg = MemConfig()
    rows = 2 * cfg.weight_partition_bits // (64 * 8)
    fps = [TensorFootprint.uniform('W', 'weight', rows, 64 * 8,
                                   'stationary'),
           TensorFootprint.uniform('X', 'ttb', 4, 100, 'streamed')]
    plan = plan_tiles(fps, cfg)
    weight_tiles = sum(1 for r in plan.reads if 'W' in r)
    assert(weight_tiles >= 2)
    assert(plan.read_bytes('W') == fps[0].nbytes)
    # the activations fit at once and are fetched a single time
    assert(plan.read_bytes('X') == fps[1].nbytes)


def test_streamed_refetch():
    cfg = MemConfig(weight_glb_bytes=2 * 1024, ttb_glb_bytes=1024)
    fps = [TensorFootprint.uniform('W', 'weight', 4, 4096, 'stationary'),
           TensorFootprint.uniform('X', 'ttb', 6, 4096, 'streamed')]
    plan = plan_tiles(fps, cfg)
    # two weight chunks, three activation chunks
    assert(plan.n_tiles == 6)
    assert(plan.read_bytes('W') == fps[0].nbytes)
    assert(plan.read_bytes('X') == 2 * fps[1].nbytes)
    assert([sorted(r) for r in plan.reads[:3]] ==
           [['W', 'X'], ['X'], ['X']])


def test_model3_traffic_audit():
    rng = np.random.default_rng(3)
    x = SpikeTensor((rng.random((4, 196, 128)) < 0.1).astype(np.uint8))
    grid = pack_ttb(x, (2, 4))
    fps = _layer(128, 128, grid)
    cfg = MemConfig()
    plan = plan_tiles(fps, cfg)
    assert(plan.n_tiles > 1)
    mem = MemorySystem(cfg)
    record_plan(mem, plan)
    counts = mem.report().counts
    assert(counts['dram_read'] == sum(sum(r.values()) for r in plan.reads))
    assert(counts['dram_write'] == sum(plan.writes))
    assert(counts['dram_read'] + counts['dram_write'] ==
           sum(plan.tile_bytes()))
    for f in fps[:2]:
        assert(plan.read_bytes(f.name) >= f.nbytes)
    assert(plan.write_bytes() == fps[2].nbytes)


def test_single_chunk_stream_fetched_once():
    cfg = MemConfig(weight_glb_bytes=2 * 1024, ttb_glb_bytes=1024)
    fps = [TensorFootprint.uniform('W', 'weight', 4, 4096, 'stationary'),
           TensorFootprint.uniform('X', 'ttb', 6, 4096, 'streamed'),
           TensorFootprint.uniform('B', 'ttb', 2, 1024, 'streamed')]
    plan = plan_tiles(fps, cfg)
    # two weight chunks; X splits into six chunks while B fits in one
    assert(plan.n_tiles == 12)
    assert(plan.read_bytes('X') == 2 * fps[1].nbytes)
    assert(plan.read_bytes('B') == fps[2].nbytes)
    assert(sum(1 for r in plan.reads if 'B' in r) == 1)


def test_capacity_error():
    cfg = MemConfig(ttb_glb_bytes=64)
    fps = [TensorFootprint.uniform('X', 'ttb', 2, 300, 'streamed'),
           TensorFootprint.uniform('Y', 'ttb', 2, 300, 'output')]
    with pytest.raises(CapacityError) as e:
        plan_tiles(fps, cfg)
    assert(e.value.tensor == 'X')
    assert('X' in str(e.value))


def test_remainder_goes_to_first_resident():
    cfg = MemConfig(ttb_glb_bytes=1)
    fps = [TensorFootprint.uniform('A', 'ttb', 1, 3, 'streamed'),
           TensorFootprint.uniform('B', 'ttb', 1, 2, 'streamed'),
           TensorFootprint.uniform('C', 'ttb', 1, 2, 'streamed')]
    assert(plan_tiles(fps, cfg).n_tiles == 1)
    fps[1] = TensorFootprint.uniform('B', 'ttb', 1, 3, 'streamed')
    with pytest.raises(CapacityError):
        plan_tiles(fps, cfg)


def test_deterministic():
    rng = np.random.default_rng(4)
    x = SpikeTensor((rng.random((4, 64, 96)) < 0.3).astype(np.uint8))
    fps = _layer(96, 384, pack_ttb(x, (2, 4)))
    a = plan_tiles(fps, MemConfig())
    b = plan_tiles(fps, MemConfig())
    assert(a.reads == b.reads and a.writes == b.writes)


def test_footprint_validation():
    with pytest.raises(ConfigurationError):
        TensorFootprint('X', 'l2', [1], 'streamed')
    with pytest.raises(ConfigurationError):
        TensorFootprint('X', 'ttb', [1], 'resident')
    f = TensorFootprint('X', 'ttb', [3, 6], 'streamed')
    assert(f.bits == 9 and f.nbytes == 2)
