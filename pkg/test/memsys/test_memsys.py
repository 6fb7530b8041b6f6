#!/usr/bin/env python
# -*- coding: utf-8 -*-
import json
import numpy as np
import pytest
from ttbsim.exceptions import ConfigurationError
from ttbsim.memsys import MemConfig, MemorySystem, EnergyReport, \
    ENERGY_KINDS, load_energy_table, overlap, pipeline_latency, \
    serial_latency


def test_defaults():
    cfg = MemConfig()
    assert(cfg.dram_bandwidth == pytest.approx(76.8e9 / 500e6))
    assert(cfg.static_pj_per_cycle == pytest.approx(647.8))
    assert(cfg.weight_partition_bits == 72 * 1024 * 8)
    assert(cfg.ttb_partition_bits == 12 * 1024 * 8)
    assert(set(cfg.energy) == set(ENERGY_KINDS))


def test_record_event():
    mem = MemorySystem()
    table = mem.config.energy
    mem.record_event('weight_glb_read', 1)
    rep = mem.report()
    assert(rep.event_pj['weight_glb_read'] == table['weight_glb_read'])
    assert(rep.total_pj == pytest.approx(table['weight_glb_read']))
    before = mem.report()
    mem.record_event('dram_read', 0)
    assert(mem.report() == before)


def test_additivity():
    a = MemorySystem()
    a.record_event('dram_read', 10)
    a.record_event('dram_read', 10)
    b = MemorySystem()
    b.record_event('dram_read', 20)
    assert(a.report() == b.report())


@pytest.mark.parametrize('seed', range(5))
def test_interleaving(seed):
    rng = np.random.default_rng(seed)
    events = [(str(rng.choice(ENERGY_KINDS)), int(rng.integers(0, 100)))
              for _ in range(50)]
    a = MemorySystem()
    b = MemorySystem()
    for kind, qty in events:
        a.record_event(kind, qty)
    for i in rng.permutation(len(events)):
        b.record_event(*events[i])
    ra, rb = a.report(), b.report()
    assert(ra.counts == rb.counts)
    assert(ra.total_pj == pytest.approx(rb.total_pj))
    assert(min(ra.event_pj.values()) >= 0)


def test_unknown_event():
    mem = MemorySystem()
    with pytest.raises(ConfigurationError):
        mem.record_event('l3_read', 1)
    with pytest.raises(ValueError):
        mem.record_event('dram_read', -1)


def test_static_energy_and_edp():
    mem = MemorySystem()
    mem.advance(1000)
    mem.add_compute('dense', 100.0)
    rep = mem.report()
    assert(rep.static_pj == pytest.approx(647800.0))
    assert(rep.total_pj == pytest.approx(647900.0))
    assert(rep.latency_s == pytest.approx(2e-6))
    assert(rep.edp == pytest.approx(647900e-12 * 2e-6))
    assert(rep.edp >= 0)


def test_since():
    mem = MemorySystem()
    mem.record_event('ttb_glb_read', 5)
    mem.advance(10)
    snap = mem.snapshot()
    mem.record_event('ttb_glb_read', 3)
    mem.add_compute('sparse', 1.0)
    mem.advance(4)
    delta = mem.since(snap)
    assert(delta.counts['ttb_glb_read'] == 3)
    assert(delta.cycles == 4)
    assert(delta.compute_pj == {'sparse': 1.0})
    assert(delta.static_pj == pytest.approx(4 * 647.8))


def test_report_dict():
    mem = MemorySystem()
    mem.record_event('dram_write', 7)
    mem.add_compute('attention', 3.5)
    mem.advance(9)
    rep = mem.report()
    assert(EnergyReport.from_dict(json.loads(json.dumps(rep.to_dict())))
           == rep)
    assert(rep.total_pj == pytest.approx(
        sum(rep.event_pj.values()) + rep.static_pj + 3.5
    ))


def test_dram_cycles():
    mem = MemorySystem()
    assert(mem.dram_cycles(0) == 0)
    assert(mem.dram_cycles(1) == 1)
    assert(mem.dram_cycles(1536) == 10)
    assert(mem.dram_cycles(1537) == 11)


def test_overlap():
    assert(overlap(100, 60) == 100)
    assert(overlap(100, 140) == 140)
    assert(overlap(77, 77) == 77)


def test_pipeline_latency():
    assert(pipeline_latency([], []) == 0)
    assert(pipeline_latency([100], [60]) == 160)
    assert(pipeline_latency([100, 100], [60, 140]) == 60 + 140 + 100)


@pytest.mark.parametrize('seed', range(20))
def test_hiding_bound(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 10))
    compute = rng.integers(0, 200, n).tolist()
    transfer = rng.integers(0, 200, n).tolist()
    hidden = pipeline_latency(compute, transfer)
    assert(hidden <= serial_latency(compute, transfer))
    assert(hidden >= max(sum(compute), sum(transfer)))


def test_energy_table_file(tmp_path):
    table = {k: 1.0 for k in ENERGY_KINDS}
    path = tmp_path / 'energy.json'
    path.write_text(json.dumps(table))
    assert(load_energy_table(str(path)) == table)
    assert(MemConfig(energy=table).energy['dram_read'] == 1.0)
    for bad in [dict(table, sram_read=1.0),
                {k: v for k, v in table.items() if k != 'dram_read'},
                dict(table, dram_read=-1.0)]:
        path.write_text(json.dumps(bad))
        with pytest.raises(ConfigurationError):
            load_energy_table(str(path))


def test_config_validation():
    for kw in [dict(weight_glb_bytes=0), dict(dram_bandwidth=0),
               dict(ttb_glb_banks=0), dict(dram_power_mw=-1)]:
        with pytest.raises(ConfigurationError):
            MemConfig(**kw)
