#!/usr/bin/env python
# -*- coding: utf-8 -*-
'''End-to-end orchestration: reference trace, bundling, stratification,
pruning, core simulation and energy accounting, layer by layer.'''
import logging
import numpy as np
from ttbsim.exceptions import OracleMismatchError, ShapeError
from ttbsim.ttb import SpikeTensor, pack_ttb, read_ttbs, sparsity_metrics
from ttbsim.reference import BlockWeights, load_weights, model_forward, \
    flops_breakdown, lif_layer
from ttbsim.reference.attention import head_slices
from ttbsim.ecp import prune_heads
from ttbsim.stratifier import Stratification, stratify, choose_theta_s, \
    merge_and_fire, spikegen_cost, stratifier_cost
from ttbsim.core import simulate_dense, simulate_sparse, simulate_mode1, \
    simulate_mode2, dense_cycles, estimate_sparse_cycles
from ttbsim.memsys import MemorySystem, TensorFootprint, plan_tiles, \
    record_plan, pipeline_latency
from .report import LayerReport, SimReport
from .synth import synth_workload, synth_bimodal, child_seeds

logger = logging.getLogger(__name__)


def check_equal(layer, tensor, expected, actual):
    '''Raise OracleMismatchError at the first coordinate where the simulated
    tensor departs from the reference.'''
    expected = np.asarray(expected)
    actual = np.asarray(actual)
    if expected.shape != actual.shape:
        raise OracleMismatchError(
            layer, tensor, message=f'{layer}: {tensor} has shape '
            f'{actual.shape}, the reference has {expected.shape}'
        )
    diff = np.argwhere(expected != actual)
    if len(diff):
        idx = tuple(int(i) for i in diff[0])
        raise OracleMismatchError(layer, tensor, idx, expected[idx].item(),
                                  actual[idx].item())


def _split(total, n):
    '''Spread an integer over n tiles, remainder first.'''
    base, rem = divmod(int(total), n)
    return [base + (1 if i < rem else 0) for i in range(n)]


def _nbytes(bits):
    return -(-int(bits) // 8)


def core_estimator(d_out, cfg):
    '''Cycle estimates of both cores for :py:func:`choose_theta_s`.'''
    def estimate(grid, dense):
        d = dense_cycles(grid.bundle_count, int(dense.sum()), d_out,
                         grid.shape.volume, cfg.dense)
        s = estimate_sparse_cycles(grid, np.flatnonzero(~dense), d_out,
                                   cfg.sparse, cfg.mem.weight_port_bits)
        return d, s
    return estimate


def _pipeline(mem, footprints, compute):
    plan = plan_tiles(footprints, mem.config)
    record_plan(mem, plan)
    transfers = [mem.dram_cycles(b) for b in plan.tile_bytes()]
    return plan, pipeline_latency(_split(compute, plan.n_tiles), transfers)


def _fire_cost(mem, T, N, d_out, cfg):
    sg = spikegen_cost(T, N, d_out, cfg.spikegen)
    mem.record_event('register_access', sg.register_accesses)
    mem.add_compute('spikegen', sg.energy['spikegen'])
    return sg


def simulate_linear_layer(layer, cfg, mem):
    '''Simulate one projection or MLP layer against its reference trace.

    Parameters
    ----------
    layer: LayerTrace
        Reference inputs, weights, currents and spikes of the layer.
    cfg: RunConfig
    mem: MemorySystem
        Accumulates the layer's events.

    Returns
    -------
    report: LayerReport
    '''
    snap = mem.snapshot()
    grid = pack_ttb(layer.x, cfg.bundle)
    W = layer.weight
    d_out = W.shape[1]
    T, N = grid.T, grid.N

    sc = stratifier_cost(grid.bundle_count, grid.D, cfg.stratifier)
    mem.add_compute('stratifier', sc.energy['stratifier'])
    if cfg.mode == 'dense_only':
        strat = Stratification.dense_only(grid, W)
    else:
        theta = choose_theta_s(grid, cfg.strat, core_estimator(d_out, cfg))
        strat = stratify(grid, W, theta)

    psum_d, sd = simulate_dense(strat.x_d, strat.w_d, cfg.dense, mem)
    psum_s, ss = simulate_sparse(strat.x_s, strat.w_s, cfg.sparse, mem)
    check_equal(layer.name, 'current', layer.current, psum_d + psum_s)
    spikes, _ = merge_and_fire(psum_d, psum_s, cfg.model.lif_for(layer.role),
                               bias=layer.bias)
    check_equal(layer.name, 'spikes', layer.spikes.to_numpy(),
                spikes.to_numpy())
    sg = _fire_cost(mem, T, N, d_out, cfg)

    port = mem.config.weight_port_bits
    compute = max(sd.cycles, ss.cycles, -(-(sd.port_bits + ss.port_bits) //
                                          port))
    out = pack_ttb(spikes, cfg.bundle)
    footprints = [
        TensorFootprint.uniform('W', 'weight', W.shape[0],
                                d_out * cfg.model.weight_bits, 'stationary'),
        TensorFootprint('X', 'ttb', grid.row_bits(), 'streamed'),
        TensorFootprint('Y', 'ttb', out.row_bits(), 'output'),
    ]
    plan, hidden = _pipeline(mem, footprints, compute)
    cycles = sc.cycles + hidden + sg.cycles
    mem.advance(cycles)

    report = LayerReport(
        layer.name, 'linear', cycles,
        {'dense': sd, 'sparse': ss, 'stratifier': sc, 'spikegen': sg},
        mem.since(snap), theta_s=strat.theta_s, n_dense=strat.n_dense,
        n_sparse=strat.n_sparse,
        dram=dict(
            read_bytes=plan.read_bytes(),
            write_bytes=plan.write_bytes(),
            weight_bytes=plan.read_bytes('W'),
            payload_bytes=_nbytes(grid.payload_bits()),
            tag_bytes=_nbytes(grid.tag_bits()),
            output_payload_bytes=_nbytes(out.payload_bits()),
            output_tag_bytes=_nbytes(out.tag_bits()),
            tiles=plan.n_tiles,
        ),
    )
    logger.debug('%s: theta_s=%s dense=%d sparse=%d cycles=%d '
                 'energy=%.1f pJ', layer.name, strat.theta_s, strat.n_dense,
                 strat.n_sparse, cycles, report.energy.total_pj)
    return report


def _kept_rows(grid, keep):
    '''Row sizes of a grid when pruned rows are reduced to their tags.'''
    bits = grid.row_bits()
    bits[~keep.ravel()] = grid.D
    return bits


def simulate_attention_layer(block, cfg, mem):
    '''Simulate the spiking self-attention of one block, head by head,
    Mode 1 then Mode 2, followed by the attention neurons.

    Parameters
    ----------
    block: BlockTrace
    cfg: RunConfig
    mem: MemorySystem

    Returns
    -------
    report: LayerReport
    '''
    snap = mem.snapshot()
    name = f'{block.name}.attn'
    ssa = block.ssa
    model = cfg.model
    grids = {r: pack_ttb(getattr(ssa, r), cfg.bundle) for r in 'qkv'}
    masks = prune_heads(grids['q'], grids['k'], model.H, cfg.ecp)
    q, k, v = (getattr(ssa, r).to_numpy(np.int64) for r in 'qkv')

    y = np.zeros((model.T, model.N, model.D), dtype=np.int64)
    total = None
    rows = {'Q': [], 'K': [], 'V': []}
    for h, f in enumerate(head_slices(model)):
        mask = masks[h]
        s, st1 = simulate_mode1(q[..., f], k[..., f], mask, cfg.attn, mem)
        check_equal(name, f'S[{h}]', ssa.s[h], s)
        y[..., f], st2 = simulate_mode2(s, v[..., f], mask, cfg.attn,
                                        model.s_shift, mem)
        head = st1 + st2
        total = head if total is None else total + head
        features = np.arange(f.start, f.stop)
        for key, r, keep in (('Q', 'q', mask.keep_q), ('K', 'k', mask.keep_k),
                             ('V', 'v', mask.keep_k)):
            rows[key].append(_kept_rows(grids[r].select(features), keep))
    check_equal(name, 'Y', ssa.y, y)
    o_temp, _ = lif_layer(y, model.lif_for('attn'))
    check_equal(name, 'spikes', ssa.o_temp.to_numpy(), o_temp)
    sg = _fire_cost(mem, model.T, model.N, model.D, cfg)

    core = total.scaled_cycles(cfg.attn.heads_parallel)
    out = pack_ttb(SpikeTensor(o_temp), cfg.bundle)
    footprints = [TensorFootprint(key, 'ttb', np.concatenate(rows[key]),
                                  'streamed') for key in ('Q', 'K', 'V')]
    footprints.append(TensorFootprint('Y', 'ttb', out.row_bits(), 'output'))
    plan, hidden = _pipeline(mem, footprints, core.cycles)
    cycles = hidden + sg.cycles
    mem.advance(cycles)

    keep_q = float(np.mean([m.keep_fraction_q for m in masks]))
    keep_k = float(np.mean([m.keep_fraction_k for m in masks]))
    report = LayerReport(
        name, 'attention', cycles, {'attention': core, 'spikegen': sg},
        mem.since(snap), keep_q=keep_q, keep_k=keep_k,
        dram=dict(
            read_bytes=plan.read_bytes(),
            write_bytes=plan.write_bytes(),
            weight_bytes=0,
            payload_bytes=sum(_nbytes(g.payload_bits())
                              for g in grids.values()),
            tag_bytes=sum(_nbytes(g.tag_bits()) for g in grids.values()),
            output_payload_bytes=_nbytes(out.payload_bits()),
            output_tag_bytes=_nbytes(out.tag_bits()),
            tiles=plan.n_tiles,
        ),
    )
    logger.debug('%s: keep_q=%.3f keep_k=%.3f cycles=%d energy=%.1f pJ',
                 name, keep_q, keep_k, cycles, report.energy.total_pj)
    return report


def make_inputs(cfg, seed=None):
    '''The input spikes a configuration describes.'''
    m = cfg.model
    w = cfg.workload
    seed = cfg.seed if seed is None else seed
    if w['kind'] == 'file':
        x = read_ttbs(w['input'])
    elif w['kind'] == 'bimodal':
        x = synth_bimodal(m.T, m.N, m.D, cfg.bundle, seed,
                          dense_rate=w['dense_rate'],
                          sparse_rate=w['sparse_rate'],
                          dense_fraction=w['dense_fraction'],
                          cluster=w['cluster'])
    else:
        x = synth_workload(m.T, m.N, m.D, w['rate'], w['cluster'],
                           cfg.bundle, seed)
    return x


def make_weights(cfg, seed=None):
    m = cfg.model
    weights_dir = cfg.to_dict()['model']['weights']
    if weights_dir is not None:
        return load_weights(weights_dir, m)
    rng = np.random.Generator(np.random.PCG64(
        cfg.seed if seed is None else seed
    ))
    return [BlockWeights.random(m, rng) for _ in range(m.L)]


def bundle_grids(traces, cfg):
    '''Bundled activations entering the sparsity loss: the input of every
    linear layer and the attention queries and keys, plus the values when
    ``metrics.bsp_includes_v`` is set.'''
    heads = 'qkv' if cfg.bsp_includes_v else 'qk'
    grids = []
    for block in traces:
        for layer in block.layers.values():
            if layer.x is not None:
                grids.append(pack_ttb(layer.x, cfg.bundle))
        for r in heads:
            grids.append(pack_ttb(getattr(block.ssa, r), cfg.bundle))
    return grids


def run(cfg, inputs=None):
    '''Simulate a whole model on one input sample.

    Parameters
    ----------
    cfg: RunConfig
    inputs: SpikeTensor or None
        The sample, synthesized or read as the workload settings say when
        omitted.

    Returns
    -------
    report: SimReport
        Emitted only if every simulated tensor matches the reference.
    '''
    m = cfg.model
    workload_seed, weight_seed = child_seeds(cfg.seed, 2)
    x = make_inputs(cfg, workload_seed) if inputs is None else inputs
    if x.shape != (m.T, m.N, m.D):
        raise ShapeError(
            f'Input of shape {x.shape} does not match the model '
            f'{(m.T, m.N, m.D)}.'
        )
    weights = make_weights(cfg, weight_seed)
    _, traces = model_forward(x, weights, m, ecp=cfg.ecp, shape=cfg.bundle)

    mem = MemorySystem(cfg.mem)
    layers = []
    for block in traces:
        for role in cfg.layers:
            if role == 'attn':
                layers.append(simulate_attention_layer(block, cfg, mem))
            else:
                layers.append(
                    simulate_linear_layer(block.layers[role], cfg, mem)
                )

    sparsity = sparsity_metrics(bundle_grids(traces, cfg), cfg.lam)
    report = SimReport(
        cfg.config_hash, cfg.mode, layers, mem.report(),
        flops=flops_breakdown(m).to_dict(),
        sparsity=dict(sparsity._asdict(), loss=sparsity.loss),
    )
    logger.info('Ran %s [%s]: %d cycles, %.1f pJ, EDP %.3e J*s', cfg.mode,
                cfg.config_hash[:12], report.cycles, report.energy_pj,
                report.edp)
    return report
