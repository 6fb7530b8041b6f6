#!/usr/bin/env python
# -*- coding: utf-8 -*-
import logging
from collections import namedtuple
import numpy as np
from ttbsim.exceptions import CapacityError, ConfigurationError

logger = logging.getLogger(__name__)

_GLBS = ('weight', 'ttb')
_ROLES = ('stationary', 'streamed', 'output')


class TensorFootprint(namedtuple('TensorFootprint',
                                 ['name', 'glb', 'row_bits', 'role'])):
    '''On-chip storage need of one tensor of a layer.

    Parameters
    ----------
    name: str
        Tensor name, used in capacity errors.
    glb: 'weight' or 'ttb'
        Global buffer holding the tensor.
    row_bits: sequence of int
        Size of each indivisible row in bits.
    role: 'stationary', 'streamed' or 'output'
        Stationary tensors are loaded once per outer tile, streamed tensors
        are swept through for every outer tile and outputs are drained to
        DRAM.
    '''

    def __new__(cls, name, glb, row_bits, role):
        if glb not in _GLBS:
            raise ConfigurationError(f'Unknown global buffer {glb!r}.')
        if role not in _ROLES:
            raise ConfigurationError(f'Unknown tensor role {role!r}.')
        row_bits = np.array(row_bits, dtype=np.int64).ravel()
        assert np.all(row_bits >= 0)
        return super().__new__(cls, name, glb, row_bits, role)

    @classmethod
    def uniform(cls, name, glb, rows, bits, role):
        return cls(name, glb, np.full(int(rows), int(bits)), role)

    @property
    def bits(self):
        return int(self.row_bits.sum())

    @property
    def nbytes(self):
        return -(-self.bits // 8)


class TilePlan:
    '''DRAM traffic of a layer broken into double-buffered tiles.

    Attributes
    ----------
    reads: list of dict
        Bytes read from DRAM per tensor for each tile.
    writes: list of int
        Output bytes written back to DRAM after each tile.
    footprints: dict
        The planned tensors by name.
    '''

    def __init__(self, reads, writes, footprints):
        assert len(reads) == len(writes)
        self.reads = reads
        self.writes = writes
        self.footprints = {f.name: f for f in footprints}

    @property
    def n_tiles(self):
        return len(self.reads)

    def tile_bytes(self):
        '''DRAM bytes moved for each tile, reads and writes combined.'''
        return [sum(r.values()) + w for r, w in zip(self.reads, self.writes)]

    def read_bytes(self, name=None):
        if name is None:
            return sum(sum(r.values()) for r in self.reads)
        return sum(r.get(name, 0) for r in self.reads)

    def write_bytes(self):
        return sum(self.writes)

    @property
    def total_bytes(self):
        return self.read_bytes() + self.write_bytes()

    def __repr__(self):
        return (f'TilePlan(tiles={self.n_tiles}, read={self.read_bytes()}, '
                f'write={self.write_bytes()})')


def _shares(residents, capacity):
    '''Split a partition equally among its residents; the remainder goes to
    the first one.'''
    n = len(residents)
    share, rem = divmod(capacity, n)
    return {f.name: share + (rem if i == 0 else 0)
            for i, f in enumerate(residents)}


def _chunks(fp, capacity):
    '''Greedily pack consecutive rows into chunks no larger than the
    capacity and return the bit size of each chunk.'''
    chunks = []
    current = 0
    for b in fp.row_bits:
        b = int(b)
        if b > capacity:
            raise CapacityError(
                f'A row of {fp.name} needs {b} bits but its share of the '
                f'{fp.glb} buffer holds {capacity} bits.', tensor=fp.name
            )
        if current + b > capacity:
            chunks.append(current)
            current = 0
        current += b
    if current > 0:
        chunks.append(current)
    return chunks


def plan_tiles(footprints, config):
    '''Split a layer into tiles whose working sets fit one ping-pong half of
    each global buffer.

    Parameters
    ----------
    footprints: list of TensorFootprint
        Tensors touched by the layer.
    config: MemConfig
        Buffer capacities.

    Returns
    -------
    plan: TilePlan
        Stationary chunks form the outer loop and streamed chunks the inner
        loop. Streamed chunks are fetched again for every outer tile unless
        a single chunk holds the whole tensor.
    '''
    capacity = {'weight': config.weight_partition_bits,
                'ttb': config.ttb_partition_bits}
    shares = {}
    for glb in _GLBS:
        residents = [f for f in footprints if f.glb == glb]
        if residents:
            shares.update(_shares(residents, capacity[glb]))

    chunks = {f.name: _chunks(f, shares[f.name])
              for f in footprints if f.role != 'output'}
    stationary = [f for f in footprints if f.role == 'stationary']
    streamed = [f for f in footprints if f.role == 'streamed']
    outputs = [f for f in footprints if f.role == 'output']
    for f in outputs:
        # output rows must fit too, even though they are drained per tile
        _chunks(f, shares[f.name])

    n_outer = max([len(chunks[f.name]) for f in stationary] + [1])
    n_inner = max([len(chunks[f.name]) for f in streamed] + [1])

    reads = []
    for o in range(n_outer):
        for i in range(n_inner):
            tile = {}
            for f in stationary:
                c = chunks[f.name]
                if i == 0 and o < len(c):
                    tile[f.name] = -(-c[o] // 8)
            for f in streamed:
                c = chunks[f.name]
                if i < len(c) and (o == 0 or len(c) > 1):
                    tile[f.name] = -(-c[i] // 8)
            reads.append(tile)

    n = len(reads)
    writes = [0] * n
    for f in outputs:
        base, rem = divmod(f.nbytes, n)
        for j in range(n):
            writes[j] += base + (1 if j < rem else 0)

    plan = TilePlan(reads, writes, footprints)
    logger.debug('Planned %d x %d tiles over %s: %d bytes read, '
                 '%d bytes written', n_outer, n_inner,
                 [f.name for f in footprints], plan.read_bytes(),
                 plan.write_bytes())
    return plan


def record_plan(mem, plan):
    '''Charge the DRAM transfers of a plan and the buffer accesses they
    cause to a memory system.'''
    cfg = mem.config
    mem.record_event('dram_read', plan.read_bytes())
    mem.record_event('dram_write', plan.write_bytes())
    for name, fp in plan.footprints.items():
        nbits = plan.read_bytes(name) * 8
        if fp.role == 'output':
            nbits = fp.nbytes * 8
            mem.record_event('ttb_glb_read', -(-nbits // cfg.ttb_word_bits))
        elif fp.glb == 'weight':
            mem.record_event('weight_glb_write',
                             -(-nbits // cfg.weight_port_bits))
        else:
            mem.record_event('ttb_glb_write', -(-nbits // cfg.ttb_word_bits))
