"""Deployment builders: map the receiver chain onto mesh cores.

Three deployment styles are supported for one 256-sample symbol:

* case I: every kernel sequentially on a single core (reference),
* case II: one kernel per core, whole-symbol handoffs (task parallel),
* case III: the IFFT data-parallel over a sub-grid, then a deinterleave
  core feeding a demap core in blocks (data parallel + pipelined).

Kernel cycle costs are injected from a Calibration rather than derived from
the Python math: the defaults are single-core hardware measurements of each
kernel on a 600 MHz Epiphany-IV. What the simulator adds on top of them is
the movement and synchronization arithmetic.

Producers stream their output while computing: the block store is issued
inside the compute window with just enough lead for the payload to finish
serializing by compute end, and the flag signal follows it on the same
route, so the consumer wakes a handful of cycles after the producer's
kernel is done. This mirrors hardware, where remote stores retire at the
same rate as local ones and only the mesh travel is extra.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .engine import Compute, Probe, RemoteWrite, TaskProgram, Timeline, run
from .kernels import ParallelFftPlan
from .mesh import CoreId, MeshConfig, compose_address
from .sync import FLAG_BYTES, MAX_DETECT_CYCLES, FlagChannel, emit_barrier, emit_signal, emit_wait

CALIBRATED = "calibrated"
COUNTED = "counted"

SYMBOL_SIZE = 256
DEINT_ROWS = 16
DEINT_COLS = 16

# Per-core memory map (byte offsets). Flags live below 0x1000.
DATA_FLAG = 0x0000      # + parity * 4, at the consumer
CREDIT_FLAG = 0x0010    # + parity * 4, at the producer
GATHER_FLAG = 0x0080    # + producer index * 4, at the gathering core
BARRIER_FLAG = 0x0100   # + (stage * 32 + producer index) * 4
IN_BUF = 0x1000
WORK_A = 0x2000
WORK_B = 0x2800
OUT_BUF = 0x3000

_KERNELS = ("ifft", "deint", "demap")
SWEEP_CORE_COUNTS = (1, 2, 4, 8, 16, 32)


@dataclass(frozen=True)
class Calibration:
    """Injected cycle costs and sync-cost parameters.

    ``detect_cycles`` is the consumer-side charge applied when a single flag
    wait completes; the inline poll costs at most 6 cycles on hardware and
    its fall-through latency hides inside the flag's mesh delivery, so the
    default charge is 0. ``barrier_poll_cycles`` is the per-flag cost of the
    sequentially polled multi-flag barrier loop used between IFFT exchange
    stages; it is a calibration scalar fitted against the measured 8-core
    IFFT latency of 2958 cycles (see README for the fit procedure).
    """

    ifft_cycles: int = 18862
    deint_cycles: int = 45043
    demap_cycles: int = 46377
    detect_cycles: int = 0
    barrier_poll_cycles: int = 26
    mode: str = CALIBRATED
    butterfly_cycles: int = 18
    deint_sample_cycles: int = 176
    demap_sample_cycles: int = 181

    def __post_init__(self) -> None:
        for name in ("ifft_cycles", "deint_cycles", "demap_cycles", "butterfly_cycles",
                     "deint_sample_cycles", "demap_sample_cycles"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if not 0 <= self.detect_cycles <= MAX_DETECT_CYCLES:
            raise ValueError(f"detect_cycles must be within [0, {MAX_DETECT_CYCLES}]")
        if self.barrier_poll_cycles < 0:
            raise ValueError("barrier_poll_cycles must be non-negative")
        if self.mode not in (CALIBRATED, COUNTED):
            raise ValueError(f"unknown cost mode {self.mode!r}")

    def total(self, kernel: str) -> int:
        if kernel == "ifft":
            return self.ifft_cycles
        if kernel == "deint":
            return self.deint_cycles
        if kernel == "demap":
            return self.demap_cycles
        raise ValueError(f"unknown kernel {kernel!r}")


def _round_div(num: int, den: int) -> int:
    """Round-to-nearest integer division, halves away from zero."""
    return (num + den // 2) // den


def kernel_cost(kernel: str, samples: int, cal: Calibration) -> int:
    """Cycle cost of running `kernel` over `samples` of the 256-sample symbol."""
    if kernel not in _KERNELS:
        raise ValueError(f"unknown kernel {kernel!r}")
    if not 1 <= samples <= SYMBOL_SIZE:
        raise ValueError(f"samples must be in 1..{SYMBOL_SIZE}, got {samples}")
    if cal.mode == COUNTED:
        if kernel == "ifft":
            # proportional share of the (n/2) log2(n) butterflies
            return 4 * samples * cal.butterfly_cycles
        unit = cal.deint_sample_cycles if kernel == "deint" else cal.demap_sample_cycles
        return samples * unit
    return _round_div(cal.total(kernel) * samples, SYMBOL_SIZE)


def _ifft_stage_cost(plan: ParallelFftPlan, cal: Calibration) -> int:
    """Cost of one core's share of one butterfly stage."""
    pairs = plan.block // 2
    if cal.mode == COUNTED:
        return pairs * cal.butterfly_cycles
    total_pairs = (plan.n // 2) * (plan.n.bit_length() - 1)
    return _round_div(cal.ifft_cycles * pairs, total_pairs)


@dataclass(frozen=True)
class StageSpan:
    """A named latency span, measured between two probe labels."""

    name: str
    start: str
    end: str


@dataclass
class DeploymentPlan:
    case: str
    programs: list[TaskProgram]
    channels: list[FlagChannel]          # forward data channels
    credit_channels: list[FlagChannel]   # reverse one-block-ahead credits
    block_size: int
    ifft_cores: int
    placement: dict[str, CoreId]
    task_spans: list[StageSpan]          # per-task latency reporting
    throughput_spans: list[StageSpan]    # spans whose maximum bounds the symbol rate
    output_core: CoreId
    output_offset: int
    output_count: int                    # float32 LLR count

    def chain_output(self, timeline: Timeline) -> np.ndarray:
        """The soft-bit output the demapping task produced."""
        mem = timeline.memories[self.output_core]
        return mem.read_f32(self.output_offset, self.output_count)


def _stream_block(
    prog: TaskProgram,
    cost: int,
    action,
    src_offset: int,
    nbytes: int,
    dst_core: CoreId,
    dst_offset: int,
    flag: FlagChannel,
    cfg: MeshConfig,
) -> TaskProgram:
    """Compute a block and stream it to its consumer, then signal.

    The store is issued `lead` cycles before the compute window closes so the
    payload has finished serializing when the kernel has; the flag follows on
    the same route and is therefore delivered after the data.
    """
    serialization = -(-nbytes // cfg.link_bytes_per_cycle)
    lead = min(serialization, cost)
    prog = prog.append(Compute(cost - lead, action))
    prog = prog.append(RemoteWrite(compose_address(dst_core, dst_offset, cfg), nbytes, src_offset=src_offset))
    prog = prog.append(Compute(lead))
    return emit_signal(prog, flag, cfg)


def _loader(x: np.ndarray, offset: int, credits: tuple[int, ...] = ()):
    """Zero-cost action preloading a core's input and pre-granting credits."""
    data = np.asarray(x, np.complex64)

    def act(mem) -> None:
        mem.write_c64(offset, data)
        for off in credits:
            mem.write_i32(off, 1)

    return act


def _deint_permutation(n: int) -> np.ndarray:
    return kernels.deinterleave(np.arange(n), DEINT_ROWS, DEINT_COLS)


def _build_case1(x, cal: Calibration, cfg: MeshConfig, scheme: str, noise_var: float) -> DeploymentPlan:
    core = CoreId(0, 0)
    n = len(x)
    perm = _deint_permutation(n)
    bps = kernels.bits_per_symbol(scheme)

    def do_ifft(mem) -> None:
        mem.write_c64(WORK_A, kernels.ifft(mem.read_c64(IN_BUF, n)))

    def do_deint(mem) -> None:
        mem.write_c64(WORK_B, mem.read_c64(WORK_A, n)[perm])

    def do_demap(mem) -> None:
        mem.write_f32(OUT_BUF, kernels.demap(mem.read_c64(WORK_B, n), scheme, noise_var))

    prog = TaskProgram(core).append(
        Compute(0, _loader(x, IN_BUF)),
        Probe("chain_start"),
        Compute(kernel_cost("ifft", n, cal), do_ifft),
        Probe("ifft_done"),
        Compute(kernel_cost("deint", n, cal), do_deint),
        Probe("deint_done"),
        Compute(kernel_cost("demap", n, cal), do_demap),
        Probe("chain_end"),
    )
    tasks = [
        StageSpan("ifft", "chain_start", "ifft_done"),
        StageSpan("deint", "ifft_done", "deint_done"),
        StageSpan("demap", "deint_done", "chain_end"),
    ]
    return DeploymentPlan(
        case="I",
        programs=[prog],
        channels=[],
        credit_channels=[],
        block_size=n,
        ifft_cores=1,
        placement={"chain": core},
        task_spans=tasks,
        throughput_spans=[StageSpan("chain", "chain_start", "chain_end")],
        output_core=core,
        output_offset=OUT_BUF,
        output_count=n * bps,
    )


def _build_case2(x, cal: Calibration, cfg: MeshConfig, scheme: str, noise_var: float) -> DeploymentPlan:
    n = len(x)
    a, b, c = CoreId(0, 0), CoreId(0, 1), CoreId(0, 2)
    for core in (a, b, c):
        cfg.check_core(core)
    perm = _deint_permutation(n)
    bps = kernels.bits_per_symbol(scheme)
    ch_ab = FlagChannel(b, DATA_FLAG)
    ch_bc = FlagChannel(c, DATA_FLAG)

    def do_ifft(mem) -> None:
        mem.write_c64(WORK_A, kernels.ifft(mem.read_c64(IN_BUF, n)))

    prog_a = TaskProgram(a).append(Compute(0, _loader(x, IN_BUF)), Probe("chain_start"))
    prog_a = _stream_block(
        prog_a, kernel_cost("ifft", n, cal), do_ifft, WORK_A, 8 * n, b, IN_BUF, ch_ab, cfg
    )
    prog_a = prog_a.append(Probe("ifft_done"))

    def do_deint(mem) -> None:
        mem.write_c64(WORK_A, mem.read_c64(IN_BUF, n)[perm])

    prog_b = TaskProgram(b)
    prog_b = emit_wait(prog_b, ch_ab, detect_cycles=cal.detect_cycles)
    prog_b = prog_b.append(Probe("deint_start"))
    prog_b = _stream_block(
        prog_b, kernel_cost("deint", n, cal), do_deint, WORK_A, 8 * n, c, IN_BUF, ch_bc, cfg
    )
    prog_b = prog_b.append(Probe("deint_done"))

    def do_demap(mem) -> None:
        mem.write_f32(OUT_BUF, kernels.demap(mem.read_c64(IN_BUF, n), scheme, noise_var))

    prog_c = TaskProgram(c)
    prog_c = emit_wait(prog_c, ch_bc, detect_cycles=cal.detect_cycles)
    prog_c = prog_c.append(
        Probe("demap_start"),
        Compute(kernel_cost("demap", n, cal), do_demap),
        Probe("chain_end"),
    )

    tasks = [
        StageSpan("ifft", "chain_start", "ifft_done"),
        StageSpan("deint", "deint_start", "deint_done"),
        StageSpan("demap", "demap_start", "chain_end"),
    ]
    return DeploymentPlan(
        case="II",
        programs=[prog_a, prog_b, prog_c],
        channels=[ch_ab, ch_bc],
        credit_channels=[],
        block_size=n,
        ifft_cores=1,
        placement={"ifft": a, "deint": b, "demap": c},
        task_spans=tasks,
        throughput_spans=tasks,
        output_core=c,
        output_offset=OUT_BUF,
        output_count=n * bps,
    )


def ifft_subgrid(n_cores: int, cfg: MeshConfig) -> list[CoreId]:
    """Contiguous near-square sub-grid for the parallel IFFT, anchored at (0,0)."""
    bits = n_cores.bit_length() - 1
    rows = 1 << (bits // 2)
    cols = 1 << (bits - bits // 2)
    if rows > cfg.rows or cols > cfg.cols:
        raise ValueError(f"{rows}x{cols} IFFT sub-grid does not fit the {cfg.rows}x{cfg.cols} mesh")
    return [CoreId(r, c) for r in range(rows) for c in range(cols)]


def _barrier_offset(stage: int, producer: int) -> int:
    return BARRIER_FLAG + (stage * 32 + producer) * FLAG_BYTES


def build_parallel_ifft_programs(
    x: np.ndarray,
    plan: ParallelFftPlan,
    cores: list[CoreId],
    cal: Calibration,
    cfg: MeshConfig,
    gather_core: CoreId | None = None,
    gather_offset: int = IN_BUF,
    probe_start: bool = True,
) -> list[TaskProgram]:
    """One program per IFFT core: local stages, exchange stages with a full
    barrier between them, optional gather of the scattered result."""
    n = plan.n
    nc = plan.n_cores
    rev = np.asarray(x, np.complex64)[kernels.bit_reverse_indices(n)]
    stage_cost = _ifft_stage_cost(plan, cal)
    half_bytes = 8 * (plan.block // 2)

    programs = []
    for i in range(nc):
        core = cores[i]
        prog = TaskProgram(core).append(
            Compute(0, _loader(rev[i * plan.block : (i + 1) * plan.block], IN_BUF))
        )
        if probe_start and i == 0:
            prog = prog.append(Probe("chain_start"))

        if nc == 1:
            def whole(mem, _n=n, _bits=plan.local_stages) -> None:
                buf = mem.read_c64(IN_BUF, _n)
                kernels.stages_inplace(buf, 0, _bits)
                mem.write_c64(IN_BUF, buf)

            prog = prog.append(Compute(cal.ifft_cycles if cal.mode == CALIBRATED
                                       else kernel_cost("ifft", n, cal), whole))
        else:
            for t in range(plan.local_stages):
                def local_stage(mem, _t=t, _b=plan.block) -> None:
                    buf = mem.read_c64(IN_BUF, _b)
                    kernels.stages_inplace(buf, _t, _t + 1)
                    mem.write_c64(IN_BUF, buf)

                prog = prog.append(Compute(stage_cost, local_stage))

            for st in plan.exchange_stages:
                partner = cores[i ^ st.core_mask]
                src = IN_BUF + (half_bytes if st.send_upper[i] else 0)
                staging = WORK_A + st.index * half_bytes
                prog = prog.append(
                    RemoteWrite(compose_address(partner, staging, cfg), half_bytes, src_offset=src)
                )
                for k in range(nc):  # signal everyone, then poll everyone
                    if k != i:
                        prog = emit_signal(prog, FlagChannel(cores[k], _barrier_offset(st.index, i)), cfg)
                for k in range(nc):
                    if k != i:
                        prog = emit_wait(
                            prog,
                            FlagChannel(core, _barrier_offset(st.index, k)),
                            detect_cycles=cal.barrier_poll_cycles,
                        )

                def exchange(mem, _st=st, _i=i, _b=plan.block, _staging=staging) -> None:
                    buf = mem.read_c64(IN_BUF, _b)
                    staged = mem.read_c64(_staging, _b // 2)
                    mem.write_c64(IN_BUF, kernels.exchange_compute(buf, staged, _st, _i))

                prog = prog.append(Compute(stage_cost, exchange))

        if gather_core is not None:
            for pos, g, length in plan.output_runs(i):
                prog = prog.append(
                    RemoteWrite(
                        compose_address(gather_core, gather_offset + 8 * g, cfg),
                        8 * length,
                        src_offset=IN_BUF + 8 * pos,
                    )
                )
            prog = emit_signal(prog, FlagChannel(gather_core, GATHER_FLAG + i * FLAG_BYTES), cfg)
        programs.append(prog)
    return programs


def _build_pipe_programs(
    y_preload: np.ndarray | None,
    n: int,
    block_size: int,
    producer: CoreId,
    consumer: CoreId,
    cal: Calibration,
    cfg: MeshConfig,
    scheme: str,
    noise_var: float,
    entry_channels: list[FlagChannel] | None = None,
) -> tuple[TaskProgram, TaskProgram, list[FlagChannel], list[FlagChannel]]:
    """Deinterleave feeding demap in blocks with one-block-ahead crediting.

    Two block slots at the consumer alternate by parity; a parity's data flag
    may be re-signaled only after its credit came back, which the consumer
    sends once it has consumed the slot.
    """
    if n % block_size:
        raise ValueError(f"block size {block_size} does not divide {n}")
    nblocks = n // block_size
    perm = _deint_permutation(n)
    bps = kernels.bits_per_symbol(scheme)
    parities = min(2, nblocks)
    data_flags = [FlagChannel(consumer, DATA_FLAG + p * FLAG_BYTES) for p in range(parities)]
    credit_flags = [FlagChannel(producer, CREDIT_FLAG + p * FLAG_BYTES) for p in range(parities)]
    block_bytes = 8 * block_size

    load = _loader(
        y_preload if y_preload is not None else np.zeros(n, np.complex64),
        IN_BUF,
        credits=tuple(ch.flag_offset for ch in credit_flags),
    )
    prod = TaskProgram(producer).append(Compute(0, load))
    if entry_channels:
        prod = emit_barrier(prod, entry_channels, detect_cycles=cal.detect_cycles)
    prod = prod.append(Probe("pipe_start"))
    d_cost = kernel_cost("deint", block_size, cal)
    for k in range(nblocks):
        p = k % parities

        def deint_block(mem, _k=k, _n=n, _b=block_size, _perm=perm) -> None:
            y = mem.read_c64(IN_BUF, _n)
            mem.write_c64(WORK_A, y[_perm[_k * _b : (_k + 1) * _b]])

        prod = emit_wait(prod, credit_flags[p], detect_cycles=cal.detect_cycles)
        prod = _stream_block(
            prod, d_cost, deint_block, WORK_A, block_bytes,
            consumer, IN_BUF + p * block_bytes, data_flags[p], cfg,
        )
    prod = prod.append(Probe("deint_done"))

    cons = TaskProgram(consumer)
    m_cost = kernel_cost("demap", block_size, cal)
    for k in range(nblocks):
        p = k % parities

        def demap_block(mem, _k=k, _b=block_size, _p=p) -> None:
            block = mem.read_c64(IN_BUF + _p * 8 * _b, _b)
            mem.write_f32(OUT_BUF + _k * _b * bps * 4, kernels.demap(block, scheme, noise_var))

        cons = emit_wait(cons, data_flags[p], detect_cycles=cal.detect_cycles)
        cons = cons.append(Compute(m_cost, demap_block))
        if k == nblocks - 1:
            cons = cons.append(Probe("chain_end"))
        cons = emit_signal(cons, credit_flags[p], cfg)
    return prod, cons, data_flags, credit_flags


def _build_case3(
    x, cal: Calibration, cfg: MeshConfig, block_size: int, n_cores_ifft: int,
    scheme: str, noise_var: float,
) -> DeploymentPlan:
    n = len(x)
    plan = kernels.plan_parallel_ifft(n, n_cores_ifft)
    grid = ifft_subgrid(n_cores_ifft, cfg)
    taken = set(grid)
    free = [c for c in cfg.all_cores() if c not in taken]
    if len(free) < 2:
        raise ValueError("mesh too small for the pipelined pair next to the IFFT sub-grid")
    deint_core, demap_core = free[0], free[1]

    gather_channels = [FlagChannel(deint_core, GATHER_FLAG + i * FLAG_BYTES) for i in range(n_cores_ifft)]
    ifft_programs = build_parallel_ifft_programs(
        x, plan, grid, cal, cfg, gather_core=deint_core, gather_offset=IN_BUF
    )
    prod, cons, data_flags, credit_flags = _build_pipe_programs(
        None, n, block_size, deint_core, demap_core, cal, cfg, scheme, noise_var,
        entry_channels=gather_channels,
    )
    tasks = [
        StageSpan("ifft", "chain_start", "pipe_start"),
        StageSpan("deint+demap", "pipe_start", "chain_end"),
    ]
    return DeploymentPlan(
        case="III",
        programs=ifft_programs + [prod, cons],
        channels=gather_channels + data_flags,
        credit_channels=credit_flags,
        block_size=block_size,
        ifft_cores=n_cores_ifft,
        placement={"ifft": grid[0], "deint": deint_core, "demap": demap_core},
        task_spans=tasks,
        throughput_spans=tasks,
        output_core=demap_core,
        output_offset=OUT_BUF,
        output_count=n * kernels.bits_per_symbol(scheme),
    )


def build_case(
    case: int,
    cal: Calibration | None = None,
    cfg: MeshConfig | None = None,
    block_size: int | None = None,
    n_cores_ifft: int = 8,
    symbol: np.ndarray | None = None,
    seed: int = 0,
    scheme: str = kernels.QAM16,
    noise_var: float = 1.0,
) -> DeploymentPlan:
    """Build the deployment for one of the three cases.

    Case I ignores block_size and n_cores_ifft; case II always hands the
    symbol over whole (block 256); case III defaults to 1-sample blocks and
    8 IFFT cores.
    """
    cal = cal or Calibration()
    cfg = cfg or MeshConfig()
    x = np.asarray(symbol, np.complex64) if symbol is not None else kernels.random_symbol(
        SYMBOL_SIZE, scheme, seed
    )
    if len(x) != SYMBOL_SIZE:
        raise ValueError(f"the receiver chain processes {SYMBOL_SIZE}-sample symbols, got {len(x)}")
    if case == 1:
        return _build_case1(x, cal, cfg, scheme, noise_var)
    if case == 2:
        return _build_case2(x, cal, cfg, scheme, noise_var)
    if case == 3:
        block = 1 if block_size is None else block_size
        if block < 1 or SYMBOL_SIZE % block:
            raise ValueError(f"block size {block} does not divide {SYMBOL_SIZE}")
        if n_cores_ifft not in SWEEP_CORE_COUNTS:
            raise ValueError(f"IFFT core count must be one of {SWEEP_CORE_COUNTS}")
        return _build_case3(x, cal, cfg, block, n_cores_ifft, scheme, noise_var)
    raise ValueError(f"unknown case {case}; expected 1, 2 or 3")


def run_plan(plan: DeploymentPlan, cfg: MeshConfig, watchdog: int | None = None) -> Timeline:
    if watchdog is None:
        return run(plan.programs, cfg)
    return run(plan.programs, cfg, watchdog)


def parallel_ifft_latency_model(
    n_cores: int,
    cal: Calibration | None = None,
    cfg: MeshConfig | None = None,
    symbol: np.ndarray | None = None,
) -> int:
    """Latency of the stand-alone n-core IFFT, obtained by simulation."""
    cal = cal or Calibration()
    cfg = cfg or MeshConfig()
    if n_cores not in SWEEP_CORE_COUNTS:
        raise ValueError(f"IFFT core count must be one of {SWEEP_CORE_COUNTS}")
    x = symbol if symbol is not None else kernels.random_symbol(SYMBOL_SIZE, kernels.QAM16, 0)
    plan = kernels.plan_parallel_ifft(len(x), n_cores)
    programs = build_parallel_ifft_programs(
        x, plan, ifft_subgrid(n_cores, cfg), cal, cfg, gather_core=None, probe_start=False
    )
    return run(programs, cfg).finish


def ifft_sweep(
    core_counts: list[int],
    cal: Calibration | None = None,
    cfg: MeshConfig | None = None,
    symbol: np.ndarray | None = None,
) -> list[tuple[int, int]]:
    """(n_cores, cycles) rows, ordered by core count."""
    return [
        (nc, parallel_ifft_latency_model(nc, cal, cfg, symbol)) for nc in sorted(core_counts)
    ]


def blocksize_sweep_point(
    block_size: int,
    cal: Calibration | None = None,
    cfg: MeshConfig | None = None,
    symbol: np.ndarray | None = None,
) -> int:
    """Latency of the stand-alone pipelined deinterleave+demap pair."""
    cal = cal or Calibration()
    cfg = cfg or MeshConfig()
    x = symbol if symbol is not None else kernels.random_symbol(SYMBOL_SIZE, kernels.QAM16, 0)
    y = kernels.ifft(x)
    prod, cons, _, _ = _build_pipe_programs(
        y, len(x), block_size, CoreId(0, 0), CoreId(0, 1), cal, cfg, kernels.QAM16, 1.0
    )
    t = run([prod, cons], cfg)
    return t.probe_cycle("chain_end") - t.probe_cycle("pipe_start")


def blocksize_sweep(
    block_sizes: list[int],
    cal: Calibration | None = None,
    cfg: MeshConfig | None = None,
    symbol: np.ndarray | None = None,
) -> list[tuple[int, int]]:
    """(block_size, cycles) rows, ordered by block size."""
    return [(b, blocksize_sweep_point(b, cal, cfg, symbol)) for b in sorted(block_sizes)]
