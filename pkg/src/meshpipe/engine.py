"""Deterministic cycle-stepped execution engine.

Each core runs one straight-line task program; the engine advances a global
cycle counter and reproduces the cost model of the mesh write network.

Timing conventions, chosen once and kept bit-stable:

* An instruction that starts at cycle T with duration d makes its core ready
  again at T + d.
* ``Compute(cost, action)`` occupies the core for ``cost`` cycles. The action
  mutates local memory at the start of the window; remote writes emitted
  afterwards by the program therefore snapshot finished values. This models
  kernels that stream their output stores while they run.
* ``RemoteWrite`` costs the producer exactly one cycle (a store retires per
  cycle; the network needs no start-up). The payload becomes visible at the
  destination at ``write_delivery_cycle(T + 1, ...)``. Writes between the
  same (src, dst) pair are never reordered.
* A blocked ``WaitFlag`` re-checks its flag word every cycle; when the flag
  equals ``expected`` it is atomically rewritten to ``clear_to`` and the core
  is charged ``detect_cycles`` of occupancy. Blocked-idle cycles are not
  occupancy.
* Deliveries land at the start of their cycle, before any core steps; cores
  step in (row, col) lexicographic order. Repeated runs of identical inputs
  are byte-identical.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .mesh import (
    AddressRangeError,
    CoreId,
    GlobalAddress,
    MeshConfig,
    resolve_address,
    write_delivery_cycle,
)

DEFAULT_WATCHDOG = 10**8

_I32 = np.dtype("<i4")


class DeadlockError(RuntimeError):
    """No core can make progress, or the watchdog budget was exhausted."""


class OverrunError(RuntimeError):
    """A flag was re-signaled before its consumer cleared it."""


class CoreMemory:
    """One core's local memory: a bounds-checked bytearray with typed views."""

    def __init__(self, size: int):
        self.size = size
        self._buf = bytearray(size)

    def _check(self, offset: int, nbytes: int) -> None:
        if offset < 0 or offset + nbytes > self.size:
            raise AddressRangeError(
                f"access [{offset}, {offset + nbytes}) outside local memory of {self.size} bytes"
            )

    def read_bytes(self, offset: int, nbytes: int) -> bytes:
        self._check(offset, nbytes)
        return bytes(self._buf[offset : offset + nbytes])

    def write_bytes(self, offset: int, data: bytes) -> None:
        self._check(offset, len(data))
        self._buf[offset : offset + len(data)] = data

    def read_i32(self, offset: int) -> int:
        self._check(offset, 4)
        return int(np.frombuffer(self._buf, _I32, count=1, offset=offset)[0])

    def write_i32(self, offset: int, value: int) -> None:
        self.write_bytes(offset, np.int32(value).tobytes())

    def read_c64(self, offset: int, count: int) -> np.ndarray:
        self._check(offset, 8 * count)
        return np.frombuffer(self._buf, np.complex64, count=count, offset=offset).copy()

    def write_c64(self, offset: int, values: np.ndarray) -> None:
        self.write_bytes(offset, np.asarray(values, np.complex64).tobytes())

    def read_f32(self, offset: int, count: int) -> np.ndarray:
        self._check(offset, 4 * count)
        return np.frombuffer(self._buf, np.float32, count=count, offset=offset).copy()

    def write_f32(self, offset: int, values: np.ndarray) -> None:
        self.write_bytes(offset, np.asarray(values, np.float32).tobytes())


Action = Callable[[CoreMemory], None]


@dataclass(frozen=True)
class Compute:
    """Occupy the core for `cost` cycles, applying `action` to local memory."""

    cost: int
    action: Action | None = None

    def __post_init__(self) -> None:
        if self.cost < 0:
            raise ValueError("compute cost must be non-negative")


@dataclass(frozen=True)
class RemoteWrite:
    """Store into the memory named by a global address (1 issue cycle).

    The payload is either the immediate `imm` bytes, or a snapshot of the
    executing core's own memory at [src_offset, src_offset + nbytes) taken at
    issue time. Data is always read locally and written remotely.
    """

    dst: GlobalAddress
    nbytes: int
    src_offset: int | None = None
    imm: bytes | None = None

    def __post_init__(self) -> None:
        if (self.src_offset is None) == (self.imm is None):
            raise ValueError("exactly one of src_offset and imm must be given")
        if self.imm is not None and len(self.imm) != self.nbytes:
            raise ValueError("imm length disagrees with nbytes")
        if self.nbytes < 1:
            raise ValueError("remote write payload must be at least 1 byte")


@dataclass(frozen=True)
class SetLocalFlag:
    """Store a word into the executing core's own memory (1 cycle)."""

    offset: int
    value: int


@dataclass(frozen=True)
class WaitFlag:
    """Spin on a local flag word until it equals `expected`, then clear it."""

    offset: int
    expected: int = 1
    clear_to: int = -1
    detect_cycles: int = 0


@dataclass(frozen=True)
class Probe:
    """Record (label, core, cycle) in the timeline; free of charge."""

    label: str


Instr = Union[Compute, RemoteWrite, SetLocalFlag, WaitFlag, Probe]


@dataclass(frozen=True)
class TaskProgram:
    core: CoreId
    instrs: tuple[Instr, ...] = ()

    def append(self, *instrs: Instr) -> "TaskProgram":
        return TaskProgram(self.core, self.instrs + instrs)


@dataclass
class DeliveredWrite:
    issue: int
    delivery: int
    src: CoreId
    dst: CoreId
    offset: int
    nbytes: int


@dataclass
class ProbeRecord:
    label: str
    core: CoreId
    cycle: int


@dataclass
class Timeline:
    """Everything a run produced: finish cycles, occupancy, writes, probes."""

    finish: int
    core_finish: dict[CoreId, int]
    core_occupancy: dict[CoreId, int]
    writes: list[DeliveredWrite]
    probes: list[ProbeRecord]
    memories: dict[CoreId, CoreMemory]

    def probe_cycle(self, label: str) -> int:
        for p in self.probes:
            if p.label == label:
                return p.cycle
        raise KeyError(f"no probe labeled {label!r}")


def occupancy(timeline: Timeline, core: CoreId) -> int:
    """Non-idle cycles `core` spent in the run (compute, stores, flag detects)."""
    try:
        return timeline.core_occupancy[core]
    except KeyError:
        raise InvalidTimelineCore(f"core {core} did not participate in the run") from None


class InvalidTimelineCore(KeyError):
    """Queried a core that ran no program."""


@dataclass
class _CoreState:
    program: TaskProgram
    memory: CoreMemory
    pc: int = 0
    ready_at: int = 0
    blocked: bool = False
    occupancy: int = 0
    finish: int = 0

    @property
    def done(self) -> bool:
        return self.pc >= len(self.program.instrs)

    @property
    def waiting_on(self) -> WaitFlag:
        instr = self.program.instrs[self.pc]
        assert isinstance(instr, WaitFlag)
        return instr


def run(
    programs: list[TaskProgram],
    cfg: MeshConfig,
    watchdog: int = DEFAULT_WATCHDOG,
) -> Timeline:
    """Execute one program per core until all finish; deterministic.

    Raises ``DeadlockError`` naming the blocked cores and flags if no progress
    is possible, or if the global cycle counter exceeds ``watchdog``.
    Raises ``OverrunError`` if a set flag is signaled again before its
    consumer cleared it.
    """
    if watchdog <= 0:
        raise ValueError("watchdog must be positive")
    states: dict[CoreId, _CoreState] = {}
    for prog in programs:
        cfg.check_core(prog.core)
        if prog.core in states:
            raise ValueError(f"more than one program for core {prog.core}")
        states[prog.core] = _CoreState(prog, CoreMemory(cfg.local_mem_bytes))
    order = sorted(states)  # lexicographic (row, col) step order

    # Offsets some WaitFlag targets are protocol flags: signaling 1 onto a
    # still-set flag there is an overrun, not a plain data overwrite.
    flag_words: dict[CoreId, set[int]] = {c: set() for c in states}
    for core, st in states.items():
        for instr in st.program.instrs:
            if isinstance(instr, WaitFlag):
                flag_words[core].add(instr.offset)

    pending: list[tuple[int, int, CoreId, int, bytes, CoreId, int]] = []
    seq = 0
    last_route_delivery: dict[tuple[CoreId, CoreId], int] = {}
    writes: list[DeliveredWrite] = []
    probes: list[ProbeRecord] = []

    def apply_write(dst: CoreId, offset: int, data: bytes) -> None:
        if len(data) == 4 and offset in flag_words[dst]:
            incoming = int(np.frombuffer(data, _I32)[0])
            current = states[dst].memory.read_i32(offset)
            if incoming == current == 1:
                raise OverrunError(
                    f"flag at offset {offset:#x} of core {dst} signaled while still set"
                )
        states[dst].memory.write_bytes(offset, data)

    def execute(core: CoreId, st: _CoreState, now: int) -> None:
        """Run instructions until the core blocks, finishes, or leaves `now`."""
        nonlocal seq
        while not st.done and not st.blocked and st.ready_at <= now:
            instr = st.program.instrs[st.pc]
            if isinstance(instr, Compute):
                if instr.action is not None:
                    instr.action(st.memory)
                st.occupancy += instr.cost
                st.ready_at = now + instr.cost
                st.pc += 1
            elif isinstance(instr, RemoteWrite):
                dst, offset = resolve_address(instr.dst, cfg)
                if dst not in states:
                    raise AddressRangeError(f"write to core {dst} which runs no program")
                nbytes = instr.nbytes
                if offset + nbytes > cfg.local_mem_bytes:
                    raise AddressRangeError(
                        f"write [{offset}, {offset + nbytes}) outside local memory of {dst}"
                    )
                data = instr.imm if instr.imm is not None else st.memory.read_bytes(instr.src_offset, nbytes)
                delivery = write_delivery_cycle(now + 1, core, dst, nbytes, cfg)
                route = (core, dst)
                delivery = max(delivery, last_route_delivery.get(route, 0))
                last_route_delivery[route] = delivery
                if dst == core:
                    apply_write(dst, offset, data)
                else:
                    heapq.heappush(pending, (delivery, seq, dst, offset, data, core, now))
                    seq += 1
                writes.append(DeliveredWrite(now, delivery, core, dst, offset, nbytes))
                st.occupancy += 1
                st.ready_at = now + 1
                st.pc += 1
            elif isinstance(instr, SetLocalFlag):
                apply_write(core, instr.offset, np.int32(instr.value).tobytes())
                st.occupancy += 1
                st.ready_at = now + 1
                st.pc += 1
            elif isinstance(instr, WaitFlag):
                if st.memory.read_i32(instr.offset) == instr.expected:
                    st.memory.write_i32(instr.offset, instr.clear_to)
                    st.occupancy += instr.detect_cycles
                    st.ready_at = now + instr.detect_cycles
                    st.pc += 1
                else:
                    st.blocked = True
            else:  # Probe
                probes.append(ProbeRecord(instr.label, core, now))
                st.pc += 1
            if st.done:
                st.finish = st.ready_at

    now = 0
    while True:
        # Next interesting cycle: earliest ready core or earliest delivery.
        candidates = [st.ready_at for st in states.values() if not st.done and not st.blocked]
        if pending:
            candidates.append(pending[0][0])
        if not candidates:
            blocked = [(c, states[c].waiting_on) for c in order if states[c].blocked]
            if blocked:
                detail = "; ".join(
                    f"core {c} waiting for flag at offset {w.offset:#x} == {w.expected}"
                    for c, w in blocked
                )
                raise DeadlockError(f"deadlock: no pending writes and blocked cores remain: {detail}")
            break  # all programs finished
        now = min(candidates)
        if now > watchdog:
            blocked = [str(c) for c in order if states[c].blocked]
            raise DeadlockError(
                f"watchdog of {watchdog} cycles exceeded at cycle {now}; blocked cores: {blocked}"
            )

        delivered_to: set[CoreId] = set()
        while pending and pending[0][0] == now:
            _, _, dst, offset, data, _src, _issue = heapq.heappop(pending)
            apply_write(dst, offset, data)
            delivered_to.add(dst)
        for core in order:
            st = states[core]
            if st.blocked and core in delivered_to:
                st.blocked = False
                st.ready_at = now
            if not st.done and not st.blocked and st.ready_at <= now:
                execute(core, st, now)

    finish = max((st.finish for st in states.values()), default=0)
    return Timeline(
        finish=finish,
        core_finish={c: states[c].finish for c in order},
        core_occupancy={c: states[c].occupancy for c in order},
        writes=writes,
        probes=probes,
        memories={c: states[c].memory for c in order},
    )
