"""Static model of a 2D-mesh manycore: coordinates, addressing, write timing.

The modeled chip is an Adapteva Epiphany style mesh: every core has a small
local memory that is directly addressable from any other core through a
flat 32-bit address space, and remote stores travel the on-chip write
network (XY routed, 8 bytes per cycle per link, zero start-up cost).
Only the write network exists here; reads are always local.
"""

from __future__ import annotations

from dataclasses import dataclass


class InvalidCoreError(ValueError):
    """Coordinate outside the configured mesh."""


class AddressRangeError(ValueError):
    """Offset outside a core's local memory."""


# Address layout: 6-bit row | 6-bit col | 20-bit offset (4096-core ceiling).
_ROW_SHIFT = 26
_COL_SHIFT = 20
_COORD_MASK = 0x3F
_OFFSET_MASK = 0xFFFFF


@dataclass(frozen=True, order=True)
class CoreId:
    row: int
    col: int

    def __str__(self) -> str:
        return f"({self.row},{self.col})"


@dataclass(frozen=True)
class MeshConfig:
    """Mesh geometry and timing parameters.

    Defaults describe the 64-core Epiphany-IV: 8x8 grid, 32 kB local memory
    per core, 600 MHz system clock, 8 bytes/cycle write links. The per-hop
    router latency is not published; 1 cycle is a configurable estimate.
    """

    rows: int = 8
    cols: int = 8
    local_mem_bytes: int = 32768
    hop_cycles: int = 1
    link_bytes_per_cycle: int = 8
    clock_hz: float = 600e6

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise ValueError(f"mesh must have at least one core, got {self.rows}x{self.cols}")
        if self.rows > _COORD_MASK + 1 or self.cols > _COORD_MASK + 1:
            raise ValueError("mesh dimensions exceed the 6-bit coordinate space")
        if self.local_mem_bytes <= 0:
            raise ValueError("local_mem_bytes must be positive")
        if self.local_mem_bytes > _OFFSET_MASK + 1:
            raise ValueError("local_mem_bytes exceeds the 20-bit offset space")
        if self.hop_cycles < 0:
            raise ValueError("hop_cycles must be non-negative")
        if self.link_bytes_per_cycle <= 0:
            raise ValueError("link_bytes_per_cycle must be positive")
        if self.clock_hz <= 0:
            raise ValueError("clock_hz must be positive")

    def contains(self, core: CoreId) -> bool:
        return 0 <= core.row < self.rows and 0 <= core.col < self.cols

    def check_core(self, core: CoreId) -> None:
        if not self.contains(core):
            raise InvalidCoreError(f"core {core} outside {self.rows}x{self.cols} mesh")

    def all_cores(self) -> list[CoreId]:
        """All cores in (row, col) lexicographic order."""
        return [CoreId(r, c) for r in range(self.rows) for c in range(self.cols)]


@dataclass(frozen=True)
class GlobalAddress:
    """Flat 32-bit address: row in bits 31:26, col in 25:20, offset in 19:0."""

    raw: int

    def __post_init__(self) -> None:
        if not 0 <= self.raw < 2**32:
            raise ValueError(f"address {self.raw:#x} not a 32-bit value")

    @property
    def row(self) -> int:
        return (self.raw >> _ROW_SHIFT) & _COORD_MASK

    @property
    def col(self) -> int:
        return (self.raw >> _COL_SHIFT) & _COORD_MASK

    @property
    def offset(self) -> int:
        return self.raw & _OFFSET_MASK

    def __str__(self) -> str:
        return f"{self.raw:#010x}"


def compose_address(core: CoreId, offset: int, cfg: MeshConfig | None = None) -> GlobalAddress:
    """Build the global address of `offset` inside `core`'s local memory."""
    if cfg is not None:
        cfg.check_core(core)
        if not 0 <= offset < cfg.local_mem_bytes:
            raise AddressRangeError(f"offset {offset} outside local memory of {cfg.local_mem_bytes} bytes")
    elif not 0 <= offset <= _OFFSET_MASK:
        raise AddressRangeError(f"offset {offset} outside the 20-bit offset field")
    return GlobalAddress((core.row << _ROW_SHIFT) | (core.col << _COL_SHIFT) | offset)


def resolve_address(addr: GlobalAddress, cfg: MeshConfig) -> tuple[CoreId, int]:
    """Split a global address into (core, local offset), validating both."""
    core = CoreId(addr.row, addr.col)
    cfg.check_core(core)
    if addr.offset >= cfg.local_mem_bytes:
        raise AddressRangeError(
            f"offset {addr.offset} of address {addr} outside local memory of {cfg.local_mem_bytes} bytes"
        )
    return core, addr.offset


def hop_distance(src: CoreId, dst: CoreId, cfg: MeshConfig) -> int:
    """Router hops between two cores under XY (Manhattan) routing."""
    cfg.check_core(src)
    cfg.check_core(dst)
    return abs(src.row - dst.row) + abs(src.col - dst.col)


def write_delivery_cycle(issue: int, src: CoreId, dst: CoreId, payload: int, cfg: MeshConfig) -> int:
    """Cycle at which a write issued at `issue` becomes visible at `dst`.

    Local writes are visible at the issue cycle. Remote writes pay one
    hop_cycles charge per router hop plus payload serialization at
    link_bytes_per_cycle, with no start-up cost.
    """
    if payload < 1:
        raise ValueError("payload must be at least 1 byte")
    hops = hop_distance(src, dst, cfg)
    if hops == 0:
        return issue
    serialization = -(-payload // cfg.link_bytes_per_cycle)
    return issue + hops * cfg.hop_cycles + serialization
