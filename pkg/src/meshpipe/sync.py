"""Producer/consumer flag handshake and multi-producer barriers.

The handshake is one word in the consumer's local memory: the producer
stores 1 into it (one cycle of producer time), the consumer spins until it
reads 1 and rewrites it to -1. Barriers over several producers use one flag
per producer, polled sequentially by the consumer. Re-signaling a flag that
is still set is an overrun and the engine aborts the run.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .engine import RemoteWrite, TaskProgram, WaitFlag
from .mesh import CoreId, MeshConfig, compose_address

FLAG_SET = 1
FLAG_CLEARED = -1
FLAG_BYTES = 4

# An inline single-flag poll costs at most this many consumer cycles on the
# modeled hardware; charged detect costs must stay within it.
MAX_DETECT_CYCLES = 6


class ProtocolError(ValueError):
    """A sync builder was applied to the wrong core or with bad channels."""


@dataclass(frozen=True)
class FlagChannel:
    """A one-way signal: flag word lives in the consumer's local memory."""

    consumer_core: CoreId
    flag_offset: int

    def __post_init__(self) -> None:
        if self.flag_offset < 0 or self.flag_offset % FLAG_BYTES:
            raise ProtocolError(f"flag offset {self.flag_offset:#x} not word aligned")


def emit_signal(program: TaskProgram, channel: FlagChannel, cfg: MeshConfig) -> TaskProgram:
    """Append the producer-side store of 1 into the channel's flag word."""
    dst = compose_address(channel.consumer_core, channel.flag_offset, cfg)
    return program.append(RemoteWrite(dst, FLAG_BYTES, imm=np.int32(FLAG_SET).tobytes()))


def emit_wait(
    program: TaskProgram,
    channel: FlagChannel,
    detect_cycles: int = 0,
) -> TaskProgram:
    """Append the consumer-side spin-and-clear on the channel's flag word."""
    if program.core != channel.consumer_core:
        raise ProtocolError(
            f"wait on channel owned by {channel.consumer_core} emitted into program for {program.core}"
        )
    return program.append(
        WaitFlag(channel.flag_offset, FLAG_SET, FLAG_CLEARED, detect_cycles=detect_cycles)
    )


def emit_barrier(
    program: TaskProgram,
    channels: list[FlagChannel],
    detect_cycles: int = 0,
) -> TaskProgram:
    """Append sequential waits over one flag per joining producer."""
    if not channels:
        raise ProtocolError("barrier needs at least one channel")
    for channel in channels:
        program = emit_wait(program, channel, detect_cycles=detect_cycles)
    return program
