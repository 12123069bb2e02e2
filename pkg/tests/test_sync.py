import pytest

from meshpipe.engine import Compute, TaskProgram, WaitFlag, occupancy, run
from meshpipe.mesh import CoreId, MeshConfig
from meshpipe.sync import (
    MAX_DETECT_CYCLES,
    FlagChannel,
    ProtocolError,
    emit_barrier,
    emit_signal,
    emit_wait,
)

CFG = MeshConfig()
A = CoreId(0, 0)
B = CoreId(0, 1)


def chan(core=B, offset=0x0):
    return FlagChannel(core, offset)


def test_signal_costs_one_producer_cycle():
    prog = emit_signal(TaskProgram(A), chan(), CFG)
    assert len(prog.instrs) == 1
    t = run([prog, TaskProgram(B, (WaitFlag(0x0),))], CFG)
    assert occupancy(t, A) == 1


def test_local_signal_visible_same_cycle():
    prog = emit_signal(TaskProgram(A), chan(A, 0x0), CFG)
    prog = emit_wait(prog, chan(A, 0x0))
    t = run([prog], CFG)
    assert t.core_finish[A] == 1  # just the store; the wait falls through


def test_two_signals_on_distinct_channels():
    prog = emit_signal(TaskProgram(A), chan(B, 0x0), CFG)
    prog = emit_signal(prog, chan(B, 0x4), CFG)
    consumer = emit_barrier(TaskProgram(B), [chan(B, 0x0), chan(B, 0x4)])
    t = run([prog, consumer], CFG)
    assert occupancy(t, A) == 2
    assert t.memories[B].read_i32(0x0) == -1
    assert t.memories[B].read_i32(0x4) == -1


def test_wait_on_wrong_core_is_protocol_misuse():
    with pytest.raises(ProtocolError):
        emit_wait(TaskProgram(A), chan(B, 0x0))


def test_wait_overhead_bounded_when_flag_already_set():
    producer = emit_signal(TaskProgram(A), chan(), CFG)
    consumer = emit_wait(TaskProgram(B, (Compute(100),)), chan())
    t = run([producer, consumer], CFG)
    # flag long delivered when the wait is reached; overhead within the bound
    assert t.core_finish[B] - 100 <= MAX_DETECT_CYCLES


def test_consumer_resumes_at_delivery_plus_detect():
    for detect in (0, 3, 6):
        producer = emit_signal(TaskProgram(A, (Compute(40),)), chan(), CFG)
        consumer = emit_wait(TaskProgram(B), chan(), detect_cycles=detect)
        consumer = consumer.append(Compute(5))
        t = run([producer, consumer], CFG)
        delivery = t.writes[0].delivery
        assert t.core_finish[B] == delivery + detect + 5


def test_flag_cleared_until_next_delivery():
    producer = emit_signal(TaskProgram(A), chan(), CFG)
    consumer = emit_wait(TaskProgram(B), chan())
    t = run([producer, consumer], CFG)
    assert t.memories[B].read_i32(0x0) == -1


def test_missing_signal_deadlocks():
    from meshpipe.engine import DeadlockError

    consumer = emit_wait(TaskProgram(B), chan())
    with pytest.raises(DeadlockError):
        run([TaskProgram(A, ()), consumer], CFG)


def test_barrier_single_channel_equals_wait():
    via_barrier = emit_barrier(TaskProgram(B), [chan()])
    via_wait = emit_wait(TaskProgram(B), chan())
    assert via_barrier == via_wait


def test_barrier_empty_channel_list_rejected():
    with pytest.raises(ProtocolError):
        emit_barrier(TaskProgram(B), [])


def test_barrier_eight_producers():
    channels = [chan(B, 4 * i) for i in range(8)]
    producers = []
    for i, ch in enumerate(channels):
        core = CoreId(1, i)
        producers.append(emit_signal(TaskProgram(core), ch, CFG))
    consumer = emit_barrier(TaskProgram(B), channels, detect_cycles=MAX_DETECT_CYCLES)
    t = run(producers + [consumer], CFG)
    deliveries = [w.delivery for w in t.writes]
    # sequential polling: the barrier cannot exit before the last delivery,
    # and the total detect overhead is bounded by 8 channels x 6 cycles
    assert t.core_finish[B] >= max(deliveries)
    assert t.core_finish[B] <= max(deliveries) + 8 * MAX_DETECT_CYCLES
    assert occupancy(t, B) == 8 * MAX_DETECT_CYCLES
    for ch in channels:
        assert t.memories[B].read_i32(ch.flag_offset) == -1


def test_barrier_exit_after_latest_producer():
    early = emit_signal(TaskProgram(CoreId(1, 0)), chan(B, 0x0), CFG)
    late = emit_signal(TaskProgram(CoreId(1, 1), (Compute(500),)), chan(B, 0x4), CFG)
    consumer = emit_barrier(TaskProgram(B), [chan(B, 0x0), chan(B, 0x4)])
    t = run([early, late, consumer], CFG)
    last_delivery = max(w.delivery for w in t.writes)
    assert t.core_finish[B] >= last_delivery


def test_flag_offset_must_be_word_aligned():
    with pytest.raises(ProtocolError):
        FlagChannel(B, 0x3)
