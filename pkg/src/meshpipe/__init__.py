"""Cycle-approximate simulator for streaming DSP pipelines on 2D-mesh manycores."""

from .config import ConfigError, Settings, load_config, parse_config
from .deploy import (
    Calibration,
    DeploymentPlan,
    blocksize_sweep,
    build_case,
    ifft_sweep,
    kernel_cost,
    parallel_ifft_latency_model,
    run_plan,
)
from .engine import (
    Compute,
    CoreMemory,
    DeadlockError,
    OverrunError,
    Probe,
    RemoteWrite,
    SetLocalFlag,
    TaskProgram,
    Timeline,
    WaitFlag,
    occupancy,
    run,
)
from .mesh import (
    AddressRangeError,
    CoreId,
    GlobalAddress,
    InvalidCoreError,
    MeshConfig,
    compose_address,
    hop_distance,
    resolve_address,
    write_delivery_cycle,
)
from .metrics import CaseReport, build_report, throughput_sps, total_latency, write_csv
from .sync import FlagChannel, ProtocolError, emit_barrier, emit_signal, emit_wait

__version__ = "0.1.0"
