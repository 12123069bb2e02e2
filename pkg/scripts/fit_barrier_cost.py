#!/usr/bin/env python3
"""Fit the barrier poll cost against the measured 8-core IFFT latency.

The only free parameter in the parallel-IFFT timing model is the per-flag
cost of the sequentially polled barrier between exchange stages. This scans
integer candidates, simulates the stand-alone 8-core IFFT for each, and
reports the value whose latency lands closest to the 2958-cycle hardware
measurement. The winner is frozen as Calibration.barrier_poll_cycles.
"""

import argparse

from meshpipe.deploy import Calibration, parallel_ifft_latency_model
from meshpipe.mesh import MeshConfig


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--anchor", type=int, default=2958, help="measured 8-core latency")
    parser.add_argument("--lo", type=int, default=10)
    parser.add_argument("--hi", type=int, default=50)
    args = parser.parse_args()

    cfg = MeshConfig()
    best = None
    for candidate in range(args.lo, args.hi + 1):
        cal = Calibration(barrier_poll_cycles=candidate)
        latency = parallel_ifft_latency_model(8, cal, cfg)
        err = abs(latency - args.anchor)
        marker = ""
        if best is None or err < best[0]:
            best = (err, candidate, latency)
            marker = "  <-- best so far"
        print(f"barrier_poll_cycles={candidate:>3}  T(8)={latency}  |err|={err}{marker}")
    print(f"\nbest fit: barrier_poll_cycles={best[1]} (T(8)={best[2]}, {best[0]} cycles off)")


if __name__ == "__main__":
    main()
