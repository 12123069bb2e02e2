import numpy as np
import pytest

from meshpipe import deploy, kernels, metrics
from meshpipe.deploy import (
    CALIBRATED,
    COUNTED,
    Calibration,
    build_case,
    ifft_subgrid,
    kernel_cost,
    parallel_ifft_latency_model,
    run_plan,
)
from meshpipe.engine import WaitFlag, occupancy, run
from meshpipe.mesh import CoreId, MeshConfig

CFG = MeshConfig()
CAL = Calibration()


def report_for(case, cal=CAL, cfg=CFG, **kw):
    plan = build_case(case, cal, cfg, **kw)
    timeline = run_plan(plan, cfg)
    return plan, timeline, metrics.build_report(plan, timeline, cfg)


class TestCalibration:
    def test_defaults_positive_and_consistent(self):
        assert CAL.ifft_cycles == 18862
        assert CAL.deint_cycles == 45043
        assert CAL.demap_cycles == 46377

    def test_per_sample_times_256_reproduces_totals_within_rounding(self):
        for kernel in ("ifft", "deint", "demap"):
            per_sample = kernel_cost(kernel, 1, CAL)
            assert abs(per_sample * 256 - CAL.total(kernel)) <= 128

    def test_detect_cycles_bounded(self):
        with pytest.raises(ValueError):
            Calibration(detect_cycles=7)
        with pytest.raises(ValueError):
            Calibration(ifft_cycles=0)

    def test_unknown_mode_rejected(self):
        with pytest.raises(ValueError):
            Calibration(mode="guesswork")


class TestKernelCost:
    def test_full_block_returns_calibrated_totals_exactly(self):
        assert kernel_cost("ifft", 256, CAL) == 18862
        assert kernel_cost("deint", 256, CAL) == 45043
        assert kernel_cost("demap", 256, CAL) == 46377

    def test_single_sample_demap(self):
        assert kernel_cost("demap", 1, CAL) == 181  # round(46377/256)

    def test_proportionality(self):
        assert kernel_cost("deint", 128, CAL) == round(45043 * 128 / 256 + 0.25)

    def test_sample_range_enforced(self):
        with pytest.raises(ValueError):
            kernel_cost("demap", 0, CAL)
        with pytest.raises(ValueError):
            kernel_cost("demap", 257, CAL)
        with pytest.raises(ValueError):
            kernel_cost("fft2", 1, CAL)

    def test_counted_mode_charges_unit_costs(self):
        counted = Calibration(mode=COUNTED)
        assert kernel_cost("ifft", 256, counted) == 1024 * counted.butterfly_cycles
        assert kernel_cost("deint", 3, counted) == 3 * counted.deint_sample_cycles
        assert kernel_cost("demap", 2, counted) == 2 * counted.demap_sample_cycles


class TestCaseStructure:
    def test_case1_single_core_no_channels(self):
        plan = build_case(1, CAL, CFG)
        assert len(plan.programs) == 1
        assert plan.channels == [] and plan.credit_channels == []

    def test_case2_three_cores_two_forward_channels(self):
        plan = build_case(2, CAL, CFG)
        assert len(plan.programs) == 3
        assert len(plan.channels) == 2
        assert plan.block_size == 256

    def test_case3_defaults_use_ten_cores(self):
        plan = build_case(3, CAL, CFG)
        assert len(plan.programs) == 8 + 1 + 1

    def test_case3_parameter_validation(self):
        with pytest.raises(ValueError):
            build_case(3, CAL, CFG, block_size=3)
        with pytest.raises(ValueError):
            build_case(3, CAL, CFG, n_cores_ifft=12)
        with pytest.raises(ValueError):
            build_case(4, CAL, CFG)

    def test_ifft_subgrid_shape(self):
        grid = ifft_subgrid(8, CFG)
        assert grid == [CoreId(r, c) for r in range(2) for c in range(4)]
        with pytest.raises(ValueError):
            ifft_subgrid(32, MeshConfig(rows=2, cols=8))

    def test_single_consumer_channels_and_remote_data_writes(self):
        from meshpipe.engine import RemoteWrite
        from meshpipe.mesh import resolve_address

        for case in (2, 3):
            plan = build_case(case, CAL, CFG)
            for ch in plan.channels + plan.credit_channels:
                waiters = {
                    prog.core
                    for prog in plan.programs
                    if prog.core == ch.consumer_core
                    and any(
                        isinstance(i, WaitFlag) and i.offset == ch.flag_offset
                        for i in prog.instrs
                    )
                }
                assert waiters == {ch.consumer_core}
            # inter-task data always moves by remote write into the consumer
            for prog in plan.programs:
                for instr in prog.instrs:
                    if isinstance(instr, RemoteWrite) and instr.nbytes > 4:
                        dst_core, _ = resolve_address(instr.dst, CFG)
                        assert dst_core != prog.core


class TestCaseTimings:
    def test_case1_exact_table_values(self):
        _, _, rep = report_for(1)
        assert rep.task_cycles == {"ifft": 18862, "deint": 45043, "demap": 46377}
        assert rep.total_cycles == 110282
        assert rep.throughput_sps == 5441

    def test_case2_sync_overhead_bounded(self):
        _, _, rep = report_for(2)
        delta = rep.total_cycles - 110282
        assert 0 < delta <= 14  # two channels at <= 7 cycles each

    def test_case2_demap_is_bottleneck(self):
        plan, timeline, rep = report_for(2)
        assert rep.bottleneck_cycles == rep.task_cycles["demap"]
        assert rep.task_cycles["demap"] >= rep.task_cycles["deint"] >= rep.task_cycles["ifft"] - 2

    def test_case2_demap_occupancy_within_sync_bound(self):
        plan, timeline, _ = report_for(2)
        demap_core = plan.placement["demap"]
        assert 46377 <= occupancy(timeline, demap_core) <= 46377 + 6

    def test_case3_stage_latencies(self):
        _, _, rep = report_for(3)
        assert abs(rep.task_cycles["ifft"] - 2958) <= 2958 * 0.05
        assert abs(rep.task_cycles["deint+demap"] - 47585) <= 47585 * 0.05
        assert abs(rep.total_cycles - 50543) <= 50543 * 0.05

    def test_case3_block_sweep_minimum_at_one_sample(self):
        rows = deploy.blocksize_sweep([1, 2, 4, 8, 16, 32, 64, 128, 256], CAL, CFG)
        best = min(rows, key=lambda r: r[1])
        assert best[0] == 1


class TestChainValues:
    def test_output_identical_across_cases(self):
        outputs = []
        for case in (1, 2, 3):
            plan, timeline, _ = report_for(case)
            outputs.append(plan.chain_output(timeline))
        assert np.array_equal(outputs[0], outputs[1])
        assert np.array_equal(outputs[0], outputs[2])

    def test_output_matches_host_chain(self):
        x = kernels.random_symbol(seed=0)
        expected = kernels.demap(
            kernels.deinterleave(kernels.ifft(x), 16, 16), kernels.QAM16, 1.0
        )
        plan, timeline, _ = report_for(1)
        assert np.array_equal(plan.chain_output(timeline), expected)

    def test_timing_parameters_never_change_values(self):
        slow = MeshConfig(hop_cycles=3)
        outs, totals = [], []
        for cfg in (CFG, slow):
            plan = build_case(3, CAL, cfg, block_size=4)
            timeline = run_plan(plan, cfg)
            outs.append(plan.chain_output(timeline))
            totals.append(metrics.total_latency(timeline, plan))
        assert np.array_equal(outs[0], outs[1])
        assert totals[0] != totals[1]

    def test_seed_changes_input_and_output(self):
        p0 = build_case(1, CAL, CFG, seed=0)
        p1 = build_case(1, CAL, CFG, seed=1)
        o0 = p0.chain_output(run_plan(p0, CFG))
        o1 = p1.chain_output(run_plan(p1, CFG))
        assert not np.array_equal(o0, o1)


class TestParallelIfftDeployment:
    def test_single_core_latency_is_calibrated_total(self):
        assert parallel_ifft_latency_model(1, CAL, CFG) == 18862

    def test_eight_core_latency_near_anchor(self):
        t8 = parallel_ifft_latency_model(8, CAL, CFG)
        assert abs(t8 - 2958) <= 2958 * 0.05

    def test_latency_increases_past_sixteen_cores(self):
        assert parallel_ifft_latency_model(32, CAL, CFG) > parallel_ifft_latency_model(16, CAL, CFG)

    def test_unsupported_core_count(self):
        with pytest.raises(ValueError):
            parallel_ifft_latency_model(3, CAL, CFG)

    def test_simulated_values_match_single_core_for_all_counts(self):
        x = kernels.random_symbol(seed=0)
        ref = kernels.ifft(x)
        for nc in deploy.SWEEP_CORE_COUNTS:
            plan = kernels.plan_parallel_ifft(256, nc)
            grid = ifft_subgrid(nc, CFG)
            progs = deploy.build_parallel_ifft_programs(x, plan, grid, CAL, CFG)
            timeline = run(progs, CFG)
            out = np.empty(256, np.complex64)
            for i in range(nc):
                buf = timeline.memories[grid[i]].read_c64(deploy.IN_BUF, plan.block)
                for pos, g, length in plan.output_runs(i):
                    out[g : g + length] = buf[pos : pos + length]
            assert np.abs(out - ref).max() <= 1e-3

    def test_causality_no_compute_before_its_data_arrives(self):
        # consumer blocks develop strictly after the producing write delivers
        plan = build_case(2, CAL, CFG)
        timeline = run_plan(plan, CFG)
        deliveries = [w.delivery for w in timeline.writes if w.nbytes > 4]
        deint_start = timeline.probe_cycle("deint_start")
        demap_start = timeline.probe_cycle("demap_start")
        assert deint_start >= min(deliveries)
        assert demap_start >= max(deliveries)
