import pytest

from meshpipe import metrics
from meshpipe.deploy import Calibration, DeploymentPlan, build_case, run_plan
from meshpipe.engine import Timeline
from meshpipe.mesh import MeshConfig
from meshpipe.metrics import (
    MissingProbeError,
    build_report,
    format_csv,
    report_row,
    sweep_rows,
    throughput_sps,
    total_latency,
    write_csv,
)

CFG = MeshConfig()


class TestThroughput:
    def test_table_anchor_values(self):
        assert throughput_sps(46377, 600e6) == 12937
        assert throughput_sps(110282, 600e6) == 5441
        assert throughput_sps(47585, 600e6) == 12609

    def test_rounding_is_round_to_nearest(self):
        # 600e6 / 110282 = 5440.96...: floor would give 5440
        assert throughput_sps(110282, 600e6) == 5441

    def test_antitone_in_bottleneck(self):
        values = [throughput_sps(c, 600e6) for c in range(40000, 50000, 137)]
        assert values == sorted(values, reverse=True)

    def test_zero_bottleneck_rejected(self):
        with pytest.raises(ValueError):
            throughput_sps(0, 600e6)


class TestTotalLatency:
    def test_empty_plan_is_zero(self):
        plan = DeploymentPlan(
            case="I", programs=[], channels=[], credit_channels=[], block_size=256,
            ifft_cores=1, placement={}, task_spans=[], throughput_spans=[],
            output_core=None, output_offset=0, output_count=0,
        )
        timeline = Timeline(0, {}, {}, [], [], {})
        assert total_latency(timeline, plan) == 0

    def test_case1_exact(self):
        plan = build_case(1, Calibration(), CFG)
        timeline = run_plan(plan, CFG)
        assert total_latency(timeline, plan) == 110282

    def test_missing_probe_raises(self):
        plan = build_case(1, Calibration(), CFG)
        timeline = Timeline(0, {}, {}, [], [], {})
        with pytest.raises(MissingProbeError):
            total_latency(timeline, plan)


class TestCsv:
    def test_six_point_sweep_is_seven_lines(self):
        rows = sweep_rows([(1, 18862), (2, 9524), (4, 4936), (8, 2951), (16, 2807), (32, 4793)], "n_cores")
        text = format_csv(rows, "ifft_sweep")
        assert len(text.splitlines()) == 7
        assert text.splitlines()[0] == "n_cores,cycles"
        assert text.endswith("\n")

    def test_byte_identical_outputs(self, tmp_path):
        rows = sweep_rows([(1, 10), (2, 20)], "block_size")
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        write_csv(rows, "blocksize_sweep", str(p1))
        write_csv(rows, "blocksize_sweep", str(p2))
        assert p1.read_bytes() == p2.read_bytes()

    def test_unknown_schema_and_field_mismatch(self):
        with pytest.raises(ValueError):
            format_csv([], "no_such_schema")
        with pytest.raises(ValueError):
            format_csv([{"bogus": 1}], "ifft_sweep")

    def test_case_report_rows_match_anchors(self):
        rows = []
        for case in (1, 2, 3):
            plan = build_case(case, Calibration(), CFG)
            timeline = run_plan(plan, CFG)
            rows.append(report_row(build_report(plan, timeline, CFG)))
        text = format_csv(rows, "case_report")
        lines = text.splitlines()
        assert len(lines) == 4
        assert lines[1].split(",")[6] == "5441"
        assert lines[2].split(",")[6] == "12937"
        tput3 = int(lines[3].split(",")[6])
        assert abs(tput3 - 12609) <= 12609 * 0.02
        assert lines[3].split(",")[3] == ""  # pipelined pair reported as one stage


class TestBudgets:
    def test_requirement_flags(self):
        reports = {}
        for case in (1, 2, 3):
            plan = build_case(case, Calibration(), CFG)
            reports[case] = build_report(plan, run_plan(plan, CFG), CFG)
        assert not reports[1].meets_throughput_budget  # 183.8 us per symbol
        assert reports[2].meets_throughput_budget      # 77.3 us bottleneck
        assert reports[3].meets_throughput_budget
        assert not reports[1].meets_latency_budget
        assert not reports[2].meets_latency_budget
        assert reports[3].meets_latency_budget         # about 84 us

    def test_case2_bottleneck_microseconds(self):
        plan = build_case(2, Calibration(), CFG)
        rep = build_report(plan, run_plan(plan, CFG), CFG)
        us = metrics.cycles_to_us(rep.bottleneck_cycles, CFG.clock_hz)
        assert abs(us - 77.3) < 0.1
