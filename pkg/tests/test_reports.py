import os
import tempfile

import pandas as pd
import pytest

from additive_bases.errors import GuardError
from additive_bases.reports import (
    CSV_COLUMNS,
    RunReport,
    cell_seed,
    input_digest,
    run_sweep,
    sweep_bound_ratios,
    sweep_input,
    write_csv,
)
from additive_bases.sumsets import ElementSet
from additive_bases.version import __version__


class TestDigests:
    def test_input_digest_is_canonical(self):
        assert input_digest({"a": 1, "b": ["1/2"]}) == input_digest({"b": ["1/2"], "a": 1})
        assert input_digest({"basis": ElementSet(["1/2", 1])}) == input_digest({"basis": ["1/2", "1"]})
        assert input_digest({"a": 1}) != input_digest({"a": 2})

    def test_cell_seed(self):
        assert cell_seed(0, "normalized", 3, 2) == cell_seed(0, "normalized", 3, 2)
        assert cell_seed(0, "normalized", 3, 2) != cell_seed(1, "normalized", 3, 2)
        assert cell_seed(0, "normalized", 3, 2) != cell_seed(0, "normalized", 3, 3)

    def test_report_defaults(self):
        report = RunReport(command={"name": "verify"}, input_digest="0" * 64, results={"covered": True})
        assert report.version == __version__
        assert report.timings == {}


class TestSweepInput:
    def test_families(self):
        assert sweep_input("power-family", 2, 2, 0) == ElementSet([-16, -4, 4, 16])
        assert len(sweep_input("random-basis", 4, 2, 1)) == 4
        assert len({abs(b) for b in sweep_input("random-signed", 6, 2, 1)}) == 6
        assert sweep_input("normalized", 3, 2, 1).max() == 1

    def test_unknown_family(self):
        with pytest.raises(GuardError):
            sweep_input("primes", 3, 2, 0)


class TestRunSweep:
    def test_dyadic_sweep(self):
        frame, results = run_sweep("dyadic", [4, 8, 16], [2])
        assert list(frame.columns) == CSV_COLUMNS
        assert [row["n"] for row in results] == [4, 8, 16]
        assert all(row["covered"] for row in results)
        assert all(row["ratio"] <= 1 for row in results)
        assert all("millis" not in row for row in results)

    def test_higher_sweep_matches_across_threads(self):
        _, single = run_sweep("higher", [2, 3], [2, 3], seed=5, threads=1)
        _, multi = run_sweep("higher", [2, 3], [2, 3], seed=5, threads=3)
        assert single == multi
        assert all(row["covered"] for row in single)

    def test_round_sweep(self):
        _, results = run_sweep("round", [3, 5], [2, 3])
        assert all(row["covered"] and row["size"] <= row["bound"] for row in results)

    def test_guards(self):
        with pytest.raises(GuardError):
            run_sweep("dyadic", [], [2])
        with pytest.raises(GuardError):
            run_sweep("dyadic", [4, 8], [2], max_cells=1)

    def test_bound_ratios_and_csv(self):
        frame, results = run_sweep("natural", [2, 3, 4], [2, 3])
        assert [(row["n"], row["k"]) for row in results] == [(n, k) for n in [2, 3, 4] for k in [2, 3]]
        assert all(row["size_parameter"] >= row["n"] for row in results)
        ratios = sweep_bound_ratios(results)
        cells = {f"n={n},k={k}" for n in [2, 3, 4] for k in [2, 3]}
        assert set(ratios) == cells | {"max"}
        assert ratios["max"] == max(ratios[cell] for cell in cells)

        with tempfile.TemporaryDirectory() as temp_dir:
            path = os.path.join(temp_dir, "rows.csv")
            write_csv(frame, path)
            written = pd.read_csv(path)
            assert list(written.columns) == CSV_COLUMNS
            assert list(written["n"]) == [2, 2, 3, 3, 4, 4]

    def test_higher_sweep_reports_stage_ratios(self):
        _, results = run_sweep("higher", [2, 3], [2])
        assert all(row["max_stage_ratio"] > 0 for row in results)
        ratios = sweep_bound_ratios(results)
        assert ratios["max_stage"] == max(row["max_stage_ratio"] for row in results)
