"""Responsibility: Unit tests for check statuses, report hashing and report merging."""

import json
import tempfile
import unittest
from pathlib import Path


def _report(task: str = "verify-sy", prime: int = 313, checks=None, elapsed_ms: int = 5):
    from quartic_mf.reports import Check, RunConfig, build_report

    config = RunConfig(task=task, prime=prime, seed=1)
    return build_report(config, checks if checks is not None else [Check("S_y^2 == lP*I6", True, True, "PUBLISHED")],
                        {"elapsed_ms": elapsed_ms}, elapsed_ms)


class CheckStatusTests(unittest.TestCase):
    def test_status_from_expectation(self) -> None:
        from quartic_mf.reports import Check

        self.assertEqual(Check("a", 3).status, "recorded")
        self.assertEqual(Check("a", 3, 3).status, "pass")
        self.assertEqual(Check("a", 2, 3).status, "fail")
        self.assertEqual(Check("a", 2, 3, extended=True).status, "discrepancy")

    def test_overall_status_and_exit_code(self) -> None:
        from quartic_mf.reports import Check, exit_code, overall_status

        checks = [Check("a", 1, 1), Check("b", 0, 1, extended=True)]
        self.assertEqual(overall_status(checks), "discrepancy")
        self.assertEqual(exit_code("discrepancy"), 0)
        self.assertEqual(overall_status(checks + [Check("c", 0, 1)]), "fail")
        self.assertEqual(overall_status([], timed_out=True), "timeout")
        self.assertEqual(exit_code("timeout"), 1)
        self.assertEqual(overall_status([Check("d", 7)]), "recorded")
        self.assertEqual(exit_code("recorded"), 0)


class ReportHashTests(unittest.TestCase):
    def test_hash_ignores_elapsed_time(self) -> None:
        self.assertEqual(_report(elapsed_ms=5)["hash"], _report(elapsed_ms=90210)["hash"])

    def test_hash_tracks_content(self) -> None:
        self.assertNotEqual(_report(prime=313)["hash"], _report(prime=317)["hash"])

    def test_slug_names_the_run(self) -> None:
        from quartic_mf.reports import RunConfig

        config = RunConfig(task="ext", family="sl6-x5", i=1, prime=313, seed=11)
        self.assertEqual(config.slug(), "ext-sl6-x5-i1-p313-s11")


class MergeTests(unittest.TestCase):
    def _write(self, directory: Path, name: str, payload: dict) -> Path:
        path = directory / f"{name}.json"
        path.write_text(json.dumps(payload))
        return path

    def test_empty_input(self) -> None:
        from quartic_mf.reports import report_merge

        result = report_merge([])
        self.assertEqual(result.rc, 0)
        self.assertEqual(result.table, "")

    def test_conflicting_primes_flagged(self) -> None:
        from quartic_mf.reports import report_merge

        with tempfile.TemporaryDirectory() as tmp:
            a = self._write(Path(tmp), "a", _report(prime=313))
            b = self._write(Path(tmp), "b", _report(prime=317))
            result = report_merge([a, b])
        self.assertEqual(result.rc, 1)
        self.assertEqual(result.merged["primes"], [313, 317])
        self.assertTrue(result.merged["flags"])

    def test_failed_row_fails_merge(self) -> None:
        from quartic_mf.reports import Check, report_merge

        with tempfile.TemporaryDirectory() as tmp:
            ok = self._write(Path(tmp), "ok", _report())
            bad = self._write(Path(tmp), "bad", _report(checks=[Check("Ext^1", 2, 0, "PUBLISHED")]))
            result = report_merge([ok, bad])
        self.assertEqual(result.rc, 1)
        self.assertIn("fail", result.table)
        self.assertIn("[PUBLISHED]", result.table)

    def test_schema_mismatch_rejected(self) -> None:
        from quartic_mf.reports import ReportError, report_merge

        with tempfile.TemporaryDirectory() as tmp:
            payload = _report()
            payload["schema"] = "0"
            path = self._write(Path(tmp), "old", payload)
            with self.assertRaises(ReportError):
                report_merge([path])

    def test_unreadable_file_rejected(self) -> None:
        from quartic_mf.reports import ReportError, report_merge

        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "broken.json"
            path.write_text("{not json")
            with self.assertRaises(ReportError):
                report_merge([path])

    def test_write_report_round_trip(self) -> None:
        from quartic_mf.reports import write_report

        with tempfile.TemporaryDirectory() as tmp:
            report = _report()
            path = write_report(report, Path(tmp) / "out", "verify-sy-p313-s1")
            self.assertEqual(json.loads(path.read_text())["hash"], report["hash"])


if __name__ == "__main__":
    unittest.main()
