"""
Command-line surface: output lines, files and exit codes.
"""
import json

import pytest

from causalspaces.main import main
from causalspaces.models import SpaceDocument


def stdout_of(capsys, argv: list[str], status: int = 0) -> str:
    assert main(argv) == status
    return capsys.readouterr().out.strip()


class TestOrders:
    def test_enumerate_count(self, capsys):
        assert stdout_of(capsys, ["orders", "enumerate", "-n", "3", "--count"]) == "29"

    def test_enumerate_listing(self, capsys):
        lines = stdout_of(capsys, ["orders", "enumerate", "-n", "2"]).splitlines()
        assert len(lines) == 4
        kinds = [line.split("\t")[1] for line in lines]
        assert kinds.count("definite") == 3 and kinds.count("indefinite") == 1

    def test_suborders_of_diamond(self, capsys):
        assert stdout_of(capsys, ["orders", "suborders", "--of", "diamond", "--count"]) == "25"

    def test_hasse_with_dot(self, capsys, output_dir):
        out = stdout_of(capsys, ["orders", "hasse", "--in", "total:A,B,C", "--dot", "total.dot"])
        assert out.splitlines() == ["A -> B", "B -> C"]
        dot = (output_dir / "total.dot").read_text("utf-8")
        assert "digraph order {" in dot
        assert "A -> B" in dot and "B -> C" in dot and "A -> C" not in dot

    def test_construct_round_trip(self, capsys, output_dir):
        stdout_of(
            capsys,
            ["orders", "construct", "--kind", "from_relation", "--events", "A,B,C",
             "--data", "A<B,A<C", "--out", "fork.json"],
        )
        path = output_dir / "fork.json"
        assert stdout_of(capsys, ["spaces", "induce", "--order", str(path), "--count"]) == "10"

    def test_hierarchy(self, capsys):
        assert stdout_of(capsys, ["orders", "hierarchy", "-n", "2"]).startswith("orders=4 ")

    def test_lowersets(self, capsys):
        assert stdout_of(capsys, ["orders", "lowersets", "--of", "total:A,B,C", "--count"]) == "3"

    def test_json_listing(self, capsys):
        payload = json.loads(stdout_of(capsys, ["orders", "enumerate", "-n", "1", "--json"]))
        assert payload == [{"labels": ["A"], "reach": [[True]]}]


class TestSpaces:
    @pytest.mark.parametrize(
        "order, count",
        [("total:A,B,C", 14), ("wedge", 12), ("fork", 10), ("discrete", 6)],
    )
    def test_induce_count(self, capsys, order, count):
        assert stdout_of(capsys, ["spaces", "induce", "--order", order, "--count"]) == str(count)

    def test_completions(self, capsys):
        argv = ["spaces", "completions", "--order", "total:A,B+C", "--count"]
        assert stdout_of(capsys, argv) == "4"

    def test_check_space_document(self, capsys, tmp_path, theta3):
        path = tmp_path / "theta3.json"
        path.write_text(SpaceDocument.from_space(theta3).model_dump_json(), encoding="utf-8")
        out = stdout_of(capsys, ["spaces", "check", "--in", str(path)])
        assert "complete=true" in out and "tight=false" in out and "free_choice=true" in out

    def test_check_order(self, capsys):
        out = stdout_of(capsys, ["spaces", "check", "--order", "total:A,B+C", "--json"])
        assert json.loads(out)["complete"] is False

    def test_switch(self, capsys):
        assert stdout_of(capsys, ["spaces", "switch", "--events", "3", "--count"]) == "12"
        argv = ["spaces", "switch", "--events", "4", "--count", "--closed-form"]
        assert stdout_of(capsys, argv) == "576"

    def test_compose(self, capsys):
        argv = [
            "spaces", "compose", "--mode", "sequential",
            "--left", "hist:discrete:A,B", "--right", "hist:discrete:C", "--json",
        ]
        assert json.loads(stdout_of(capsys, argv))["events"] == ["A", "B", "C"]

    def test_missing_document(self, capsys, tmp_path):
        stdout_of(capsys, ["spaces", "check", "--in", str(tmp_path / "nope.json")], status=2)


class TestClassify:
    def test_brute_two_events(self, capsys):
        argv = ["classify", "--events", "2", "--engine", "brute"]
        assert stdout_of(capsys, argv) == "spaces=7 classes=3"

    def test_dfs_with_outputs(self, capsys, output_dir):
        argv = [
            "classify", "--events", "2", "--stats", "--landmarks",
            "--out", "codes.txt", "--report", "stats.json", "--dot", "classes.dot",
        ]
        lines = stdout_of(capsys, argv).splitlines()
        assert lines[0] == "spaces=7 classes=3"
        assert "maxima_spaces=2" in lines[1]
        assert lines[-1].startswith("discrete=")
        assert len((output_dir / "codes.txt").read_text("utf-8").splitlines()) == 3
        assert json.loads((output_dir / "stats.json").read_text("utf-8"))["spaces"] == 7
        assert (output_dir / "classes.dot").exists()

    def test_resume_flag(self, capsys, output_dir):
        argv = ["classify", "--events", "2", "--resume", "stream.txt"]
        assert stdout_of(capsys, argv + ["--limit", "1"]).endswith(" classes=1")
        assert stdout_of(capsys, argv) == "spaces=7 classes=3"
        assert (output_dir / "stream.txt.checkpoint.json").exists()

    def test_brute_rejects_resume(self, capsys):
        argv = ["classify", "--engine", "brute", "--resume", "x.txt"]
        stdout_of(capsys, argv, status=2)

    def test_size_guard_exit_code(self, capsys):
        stdout_of(capsys, ["classify", "--events", "4", "--engine", "brute"], status=1)

    def test_json_error(self, capsys):
        out = stdout_of(capsys, ["classify", "--events", "4", "--engine", "brute", "--json"], status=1)
        assert json.loads(out)["error"]["code"] == "SIZE_GUARD"


class TestExitCodes:
    def test_usage_error(self, capsys):
        assert main(["orders", "enumerate"]) == 2

    def test_unknown_order(self, capsys):
        stdout_of(capsys, ["orders", "hasse", "--in", "spiral"], status=2)

    def test_acceptance_quick(self, capsys):
        out = stdout_of(capsys, ["check", "--quick"])
        assert "❌" not in out
