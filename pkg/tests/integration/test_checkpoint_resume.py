"""
Interrupted DFS runs resume from the code stream and its checkpoint.
"""
import os
import subprocess
import sys
from pathlib import Path

import pytest

from causalspaces.core.errors import CausalError
from causalspaces.core.pfun import InputFamily
from causalspaces.services.classify import enumerate_cc_dfs
from causalspaces.services.search_store import CodeStore, format_code, parse_code


@pytest.fixture
def store(tmp_path):
    return CodeStore(tmp_path / "codes.txt")


def run(family, store, **kwargs):
    return list(enumerate_cc_dfs(family, store, checkpoint_seconds=0.0, **kwargs))


class TestCodeStore:
    def test_code_lines(self):
        assert format_code((3, 7, 11)) == "3,7,11"
        assert parse_code("3,7,11\n") == (3, 7, 11)
        assert parse_code("\n") == ()

    def test_torn_line_is_ignored(self, store):
        store.path.write_text("3,7\n5,", encoding="utf-8")
        assert store.read_codes() == [(3, 7)]
        assert store.truncate(1) == [(3, 7)]
        assert store.path.read_text("utf-8") == "3,7\n"

    def test_truncate_needs_enough_records(self, store):
        store.path.write_text("3,7\n", encoding="utf-8")
        with pytest.raises(CausalError) as exc:
            store.truncate(2)
        assert exc.value.code == "CORRUPT_CHECKPOINT"

    def test_unreadable_checkpoint(self, store):
        store.checkpoint_path.write_text("{not json", encoding="utf-8")
        with pytest.raises(CausalError) as exc:
            store.load_checkpoint()
        assert exc.value.code == "CORRUPT_CHECKPOINT"


class TestResume:
    def test_fresh_run_writes_stream(self, binary2, store):
        codes = run(binary2, store)
        assert store.read_codes() == codes
        checkpoint = store.load_checkpoint()
        assert checkpoint is not None and checkpoint.finished
        assert checkpoint.emitted == len(codes)

    def test_finished_run_replays(self, binary2, store):
        first = run(binary2, store)
        assert run(binary2, store) == first
        assert store.read_codes() == first

    @pytest.mark.parametrize("family", [InputFamily.uniform("AB", 2), InputFamily.uniform("AB", 3)])
    def test_limit_then_resume_matches_uninterrupted(self, family, tmp_path):
        expected = list(enumerate_cc_dfs(family))
        store = CodeStore(tmp_path / "codes.txt")
        partial = run(family, store, limit=1)
        assert partial == expected[:1]
        assert not store.load_checkpoint().finished
        assert run(family, store) == expected
        assert store.read_codes() == expected

    def test_records_past_checkpoint_are_discarded(self, binary2, store):
        partial = run(binary2, store, limit=2)
        with store.path.open("a", encoding="utf-8") as handle:
            handle.write("1,2,3\n4,")
        assert run(binary2, store) == list(enumerate_cc_dfs(binary2))
        assert store.read_codes()[:2] == partial

    def test_checkpoint_for_another_family(self, binary2, binary3, store):
        run(binary2, store, limit=1)
        with pytest.raises(CausalError) as exc:
            run(binary3, store)
        assert exc.value.code == "CORRUPT_CHECKPOINT"

    def test_tampered_last_record(self, binary2, store):
        run(binary2, store, limit=2)
        lines = store.path.read_text("utf-8").splitlines()
        lines[-1] = lines[0]
        store.path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        with pytest.raises(CausalError) as exc:
            run(binary2, store)
        assert exc.value.code == "CORRUPT_CHECKPOINT"

    def test_stream_without_checkpoint_is_restarted(self, binary2, store):
        store.path.write_text("1,2\n", encoding="utf-8")
        assert run(binary2, store) == list(enumerate_cc_dfs(binary2))


@pytest.mark.slow
class TestKillAndRestart:
    def test_four_event_stream_survives_kills(self, tmp_path):
        stream = tmp_path / "stream.txt"
        argv = [
            sys.executable, "-m", "causalspaces",
            "classify", "--events", "4", "--resume", str(stream),
        ]
        env = {**os.environ, "CAUSAL_CHECKPOINT_SECONDS": "0.5", "CAUSAL_OUTPUT_DIR": str(tmp_path)}
        for _ in range(2):
            process = subprocess.Popen(
                argv,
                cwd=Path(__file__).resolve().parents[2],
                env=env,
                stdout=subprocess.DEVNULL,
                stderr=subprocess.DEVNULL,
            )
            try:
                process.wait(timeout=8)
            except subprocess.TimeoutExpired:
                process.kill()
                process.wait()
            else:
                pytest.fail(f"four-event enumeration exited early with {process.returncode}")

        store = CodeStore(stream)
        codes = store.read_codes()
        checkpoint = store.load_checkpoint()
        assert checkpoint is not None and not checkpoint.finished
        assert len(codes) >= checkpoint.emitted > 0
        family = InputFamily.uniform("ABCD", 2)
        assert list(enumerate_cc_dfs(family, limit=len(codes))) == codes
