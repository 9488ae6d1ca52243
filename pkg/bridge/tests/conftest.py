import json
import subprocess
import sys
from pathlib import Path

import pytest

REPO_ROOT = Path(__file__).resolve().parents[2]
GOLDEN_DIR = Path(__file__).resolve().parent / "golden"

SERVE_CMD = [sys.executable, "-m", "stpr_bridge", "serve", "--fixture-mode"]


@pytest.fixture(scope="session")
def house_env() -> dict:
    return json.loads((REPO_ROOT / "scenarios" / "house.json").read_text(encoding="utf-8"))


class BridgeProc:
    """Minimal NDJSON client for a live server subprocess."""

    def __init__(self, cmd=None):
        self.proc = subprocess.Popen(
            cmd or SERVE_CMD,
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            stderr=subprocess.DEVNULL,
            text=True,
        )

    def send_line(self, line: str) -> dict:
        self.proc.stdin.write(line + "\n")
        self.proc.stdin.flush()
        out = self.proc.stdout.readline()
        assert out, "server closed its output stream"
        return json.loads(out)

    def request(self, doc: dict) -> dict:
        return self.send_line(json.dumps(doc))

    def shutdown(self) -> int:
        try:
            resp = self.request({"op": "shutdown"})
            assert resp == {"ok": True}
        except (BrokenPipeError, OSError):
            pass
        return self.proc.wait(timeout=10)

    def close(self) -> None:
        if self.proc.poll() is None:
            self.proc.kill()
            self.proc.wait(timeout=10)


@pytest.fixture
def bridge_proc():
    proc = BridgeProc()
    yield proc
    proc.close()
