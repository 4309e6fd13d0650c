"""Smoke test script for the command-line pipeline on a tiny synthetic corpus."""

from __future__ import annotations

import sys
import tempfile
from pathlib import Path


def main() -> int:
    """Generate data, train one joint run for two epochs and score the checkpoint."""
    try:
        from tempcr.app.cli import run

        with tempfile.TemporaryDirectory() as tmp:
            work = Path(tmp)
            data = work / "data"
            steps = [
                ["--profile", "smoke", "synth", "--seed", "1", "--out", str(data)],
                [
                    "--profile",
                    "smoke",
                    "train",
                    "--train",
                    str(data / "train.jsonl"),
                    "--raw",
                    str(data / "raw"),
                    "--dev",
                    str(data / "dev.jsonl"),
                    "--max-epochs",
                    "2",
                    "--min-epochs",
                    "1",
                    "--run-dir",
                    str(work / "run"),
                ],
                [
                    "--profile",
                    "smoke",
                    "eval",
                    "--checkpoint",
                    str(work / "run" / "checkpoint"),
                    "--corpus",
                    str(data / "test.jsonl"),
                    "--out",
                    str(work / "metrics.json"),
                ],
            ]
            for argv in steps:
                code = run(argv)
                if code != 0:
                    print(f"❌ '{argv[2]}' exited with {code}")
                    return 1
                print(f"✅ {argv[2]}")

        print("✅ Pipeline smoke test passed!")
        return 0

    except Exception as e:
        print(f"❌ Pipeline smoke test failed: {e}")
        import traceback
        traceback.print_exc()
        return 1


if __name__ == "__main__":
    sys.exit(main())
