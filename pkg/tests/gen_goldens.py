"""Regenerate the golden CLI outputs. Run from anywhere:

    python3 tests/gen_goldens.py

Inspect the diff before committing; goldens define the expected bytes.
"""

import subprocess
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))
from golden_cases import CASES  # noqa: E402

DATA = Path(__file__).parent / "data"


def main() -> int:
    for name, argv, want_exit in CASES:
        r = subprocess.run(
            [sys.executable, "-m", "slatkit.cli", *argv],
            cwd=DATA, capture_output=True,
        )
        if r.returncode != want_exit:
            print(f"{name}: exit {r.returncode}, wanted {want_exit}", file=sys.stderr)
            print(r.stderr.decode(), file=sys.stderr)
            return 1
        (DATA / "golden" / name).write_bytes(r.stdout)
        print(f"wrote golden/{name} ({len(r.stdout)} bytes)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
