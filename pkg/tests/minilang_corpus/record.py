"""Record reference-language behavior for the corpus programs.

Runs every program under programs/ in a fresh subprocess of the reference
interpreter, captures status, stdout, final top-level bindings, and the
error kind on failure, and freezes the lot into recordings.json. The
differential test replays the frozen file; rerun this script only when
the corpus changes:

    python3 tests/minilang_corpus/record.py
"""

import json
import subprocess
import sys
from pathlib import Path

HERE = Path(__file__).resolve().parent

# the wrapper mirrors what the sandbox reports: stdout, bindings as repr
# of non-callable globals, and the exception class name on failure
WRAPPER = r"""
import io, json, sys
from contextlib import redirect_stdout

source = sys.stdin.read()
g = {}
buf = io.StringIO()
status, error_kind = "ok", None
try:
    with redirect_stdout(buf):
        exec(compile(source, "<program>", "exec"), g)
except BaseException as exc:
    status = "runtime_error"
    error_kind = type(exc).__name__
bindings = {}
for name, value in g.items():
    if name.startswith("__") or callable(value):
        continue
    bindings[name] = repr(value)
print(json.dumps({
    "status": status,
    "stdout": buf.getvalue(),
    "bindings": bindings,
    "error_kind": error_kind,
}))
"""


def record_one(source: str) -> dict:
    proc = subprocess.run(
        [sys.executable, "-c", WRAPPER],
        input=source,
        capture_output=True,
        text=True,
        timeout=30,
    )
    if proc.returncode != 0:
        raise RuntimeError(f"reference run failed: {proc.stderr}")
    return json.loads(proc.stdout)


def main() -> None:
    recordings = {}
    for path in sorted((HERE / "programs").glob("*.py")):
        recordings[path.name] = record_one(path.read_text())
    out = HERE / "recordings.json"
    out.write_text(json.dumps(recordings, indent=2, sort_keys=True) + "\n")
    print(f"recorded {len(recordings)} programs -> {out}")


if __name__ == "__main__":
    main()
