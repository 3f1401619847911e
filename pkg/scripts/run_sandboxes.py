"""Run the CLI verification commands against the shipped sandbox files.

Usage: python scripts/run_sandboxes.py [--sandboxes DIR] [--regenerate]

Each sandbox gets ``verify axioms``, ``verify lemma-iso``, ``verify thm-fb``
and ``verify birational``; the exit status is nonzero if any run fails.
"""
import argparse
import subprocess
import sys
import time
from pathlib import Path

from relstab.sandboxes import BUILDERS, SHIPPED, write_files

VERIFY = ("axioms", "lemma-iso", "thm-fb", "birational")


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sandboxes", default=Path(__file__).resolve().parent.parent / "sandboxes", type=Path)
    ap.add_argument("--regenerate", action="store_true", help="rewrite the sandbox files first")
    ap.add_argument("--names", nargs="*", default=list(SHIPPED))
    args = ap.parse_args(argv)
    if args.regenerate:
        write_files(args.sandboxes)
    failures = 0
    for name in args.names:
        sb = BUILDERS[name]()
        for cmd in VERIFY:
            argv = [sys.executable, "-m", "relstab.cli", "verify", cmd, "--group", sb.group_file,
                    "--module", sb.b_file, "--corpus", f"{name}.corpus", "--format", "records",
                    "--dump-dir", f"counterexample-{name}-{cmd}"]
            t0 = time.perf_counter()
            proc = subprocess.run(argv, cwd=args.sandboxes, capture_output=True, text=True)
            dt = time.perf_counter() - t0
            status = {0: "ok", 2: "FAILED"}.get(proc.returncode, f"ERROR({proc.returncode})")
            print(f"{name:20s} {cmd:12s} {status:8s} {dt:6.1f}s")
            if proc.returncode:
                failures += 1
                sys.stdout.write(proc.stdout + proc.stderr)
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
