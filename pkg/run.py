#!/usr/bin/env python3
"""
Supergeo Launcher
Run it to execute every verification suite and write the reports.
Press Ctrl+C in the terminal to stop.
"""

import sys
from pathlib import Path

from supergeo.cli import EXIT_INTERNAL, main


def run():
    out_dir = Path(__file__).parent / "reports"

    print("=" * 50)
    print("  Supergeo - verification harness")
    print("=" * 50)
    print()
    print(f"Running all suites, reports go to {out_dir}")
    print("Press Ctrl+C to stop")
    print()

    try:
        code = main(["verify", "--suite", "all", "--out", str(out_dir)])
        print()
        print("All checks passed." if code == 0 else f"Finished with exit code {code}.")
        sys.exit(code)

    except KeyboardInterrupt:
        print("\n\nStopped.")
        sys.exit(1)

    except Exception as e:
        print(f"Error: {e}")
        sys.exit(EXIT_INTERNAL)


if __name__ == "__main__":
    run()
