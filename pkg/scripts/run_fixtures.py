"""Decide every fixture file and print the text reports.

usage: python scripts/run_fixtures.py [fixtures_dir]
"""

import sys
from pathlib import Path

from epipolar.io import parse_input
from epipolar.report import build_report, render_text


def main(root: Path) -> None:
    for path in sorted(root.glob("*.csv")) + sorted(root.glob("*.json")):
        doc = parse_input(path)
        report, code = build_report(doc.to_correspondences(), "both", name=doc.name, timings=True)
        sys.stdout.write(render_text(report))
        t = report["timings"]
        print(f"  exit={code} fundamental {t['fundamental'] * 1e3:.1f} ms, essential {t['essential'] * 1e3:.1f} ms\n")


if __name__ == "__main__":
    main(Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parents[1] / "fixtures")
