#!/usr/bin/env python3
"""Compares `eds gen` tables with the exact-fraction oracle.

    compare_gen.py EDS_BINARY FIXTURE_DIR N
"""
import json
import subprocess
import sys
import tempfile
from fractions import Fraction as F
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))
import eds_oracle  # noqa: E402

FIXTURES = ["37a1.json", "37a1_5P.json", "389a1.json"]


def main(argv):
    binary, fixture_dir, n_max = argv[1], Path(argv[2]), int(argv[3])
    failures = 0
    with tempfile.TemporaryDirectory() as tmp:
        for name in FIXTURES:
            spec = json.loads((fixture_dir / name).read_text())
            c = tuple(int(spec[k]) for k in ("a1", "a2", "a3", "a4", "a6"))
            P = (F(spec["point"]["x"]), F(spec["point"]["y"]))
            expected = eds_oracle.denominators(c, P, n_max)
            out = Path(tmp) / (name + ".jsonl")
            subprocess.run([binary, "gen", "--curve", str(fixture_dir / name), "--n-max", str(n_max),
                            "--out", str(out)], check=True, capture_output=True)
            lines = out.read_text().splitlines()[1:]
            got = [int(json.loads(line)["D"]) for line in lines]
            if got != expected:
                bad = next(i for i in range(min(len(got), len(expected))) if got[i] != expected[i]) + 1 \
                    if len(got) == len(expected) else "length"
                print(f"{name}: mismatch at n={bad}")
                failures += 1
            else:
                print(f"{name}: D_1..D_{n_max} agree")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
