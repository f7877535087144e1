"""Drive the command-line tool on text and binary files.

Run:  python demos/05_cli_files.py
"""

import tempfile
from pathlib import Path

import numpy as np

from iperm import cli, fileio

work = Path(tempfile.mkdtemp())
perm = work / "perm.txt"
perm.write_text("# n=10\n3 -1 6 8 -4 7 -5 -9 -10 2\n")


def iperm(*argv):
    print("$ iperm", " ".join(str(a) for a in argv))
    code = cli.main([str(a) for a in argv])
    print(f"(exit {code})\n")


iperm("verify", "--state", "idempotent-perm", "--in", perm)
iperm("transform", "--op", "invert", "--in", perm, "--out", "-")
iperm("transform", "--op", "assoc-permute", "--in", perm, "--out", work / "gamma.txt")
iperm("transform", "--op", "fill-forward", "--in", work / "gamma.txt", "--out", "-")
iperm("count", "--n", 4, "--enumerate")

keys = work / "keys.bin"
fileio.write(keys, fileio.DataFile(np.random.default_rng(5).integers(1, 21, size=20)), binary=True)
iperm("sort", "--algo", "stable-aux", "--in", keys, "--out", "-", "--tags-out", "-")
iperm("bench", "--n", 4096, "--trials", 1, "--dist", "few-distinct", "--no-count")

bad = work / "bad.txt"
bad.write_text("2 3 1\n")
iperm("verify", "--state", "idempotent-map", "--in", bad)
