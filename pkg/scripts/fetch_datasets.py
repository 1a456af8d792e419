#!/usr/bin/env python3
"""Download the public KONECT bipartite datasets used by the acceptance tests.

Each archive holds an ``out.<name>`` edge list (one-based, ``%`` comments);
it is extracted to ``<dest>/<stem>.txt``, which is where the tests look
(``$MBE_DATA_DIR`` or ``<repo>/data``).  Datasets are not vendored.
"""
from __future__ import annotations

import argparse
import os
import shutil
import sys
import tarfile
import tempfile
import urllib.request
from pathlib import Path

URL = "http://konect.cc/files/download.tsv.{name}.tar.bz2"

# file stem used by the tests -> KONECT network name
DATASETS = {
    "corporate-leadership": "brunson_corporate-leadership",
    "unicode": "unicodelang",
    "ucforum": "opsahl-ucforum",
    "movielens-u-t": "movielens-10m_ut",
    "movielens-t-i": "movielens-10m_ti",
    "marvel": "marvel",
    "movielens-u-i": "movielens-10m_ui",
    "youtube": "youtube-groupmemberships",
}


def fetch(stem: str, dest: Path, force: bool = False) -> Path:
    name = DATASETS[stem]
    target = dest / f"{stem}.txt"
    if target.exists() and not force:
        print(f"{stem}: already present at {target}")
        return target
    url = URL.format(name=name)
    print(f"{stem}: downloading {url}")
    with tempfile.TemporaryDirectory() as tmp:
        archive = Path(tmp) / "a.tar.bz2"
        with urllib.request.urlopen(url, timeout=120) as resp, open(archive, "wb") as fh:
            shutil.copyfileobj(resp, fh)
        with tarfile.open(archive, "r:bz2") as tar:
            member = next((m for m in tar.getmembers()
                           if os.path.basename(m.name) == f"out.{name}"), None)
            if member is None:
                raise RuntimeError(f"out.{name} not found in {url}")
            src = tar.extractfile(member)
            with open(target, "wb") as fh:
                shutil.copyfileobj(src, fh)
    print(f"{stem}: wrote {target}")
    return target


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("names", nargs="*", metavar="NAME",
                        help=f"datasets to fetch (default: all of {', '.join(DATASETS)})")
    default_dest = os.environ.get("MBE_DATA_DIR", Path(__file__).resolve().parent.parent / "data")
    parser.add_argument("--dest", type=Path, default=Path(default_dest))
    parser.add_argument("--force", action="store_true", help="re-download existing files")
    parser.add_argument("--list", action="store_true", help="print the URLs and exit")
    args = parser.parse_args(argv)
    unknown = [n for n in args.names if n not in DATASETS]
    if unknown:
        parser.error(f"unknown dataset(s): {', '.join(unknown)}")
    names = args.names or list(DATASETS)
    if args.list:
        for stem in names:
            print(f"{stem}\t{URL.format(name=DATASETS[stem])}")
        return 0
    args.dest.mkdir(parents=True, exist_ok=True)
    failed = []
    for stem in names:
        try:
            fetch(stem, args.dest, args.force)
        except Exception as exc:  # keep going; report at the end
            print(f"{stem}: FAILED ({exc})", file=sys.stderr)
            failed.append(stem)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
