"""Download the public benchmark datasets into a local directory.

Grabs the UCI machine-learning files (iris, wine, glass, the two wine
quality tables) and the Joensuu clustering benchmark files (a1-a3, s1-s4
plus the published s-set ground-truth centroids).  Files land under
--dest with the registry name as basename, so afterwards

    from acoclust.ingest import load_registry
    data = load_registry("iris", "data/iris.csv")

works directly.  The test suite never calls this script; the optional
s1 ground-truth check activates when data/s1.txt and data/s1-centroids.txt
are copied to tests/data/ (or pointed at via ACOCLUST_S1_DATA and
ACOCLUST_S1_CENTROIDS).

Usage: python3 scripts/fetch_datasets.py [--dest data] [--only iris,s1]
"""

import argparse
import sys
import urllib.error
import urllib.request
from pathlib import Path

UCI = "https://archive.ics.uci.edu/ml/machine-learning-databases"
SIPU = "https://cs.uef.fi/sipu/datasets"

SOURCES = {
    "iris": (f"{UCI}/iris/iris.data", "iris.csv"),
    "wine": (f"{UCI}/wine/wine.data", "wine.csv"),
    "glass": (f"{UCI}/glass/glass.data", "glass.csv"),
    "winequality-red": (f"{UCI}/wine-quality/winequality-red.csv",
                        "winequality-red.csv"),
    "winequality-white": (f"{UCI}/wine-quality/winequality-white.csv",
                          "winequality-white.csv"),
    "a1": (f"{SIPU}/a1.txt", "a1.txt"),
    "a2": (f"{SIPU}/a2.txt", "a2.txt"),
    "a3": (f"{SIPU}/a3.txt", "a3.txt"),
    "s1": (f"{SIPU}/s1.txt", "s1.txt"),
    "s2": (f"{SIPU}/s2.txt", "s2.txt"),
    "s3": (f"{SIPU}/s3.txt", "s3.txt"),
    "s4": (f"{SIPU}/s4.txt", "s4.txt"),
    "s1-centroids": (f"{SIPU}/s1-cb.txt", "s1-centroids.txt"),
    "s2-centroids": (f"{SIPU}/s2-cb.txt", "s2-centroids.txt"),
    "s3-centroids": (f"{SIPU}/s3-cb.txt", "s3-centroids.txt"),
    "s4-centroids": (f"{SIPU}/s4-cb.txt", "s4-centroids.txt"),
}


def fetch(url: str, target: Path, timeout: float) -> None:
    request = urllib.request.Request(url, headers={"User-Agent": "curl/8.0"})
    with urllib.request.urlopen(request, timeout=timeout) as response:
        payload = response.read()
    target.write_bytes(payload)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dest", default="data", help="download directory")
    ap.add_argument("--only", default="",
                    help="comma-separated subset of names (default: all)")
    ap.add_argument("--timeout", type=float, default=60.0)
    ap.add_argument("--force", action="store_true",
                    help="re-download files that already exist")
    args = ap.parse_args(argv)

    names = list(SOURCES)
    if args.only.strip():
        names = [s.strip() for s in args.only.split(",") if s.strip()]
        unknown = [s for s in names if s not in SOURCES]
        if unknown:
            ap.error(f"unknown dataset name(s): {', '.join(unknown)}; "
                     f"choose from {', '.join(SOURCES)}")

    dest = Path(args.dest)
    dest.mkdir(parents=True, exist_ok=True)
    failures = 0
    for name in names:
        url, basename = SOURCES[name]
        target = dest / basename
        if target.exists() and not args.force:
            print(f"{name}: {target} already present, skipping")
            continue
        try:
            fetch(url, target, args.timeout)
        except (urllib.error.URLError, OSError) as exc:
            failures += 1
            print(f"{name}: FAILED ({exc})", file=sys.stderr)
            continue
        print(f"{name}: wrote {target} ({target.stat().st_size} bytes)")

    if failures:
        print(f"{failures} download(s) failed; rerun later or fetch by hand",
              file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
