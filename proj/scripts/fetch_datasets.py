#!/usr/bin/env python3
"""Materialize the benchmark datasets used by the acceptance suite into data/.

iris comes from scikit-learn's bundled copy and works offline. The other
three are downloaded from the UCI repository, so they need network access.
Already-present files are left untouched; pass --force to rewrite them.
"""

import argparse
import io
import sys
import urllib.request
from pathlib import Path

DATA_DIR = Path(__file__).resolve().parent.parent / "data"

UCI = "https://archive.ics.uci.edu/ml/machine-learning-databases"
SOURCES = {
    "seeds.csv": f"{UCI}/00236/seeds_dataset.txt",
    "banknote.csv": f"{UCI}/00267/data_banknote_authentication.txt",
    "letters.csv": f"{UCI}/letter-recognition/letter-recognition.data",
}


def write_iris(force: bool) -> None:
    out = DATA_DIR / "iris.csv"
    if out.exists() and not force:
        print(f"{out.name}: present")
        return
    from sklearn.datasets import load_iris

    iris = load_iris()
    with open(out, "w") as f:
        f.write("sepal_length,sepal_width,petal_length,petal_width,species\n")
        for row, label in zip(iris.data, iris.target):
            cells = ",".join(f"{v:g}" for v in row)
            f.write(f"{cells},{iris.target_names[label]}\n")
    print(f"{out.name}: wrote {len(iris.data)} rows")


def normalize(name: str, raw: bytes) -> str:
    text = raw.decode("utf-8")
    rows = []
    for line in text.splitlines():
        if not line.strip():
            continue
        if name == "seeds.csv":
            cells = line.split()  # tab-separated with stray double tabs
        else:
            cells = [c.strip() for c in line.split(",")]
        rows.append(",".join(cells))
    if name == "letters.csv":
        # label is the first column upstream; move it last for uniformity
        rows = [",".join(r.split(",")[1:] + r.split(",")[:1]) for r in rows]
    return "\n".join(rows) + "\n"


def fetch(name: str, url: str, force: bool) -> bool:
    out = DATA_DIR / name
    if out.exists() and not force:
        print(f"{name}: present")
        return True
    try:
        with urllib.request.urlopen(url, timeout=30) as resp:
            raw = resp.read()
    except Exception as exc:  # noqa: BLE001
        print(f"{name}: FAILED ({exc})", file=sys.stderr)
        return False
    out.write_text(normalize(name, raw))
    print(f"{name}: wrote {len(raw)} bytes from {url}")
    return True


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--force", action="store_true", help="rewrite existing files")
    args = ap.parse_args()
    DATA_DIR.mkdir(exist_ok=True)

    write_iris(args.force)
    ok = True
    for name, url in SOURCES.items():
        ok &= fetch(name, url, args.force)
    if not ok:
        print(
            "some downloads failed; the acceptance criteria that need those "
            "files will report the gap",
            file=sys.stderr,
        )
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
