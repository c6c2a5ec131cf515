#!/usr/bin/env python3
# Copyright 2026 The Manifold Scattering Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#    http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Writes MNIST IDX files from a CSV of 784 pixel bytes followed by a label.

The 5000-digit MNIST subset shipped inside the mlxtend wheel
(mlxtend/data/data/mnist_5k.csv.gz) has this layout. Usage:

    pip download --no-deps -d /tmp/whl mlxtend
    python3 tools/make_mnist_idx.py /tmp/whl/mlxtend-*.whl data/mnist
"""
import gzip
import struct
import sys
import zipfile
from pathlib import Path


def read_rows(source: Path):
    if source.suffix == ".whl":
        with zipfile.ZipFile(source) as z:
            raw = z.read("mlxtend/data/data/mnist_5k.csv.gz")
        text = gzip.decompress(raw).decode()
    elif source.suffix == ".gz":
        text = gzip.decompress(source.read_bytes()).decode()
    else:
        text = source.read_text()
    for line in text.splitlines():
        if line.strip():
            vals = [int(float(v)) for v in line.split(",")]
            yield vals[:-1], vals[-1]


def main(argv):
    if len(argv) != 3:
        print(__doc__, file=sys.stderr)
        return 2
    out = Path(argv[2])
    out.mkdir(parents=True, exist_ok=True)
    rows = list(read_rows(Path(argv[1])))
    with open(out / "images-idx3-ubyte", "wb") as f:
        f.write(struct.pack(">IIII", 0x803, len(rows), 28, 28))
        for pixels, _ in rows:
            f.write(bytes(pixels))
    with open(out / "labels-idx1-ubyte", "wb") as f:
        f.write(struct.pack(">II", 0x801, len(rows)))
        f.write(bytes(label for _, label in rows))
    print(f"wrote {len(rows)} digits to {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
