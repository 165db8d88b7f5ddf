#!/usr/bin/env python3
"""Write a stratified MNIST subset as IDX files.

The source is the 5,000-image MNIST sample (500 per digit) shipped inside the
mlxtend wheel as data/mnist_5k.csv.gz: 784 pixel columns followed by the label.

usage: make_mnist_subset.py mnist_5k.csv.gz OUT_DIR
"""
import gzip
import pathlib
import struct
import sys


def main() -> int:
    if len(sys.argv) != 3:
        print(__doc__, file=sys.stderr)
        return 2
    src, out = pathlib.Path(sys.argv[1]), pathlib.Path(sys.argv[2])
    out.mkdir(parents=True, exist_ok=True)

    pixels, labels = bytearray(), bytearray()
    with gzip.open(src, "rt") as fh:
        for line in fh:
            cells = [int(float(c)) for c in line.strip().split(",")]
            if len(cells) != 785:
                raise SystemExit(f"unexpected row width {len(cells)}")
            pixels.extend(cells[:784])
            labels.append(cells[784])

    n = len(labels)
    with open(out / "mnist5k-images-idx3-ubyte", "wb") as fh:
        fh.write(struct.pack(">IIII", 0x00000803, n, 28, 28))
        fh.write(pixels)
    with open(out / "mnist5k-labels-idx1-ubyte", "wb") as fh:
        fh.write(struct.pack(">II", 0x00000801, n))
        fh.write(labels)
    print(f"wrote {n} images to {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
