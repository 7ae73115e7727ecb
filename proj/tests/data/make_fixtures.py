"""Regenerates the fixture files in this directory.

entropy_histograms.txt: 200 seeded random 256-bin histograms, one per line,
as "<expected_entropy_bits> <c0> ... <c255>". The expected value is
-sum p*log2(p) evaluated with mpmath at 50 digits.

PNG fixtures are written with Pillow so the decoder is checked against an
independent encoder.
"""
import numpy as np
import mpmath
from PIL import Image

mpmath.mp.dps = 50


def entropy_bits(counts):
    total = mpmath.mpf(sum(int(c) for c in counts))
    h = mpmath.mpf(0)
    for c in counts:
        if c:
            p = mpmath.mpf(int(c)) / total
            h -= p * mpmath.log(p, 2)
    return h


def histograms():
    rng = np.random.default_rng(20181229)
    with open("entropy_histograms.txt", "w") as f:
        for i in range(200):
            occupied = int(rng.integers(1, 257))
            bins = rng.choice(256, size=occupied, replace=False)
            counts = np.zeros(256, dtype=np.int64)
            counts[bins] = rng.integers(1, 5000, size=occupied)
            if i % 7 == 0:
                counts[bins[0]] += int(rng.integers(100000, 1000000))  # skewed
            f.write(mpmath.nstr(entropy_bits(counts), 20, strip_zeros=False))
            f.write(" " + " ".join(str(int(c)) for c in counts) + "\n")


def pngs():
    rgb = np.array([[[10, 20, 30], [40, 50, 60]], [[70, 80, 90], [100, 110, 120]]], dtype=np.uint8)
    Image.fromarray(rgb, "RGB").save("rgb_2x2.png")
    gray16 = np.array([[0, 1000], [40000, 65535]], dtype=np.uint16)
    Image.fromarray(gray16).save("gray16_2x2.png")
    pal = Image.fromarray(rgb, "RGB").quantize(colors=4)
    pal.save("palette_2x2.png")
    rgba = np.dstack([rgb, np.full((2, 2), 128, dtype=np.uint8)])
    Image.fromarray(rgba, "RGBA").save("rgba_2x2.png")
    with open("zeros_4x4.pgm", "wb") as f:
        f.write(b"P5\n# all zero\n4 4\n255\n" + bytes(16))


if __name__ == "__main__":
    histograms()
    pngs()
