#!/usr/bin/env python3
"""Naive reference for the oil-paint golden file.

Builds the 8x8 gradient test pattern, runs the histogram oil-paint loop
directly (float bin formula, L+1 bins, zero-initialized output) and writes
the result as a binary PPM.
"""
import sys

W, H = 8, 8
RADIUS = 2
LEVELS = 20


def gradient(w, h):
    px = bytearray()
    for y in range(h):
        for x in range(w):
            px.append((x * 255) // max(w - 1, 1))
            px.append((y * 255) // max(h - 1, 1))
            px.append(((x + y) * 255) // max(w + h - 2, 1))
    return px


def oil_paint(src, w, h, levels, radius):
    out = bytearray(len(src))
    for col in range(radius, h - radius):
        for row in range(radius, w - radius):
            count = [0] * (levels + 1)
            sr = [0] * (levels + 1)
            sg = [0] * (levels + 1)
            sb = [0] * (levels + 1)
            for y in range(-radius, radius + 1):
                for x in range(-radius, radius + 1):
                    i = ((col + y) * w + (row + x)) * 3
                    r, g, b = src[i], src[i + 1], src[i + 2]
                    cur = int(((r + g + b) * levels / 3.0) / 255)
                    count[cur] += 1
                    sr[cur] += r
                    sg[cur] += g
                    sb[cur] += b
            best, cur_max = 0, count[0]
            for i in range(levels + 1):
                if count[i] > cur_max:
                    cur_max, best = count[i], i
            o = (col * w + row) * 3
            if cur_max > 0:
                out[o] = sr[best] // cur_max
                out[o + 1] = sg[best] // cur_max
                out[o + 2] = sb[best] // cur_max
    return out


def main(path):
    out = oil_paint(gradient(W, H), W, H, LEVELS, RADIUS)
    with open(path, "wb") as f:
        f.write(b"P6\n%d %d\n255\n" % (W, H))
        f.write(out)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "gradient8_r2_l20_zero.ppm")
