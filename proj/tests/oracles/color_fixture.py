#!/usr/bin/env python3
# Copyright The objgrid authors
# SPDX-License-Identifier: Apache-2.0
#
# Test-only oracle for the categorical palette. Independent of the C++ code:
# FNV-1a is written out from its published constants and the HSL->RGB step
# uses exact rationals, so ties round deterministically (half up).
#
# Usage: color_fixture.py > tests/fixtures/colors.tsv

from fractions import Fraction
import sys

FNV_OFFSET = 2166136261
FNV_PRIME = 16777619
SATURATIONS = (55, 65, 75, 85)
LIGHTNESSES = (40, 55, 70)

VALUES = [
    "",
    "a", "b", "A", "B", "z", "0", " ", "-", ".",
    "main", "Thread-0", "AWT-EventQueue-0", "Thread-1", "pool-1-thread-1",
    "java.util.Vector", "java.util.LinkedList", "java.util.HashMap",
    "java.util.ArrayList", "java.lang.String", "java.lang.Object",
    "java.lang.StringBuilder", "java.awt.Rectangle", "javax.swing.JButton",
    "org.gjt.sp.jedit.GUIUtilities", "org.gjt.sp.jedit.jEdit",
    "org.gjt.sp.jedit.Buffer", "org.gjt.sp.jedit.EditBus",
    "org.gjt.sp.jedit.EditBusHandler", "org.gjt.sp.jedit.View",
    "org.gjt.sp.jedit.textarea.JEditTextArea", "org.gjt.sp.util.Log",
    "org.git.sp.<clinit>", "org.git.sp.jedit.Edit",
    "java.util", "java.lang", "java.awt", "javax.swing", "org.gjt.sp.jedit",
    "org.gjt.sp.jedit.textarea", "org.gjt.sp.util",
    "<init>", "<clinit>", "run", "paint", "actionPerformed", "loadMode",
    "Vector", "LinkedList",
    "ab014ef2-9672-4638-a856-80", "ea83cf16-4a41-4835-9017-eb",
    "ünicöde", "日本語", "tab\there",
    "x" * 64,
]


def fnv1a32(data: bytes) -> int:
    h = FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * FNV_PRIME) % (1 << 32)
    return h


def hsl_to_rgb(hue: int, sat_pct: int, light_pct: int):
    s = Fraction(sat_pct, 100)
    l = Fraction(light_pct, 100)
    c = (1 - abs(2 * l - 1)) * s
    hp = Fraction(hue, 60)
    x = c * (1 - abs(hp % 2 - 1))
    sector = hue // 60
    r1, g1, b1 = [
        (c, x, 0), (x, c, 0), (0, c, x),
        (0, x, c), (x, 0, c), (c, 0, x),
    ][sector]
    m = l - c / 2

    def channel(v):
        scaled = (v + m) * 255
        return int(scaled + Fraction(1, 2)) if scaled >= 0 else 0

    return channel(r1), channel(g1), channel(b1)


def main():
    out = sys.stdout
    out.write("# value(escaped)\tfnv1a\thue\tsat\tlight\thex\n")
    for v in VALUES:
        h = fnv1a32(v.encode("utf-8"))
        hue = h % 360
        sat = SATURATIONS[(h // 360) % 4]
        light = LIGHTNESSES[(h // 1440) % 3]
        r, g, b = hsl_to_rgb(hue, sat, light)
        escaped = v.replace("\\", "\\\\").replace("\t", "\\t")
        out.write(f"{escaped}\t{h}\t{hue}\t{sat}\t{light}\t#{r:02x}{g:02x}{b:02x}\n")


if __name__ == "__main__":
    main()
