#!/usr/bin/env python3
"""Integer-graded charts of HFPSS(E_3) on pages 3, 7, 15 and E-infinity.

Closed form, computed point by point without any page sweep. On the line
b = 0 the E2 point (a, s) carries ubar^x u2sigma^y asigma^s with
x = (a + s)/2, y = (a - s)/4.

Page k (length r = 2^(k+1) - 1) sends the point with v2(y) = k - 1 to
(a - 1, s + r). Hence a point is
  * hit on page j for every j <= min(v2(y), n) with s >= 2^(j+1) - 1
    (y = 0 counts as infinite valuation), always consecutively from j = 1;
  * a source on page v2(y) + 1 if that is <= n.
Each hit on page j < n raises TorsLevel(j) to TorsLevel(j + 1); the hit on
page n kills the point. Leaving on page k, the kernel of multiplication by
ubar_k (or of the unit map when k = n) stays behind: (2, ubar_1..ubar_{k-1})
for a filtration-zero source, (ubar_{k0}..ubar_{k-1}) for TorsLevel(k0).

Usage: gen_figures.py OUTDIR
"""

import json
import os
import sys

N = 3
STEMS = (-4, 36)
FILT = (0, 40)


def v2(y):
    return (y & -y).bit_length() - 1


def page_length(k):
    return (1 << (k + 1)) - 1


def monomial(x, y, s):
    parts = []
    for name, e in (("ubar", x), ("u2sigma", y), ("asigma", s)):
        if e == 1:
            parts.append(name)
        elif e != 0:
            parts.append(f"{name}^{e}")
    return "*".join(parts) or "1"


def witt_ideal(upto):
    if upto <= 1:
        return ("witt", "2^1")
    gens = ["2"] + [f"u{i}" for i in range(1, upto)]
    return ("witt-ideal", "(" + ",".join(gens) + ")")


def tors_ideal(k0, upto):
    if upto <= k0:
        return None
    gens = [f"u{i}" for i in range(k0, upto)]
    return ("tors-ideal", f"k0={k0};(" + ",".join(gens) + ")")


def hits(y, s):
    """Pages on which the point is a target."""
    val = N if y == 0 else min(v2(y), N)
    return [j for j in range(1, val + 1) if s >= page_length(j)]


def source_page(y):
    if y == 0 or v2(y) + 1 > N:
        return None
    return v2(y) + 1


def state_before(a, s, k):
    """(kind, annot) on page index k (k = N + 1 means E-infinity)."""
    y = (a - s) // 4
    desc = ("witt", "2^0") if s == 0 else ("tors", "k0=1")
    level = 1
    for j in hits(y, s):
        if j >= k:
            break
        if j == N:
            return None
        level = j + 1
        desc = ("tors", f"k0={level}")
    src = source_page(y)
    if src is not None and src < k:
        return witt_ideal(src) if s == 0 else tors_ideal(level, src)
    return desc


def points(a, s):
    return (a - s) % 4 == 0 and s >= 0


def chart(k):
    pts = []
    for a in range(STEMS[0], STEMS[1] + 1):
        for s in range(FILT[0], FILT[1] + 1):
            if not points(a, s):
                continue
            st = state_before(a, s, k)
            if st is None:
                continue
            x, y = (a + s) // 2, (a - s) // 4
            pts.append({"a": a, "s": s, "kind": st[0], "annot": st[1], "monomial": monomial(x, y, s)})
    arrows = []
    if k <= N:
        r = page_length(k)
        for p in pts:
            a, s = p["a"], p["s"]
            if source_page((a - s) // 4) != k:
                continue
            ta, ts = a - 1, s + r
            if STEMS[0] <= ta <= STEMS[1] and FILT[0] <= ts <= FILT[1]:
                arrows.append({"from": [a, s], "to": [ta, ts], "page": r})
    page = page_length(k) if k <= N else "inf"
    return {"version": 1, "theory": "en", "height": N, "page": page, "points": pts, "arrows": arrows}


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else os.path.dirname(os.path.abspath(__file__))
    for k, name in ((1, "e3"), (2, "e7"), (3, "e15"), (4, "einf")):
        with open(os.path.join(out, f"n3_{name}.json"), "w") as f:
            json.dump(chart(k), f, indent=1, sort_keys=True)
            f.write("\n")


if __name__ == "__main__":
    main()
