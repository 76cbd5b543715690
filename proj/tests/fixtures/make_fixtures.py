#!/usr/bin/env python3
"""Regenerates the small path fixtures and freezes reference values.

The reference values come from a plain-Python transcription of the discrete
model (1-based cyclic indices), independent of the C++ library. Run from this
directory: python3 make_fixtures.py
"""
import json
import math
import random

PRESETS = {
    "metric1": (1, 2, 0, 0, 0, 0, 0),
    "metric2": (1, 2, 0, 0, 2, 0, 0),
    "metric3": (1, 2, 4, 4, 0, 0, 0),
    "metric4": (1, 2, 4, 4, 2, 16, 4),
}


def evaluate(slices, coeffs):
    A0, A1, A2, A3, B0, B1, C0 = coeffs
    T = len(slices) - 1
    N = len(slices[0])
    prev = lambda v: N if v == 1 else v - 1
    nxt = lambda v: 1 if v == N else v + 1
    c = {(t, v, i): slices[t - 1][v - 1][i - 1] for t in range(1, T + 2) for v in range(1, N + 1) for i in (1, 2)}
    geo = {}
    for t in range(1, T + 2):
        cx = {(v, i): c[t, nxt(v), i] - c[t, v, i] for v in range(1, N + 1) for i in (1, 2)}
        ve = {v: math.sqrt(cx[v, 1] ** 2 + cx[v, 2] ** 2) for v in range(1, N + 1)}
        vv = {v: (ve[prev(v)] + ve[v]) / 2 for v in range(1, N + 1)}
        vt = {(v, w): vv[v] + ve[w] for v in range(1, N + 1) for w in (prev(v), v)}
        tg = {(v, i): cx[v, i] / ve[v] for v in range(1, N + 1) for i in (1, 2)}
        n = {(v, 1): tg[v, 2] for v in range(1, N + 1)}
        n.update({(v, 2): -tg[v, 1] for v in range(1, N + 1)})
        length = sum(ve[v] for v in range(1, N + 1))
        ang = {}
        for v in range(1, N + 1):
            d = tg[prev(v), 1] * tg[v, 1] + tg[prev(v), 2] * tg[v, 2]
            ang[v] = math.acos(max(-1.0, min(1.0, d)))
        kap = {v: ang[v] / vv[v] for v in range(1, N + 1)}
        kap_s = {v: (kap[nxt(v)] - kap[v]) / ve[v] for v in range(1, N + 1)}
        geo[t] = dict(ve=ve, vv=vv, vt=vt, n=n, length=length, kap=kap, kap_s=kap_s)
    ct = {(t, v, i): T * (c[t + 1, v, i] - c[t, v, i]) for t in range(1, T + 1) for v in range(1, N + 1) for i in (1, 2)}
    penalty = sum((geo[t]["ve"][v] - geo[t]["length"] / N) ** 2 for t in range(1, T + 2) for v in range(1, N + 1))
    energies = []
    for t in range(1, T + 1):
        e = 0.0
        for s in (t, t + 1):
            g = geo[s]
            n = g["n"]
            a = {(v, w): sum(ct[t, v, i] * n[w, i] for i in (1, 2)) for v in range(1, N + 1) for w in (prev(v), v)}
            for v in range(1, N + 1):
                for w in (prev(v), v):
                    if w == v:
                        a_s = (sum(ct[t, v, i] * (n[w, i] - n[prev(w), i]) for i in (1, 2))
                               + sum((ct[t, nxt(v), i] - ct[t, v, i]) * n[w, i] for i in (1, 2))) / g["vt"][v, w]
                        a_ss = ((a[nxt(v), w] - a[v, w]) / g["ve"][w] - (a[v, w] - a[v, prev(w)]) / g["vv"][v]) / (
                            g["ve"][w] + g["vv"][v])
                    else:
                        a_s = (sum(ct[t, v, i] * (n[nxt(w), i] - n[w, i]) for i in (1, 2))
                               + sum((ct[t, v, i] - ct[t, prev(v), i]) * n[w, i] for i in (1, 2))) / g["vt"][v, w]
                        a_ss = ((a[v, nxt(w)] - a[v, w]) / g["vv"][v] - (a[v, w] - a[prev(v), w]) / g["ve"][w]) / g["vt"][v, w]
                    k = g["kap"][v]
                    e += ((A0 + A1 * k ** 2 + A2 * k ** 4 + A3 * g["kap_s"][w] ** 2) * a[v, w] ** 2
                          + (B0 + B1 * k ** 2) * a_s ** 2 + C0 * a_ss ** 2) * g["vt"][v, w]
        energies.append(e / 8)
    return dict(per_step=energies, total_energy=sum(energies) / T, penalty=penalty)


def random_polygon(rng, n, scale):
    pts = []
    for j in range(n):
        th = 2 * math.pi * j / n + rng.uniform(-0.25, 0.25) * 2 * math.pi / n
        r = scale * rng.uniform(0.7, 1.3)
        pts.append([r * math.cos(th), r * math.sin(th)])
    return pts


def make(name, slices, metric="metric4"):
    doc = {
        "format": "geoshape/1",
        "T": len(slices) - 1,
        "N": len(slices[0]),
        "metric": metric,
        "objective": 0.0,
        "slices": slices,
        "expected": {k: evaluate(slices, v) for k, v in PRESETS.items()},
    }
    e = doc["expected"][metric]
    doc["objective"] = e["total_energy"] + e["penalty"]
    with open(name, "w") as f:
        json.dump(doc, f, indent=1)
        f.write("\n")


def main():
    rng = random.Random(20141)
    # Hand-built: unit square to a 2 x 1.5 rectangle in one step.
    make("square_to_rect_N4_T1.json",
         [[[0, 0], [1, 0], [1, 1], [0, 1]], [[0, 0], [2, 0], [2, 1.5], [0, 1.5]]])
    for idx, (n, T) in enumerate([(5, 1), (6, 2), (8, 3), (7, 3), (8, 2), (4, 3)]):
        base0 = random_polygon(rng, n, 1.0)
        base1 = random_polygon(rng, n, 1.6)
        slices = []
        for k in range(T + 1):
            lam = k / T
            sl = []
            for v in range(n):
                x = (1 - lam) * base0[v][0] + lam * base1[v][0]
                y = (1 - lam) * base0[v][1] + lam * base1[v][1]
                if 0 < k < T:
                    x += rng.uniform(-0.1, 0.1)
                    y += rng.uniform(-0.1, 0.1)
                sl.append([x, y])
            slices.append(sl)
        make(f"random_{idx}_N{n}_T{T}.json", slices)


if __name__ == "__main__":
    main()
