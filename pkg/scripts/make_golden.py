"""Oracle zeros of the closed-form square-well Jost function, frozen to JSON.

Roots come from mpmath's secant solver seeded on a dense grid, so they are
independent of the ODE solver and of the contour subdivision under test.

    python3 scripts/make_golden.py --c 4 --radius 30 --out src/revscatter/data/square_well_c4_R30.json
"""
import argparse
import json

import mpmath as mp
import numpy as np

from revscatter.numerics import Contour, winding_numbers
from revscatter.oracles import square_well_psi


def psi_mp(c):
    def f(k):
        kap = mp.sqrt(k * k - c)
        sinc = mp.sin(kap) / kap if abs(kap) > mp.mpf("1e-30") else mp.mpf(1)
        return mp.exp(1j * k) * (mp.cos(kap) - 1j * k * sinc)
    return f


def oracle_zeros(c, radius, spacing=0.25, depth=None):
    mp.mp.dps = 30
    f = psi_mp(c)
    depth = depth or (np.log(radius + 1) + 3)
    xs = np.arange(0.0, radius + 2, spacing)
    ys = np.arange(-depth, 0.0, spacing)
    found = []
    for x in xs:
        for y in ys:
            try:
                z = complex(mp.findroot(f, mp.mpc(x, y), tol=1e-28, maxsteps=60))
            except (ValueError, ZeroDivisionError):
                continue
            if z.imag >= -1e-12 or z.real < -1e-9 or abs(z) > radius:
                continue
            if abs(z.real) < 1e-9:
                z = complex(0.0, z.imag)
            if all(abs(z - w) > 1e-8 for w in found):
                found.append(z)
    return sorted(found, key=lambda z: (abs(z), np.angle(z)))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--c", type=float, default=4.0)
    ap.add_argument("--radius", type=float, default=30.0)
    ap.add_argument("--out", default="src/revscatter/data/square_well_c4_R30.json")
    a = ap.parse_args()
    zs = oracle_zeros(a.c, a.radius)
    # cross-check the lower-half count with the closed form's own winding number
    n_box = winding_numbers(lambda k: square_well_psi(a.c, k),
                            [Contour.rectangle(-1e-3, a.radius, -a.radius, -1e-4, 200)],
                            scale=lambda k: np.exp(2 * np.maximum(0, -np.imag(k))))[0]
    n_found = sum(1 if z.real == 0 else 2 for z in zs)
    print(f"{len(zs)} zeros with Re >= 0, {n_found} with mirrors; box winding {n_box}")
    with open(a.out, "w") as fh:
        json.dump({"c": a.c, "radius": a.radius,
                   "zeros": [[z.real, z.imag] for z in zs]}, fh, indent=1)


if __name__ == "__main__":
    main()
