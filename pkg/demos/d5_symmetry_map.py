"""
Existence and symmetry map, d = 5, critical case
================================================

Sample the four threshold curves in theta, classify a grid of (theta, a)
points and write CSV / JSON / SVG.  A 100 x 100 map needs about 100 radial
optimizations (one per column); pass a smaller --nx for a quick look.
"""
import argparse

from symbreak.regions import MapSpec, build_map, crossings, emit

parser = argparse.ArgumentParser()
parser.add_argument("--nx", type=int, default=100)
parser.add_argument("--ny", type=int, default=100)
parser.add_argument("--out", default="d5_map")
parser.add_argument("--workers", type=int, default=1)
args = parser.parse_args()

spec = MapSpec(d=5, nx=args.nx, ny=args.ny, workers=args.workers, cache=args.out + ".curves.json")
rmap = build_map(spec)
paths = emit(rmap, args.out)
for kind, path in paths.items():
    print(f"{kind}: {path}")

###############################################################################
# The linearization curve and the GN comparison curve cross once.
tab = rmap.curves
print("a_bar / a_star_CKN crossing at theta =", crossings(tab.x, tab.curves["a_bar"], tab.curves["a_star_ckn"]))
F = rmap.flag_matrix()
print("cells per flag:", dict(zip(rmap.metadata()["flags"], F.sum(axis=0).tolist())))
