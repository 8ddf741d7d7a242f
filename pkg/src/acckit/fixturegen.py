"""Regenerate the fixture files shipped with the package.

Two fixtures are verbatim canonical data (the twelve-set family and the
matching twelve-row codebook).  The two constant-weight codes are search
outputs, regenerated deterministically:

* ``example3_inner_code.json`` comes from a cyclic search over Z_20: the four
  translates of {0,4,8,12,16} form a parallel class, and a fixed-order scan
  finds four base blocks whose twenty translates each stay pairwise within
  the overlap cap, giving 84 words; the first 83 in ascending order are
  kept.  No randomness is involved.
* ``example5_inner_code.json`` is the annealing searcher's output at its
  frozen seed.

Run as ``python -m acckit.fixturegen [--out-dir DIR]``.
"""

from __future__ import annotations

import argparse
import itertools
import json
from pathlib import Path

from .cwcodes import ConstantWeightCode, export_code, stochastic_search, verify_cw_code

FIXTURE_DIR = Path(__file__).parent / "fixtures"

EXAMPLE1_SETS = [
    [0, 3, 6], [0, 4, 8], [0, 5, 7], [1, 3, 8], [1, 4, 7], [1, 5, 6],
    [2, 3, 7], [2, 4, 6], [2, 5, 8], [0, 4, 7], [1, 5, 8], [2, 3, 6],
]

EXAMPLE2_ROWS = [
    [0, 0, 0], [0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 1, 1], [1, 2, 0],
    [2, 0, 1], [2, 1, 0], [2, 2, 2], [0, 1, 1], [1, 2, 2], [2, 0, 0],
]

# Frozen search parameters for the 31-word weight-4 code.
CW21_SEED = 4
CW21_BUDGET = 300_000


def cyclic_weight5_code(n: int = 20, w: int = 5, max_overlap: int = 2,
                        step: int = 4) -> list[int]:
    """Deterministic cyclic packing search over Z_n.

    Starts from the parallel class of translates of {0, step, 2*step, ...},
    collects all base blocks through 0 whose own translate overlaps stay
    within the cap and that fit the parallel class, and picks the first
    mutually compatible quadruple of orbits in scan order.
    """
    full = (1 << n) - 1

    def rot(mask: int, x: int) -> int:
        return ((mask << x) | (mask >> (n - x))) & full

    def block(points) -> int:
        m = 0
        for p in points:
            m |= 1 << p
        return m

    pclass = [block(range(j, n, step)) for j in range(step)]
    cands = []
    seen = set()
    for rest in itertools.combinations(range(1, n), w - 1):
        b = block((0,) + rest)
        if any((b & pc).bit_count() > max_overlap for pc in pclass):
            continue
        if any((b & rot(b, x)).bit_count() > max_overlap for x in range(1, n)):
            continue
        key = min(rot(b, x) for x in range(n))
        if key in seen:
            continue
        seen.add(key)
        cands.append(b)

    def compatible(a: int, b: int) -> bool:
        return all((a & rot(b, x)).bit_count() <= max_overlap for x in range(n))

    nc = len(cands)
    adj = [set() for _ in range(nc)]
    for i in range(nc):
        for j in range(i + 1, nc):
            if compatible(cands[i], cands[j]):
                adj[i].add(j)
                adj[j].add(i)

    quad = None
    for a in range(nc):
        for b in sorted(adj[a]):
            if b <= a:
                continue
            ab = adj[a] & adj[b]
            for c in sorted(ab):
                if c <= b:
                    continue
                rest = ab & adj[c]
                ds = [d for d in sorted(rest) if d > c]
                if ds:
                    quad = (a, b, c, ds[0])
                    break
            if quad:
                break
        if quad:
            break
    if quad is None:
        raise RuntimeError("cyclic quadruple search failed")

    words = list(pclass)
    for idx in quad:
        words.extend(rot(cands[idx], x) for x in range(n))
    return sorted(words)


def build_cw_q20_n83() -> ConstantWeightCode:
    words = cyclic_weight5_code()
    code = ConstantWeightCode(q=20, w=5, d=6, words=words[:83])
    verdict = verify_cw_code(code)
    if not verdict.ok:
        raise RuntimeError(f"cyclic code failed verification: {verdict.reason}")
    return code


def build_cw_q21_n31() -> ConstantWeightCode:
    code = stochastic_search(21, 6, 4, 31, seed=CW21_SEED, budget=CW21_BUDGET)
    if code.N < 31:
        raise RuntimeError(f"frozen search only reached N={code.N}, expected 31")
    return code


def make_fixture_files(out_dir: Path | str = FIXTURE_DIR) -> dict[str, Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = {}

    fam_path = out_dir / "example1_family.json"
    with open(fam_path, "w") as fh:
        json.dump({"universe": {"v": 9, "product": {"m": 3, "q": 3}},
                   "sets": EXAMPLE1_SETS}, fh, sort_keys=True)
        fh.write("\n")
    paths["example1_family"] = fam_path

    code_path = out_dir / "example2_code.json"
    with open(code_path, "w") as fh:
        json.dump({"s": 3, "m": 3, "rows": EXAMPLE2_ROWS,
                   "provenance": "imported"}, fh, sort_keys=True)
        fh.write("\n")
    paths["example2_code"] = code_path

    cw20 = build_cw_q20_n83()
    p = out_dir / "example3_inner_code.json"
    export_code(cw20, p)
    paths["example3_inner_code"] = p

    cw21 = build_cw_q21_n31()
    p = out_dir / "example5_inner_code.json"
    export_code(cw21, p)
    paths["example5_inner_code"] = p
    return paths


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        description="regenerate the packaged fixture files")
    parser.add_argument("--out-dir", default=str(FIXTURE_DIR))
    args = parser.parse_args(argv)
    paths = make_fixture_files(args.out_dir)
    for name, path in sorted(paths.items()):
        print(f"wrote {name}: {path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
