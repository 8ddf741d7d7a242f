"""Codebooks over small alphabets and their moment-matrix constructions.

Builds three related row arrays over GF(s): the strength-t orthogonal array
``U`` (all linear combinations of the first t power rows), the coset array
``V`` (the t-th power row shifted by combinations of the first t-1 rows),
and their stack ``W``.  Also provides exact distance / coincidence scans and
an orthogonal-array property checker with failure witnesses.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

import numpy as np

from .gf import GF

PROVENANCES = ("U", "V", "W", "imported")


class ParameterError(ValueError):
    """Construction parameters outside the supported range."""


@dataclass
class CodeBook:
    """M row vectors of length m with symbols in [0, s)."""

    s: int
    m: int
    rows: np.ndarray
    provenance: str = "imported"
    t: int | None = None  # strength parameter, set for U/V/W builds

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=np.int64)
        if rows.ndim != 2:
            raise ParameterError("rows must be a 2-D array")
        if rows.shape[1] != self.m:
            raise ParameterError(f"rows have length {rows.shape[1]}, expected {self.m}")
        if rows.size and (rows.min() < 0 or rows.max() >= self.s):
            raise ParameterError(f"symbols must lie in [0, {self.s})")
        if self.provenance not in PROVENANCES:
            raise ParameterError(f"unknown provenance {self.provenance!r}")
        self.rows = rows

    @property
    def M(self) -> int:
        return self.rows.shape[0]

    def row_tuples(self) -> list[tuple[int, ...]]:
        return [tuple(int(x) for x in r) for r in self.rows]

    def row_set(self) -> set[tuple[int, ...]]:
        return set(self.row_tuples())

    def to_json_dict(self) -> dict:
        d = {
            "s": self.s,
            "m": self.m,
            "rows": [[int(x) for x in r] for r in self.rows],
            "provenance": self.provenance,
        }
        if self.t is not None:
            d["t"] = self.t
        return d

    @classmethod
    def from_json_dict(cls, d: dict) -> "CodeBook":
        try:
            return cls(s=int(d["s"]), m=int(d["m"]), rows=np.array(d["rows"]),
                       provenance=str(d.get("provenance", "imported")),
                       t=int(d["t"]) if "t" in d else None)
        except (KeyError, TypeError, ValueError) as exc:
            raise ParameterError(f"malformed codebook JSON: {exc}") from exc


def save_codebook(book: CodeBook, path) -> None:
    with open(path, "w") as fh:
        json.dump(book.to_json_dict(), fh, sort_keys=True)
        fh.write("\n")


def load_codebook(path) -> CodeBook:
    with open(path) as fh:
        return CodeBook.from_json_dict(json.load(fh))


def save_codebook_text(book: CodeBook, path) -> None:
    with open(path, "w") as fh:
        for row in book.rows:
            fh.write(" ".join(str(int(x)) for x in row) + "\n")


def load_codebook_text(path, s: int | None = None) -> CodeBook:
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line:
                rows.append([int(tok) for tok in line.split()])
    if not rows:
        raise ParameterError(f"no rows in {path}")
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise ParameterError("rows have inconsistent lengths")
    arr = np.array(rows)
    if s is None:
        s = int(arr.max()) + 1
    return CodeBook(s=s, m=arr.shape[1], rows=arr)


# ---------------------------------------------------------------------------
# Moment matrix and the U / V / W builders
# ---------------------------------------------------------------------------

def rho(i: int, m: int, gf: GF) -> tuple[int, ...]:
    """Row i of the moment matrix: all-ones for i = 0, else elementwise
    i-th powers of the first m field elements."""
    if i < 0:
        raise ParameterError("power index must be nonnegative")
    if not 3 <= m <= gf.s:
        raise ParameterError(f"need 3 <= m <= {gf.s}, got m={m}")
    if i == 0:
        return (1,) * m
    return tuple(gf.pow(a, i) for a in range(m))


@dataclass(frozen=True)
class MomentMatrix:
    """Rows rho(0), ..., rho(t-1) over GF(s), as a (t, m) array."""

    gf: GF
    t: int
    m: int
    rows: tuple[tuple[int, ...], ...]

    @classmethod
    def build(cls, gf: GF, t: int, m: int) -> "MomentMatrix":
        if t < 2:
            raise ParameterError("strength t must be >= 2")
        if t > m:
            raise ParameterError(f"strength t={t} cannot exceed m={m}")
        return cls(gf=gf, t=t, m=m, rows=tuple(rho(i, m, gf) for i in range(t)))

    def as_array(self) -> np.ndarray:
        return np.array(self.rows, dtype=np.int64)


def _coefficient_grid(s: int, k: int) -> np.ndarray:
    """All s^k coefficient vectors in canonical base-s order, least
    significant coordinate first."""
    idx = np.arange(s**k, dtype=np.int64)
    out = np.empty((s**k, k), dtype=np.int64)
    for j in range(k):
        out[:, j] = (idx // s**j) % s
    return out


def _linear_combine(gf: GF, coeffs: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """Rows coeffs @ basis over the field (coeffs: (N, k), basis: (k, m))."""
    if gf.e == 1:
        return (coeffs @ basis) % gf.p
    if gf.mul_table is None:
        raise ParameterError(f"extension field GF({gf.s}) too large for array builds")
    acc = np.zeros((coeffs.shape[0], basis.shape[1]), dtype=np.int64)
    for k in range(basis.shape[0]):
        term = gf.mul_table[coeffs[:, k][:, None], basis[k][None, :]]
        acc = gf.add_table[acc, term]
    return acc


def build_U(gf: GF, t: int, m: int) -> CodeBook:
    """The s^t x m array of all linear combinations of the moment rows;
    an orthogonal array of strength t and index unity."""
    R = MomentMatrix.build(gf, t, m)
    rows = _linear_combine(gf, _coefficient_grid(gf.s, t), R.as_array())
    return CodeBook(s=gf.s, m=m, rows=rows, provenance="U", t=t)


def build_V(gf: GF, t: int, m: int) -> CodeBook:
    """The s^(t-1) x m coset array: the t-th power row plus combinations
    of the first t-1 moment rows."""
    R = MomentMatrix.build(gf, t, m)  # parameter validation
    R0 = R.as_array()[: t - 1]
    shift = np.array(rho(t, m, gf), dtype=np.int64)
    combos = _linear_combine(gf, _coefficient_grid(gf.s, t - 1), R0)
    if gf.e == 1:
        rows = (combos + shift) % gf.p
    else:
        rows = gf.add_table[combos, shift[None, :]]
    return CodeBook(s=gf.s, m=m, rows=rows, provenance="V", t=t)


def build_W(gf: GF, t: int, m: int) -> CodeBook:
    """U stacked above V: s^t + s^(t-1) rows."""
    u = build_U(gf, t, m)
    v = build_V(gf, t, m)
    return CodeBook(s=gf.s, m=m, rows=np.vstack([u.rows, v.rows]),
                    provenance="W", t=t)


# ---------------------------------------------------------------------------
# Property checks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OACheck:
    """Outcome of an orthogonal-array check; on failure, the offending
    column subset and symbol tuple with its observed count."""

    ok: bool
    strength: int
    columns: tuple[int, ...] | None = None
    symbols: tuple[int, ...] | None = None
    count: int = 0

    def __bool__(self) -> bool:
        return self.ok

    def to_json_dict(self) -> dict:
        d = {"ok": self.ok, "strength": self.strength}
        if not self.ok:
            d["columns"] = list(self.columns)
            d["symbols"] = list(self.symbols)
            d["count"] = self.count
        return d


def verify_oa(book: CodeBook, t: int, threads: int = 1) -> OACheck:
    """Check that every ordered t-tuple appears exactly once in every
    t-column subarray.  A wrong row count shows up as a count != 1 and is
    reported through the same witness fields.  Column subsets may be
    checked by a thread pool; the reported failure is always the first in
    column-subset order, so the result is independent of threads."""
    if t < 2:
        raise ParameterError("strength t must be >= 2; t = 1 is degenerate")
    if t > book.m:
        raise ParameterError(f"strength t={t} exceeds word length m={book.m}")
    s = book.s
    powers = s ** np.arange(t, dtype=np.int64)

    def check(cols):
        codes = book.rows[:, cols] @ powers
        counts = np.bincount(codes, minlength=s**t)
        bad = np.nonzero(counts != 1)[0]
        if len(bad):
            code = int(bad[0])
            symbols = tuple(int(code // s**j) % s for j in range(t))
            return OACheck(ok=False, strength=t, columns=cols,
                           symbols=symbols, count=int(counts[code]))
        return None

    subsets = itertools.combinations(range(book.m), t)
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for verdict in pool.map(check, subsets):
                if verdict is not None:
                    return verdict
    else:
        for cols in subsets:
            verdict = check(cols)
            if verdict is not None:
                return verdict
    return OACheck(ok=True, strength=t)


def coincidences(row_a, row_b) -> int:
    """Number of coordinates where the two rows agree."""
    a = np.asarray(row_a)
    b = np.asarray(row_b)
    if a.shape != b.shape:
        raise ParameterError("rows must have equal length")
    return int((a == b).sum())


def min_distance(book: CodeBook, method: str = "auto") -> int:
    """Minimum pairwise Hamming distance.

    For a linear codebook (provenance "U") the minimum nonzero row weight
    gives the same value in O(M m); that path is taken automatically and
    can be forced or suppressed via `method`.
    """
    if book.M < 2:
        raise ParameterError("min_distance needs at least 2 rows")
    if method not in ("auto", "pairwise", "minweight"):
        raise ParameterError(f"unknown method {method!r}")
    if method == "minweight" and book.provenance != "U":
        raise ParameterError("minweight path requires provenance 'U'")
    if method == "auto":
        method = "minweight" if book.provenance == "U" else "pairwise"
    if method == "minweight":
        weights = (book.rows != 0).sum(axis=1)
        nz = weights[weights > 0]
        if len(nz) == 0:
            return 0
        return int(nz.min())
    rows = book.rows
    best = book.m
    for i in range(book.M - 1):
        d = int((rows[i] != rows[i + 1:]).sum(axis=1).min())
        if d < best:
            best = d
            if best == 0:
                break
    return best


@dataclass(frozen=True)
class Lemma1Report:
    """Observed maxima of pairwise coincidences within and across the two
    blocks of W, against the structural bounds t-1 (U-U), t-2 (V-V), t (U-V)."""

    t: int
    m: int
    s: int
    max_uu: int
    max_vv: int
    max_uv: int
    violation: tuple[str, int, int, int] | None = None  # (class, i, j, count)

    @property
    def bounds(self) -> tuple[int, int, int]:
        return (self.t - 1, self.t - 2, self.t)

    @property
    def ok(self) -> bool:
        return self.violation is None

    def __bool__(self) -> bool:
        return self.ok

    def to_json_dict(self) -> dict:
        d = {
            "t": self.t, "m": self.m, "s": self.s,
            "max_uu": self.max_uu, "max_vv": self.max_vv, "max_uv": self.max_uv,
            "bound_uu": self.t - 1, "bound_vv": self.t - 2, "bound_uv": self.t,
            "ok": self.ok,
        }
        if self.violation is not None:
            cls, i, j, c = self.violation
            d["violation"] = {"pair_class": cls, "i": i, "j": j, "coincidences": c}
        return d


def _max_coincidences(a: np.ndarray, b: np.ndarray | None, bound: int):
    """Max pairwise coincidences within a (b=None) or across a and b.
    Returns (max, first pair exceeding bound or None)."""
    best = -1
    worst = None
    if b is None:
        for i in range(a.shape[0] - 1):
            counts = (a[i] == a[i + 1:]).sum(axis=1)
            top = int(counts.max())
            if top > best:
                best = top
                if top > bound and worst is None:
                    j = int(np.argmax(counts)) + i + 1
                    worst = (i, j, top)
    else:
        for i in range(a.shape[0]):
            counts = (a[i] == b).sum(axis=1)
            top = int(counts.max())
            if top > best:
                best = top
                if top > bound and worst is None:
                    worst = (i, int(np.argmax(counts)), top)
    return best, worst


def check_lemma1_bounds(gf: GF, t: int, m: int) -> Lemma1Report:
    """Exhaustively scan all row pairs of W for the coincidence bounds."""
    u = build_U(gf, t, m).rows
    v = build_V(gf, t, m).rows
    max_uu, bad_uu = _max_coincidences(u, None, t - 1)
    max_vv, bad_vv = _max_coincidences(v, None, t - 2)
    max_uv, bad_uv = _max_coincidences(u, v, t)
    violation = None
    if bad_uu is not None:
        violation = ("U-U", *bad_uu)
    elif bad_vv is not None:
        violation = ("V-V", *bad_vv)
    elif bad_uv is not None:
        violation = ("U-V", *bad_uv)
    return Lemma1Report(t=t, m=m, s=gf.s, max_uu=max_uu, max_vv=max_vv,
                        max_uv=max_uv, violation=violation)
