"""Constant-weight binary codes and the set families they induce.

A code here is N words of length q, all of weight w, with pairwise Hamming
distance at least d.  Between equal-weight words the distance is even and
equals 2(w - |overlap|), so the distance floor is an intersection cap.
Codes come from three sources -- a deterministic greedy scan, a seeded
annealing search, and file import -- and all of them are re-checked by the
same verifier, which is the ground truth.
"""

from __future__ import annotations

import itertools
import json
import random
import warnings
from dataclasses import dataclass

from .families import SetFamily, Universe


class CodeError(ValueError):
    """Malformed constant-weight code or parameters."""


@dataclass
class ConstantWeightCode:
    """N binary words of length q, weight w, pairwise distance >= d.
    Words are integer bitmasks, bit k = position k."""

    q: int
    w: int
    d: int
    words: list[int]

    def __post_init__(self):
        self.words = [int(x) for x in self.words]

    @property
    def N(self) -> int:
        return len(self.words)

    def word_string(self, j: int) -> str:
        return "".join("1" if self.words[j] >> k & 1 else "0" for k in range(self.q))

    def to_json_dict(self) -> dict:
        return {"q": self.q, "w": self.w, "d": self.d,
                "words": [self.word_string(j) for j in range(self.N)]}


@dataclass(frozen=True)
class CWVerdict:
    ok: bool
    reason: str = ""
    indices: tuple[int, ...] = ()

    def __bool__(self) -> bool:
        return self.ok

    def to_json_dict(self) -> dict:
        d = {"ok": self.ok}
        if not self.ok:
            d["reason"] = self.reason
            d["indices"] = list(self.indices)
        return d


def verify_cw_code(code: ConstantWeightCode) -> CWVerdict:
    """Check length, exact weight, distinctness, and the distance floor."""
    top = 1 << code.q
    for j, word in enumerate(code.words):
        if word < 0 or word >= top:
            return CWVerdict(False, f"word {j} exceeds length {code.q}", (j,))
        if word.bit_count() != code.w:
            return CWVerdict(False,
                             f"word {j} has weight {word.bit_count()}, expected {code.w}",
                             (j,))
    max_overlap = code.w - code.d // 2
    for i in range(code.N - 1):
        wi = code.words[i]
        for j in range(i + 1, code.N):
            if (wi & code.words[j]).bit_count() > max_overlap:
                dist = (wi ^ code.words[j]).bit_count()
                return CWVerdict(False,
                                 f"words {i} and {j} are at distance {dist} < {code.d}",
                                 (i, j))
    return CWVerdict(True)


def _normalize_distance(d: int) -> int:
    if d % 2:
        warnings.warn(f"odd distance {d} rounded up to {d + 1} "
                      "(equal-weight words differ in an even number of places)")
        d += 1
    return d


def _check_params(q: int, d: int, w: int) -> int:
    if not 0 < w <= q:
        raise CodeError(f"need 0 < w <= q, got w={w}, q={q}")
    d = _normalize_distance(d)
    if d > 2 * w:
        raise CodeError(f"distance {d} exceeds 2w = {2 * w}")
    return d


def greedy_lexicode(q: int, d: int, w: int) -> ConstantWeightCode:
    """Scan all weight-w words in lexicographic order of their support and
    keep each word compatible with everything kept so far.  Deterministic."""
    d = _check_params(q, d, w)
    max_overlap = w - d // 2
    kept: list[int] = []
    for support in itertools.combinations(range(q), w):
        word = 0
        for k in support:
            word |= 1 << k
        if all((word & other).bit_count() <= max_overlap for other in kept):
            kept.append(word)
    return ConstantWeightCode(q=q, w=w, d=d, words=kept)


def stochastic_search(q: int, d: int, w: int, target_n: int,
                      seed: int = 0, budget: int = 200_000) -> ConstantWeightCode:
    """Seeded annealing toward a code of target_n words.

    Keeps a pool of target_n candidate words and repeatedly swaps a word
    involved in a conflict for a fresh random word, accepting uphill moves
    with a geometrically cooled probability.  Returns the largest
    conflict-free subset seen (which may be smaller than target_n), always
    re-verified before return.  Reproducible for a given (seed, budget).
    """
    d = _check_params(q, d, w)
    if target_n < 1:
        raise CodeError("target_n must be positive")
    rng = random.Random(seed)
    max_overlap = w - d // 2

    def random_word():
        word = 0
        for k in rng.sample(range(q), w):
            word |= 1 << k
        return word

    def conflicts(word, others, skip=-1):
        c = 0
        for idx, other in enumerate(others):
            if idx != skip and (word & other).bit_count() > max_overlap:
                c += 1
        return c

    # seed the pool greedily, then pad with random words
    state = list(greedy_lexicode(q, d, w).words[:target_n])
    while len(state) < target_n:
        state.append(random_word())
    conflict_count = [conflicts(wd, state, skip=i) for i, wd in enumerate(state)]
    energy = sum(conflict_count) // 2

    best_words = _feasible_subset(state, max_overlap)
    t_start, t_end = 2.0, 0.02
    cool = (t_end / t_start) ** (1.0 / max(budget, 1))
    temp = t_start
    for _ in range(budget):
        if energy == 0:
            break
        temp *= cool
        bad = [i for i, c in enumerate(conflict_count) if c > 0]
        i = rng.choice(bad)
        new_word = random_word()
        new_c = conflicts(new_word, state, skip=i)
        delta = new_c - conflict_count[i]
        if delta <= 0 or rng.random() < pow(2.718281828, -delta / temp):
            old_word = state[i]
            for idx, other in enumerate(state):
                if idx == i:
                    continue
                had = (old_word & other).bit_count() > max_overlap
                has = (new_word & other).bit_count() > max_overlap
                if had != has:
                    conflict_count[idx] += 1 if has else -1
            state[i] = new_word
            conflict_count[i] = new_c
            energy += delta
            if energy <= len(best_words):  # cheap gate before extracting
                feasible = _feasible_subset(state, max_overlap)
                if len(feasible) > len(best_words):
                    best_words = feasible
    if energy == 0:
        best_words = list(dict.fromkeys(state))
        if len(best_words) == target_n:
            code = ConstantWeightCode(q=q, w=w, d=d, words=sorted(best_words))
            verdict = verify_cw_code(code)
            if verdict.ok:
                return code
    code = ConstantWeightCode(q=q, w=w, d=d, words=sorted(set(best_words)))
    verdict = verify_cw_code(code)
    if not verdict.ok:
        raise AssertionError(f"search produced an invalid code: {verdict.reason}")
    return code


def _feasible_subset(words, max_overlap):
    """Greedily drop conflicting words, most-conflicted first."""
    keep = list(dict.fromkeys(words))
    while True:
        counts = [0] * len(keep)
        for i in range(len(keep) - 1):
            for j in range(i + 1, len(keep)):
                if (keep[i] & keep[j]).bit_count() > max_overlap:
                    counts[i] += 1
                    counts[j] += 1
        worst = max(range(len(keep)), key=lambda i: counts[i], default=-1)
        if worst < 0 or counts[worst] == 0:
            return keep
        keep.pop(worst)


def family_from_code(code: ConstantWeightCode) -> SetFamily:
    """Member j = support of word j, over a universe of size q."""
    verdict = verify_cw_code(code)
    if not verdict.ok:
        raise CodeError(f"refusing family from invalid code: {verdict.reason}")
    return SetFamily(Universe(code.q), list(code.words))


@dataclass(frozen=True)
class Condition8:
    """The three sufficient inequalities tying two constant-weight codes to
    the cover-free and cross-cover hypotheses of the augmentation build:
    K(w1 - d1/2) < w1,  K(w2 - d2/2) < w2,  w2 > K w1."""

    first: bool
    second: bool
    third: bool

    @property
    def all_ok(self) -> bool:
        return self.first and self.second and self.third

    def __bool__(self) -> bool:
        return self.all_ok

    def to_json_dict(self) -> dict:
        return {"first": self.first, "second": self.second,
                "third": self.third, "all_ok": self.all_ok}


def check_condition_8(b1: ConstantWeightCode, b2: ConstantWeightCode,
                      K: int) -> Condition8:
    if b1.q != b2.q:
        raise CodeError(f"codes live on different lengths: {b1.q} vs {b2.q}")
    # stated over halves; doubled to stay in integers
    first = K * (2 * b1.w - b1.d) < 2 * b1.w
    second = K * (2 * b2.w - b2.d) < 2 * b2.w
    third = b2.w > K * b1.w
    return Condition8(first, second, third)


# ---------------------------------------------------------------------------
# File formats: JSON (carries q, w, d) or one bitstring per line
# ---------------------------------------------------------------------------

def export_code(code: ConstantWeightCode, path) -> None:
    path = str(path)
    if path.endswith(".json"):
        with open(path, "w") as fh:
            json.dump(code.to_json_dict(), fh, sort_keys=True)
            fh.write("\n")
    else:
        with open(path, "w") as fh:
            for j in range(code.N):
                fh.write(code.word_string(j) + "\n")


def _word_from_string(text: str, lineno) -> int:
    word = 0
    for k, ch in enumerate(text):
        if ch == "1":
            word |= 1 << k
        elif ch != "0":
            raise CodeError(f"line {lineno}: invalid character {ch!r}")
    return word


def import_code(path, d: int | None = None,
                verify: bool = True) -> ConstantWeightCode:
    """Load (and by default re-verify) a code.  JSON files carry their own
    (q, w, d); for bitstring files q and w are inferred and d defaults to
    the observed minimum distance.  verify=False skips the property check
    but still rejects malformed files."""
    path = str(path)
    if path.endswith(".json"):
        with open(path) as fh:
            try:
                data = json.load(fh)
                code = ConstantWeightCode(
                    q=int(data["q"]), w=int(data["w"]), d=int(data["d"]),
                    words=[_word_from_string(s, j) for j, s in enumerate(data["words"])])
            except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
                raise CodeError(f"malformed code file {path}: {exc}") from exc
    else:
        words = []
        length = None
        with open(path) as fh:
            for lineno, line in enumerate(fh):
                line = line.strip()
                if not line:
                    continue
                if length is None:
                    length = len(line)
                elif len(line) != length:
                    raise CodeError(f"line {lineno}: length {len(line)} != {length}")
                words.append(_word_from_string(line, lineno))
        if not words:
            raise CodeError(f"no words in {path}")
        weight = words[0].bit_count()
        if d is None:
            d = min(((a ^ b).bit_count()
                     for a, b in itertools.combinations(words, 2)),
                    default=2 * weight)
        code = ConstantWeightCode(q=length, w=weight, d=d, words=words)
    if verify:
        verdict = verify_cw_code(code)
        if not verdict.ok:
            raise CodeError(f"code in {path} failed verification: {verdict.reason}")
    return code
