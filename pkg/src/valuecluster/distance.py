"""Weighted edit distances between abstracted values.

Two dissimilarity kinds are supported: the basic edit distance (insertions
and deletions only) and the weighted Levenshtein distance (substitutions as
well), both driven by per-character-class weights.  Only the ratios of the
weights matter for the resulting clustering, not their absolute size.

The single-pair functions are plain Python and accept any real number type
(floats, ints, Fractions), which keeps exact-arithmetic properties
testable.  Full matrix computation goes through a compiled Wagner-Fischer
kernel that releases the GIL, so pairs can be computed on several threads;
every pair writes its own slot of the condensed result, making the output
bit-identical regardless of the degree of parallelism.
"""

from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .abstraction import AbstractionMapping
from .errors import ConfigError
from .fingerprint import fingerprint

__all__ = [
    "CharClass",
    "WeightMatrix",
    "DistanceKind",
    "DistanceMatrix",
    "classify_char",
    "weighted_levenshtein",
    "basic_edit_distance",
    "derive_sub_as_indel_sum",
    "distance_matrix",
    "condensed_index",
]


@dataclass(frozen=True)
class CharClass:
    """A named set of characters; ``chars`` of None marks the catch-all class."""

    name: str
    chars: frozenset[str] | None

    @classmethod
    def of(cls, name: str, chars: str) -> "CharClass":
        return cls(name=name, chars=frozenset(chars))

    @classmethod
    def other(cls, name: str = "Other") -> "CharClass":
        return cls(name=name, chars=None)


@dataclass(frozen=True)
class WeightMatrix:
    """Character classes with insertion/deletion and substitution weights.

    The last class must be the catch-all; characters are classified by first
    match.  ``sub[i][j]`` is the weight of substituting a class-i character
    by a class-j one (symmetric); the diagonal applies to distinct
    characters of the same class, substituting a character for itself is
    free by definition.  ``sub`` may be None for matrices that are only used
    with the basic edit distance.
    """

    classes: tuple[CharClass, ...]
    indel: tuple
    sub: tuple | None = None

    def __post_init__(self):
        if not self.classes:
            raise ConfigError("weight matrix needs at least one character class")
        if self.classes[-1].chars is not None:
            raise ConfigError("the last character class must be the catch-all (chars=None)")
        if any(c.chars is None for c in self.classes[:-1]):
            raise ConfigError("only the last character class may be the catch-all")
        n = len(self.classes)
        if len(self.indel) != n:
            raise ConfigError(f"expected {n} indel weights, got {len(self.indel)}")
        if any(w < 0 for w in self.indel):
            raise ConfigError("indel weights must be non-negative")
        if self.sub is not None:
            if len(self.sub) != n or any(len(row) != n for row in self.sub):
                raise ConfigError(f"substitution matrix must be {n}x{n}")
            for i in range(n):
                for j in range(n):
                    if self.sub[i][j] < 0:
                        raise ConfigError("substitution weights must be non-negative")
                    if self.sub[i][j] != self.sub[j][i]:
                        raise ConfigError(
                            f"substitution matrix must be symmetric, "
                            f"differs at ({self.classes[i].name}, {self.classes[j].name})"
                        )
        object.__setattr__(self, "_lookup", {})
        for idx, c in enumerate(self.classes[:-1]):
            for ch in c.chars:
                self._lookup.setdefault(ch, idx)

    def class_index(self, c: str) -> int:
        return self._lookup.get(c, len(self.classes) - 1)

    def scaled(self, factor) -> "WeightMatrix":
        sub = None
        if self.sub is not None:
            sub = tuple(tuple(w * factor for w in row) for row in self.sub)
        return WeightMatrix(
            classes=self.classes,
            indel=tuple(w * factor for w in self.indel),
            sub=sub,
        )

    def to_json_dict(self) -> dict:
        return {
            "classes": [
                {"name": c.name, "chars": "".join(sorted(c.chars)) if c.chars is not None else None}
                for c in self.classes
            ],
            "indel": [float(w) for w in self.indel],
            "sub": [[float(w) for w in row] for row in self.sub] if self.sub is not None else None,
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "WeightMatrix":
        classes = tuple(
            CharClass(name=c["name"], chars=frozenset(c["chars"]) if c.get("chars") is not None else None)
            for c in d["classes"]
        )
        sub = d.get("sub")
        return cls(
            classes=classes,
            indel=tuple(d["indel"]),
            sub=tuple(tuple(row) for row in sub) if sub is not None else None,
        )

    @property
    def fingerprint(self) -> str:
        return fingerprint(self.to_json_dict())


def classify_char(c: str, w: WeightMatrix) -> int:
    """Index of the first class containing ``c``, else the catch-all."""
    return w.class_index(c)


class DistanceKind(enum.Enum):
    BASIC = "basic"
    LEVENSHTEIN = "levenshtein"


def derive_sub_as_indel_sum(w: WeightMatrix) -> WeightMatrix:
    """Substitution weights as deletion + insertion of the two characters.

    Under this matrix the weighted Levenshtein distance coincides with the
    basic edit distance: a substitution never beats deleting one character
    and inserting the other.
    """
    n = len(w.classes)
    sub = tuple(tuple(w.indel[i] + w.indel[j] for j in range(n)) for i in range(n))
    return WeightMatrix(classes=w.classes, indel=w.indel, sub=sub)


def weighted_levenshtein(a: str, b: str, w: WeightMatrix):
    """Minimal total weight of an edit script turning ``a`` into ``b``.

    Insertions, deletions and substitutions are weighted per character
    class; substituting a character for itself is free.  Wagner-Fischer
    dynamic programming over two rolling rows.
    """
    if w.sub is None:
        raise ConfigError("weighted Levenshtein distance needs substitution weights")
    if a == b:
        return 0
    ca = [w.class_index(c) for c in a]
    cb = [w.class_index(c) for c in b]
    indel, sub = w.indel, w.sub

    prev = [0] * (len(b) + 1)
    for j in range(1, len(b) + 1):
        prev[j] = prev[j - 1] + indel[cb[j - 1]]
    cur = prev[:]
    for i in range(1, len(a) + 1):
        del_i = indel[ca[i - 1]]
        cur[0] = prev[0] + del_i
        ai = a[i - 1]
        for j in range(1, len(b) + 1):
            s = prev[j - 1] if ai == b[j - 1] else prev[j - 1] + sub[ca[i - 1]][cb[j - 1]]
            d = prev[j] + del_i
            ins = cur[j - 1] + indel[cb[j - 1]]
            cur[j] = s if s <= d and s <= ins else (d if d <= ins else ins)
        prev, cur = cur, prev
    return prev[len(b)]


def basic_edit_distance(a: str, b: str, w: WeightMatrix):
    """Minimal total weight using insertions and deletions only.

    Equals the weighted Levenshtein distance under the derived matrix of
    :func:`derive_sub_as_indel_sum`; implemented as its own two-operation
    dynamic program rather than via that reduction.
    """
    if a == b:
        return 0
    ca = [w.class_index(c) for c in a]
    cb = [w.class_index(c) for c in b]
    indel = w.indel

    prev = [0] * (len(b) + 1)
    for j in range(1, len(b) + 1):
        prev[j] = prev[j - 1] + indel[cb[j - 1]]
    cur = prev[:]
    for i in range(1, len(a) + 1):
        del_i = indel[ca[i - 1]]
        cur[0] = prev[0] + del_i
        ai = a[i - 1]
        for j in range(1, len(b) + 1):
            d = prev[j] + del_i
            ins = cur[j - 1] + indel[cb[j - 1]]
            best = d if d <= ins else ins
            if ai == b[j - 1] and prev[j - 1] <= best:
                best = prev[j - 1]
            cur[j] = best
        prev, cur = cur, prev
    return prev[len(b)]


def condensed_index(i: int, j: int, n: int) -> int:
    """Position of pair (i, j), i < j, in the condensed upper triangle."""
    if not 0 <= i < j < n:
        raise IndexError(f"need 0 <= i < j < n, got i={i}, j={j}, n={n}")
    return i * n - i * (i + 1) // 2 + (j - i - 1)


@dataclass(frozen=True)
class DistanceMatrix:
    """Condensed symmetric pairwise distances between abstracted values."""

    n: int
    condensed: object
    value_index: tuple[str, ...]
    mapping_fingerprint: str = ""
    weights_fingerprint: str = ""
    kind: DistanceKind = DistanceKind.LEVENSHTEIN

    def __post_init__(self):
        expected = self.n * (self.n - 1) // 2
        if len(self.condensed) != expected:
            raise ValueError(f"condensed length {len(self.condensed)}, expected {expected}")
        if len(self.value_index) != self.n:
            raise ValueError("value_index length does not match n")
        arr = self.condensed
        if isinstance(arr, np.ndarray):
            if arr.size and not np.all(np.isfinite(arr)):
                raise ValueError("distances must be finite")
            if arr.size and arr.min() < 0:
                raise ValueError("distances must be non-negative")
        else:
            if any(x < 0 for x in arr):
                raise ValueError("distances must be non-negative")

    def get(self, i: int, j: int):
        if i == j:
            return 0
        if i > j:
            i, j = j, i
        return self.condensed[condensed_index(i, j, self.n)]

    @property
    def fingerprint(self) -> str:
        return fingerprint(
            {
                "mapping": self.mapping_fingerprint,
                "weights": self.weights_fingerprint,
                "kind": self.kind.value,
                "n": self.n,
            }
        )

    def scaled(self, factor) -> "DistanceMatrix":
        if isinstance(self.condensed, np.ndarray):
            condensed = self.condensed * factor
        else:
            condensed = [x * factor for x in self.condensed]
        return DistanceMatrix(
            n=self.n,
            condensed=condensed,
            value_index=self.value_index,
            mapping_fingerprint=self.mapping_fingerprint,
            weights_fingerprint=self.weights_fingerprint,
            kind=self.kind,
        )


# --- compiled batch kernel -------------------------------------------------

_kernel = None


def _get_kernel():
    """JIT-compile the batch Wagner-Fischer kernel on first use."""
    global _kernel
    if _kernel is not None:
        return _kernel
    import numba

    @numba.njit(cache=True, nogil=True)
    def kernel(codes, classes, offsets, indel, sub, out, start, stop, max_len):  # pragma: no cover
        n = offsets.shape[0] - 1
        # locate the (i, j) of the first linear pair index
        i = 0
        acc = 0
        while acc + (n - 1 - i) <= start:
            acc += n - 1 - i
            i += 1
        j = i + 1 + (start - acc)

        prev = np.empty(max_len + 1, dtype=np.float64)
        cur = np.empty(max_len + 1, dtype=np.float64)
        for p in range(start, stop):
            a0, a1 = offsets[i], offsets[i + 1]
            b0, b1 = offsets[j], offsets[j + 1]
            la = a1 - a0
            lb = b1 - b0

            prev[0] = 0.0
            for q in range(lb):
                prev[q + 1] = prev[q] + indel[classes[b0 + q]]
            for q in range(la):
                ca = classes[a0 + q]
                aq = codes[a0 + q]
                del_q = indel[ca]
                cur[0] = prev[0] + del_q
                for r in range(lb):
                    if aq == codes[b0 + r]:
                        s = prev[r]
                    else:
                        s = prev[r] + sub[ca, classes[b0 + r]]
                    d = prev[r + 1] + del_q
                    ins = cur[r] + indel[classes[b0 + r]]
                    best = s
                    if d < best:
                        best = d
                    if ins < best:
                        best = ins
                    cur[r + 1] = best
                for r in range(lb + 1):
                    prev[r] = cur[r]
            out[p] = prev[lb]

            j += 1
            if j == n:
                i += 1
                j = i + 1

    _kernel = kernel
    return _kernel


def _encode(values, w: WeightMatrix):
    total = sum(len(v) for v in values)
    codes = np.empty(total, dtype=np.uint32)
    classes = np.empty(total, dtype=np.uint16)
    offsets = np.empty(len(values) + 1, dtype=np.int64)
    pos = 0
    offsets[0] = 0
    for k, v in enumerate(values):
        for c in v:
            codes[pos] = ord(c)
            classes[pos] = w.class_index(c)
            pos += 1
        offsets[k + 1] = pos
    return codes, classes, offsets


def distance_matrix(
    mapping: AbstractionMapping,
    w: WeightMatrix,
    kind: DistanceKind = DistanceKind.LEVENSHTEIN,
    threads: int = 1,
    progress=None,
) -> DistanceMatrix:
    """All pairwise distances between the mapping's abstracted values.

    Pairs are independent work items; with ``threads`` > 1 they are split
    into chunks computed concurrently.  ``progress``, if given, is called as
    ``progress(pairs_done, pairs_total)`` while the computation runs.
    """
    if len(mapping) == 0:
        raise ValueError("cannot compute distances for an empty abstraction mapping")
    if threads < 1:
        raise ValueError("threads must be >= 1")

    effective = derive_sub_as_indel_sum(w) if kind is DistanceKind.BASIC else w
    if effective.sub is None:
        raise ConfigError("Levenshtein distance matrix needs substitution weights")

    values = mapping.abstracted_values
    n = len(values)
    total = n * (n - 1) // 2
    try:
        out = np.zeros(total, dtype=np.float64)
    except MemoryError:
        raise MemoryError(f"cannot allocate condensed matrix for {total} pairs") from None

    if total:
        codes, classes, offsets = _encode(values, effective)
        indel = np.array([float(x) for x in effective.indel], dtype=np.float64)
        sub = np.array([[float(x) for x in row] for row in effective.sub], dtype=np.float64)
        max_len = max(len(v) for v in values)

        kernel = _get_kernel()
        chunk = min(total, 50_000)
        if threads > 1:
            chunk = max(1, min(chunk, (total + threads * 4 - 1) // (threads * 4)))
        bounds = list(range(0, total, chunk)) + [total]
        done = 0

        def run(start: int, stop: int):
            kernel(codes, classes, offsets, indel, sub, out, start, stop, max_len)
            return stop - start

        if threads == 1:
            for s, e in zip(bounds, bounds[1:]):
                done += run(s, e)
                if progress is not None:
                    progress(done, total)
        else:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                futures = [pool.submit(run, s, e) for s, e in zip(bounds, bounds[1:])]
                for f in futures:
                    done += f.result()
                    if progress is not None:
                        progress(done, total)

    return DistanceMatrix(
        n=n,
        condensed=out,
        value_index=tuple(values),
        mapping_fingerprint=mapping.fingerprint,
        weights_fingerprint=w.fingerprint,
        kind=kind,
    )
