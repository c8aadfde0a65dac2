"""Non-crossing pairings on an (m, n)-annulus and their Kreweras complements.

Positions are 1-based: 1..m sit on the outer circle, m+1..m+n on the inner
circle.  A pairing is stored as a fixed-point-free involution ``match`` with
``match[i] = j`` iff {i, j} is a pair (index 0 of the array is unused).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

DEFAULT_SIZE_LIMIT = 16


@dataclass(frozen=True)
class CyclePermutation:
    """A permutation of [size] held as a 1-based point map."""

    size: int
    mapping: tuple  # length size+1, mapping[0] == 0

    def __post_init__(self):
        if len(self.mapping) != self.size + 1:
            raise ValueError("mapping must have length size+1")
        if sorted(self.mapping[1:]) != list(range(1, self.size + 1)):
            raise ValueError("mapping is not a permutation of [size]")

    def __call__(self, i):
        return self.mapping[i]

    @classmethod
    def from_cycles(cls, size, cycles):
        mapping = [0] * (size + 1)
        for cyc in cycles:
            for a, b in zip(cyc, cyc[1:] + type(cyc)([cyc[0]])):
                mapping[a] = b
        if 0 in mapping[1:]:
            raise ValueError("cycles do not cover [size]")
        return cls(size, tuple(mapping))

    @property
    def cycles(self):
        """Cycles as tuples, each starting at its minimum, sorted by minimum."""
        seen = [False] * (self.size + 1)
        out = []
        for i in range(1, self.size + 1):
            if seen[i]:
                continue
            cyc = []
            j = i
            while not seen[j]:
                seen[j] = True
                cyc.append(j)
                j = self.mapping[j]
            out.append(tuple(cyc))
        return out

    @property
    def num_cycles(self):
        return len(self.cycles)


def gamma(m, n):
    """The two-cycle permutation (1, 2, ..., m)(m+1, ..., m+n)."""
    if m < 1 or n < 1:
        raise ValueError("gamma requires m >= 1 and n >= 1")
    return CyclePermutation.from_cycles(
        m + n, [list(range(1, m + 1)), list(range(m + 1, m + n + 1))]
    )


def _check_involution(match, size):
    if len(match) != size + 1:
        raise ValueError("match must have length m+n+1 (1-based)")
    for i in range(1, size + 1):
        j = match[i]
        if not 1 <= j <= size or j == i or match[j] != i:
            raise ValueError("match is not a fixed-point-free involution")


def _through_pairs(match, m, n):
    return [(i, match[i]) for i in range(1, m + 1) if match[i] > m]


@dataclass(frozen=True)
class AnnularPairing:
    """A non-crossing pairing of the (m, n)-annulus with >= 1 through string."""

    m: int
    n: int
    match: tuple

    def __post_init__(self):
        size = self.m + self.n
        _check_involution(self.match, size)
        if not _through_pairs(self.match, self.m, self.n):
            raise ValueError("pairing has no through string")
        if not is_annular_noncrossing(self.match, self.m, self.n):
            raise ValueError("pairing is not annular non-crossing")

    @property
    def size(self):
        return self.m + self.n

    def pairs(self):
        return [(i, self.match[i]) for i in range(1, self.size + 1) if i < self.match[i]]

    def through_strings(self):
        """All pairs {i, j} with i on the outer and j on the inner circle."""
        return _through_pairs(self.match, self.m, self.n)

    @property
    def through_count(self):
        return len(self.through_strings())

    def as_permutation(self):
        return CyclePermutation(self.size, self.match)

    def __str__(self):
        return "".join("(%d,%d)" % p for p in self.pairs())


def is_annular_noncrossing(match, m, n):
    """Cycle-count test: #cycles(sigma) + #cycles(sigma*gamma) == m+n.

    Valid for fixed-point-free involutions that connect the two circles,
    which is guaranteed here by requiring at least one through string.
    """
    size = m + n
    _check_involution(match, size)
    if not _through_pairs(match, m, n):
        raise ValueError("candidate has no through string")
    g = gamma(m, n)
    sigma = CyclePermutation(size, tuple(match))
    k = CyclePermutation(size, tuple(match[g(i)] if i else 0 for i in range(size + 1)))
    return sigma.num_cycles + k.num_cycles == size


def is_annular_noncrossing_recursive(match, m, n):
    """Independent predicate: peel off cyclic-interval pairs down to a spoke diagram.

    A pairing is annular non-crossing iff it is a spoke diagram, or some pair
    occupies cyclically adjacent positions on one circle and its removal
    leaves an annular non-crossing pairing.
    """
    size = m + n
    _check_involution(match, size)
    if not _through_pairs(match, m, n):
        raise ValueError("candidate has no through string")
    pairs = {i: match[i] for i in range(1, size + 1)}
    outer = list(range(1, m + 1))
    inner = list(range(m + 1, size + 1))
    return _nc_reduce(pairs, outer, inner)


def _nc_reduce(pairs, outer, inner):
    inner_set = set(inner)
    if all(pairs[i] in inner_set for i in outer) and all(
        pairs[i] not in inner_set for i in inner
    ):
        return _is_spoke(pairs, outer, inner)
    for circle in (outer, inner):
        k = len(circle)
        if k < 2:
            continue
        for idx in range(k):
            u, v = circle[idx], circle[(idx + 1) % k]
            if pairs[u] == v:
                sub = {a: b for a, b in pairs.items() if a not in (u, v)}
                keep = lambda lst: [a for a in lst if a not in (u, v)]
                return _nc_reduce(sub, keep(outer), keep(inner))
    return False


def _is_spoke(pairs, outer, inner):
    # Every pair is a through string; the matching must be rotationally
    # consistent with the two circles traversed in opposite orientations.
    k = len(outer)
    if k != len(inner):
        return False
    for j0 in range(k):
        if all(pairs[outer[j]] == inner[(j0 - j) % k] for j in range(k)):
            return True
    return False


def _involutions(size):
    """Fixed-point-free involutions of [size] as match tuples, lexicographic."""

    def rec(free):
        if not free:
            yield []
            return
        i = free[0]
        for j in free[1:]:
            rest = [a for a in free[1:] if a != j]
            for tail in rec(rest):
                yield [(i, j)] + tail

    for pairing in rec(list(range(1, size + 1))):
        match = [0] * (size + 1)
        for a, b in pairing:
            match[a], match[b] = b, a
        yield tuple(match)


@lru_cache(maxsize=None)
def _enumerate_nc2_cached(m, n, limit):
    size = m + n
    if size % 2:
        return ()
    out = []
    for match in _involutions(size):
        if not _through_pairs(match, m, n):
            continue
        if is_annular_noncrossing(match, m, n):
            out.append(AnnularPairing(m, n, match))
    out.sort(key=lambda p: p.match)
    return tuple(out)


def enumerate_nc2(m, n, limit=DEFAULT_SIZE_LIMIT):
    """All annular non-crossing pairings of the (m, n)-annulus.

    Empty when m+n is odd.  Brute force over involutions; capped at
    ``limit`` total points.
    """
    if m < 1 or n < 1:
        raise ValueError("m and n must be >= 1")
    if m + n > limit:
        raise ValueError("m+n=%d exceeds enumeration cap %d" % (m + n, limit))
    return list(_enumerate_nc2_cached(m, n, limit))


def filter_by_through(pairings, l):
    """Pairings with exactly l through strings."""
    return [p for p in pairings if p.through_count == l]


def kreweras(pairing):
    """The Kreweras complement K(sigma) = sigma * gamma, i.e. i -> sigma(gamma(i))."""
    g = gamma(pairing.m, pairing.n)
    mapping = [0] + [pairing.match[g(i)] for i in range(1, pairing.size + 1)]
    return CyclePermutation(pairing.size, tuple(mapping))


def through_cycles(kperm, m, n):
    """Cycles of K(sigma) meeting both circles, split as (outer part, inner part).

    Each through cycle of a Kreweras complement of an annular non-crossing
    pairing consists of a contiguous run of outer positions followed by a
    contiguous run of inner positions (up to rotation of the cycle).
    """
    out = []
    for cyc in kperm.cycles:
        has_outer = any(i <= m for i in cyc)
        has_inner = any(i > m for i in cyc)
        if not (has_outer and has_inner):
            continue
        k = len(cyc)
        for r in range(k):
            rot = cyc[r:] + cyc[:r]
            flags = [i <= m for i in rot]
            if flags[0] and not flags[-1]:
                split = flags.index(False)
                if all(flags[:split]) and not any(flags[split:]):
                    out.append((tuple(rot[:split]), tuple(rot[split:])))
                    break
        else:
            raise ValueError("through cycle is not split into two arcs: %r" % (cyc,))
    return out


def is_non_mixing(pairing, labels, strict_through_same=False):
    """True iff each pair of sigma joins positions with the same label.

    ``labels[i-1]`` is the Wigner id at position i.  With
    ``strict_through_same`` every position on a through string must in
    addition carry one common label.
    """
    if len(labels) != pairing.size:
        raise ValueError("labels must have length m+n")
    for i, j in pairing.pairs():
        if labels[i - 1] != labels[j - 1]:
            return False
    if strict_through_same:
        through = pairing.through_strings()
        lab = {labels[i - 1] for pair in through for i in pair}
        if len(lab) > 1:
            return False
    return True


def through_labels(pairing, labels):
    """Labels carried by the through strings (one per string, at the outer end)."""
    return [labels[i - 1] for i, _ in pairing.through_strings()]


def _disc_is_noncrossing(match, k):
    pairs = [(i, match[i]) for i in range(1, k + 1) if i < match[i]]
    for (a, b), (c, d) in itertools.combinations(pairs, 2):
        if a < c < b < d or c < a < d < b:
            return False
    return True


@lru_cache(maxsize=None)
def _enumerate_nc2_disc_cached(k):
    if k % 2:
        return ()
    if k == 0:
        return (tuple([0]),)
    return tuple(
        match for match in _involutions(k) if _disc_is_noncrossing(match, k)
    )


def enumerate_nc2_disc(k, limit=DEFAULT_SIZE_LIMIT):
    """Non-crossing pairings of a single k-cycle (Catalan(k/2) of them)."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if k > limit:
        raise ValueError("k=%d exceeds enumeration cap %d" % (k, limit))
    return list(_enumerate_nc2_disc_cached(k))


def disc_kreweras(match, k):
    """Kreweras complement on the disc: i -> sigma(i+1) with gamma = (1..k)."""
    g = CyclePermutation.from_cycles(k, [list(range(1, k + 1))])
    mapping = [0] + [match[g(i)] for i in range(1, k + 1)]
    return CyclePermutation(k, tuple(mapping))
