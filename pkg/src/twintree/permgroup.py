"""Finite permutation groups via deterministic Schreier-Sims.

Permutations are tuples of images.  Products compose left to right:
``mul(p, q)`` applies ``p`` first, matching the right actions used for tree
automorphisms, so ``level_permutation(uv) == mul(level_permutation(u),
level_permutation(v))``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

Perm = Tuple[int, ...]

MAX_DEGREE = 1 << 14


class DegreeMismatch(ValueError):
    pass


class NotElementary(ValueError):
    """Squares or commutators of the generators escape the subgroup."""


def identity(n: int) -> Perm:
    return tuple(range(n))


def mul(p: Perm, q: Perm) -> Perm:
    return tuple([q[i] for i in p])


def inv(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def is_identity(p: Perm) -> bool:
    return all(i == j for i, j in enumerate(p))


def conjugate(p: Perm, g: Perm) -> Perm:
    """``g^-1 p g``."""
    return mul(mul(inv(g), p), g)


def commutator(p: Perm, q: Perm) -> Perm:
    """``p^-1 q^-1 p q``."""
    return mul(mul(inv(p), inv(q)), mul(p, q))


def perm_power(p: Perm, k: int) -> Perm:
    out = identity(len(p))
    base = p if k >= 0 else inv(p)
    k = abs(k)
    while k:
        if k & 1:
            out = mul(out, base)
        base = mul(base, base)
        k >>= 1
    return out


def cycles(p: Perm) -> List[Tuple[int, ...]]:
    seen = set()
    out = []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        cyc = [i]
        seen.add(i)
        j = p[i]
        while j != i:
            cyc.append(j)
            seen.add(j)
            j = p[j]
        out.append(tuple(cyc))
    return out


@dataclass
class _Level:
    point: int
    gens: List[np.ndarray] = field(default_factory=list)
    orbit: List[int] = field(default_factory=list)
    trans: Dict[int, Tuple[np.ndarray, np.ndarray]] = field(default_factory=dict)
    done: List[int] = field(default_factory=list)  # generators already scanned per orbit point


def _arr(p) -> np.ndarray:
    return np.asarray(p, dtype=np.int32)


def _ainv(p: np.ndarray) -> np.ndarray:
    out = np.empty_like(p)
    out[p] = np.arange(len(p), dtype=p.dtype)
    return out


class StabChain:
    """Base and strong generating set of a permutation group.

    ``gens`` is the generating set the chain was built from (only the
    generators that enlarged the group are kept).  ``base_prefix`` forces the
    first base points, which makes pointwise stabilisers of those points
    available as :meth:`stabilizer_generators`.  Internally permutations are
    numpy index arrays; ``p`` then ``q`` is ``q[p]``.
    """

    def __init__(self, degree: int, generators: Iterable[Perm] = (), base_prefix: Sequence[int] = ()):
        if degree > MAX_DEGREE:
            raise ValueError(f"degree {degree} exceeds cap {MAX_DEGREE}")
        self.degree = degree
        self._gens: List[np.ndarray] = []
        self._id = np.arange(degree, dtype=np.int32)
        self._id_bytes = self._id.tobytes()
        self._levels: List[_Level] = []
        for pt in base_prefix:
            self._new_level(pt)
        for g in generators:
            self.extend(g)

    @property
    def gens(self) -> List[Perm]:
        return [tuple(int(x) for x in g) for g in self._gens]

    # -- construction -----------------------------------------------------

    def _new_level(self, point: int) -> _Level:
        lvl = _Level(point=point, orbit=[point], trans={point: (self._id, self._id)}, done=[0])
        self._levels.append(lvl)
        return lvl

    def _as_array(self, g) -> np.ndarray:
        a = g if isinstance(g, np.ndarray) else _arr(g)
        if a.shape != (self.degree,):
            raise DegreeMismatch(f"permutation of degree {len(a)} in a chain of degree {self.degree}")
        return a

    def _is_id(self, h: np.ndarray) -> bool:
        return h.tobytes() == self._id_bytes

    def _strip(self, h: np.ndarray, start: int = 0) -> Tuple[np.ndarray, int]:
        for i in range(start, len(self._levels)):
            lvl = self._levels[i]
            beta = int(h[lvl.point])
            if beta == lvl.point:
                continue
            t = lvl.trans.get(beta)
            if t is None:
                return h, i
            h = t[1][h]
        return h, len(self._levels)

    def strip(self, g: Perm, start: int = 0) -> Tuple[Perm, int]:
        """Sift ``g`` from level ``start``; return (residue, level reached)."""
        h, j = self._strip(self._as_array(g), start)
        return tuple(int(x) for x in h), j

    def extend(self, g) -> bool:
        """Add ``g`` to the group; return False if it was already a member."""
        a = self._as_array(g)
        y, j = self._strip(a)
        if j == len(self._levels) and self._is_id(y):
            return False
        self._gens.append(a)
        self._insert(y, j)
        self._schreier_sims(j)
        return True

    def _insert(self, y: np.ndarray, j: int) -> None:
        # y fixes the base points of levels < j
        if j == len(self._levels):
            moved = int(np.flatnonzero(y != self._id)[0])
            self._new_level(moved)
        for lvl in self._levels[: j + 1]:
            lvl.gens.append(y)

    def _schreier_sims(self, i: int) -> None:
        while i >= 0:
            fail = self._scan_level(i, self._levels[i])
            if fail is None:
                i -= 1
            else:
                y, j = fail
                self._insert(y, j)
                i = j

    def _scan_level(self, i: int, lvl: _Level) -> Optional[Tuple[np.ndarray, int]]:
        """Grow the orbit and sift Schreier generators not yet checked."""
        bi = 0
        while bi < len(lvl.orbit):
            beta = lvl.orbit[bi]
            u = lvl.trans[beta][0]
            while lvl.done[bi] < len(lvl.gens):
                s = lvl.gens[lvl.done[bi]]
                lvl.done[bi] += 1
                gamma = int(s[beta])
                us = s[u]
                t = lvl.trans.get(gamma)
                if t is None:
                    lvl.trans[gamma] = (us, _ainv(us))
                    lvl.orbit.append(gamma)
                    lvl.done.append(0)
                    continue
                h = t[1][us]
                if self._is_id(h):
                    continue
                y, j = self._strip(h, i + 1)
                if j < len(self._levels) or not self._is_id(y):
                    return y, j
            bi += 1
        return None

    def copy(self) -> "StabChain":
        """Independent chain for the same group (permutation arrays are shared)."""
        out = StabChain(self.degree)
        out._gens = list(self._gens)
        out._levels = [
            _Level(l.point, list(l.gens), list(l.orbit), dict(l.trans), list(l.done)) for l in self._levels
        ]
        return out

    # -- queries ----------------------------------------------------------

    def order(self) -> int:
        out = 1
        for lvl in self._levels:
            out *= len(lvl.orbit)
        return out

    def contains(self, g) -> bool:
        y, j = self._strip(self._as_array(g))
        return j == len(self._levels) and self._is_id(y)

    __contains__ = contains

    @property
    def base(self) -> List[int]:
        return [lvl.point for lvl in self._levels]

    def orbit_lengths(self) -> List[int]:
        return [len(lvl.orbit) for lvl in self._levels]

    def strong_generators(self) -> List[Perm]:
        return [tuple(int(x) for x in g) for g in self._levels[0].gens] if self._levels else []

    def stabilizer_generators(self, k: int) -> List[Perm]:
        """Generators of the pointwise stabiliser of the first ``k`` base points."""
        if k >= len(self._levels):
            return []
        return [tuple(int(x) for x in g) for g in self._levels[k].gens]

    def elements(self) -> List[Perm]:
        """Enumerate the group (small groups only)."""
        elems = [self._id]
        for lvl in reversed(self._levels):
            elems = [lvl.trans[beta][0][h] for h in elems for beta in lvl.orbit]
        return [tuple(int(x) for x in e) for e in elems]

    def __repr__(self) -> str:
        return f"StabChain(degree={self.degree}, order={self.order()}, base={self.base})"


def _check_same_degree(perms: Sequence[Perm]) -> int:
    degrees = {len(p) for p in perms}
    if len(degrees) > 1:
        raise DegreeMismatch(f"mixed degrees {sorted(degrees)}")
    return degrees.pop() if degrees else 0


def chain_from(generators: Iterable[Perm], degree: Optional[int] = None) -> StabChain:
    gens = list(generators)
    d = _check_same_degree(gens)
    if degree is None:
        if not gens:
            raise ValueError("degree required for an empty generating set")
        degree = d
    elif gens and d != degree:
        raise DegreeMismatch(f"generators of degree {d}, expected {degree}")
    return StabChain(degree, gens)


def order(chain: StabChain) -> int:
    return chain.order()


def is_member(chain: StabChain, p: Perm) -> bool:
    return chain.contains(p)


def is_subgroup(h: StabChain, g: StabChain) -> bool:
    return all(g.contains(x) for x in h._gens)


def same_group(h: StabChain, g: StabChain) -> bool:
    return h.order() == g.order() and is_subgroup(h, g)


def _acomm(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    # p^-1 q^-1 p q, composed left to right
    return q[p[_ainv(q)[_ainv(p)]]]


def normal_closure(g_gens: Sequence[Perm], s_gens: Iterable[Perm], degree: Optional[int] = None) -> StabChain:
    """``<S>^G``: close ``S`` under conjugation by the generators of ``G``."""
    g_arr = [_arr(x) for x in g_gens]
    s_arr = [_arr(x) for x in s_gens]
    degrees = {len(x) for x in g_arr + s_arr}
    if degree is not None:
        degrees.add(degree)
    if len(degrees) != 1:
        raise DegreeMismatch(f"normal closure over degrees {sorted(degrees)}")
    chain = StabChain(degrees.pop())
    queue = [x for x in s_arr if chain.extend(x)]
    pairs = [(x, _ainv(x)) for x in g_arr]
    while queue:
        n = queue.pop()
        for x, xi in pairs:
            c = x[n[xi]]
            if chain.extend(c):
                queue.append(c)
    return chain


def commutator_subgroup(h: StabChain, g: StabChain) -> StabChain:
    """``[H, G]`` for ``H <= G``, as the normal closure of generator commutators."""
    if h.degree != g.degree:
        raise DegreeMismatch("commutator of chains of different degree")
    if not is_subgroup(h, g):
        raise ValueError("H is not contained in G")
    comms = [_acomm(x, y) for x in h._gens for y in g._gens]
    return normal_closure(g._gens, comms, degree=g.degree)


def lower_central_series(g: StabChain, max_class: int = 64) -> List[StabChain]:
    """``[gamma_1, gamma_2, ...]`` until the trivial group or ``max_class + 1`` terms."""
    if max_class < 1:
        raise ValueError("max_class must be >= 1")
    series = [g]
    while series[-1].order() > 1 and len(series) <= max_class:
        series.append(commutator_subgroup(series[-1], g))
    return series


def _quotient_reps(h: StabChain, m: StabChain) -> List[np.ndarray]:
    work = m.copy()
    return [x for x in h._gens if work.extend(x)]


def quotient_representatives(h: StabChain, m: StabChain) -> List[Perm]:
    """Generators of ``H`` that are independent modulo ``M`` (greedy)."""
    return [tuple(int(v) for v in x) for x in _quotient_reps(h, m)]


def elementary_rank(gk: StabChain, gk1: StabChain) -> int:
    """Rank of the elementary Abelian 2-group ``Gk / Gk1``."""
    if not is_subgroup(gk1, gk):
        raise ValueError("second group is not contained in the first")
    reps = gk._gens
    for i, x in enumerate(reps):
        if not gk1.contains(x[x]):
            raise NotElementary("a square escapes the subgroup")
        for y in reps[i + 1:]:
            if not gk1.contains(_acomm(x, y)):
                raise NotElementary("a commutator escapes the subgroup")
    ratio, rem = divmod(gk.order(), gk1.order())
    assert rem == 0
    return ratio.bit_length() - 1


def abelian_invariants_2group(h: StabChain, modulo: Optional[StabChain] = None) -> List[int]:
    """Abelian invariants of ``H / [H, H]`` (or of ``H / [H, H] M``), ascending.

    Uses the descending chain ``D_i = <x^(2^i) : x in gens> [H, H] M``; the
    drop ``log2 |D_i / D_(i+1)|`` counts invariants of order ``> 2^i``.
    """
    n = h.order()
    if n & (n - 1):
        raise ValueError(f"group of order {n} is not a 2-group")
    derived = commutator_subgroup(h, h)
    if modulo is not None:
        derived = normal_closure(h._gens, derived._gens + modulo._gens, degree=h.degree)
    gens = _quotient_reps(h, derived)
    drops = []
    prev = h.order()
    while prev > derived.order():
        gens = [x[x] for x in gens]
        cur = StabChain(h.degree, derived._gens + gens).order()
        drops.append((prev // cur).bit_length() - 1)
        prev = cur
    drops.append(0)
    out: List[int] = []
    for i in range(len(drops) - 1):
        out += [1 << (i + 1)] * (drops[i] - drops[i + 1])
    return sorted(out)


def embed_block(q: Perm, side: int) -> Perm:
    """Act as ``q`` on half ``side`` of twice as many points, trivially elsewhere."""
    n = len(q)
    if n & (n - 1):
        raise ValueError("degree must be a power of two")
    if side not in (0, 1):
        raise ValueError("side must be 0 or 1")
    if side == 0:
        return tuple(list(q) + list(range(n, 2 * n)))
    return tuple(list(range(n)) + [n + x for x in q])
