"""Self-similar groups generated by bounded automata on the binary tree.

Elements are freely reduced words (plain strings) over the involutive
generators ``a, b, c, d``.  The empty string is the identity.  Actions are
right actions: in ``gh`` the automorphism ``g`` is applied first, so that
``(gh)|v = g|v . h|(v^g)``.
"""

from __future__ import annotations

import os
import threading
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

LETTERS = "abcd"

DEFAULT_MAX_CLOSURE = 10**6
DEFAULT_MAX_LENGTH = 10**4


class ResourceCapExceeded(RuntimeError):
    """A configurable resource cap was hit; the computation gave no verdict."""


class NotContracting(ResourceCapExceeded):
    """Nucleus search grew past the closure bound."""


def reduce(word: str) -> str:
    """Freely reduce ``word`` modulo ``a^2 = b^2 = c^2 = d^2 = 1``."""
    out: List[str] = []
    for ch in word:
        if ch == "1":
            continue
        if out and out[-1] == ch:
            out.pop()
        else:
            out.append(ch)
    return "".join(out)


def inverse(word: str) -> str:
    return word[::-1]


def power(word: str, k: int) -> str:
    if k < 0:
        return power(inverse(word), -k)
    # square-and-multiply keeps intermediate words reduced
    result, base = "", reduce(word)
    while k:
        if k & 1:
            result = reduce(result + base)
        base = reduce(base + base)
        k >>= 1
    return result


def conj(u: str, v: str) -> str:
    """``u^v = v^-1 u v``."""
    return reduce(inverse(v) + u + v)


def comm(u: str, v: str) -> str:
    """``[u, v] = u^-1 v^-1 u v``."""
    return reduce(inverse(u) + inverse(v) + u + v)


def left_normed_comm(*words: str) -> str:
    """``[[[w1, w2], w3], ...]``."""
    acc = words[0]
    for w in words[1:]:
        acc = comm(acc, w)
    return acc


@dataclass(frozen=True)
class AutomatonSpec:
    """First-level recursion of a self-similar generating set.

    ``states[s]`` is the pair ``(s|0, s|1)``; ``active`` holds the letters
    that swap the two maximal subtrees.
    """

    name: str
    states: Tuple[Tuple[str, Tuple[str, str]], ...]
    active: FrozenSet[str]

    def __post_init__(self):
        letters = {s for s, _ in self.states}
        for s, (l, r) in self.states:
            for w in (l, r):
                if len(w) > 1 or (w and w not in letters):
                    raise ValueError(f"section of {s} must be a generator or '': {w!r}")
            if s in self.active and l != r:
                raise ValueError(f"active generator {s} needs equal sections to be an involution")
        if not self.active <= letters:
            raise ValueError("active letters must be generators")

    @property
    def letters(self) -> str:
        return "".join(s for s, _ in self.states)

    def state_table(self) -> Dict[str, Tuple[str, str]]:
        return dict(self.states)


TWIN_SPEC = AutomatonSpec(
    name="twin",
    states=(("a", ("", "")), ("b", ("c", "a")), ("c", ("a", "d")), ("d", ("", "b"))),
    active=frozenset("a"),
)

GRIGORCHUK_SPEC = AutomatonSpec(
    name="grigorchuk",
    states=(("a", ("", "")), ("b", ("a", "c")), ("c", ("a", "d")), ("d", ("", "b"))),
    active=frozenset("a"),
)

TRIVIAL_SPEC = AutomatonSpec(
    name="trivial",
    states=tuple((s, ("", "")) for s in LETTERS),
    active=frozenset(),
)

# ``a`` kept as a letter but neither active nor with non-trivial states.
INACTIVE_SPEC = AutomatonSpec(
    name="no-a",
    states=(("a", ("", "")), ("b", ("c", "a")), ("c", ("a", "d")), ("d", ("", "b"))),
    active=frozenset(),
)


@dataclass(frozen=True)
class Portrait:
    """Activity-labelled binary tree; leaves carry the section words."""

    active: int
    children: Optional[Tuple["Portrait", "Portrait"]] = None
    label: Optional[str] = None

    def depth(self) -> int:
        if self.children is None:
            return 0
        return 1 + max(c.depth() for c in self.children)

    def to_dict(self) -> dict:
        if self.children is None:
            return {"active": self.active, "section": self.label}
        return {"active": self.active, "children": [c.to_dict() for c in self.children]}


def _env_max_closure() -> int:
    raw = os.environ.get("TWINTREE_MAX_CLOSURE")
    return int(raw) if raw else DEFAULT_MAX_CLOSURE


@dataclass
class SelfSimilarGroup:
    """A group given by an :class:`AutomatonSpec`, with word-problem caches.

    The caches are guarded by a lock, so one instance may be shared between
    threads.
    """

    spec: AutomatonSpec
    max_closure: int = field(default_factory=_env_max_closure)
    max_length: int = DEFAULT_MAX_LENGTH

    def __post_init__(self):
        self._table = self.spec.state_table()
        self._active = self.spec.active
        self._lock = threading.RLock()
        self._decomp: Dict[str, Tuple[str, str, int]] = {}
        self._trivial: Dict[str, bool] = {}
        self._levelperm: Dict[Tuple[str, int], Tuple[int, ...]] = {}
        self._nucleus: Optional[List[str]] = None

    @property
    def letters(self) -> str:
        return self.spec.letters

    def clear_cache(self) -> None:
        with self._lock:
            self._decomp.clear()
            self._trivial.clear()
            self._levelperm.clear()
            self._nucleus = None

    def check_word(self, word: str) -> str:
        bad = [ch for ch in word if ch not in self._table]
        if bad:
            raise ValueError(f"unknown generator {bad[0]!r} for group {self.spec.name}")
        return reduce(word)

    def activity(self, word: str) -> int:
        return sum(1 for ch in word if ch in self._active) & 1

    # -- wreath recursion -------------------------------------------------

    def decompose(self, word: str) -> Tuple[str, str, int]:
        """``psi(w) = (left, right) sigma^active`` for a reduced word."""
        hit = self._decomp.get(word)
        if hit is not None:
            return hit
        if len(word) > self.max_length:
            raise ResourceCapExceeded(f"word length {len(word)} exceeds {self.max_length}")
        table, active = self._table, self._active
        targets = ([], [])
        flag = 0
        for ch in word:
            s0, s1 = table[ch]
            targets[flag].append(s0)
            targets[flag ^ 1].append(s1)
            if ch in active:
                flag ^= 1
        out = (reduce("".join(targets[0])), reduce("".join(targets[1])), flag)
        with self._lock:
            if len(self._decomp) > 4 * self.max_closure:
                self._decomp.clear()
            self._decomp[word] = out
        return out

    def state(self, word: str, vertex: Sequence[int] | str) -> str:
        w = reduce(word)
        for bit in _bits(vertex):
            l, r, _ = self.decompose(w)
            w = r if bit else l
        return w

    def act_on_vertex(self, word: str, vertex: Sequence[int] | str) -> str:
        w = reduce(word)
        out = []
        for bit in _bits(vertex):
            l, r, s = self.decompose(w)
            out.append(str(bit ^ s))
            w = r if bit else l
        return "".join(out)

    # -- word problem -----------------------------------------------------

    def is_trivial(self, word: str) -> bool:
        """Exact triviality test by closure of reachable sections.

        ``w`` is trivial iff no section of ``w`` is active at its root.
        Sections never grow, so the closure is finite.
        """
        w = reduce(word)
        if not w:
            return True
        known = self._trivial.get(w)
        if known is not None:
            return known
        seen = {w}
        stack = [w]
        verdict = True
        while stack:
            u = stack.pop()
            if self.activity(u):
                verdict = False
                break
            cached = self._trivial.get(u)
            if cached is True:
                continue
            if cached is False:
                verdict = False
                break
            l, r, _ = self.decompose(u)
            for s in (l, r):
                assert len(s) <= len(u), "section longer than word"
                if s and s not in seen:
                    if len(seen) >= self.max_closure:
                        raise ResourceCapExceeded(
                            f"section closure exceeded {self.max_closure} words")
                    seen.add(s)
                    stack.append(s)
        with self._lock:
            if len(self._trivial) > 4 * self.max_closure:
                self._trivial.clear()
            if verdict:
                for u in seen:
                    self._trivial[u] = True
            else:
                self._trivial[w] = False
        return verdict

    def equals(self, g: str, h: str) -> bool:
        return self.is_trivial(reduce(g + inverse(h)))

    def element_order(self, word: str, cap: int = 10) -> Optional[int]:
        """Smallest ``2**k <= 2**cap`` with ``w^(2**k) = 1``, or ``None``.

        Uses the order recursion of self-similar groups instead of literal
        repeated squaring: an active ``g`` has order ``2 |g^2|``, an inactive
        one has order ``max(|g|0|, |g|1|)`` (all orders here are 2-powers).
        Words stay short, so orders up to ``2**cap`` are reachable for any cap.
        """
        if cap < 1:
            raise ValueError("cap must be >= 1")
        k = self._log_order(reduce(word), cap, {}, 0)
        return None if k is None else 1 << k

    def _log_order(self, w: str, budget: int, path: Dict[str, int], squarings: int) -> Optional[int]:
        # ``budget``: remaining squarings allowed; ``path`` maps words on the
        # current branch to the squaring count when they were entered.
        if self.is_trivial(w):
            return 0
        if budget <= 0:
            return None
        seen_at = path.get(w)
        if seen_at is not None:
            # revisiting without squaring adds no constraint; with squaring
            # it means infinite order
            return 0 if seen_at == squarings else None
        if len(path) > self.max_closure:
            raise ResourceCapExceeded("order recursion exceeded the closure cap")
        path[w] = squarings
        try:
            if self.activity(w):
                sub = self._log_order(reduce(w + w), budget - 1, path, squarings + 1)
                if sub is None:
                    return None
                return sub + 1
            l, r, _ = self.decompose(w)
            best = 0
            for s in (l, r):
                sub = self._log_order(s, budget, path, squarings)
                if sub is None:
                    return None
                best = max(best, sub)
            return best
        finally:
            del path[w]

    # -- finite data ------------------------------------------------------

    def portrait(self, word: str, depth: int) -> Portrait:
        if depth < 0:
            raise ValueError("depth must be >= 0")
        w = reduce(word)
        if depth == 0:
            return Portrait(active=self.activity(w), label=w)
        l, r, s = self.decompose(w)
        return Portrait(active=s, children=(self.portrait(l, depth - 1), self.portrait(r, depth - 1)))

    def level_permutation(self, word: str, n: int) -> Tuple[int, ...]:
        """Permutation of ``X^n``; leaf index = vertex bits read MSB-first."""
        if n < 0:
            raise ValueError("level must be >= 0")
        w = reduce(word)
        return self._levelperm_rec(w, n)

    def _levelperm_rec(self, w: str, n: int) -> Tuple[int, ...]:
        if n == 0:
            return (0,)
        key = (w, n)
        hit = self._levelperm.get(key)
        if hit is not None:
            return hit
        half = 1 << (n - 1)
        if not w:
            out = tuple(range(2 * half))
        else:
            l, r, s = self.decompose(w)
            pl = self._levelperm_rec(l, n - 1)
            pr = self._levelperm_rec(r, n - 1)
            off0, off1 = s * half, (1 - s) * half
            out = tuple([off0 + p for p in pl] + [off1 + p for p in pr])
        with self._lock:
            self._levelperm[key] = out
        return out

    def is_level_transitive(self, n: int) -> bool:
        gens = [self.level_permutation(s, n) for s in self.letters]
        orbit = {0}
        frontier = [0]
        while frontier:
            p = frontier.pop()
            for g in gens:
                q = g[p]
                if q not in orbit:
                    orbit.add(q)
                    frontier.append(q)
        return len(orbit) == 1 << n

    # -- nucleus ----------------------------------------------------------

    def nucleus(self) -> List[str]:
        """Nucleus of the group, as shortest-then-lex representative words."""
        if self._nucleus is None:
            found = self._compute_nucleus()
            with self._lock:
                self._nucleus = found
        return list(self._nucleus)

    def _compute_nucleus(self) -> List[str]:
        canon = _Canonicalizer(self)
        seeds = [""] + list(self.letters)
        current = _limit_set(self._section_closure(canon, seeds), canon)
        while True:
            products = [reduce(x + y) for x in current for y in current]
            graph = self._section_closure(canon, list(current) + products)
            nxt = _limit_set(graph, canon)
            if set(nxt) == set(current):
                return sorted(current, key=lambda w: (len(w), w))
            current = nxt

    def _section_closure(self, canon: "_Canonicalizer", words: List[str]) -> Dict[str, Tuple[str, str]]:
        graph: Dict[str, Tuple[str, str]] = {}
        todo = [canon(w) for w in words]
        while todo:
            u = todo.pop()
            if u in graph:
                continue
            if len(graph) >= self.max_closure:
                raise NotContracting(f"nucleus closure exceeded {self.max_closure} elements")
            l, r, _ = self.decompose(u)
            cl, cr = canon(l), canon(r)
            graph[u] = (cl, cr)
            todo.extend((cl, cr))
        return graph


class _Canonicalizer:
    """Maps words to the first-seen representative of their group element."""

    def __init__(self, group: SelfSimilarGroup, level: int = 5):
        self.group = group
        self.level = level
        self.buckets: Dict[Tuple[int, ...], List[str]] = {}
        self.memo: Dict[str, str] = {}

    def __call__(self, word: str) -> str:
        w = reduce(word)
        hit = self.memo.get(w)
        if hit is not None:
            return hit
        key = self.group.level_permutation(w, self.level)
        bucket = self.buckets.setdefault(key, [])
        for rep in bucket:
            if self.group.equals(rep, w):
                self.memo[w] = rep
                return rep
        bucket.append(w)
        self.memo[w] = w
        return w


def _limit_set(graph: Dict[str, Tuple[str, str]], canon: _Canonicalizer) -> List[str]:
    """Elements on cycles of the section graph, plus everything below them."""

    def reachable(start: str) -> set:
        seen = set()
        stack = list(graph[start])
        while stack:
            u = stack.pop()
            if u in seen:
                continue
            seen.add(u)
            stack.extend(graph[u])
        return seen

    on_cycle = [u for u in graph if u in reachable(u)]
    limit = set(on_cycle)
    for u in on_cycle:
        limit |= reachable(u)
    return sorted(limit, key=lambda w: (len(w), w))


def _bits(vertex: Sequence[int] | str) -> List[int]:
    if isinstance(vertex, str):
        if any(ch not in "01" for ch in vertex):
            raise ValueError(f"vertex must be a 0/1 string, got {vertex!r}")
        return [int(ch) for ch in vertex]
    return [int(b) for b in vertex]


TWIN = SelfSimilarGroup(TWIN_SPEC)
GRIGORCHUK = SelfSimilarGroup(GRIGORCHUK_SPEC)

_GROUPS = {"twin": TWIN, "grigorchuk": GRIGORCHUK}


def get_group(name: str) -> SelfSimilarGroup:
    try:
        return _GROUPS[name]
    except KeyError:
        raise ValueError(f"unknown group {name!r}; choose from {sorted(_GROUPS)}") from None
