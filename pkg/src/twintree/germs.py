"""The order-64 germ group and the functionals that map the twin onto it.

``Gamma`` is the class-2 group generated by four involutions ``a, b, c, d``
with central commutators ``u = [a,b] = [b,c] = [c,d] = [d,b]``,
``v = [a,c]`` and ``[a,d] = uv``.  Elements are kept in the normal form
``a^al b^be c^ga d^de u^e v^f``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Tuple

from .permgroup import Perm, mul as perm_mul
from .tree_core import TWIN, ResourceCapExceeded, SelfSimilarGroup, reduce

GEN_INDEX = {"a": 0, "b": 1, "c": 2, "d": 3}
U, V = 1, 2  # central bits: U for [a,b], V for [a,c]

# central value of the commutator of generators i > j
_COMM = {(1, 0): U, (2, 0): V, (3, 0): U | V, (2, 1): U, (3, 1): U, (3, 2): U}


def _cocycle(x: int, y: int) -> int:
    out = 0
    for (i, j), val in _COMM.items():
        if (x >> i) & 1 and (y >> j) & 1:
            out ^= val
    return out


_Q = [[_cocycle(x, y) for y in range(16)] for x in range(16)]


@dataclass(frozen=True, order=True)
class GammaElement:
    gbits: int = 0  # bit i: exponent of generator i in a, b, c, d order
    cbits: int = 0  # bit 0: exponent of [a,b]; bit 1: exponent of [a,c]

    @property
    def index(self) -> int:
        return self.gbits | (self.cbits << 4)

    @classmethod
    def from_index(cls, i: int) -> "GammaElement":
        return cls(i & 15, i >> 4)

    @classmethod
    def generator(cls, letter: str) -> "GammaElement":
        return cls(1 << GEN_INDEX[letter], 0)

    @classmethod
    def from_word(cls, word: str) -> "GammaElement":
        out = GAMMA_ID
        for ch in word:
            out = out * cls.generator(ch)
        return out

    @classmethod
    def from_bits(cls, text: str) -> "GammaElement":
        if len(text) != 6 or set(text) - {"0", "1"}:
            raise ValueError(f"expected 6 bits, got {text!r}")
        g = sum(int(text[i]) << i for i in range(4))
        return cls(g, int(text[4]) | (int(text[5]) << 1))

    def __mul__(self, other: "GammaElement") -> "GammaElement":
        return gamma_mul(self, other)

    def inverse(self) -> "GammaElement":
        return GammaElement.from_index(_INV[self.index])

    def order(self) -> int:
        k, x = 1, self
        while x != GAMMA_ID:
            x = x * self
            k += 1
        return k

    def to_bits(self) -> str:
        """``"abcdef"`` bit string: four generator exponents, then e and f."""
        return "".join(str((self.gbits >> i) & 1) for i in range(4)) + f"{self.cbits & 1}{self.cbits >> 1}"

    def __str__(self) -> str:
        parts = [ch for ch in "abcd" if (self.gbits >> GEN_INDEX[ch]) & 1]
        if self.cbits & U:
            parts.append("[a,b]")
        if self.cbits & V:
            parts.append("[a,c]")
        return "".join(parts) or "1"


GAMMA_ID = GammaElement()


def gamma_mul(x: GammaElement, y: GammaElement) -> GammaElement:
    return GammaElement(x.gbits ^ y.gbits, x.cbits ^ y.cbits ^ _Q[x.gbits][y.gbits])


GAMMA_ELEMENTS = [GammaElement.from_index(i) for i in range(64)]
_MUL = [[gamma_mul(x, y).index for y in GAMMA_ELEMENTS] for x in GAMMA_ELEMENTS]
_INV = [next(j for j in range(64) if _MUL[i][j] == 0) for i in range(64)]


def gamma_comm(x: GammaElement, y: GammaElement) -> GammaElement:
    return x.inverse() * y.inverse() * x * y


def gamma_relations_hold() -> bool:
    """All defining relations of the presentation, checked in the realisation."""
    a, b, c, d = (GammaElement.generator(ch) for ch in "abcd")
    ab, ac = gamma_comm(a, b), gamma_comm(a, c)
    return (
        all(s * s == GAMMA_ID for s in (a, b, c, d))
        and ab * ab == GAMMA_ID
        and ac * ac == GAMMA_ID
        and ab == gamma_comm(b, c) == gamma_comm(c, d) == gamma_comm(d, b)
        and gamma_comm(a, d) == ab * ac
    )


# -- functionals on the twin ---------------------------------------------

TAU = {"b": "c", "c": "d", "d": "b"}
XI_LETTERS = "bcd"
NEXT_F = {1: 2, 2: 3, 3: 1}
DEFAULT_MAX_DEPTH = 48


class GermEvaluator:
    """Evaluates the germ functionals of the twin with per-word memoisation."""

    def __init__(self, group: SelfSimilarGroup = TWIN, max_depth: int = DEFAULT_MAX_DEPTH):
        if group.spec.name != "twin":
            raise ValueError("germ functionals are defined for the twisted twin only")
        self.group = group
        self.max_depth = max_depth
        self._nucleus_memo: Dict[str, str | None] = {}
        self._xi_memo: Dict[str, Tuple[int, int, int]] = {}
        self._f_memo: Dict[Tuple[str, int], int] = {}

    def nucleus_letter(self, word: str) -> str | None:
        """The nucleus element equal to ``word`` ("" for 1), or None."""
        if len(word) <= 1:
            return word
        hit = self._nucleus_memo.get(word, False)
        if hit is not False:
            return hit
        candidates = "a" if self.group.activity(word) else ("", "b", "c", "d")
        found = None
        for s in candidates:
            if self.group.equals(word, s):
                found = s
                break
        self._nucleus_memo[word] = found
        return found

    def _canon(self, word: str) -> str:
        n = self.nucleus_letter(word)
        return word if n is None else n

    def xi_all(self, word: str) -> Tuple[int, int, int]:
        """``([b](g), [c](g), [d](g))`` by expansion to nucleus sections.

        Sections are expanded level by level, keeping words with odd
        multiplicity only, until the depth is a multiple of 3 and every
        section lies in the nucleus; then occurrences of each letter are
        counted mod 2.
        """
        w = self._canon(reduce(word))
        hit = self._xi_memo.get(w)
        if hit is not None:
            return hit
        layer = {w: 1}
        depth = 0
        while True:
            if depth % 3 == 0 and all(len(u) <= 1 for u in layer):
                out = tuple(sum(1 for u in layer if u == xi) & 1 for xi in XI_LETTERS)
                break
            if depth >= self.max_depth:
                raise ResourceCapExceeded(f"functional expansion deeper than {self.max_depth}")
            nxt: Dict[str, int] = {}
            for u in layer:
                l, r, _ = self.group.decompose(u)
                for s in (l, r):
                    s = self._canon(s)
                    nxt[s] = nxt.get(s, 0) ^ 1
            layer = {u: 1 for u, k in nxt.items() if k}
            depth += 1
        self._xi_memo[w] = out
        return out

    def xi(self, word: str, letter: str) -> int:
        return self.xi_all(word)["bcd".index(letter)]

    def x_xi(self, word: str, x: int, letter: str) -> int:
        return self.xi(self.group.state(word, (x,)), letter)

    def empty(self, word: str) -> int:
        return self.group.activity(word)

    def f(self, word: str, i: int) -> int:
        if i not in NEXT_F:
            raise ValueError("i must be 1, 2 or 3")
        return self._f(self._canon(reduce(word)), i, 0)

    def _f(self, w: str, i: int, depth: int) -> int:
        if len(w) <= 1:
            return 0
        key = (w, i)
        hit = self._f_memo.get(key)
        if hit is not None:
            return hit
        if depth > self.max_depth:
            raise ResourceCapExceeded(f"f_{i} recursion deeper than {self.max_depth}")
        l, r, _ = self.group.decompose(w)
        b0, c0, d0 = self.xi_all(l)
        b1, c1, d1 = self.xi_all(r)
        if i == 1:
            val = d0 + c1 + d0 * d1 + b0 * d1 + b1 * d0
        elif i == 2:
            val = b0 + c1 + c0 * c1
        else:
            val = d0 + c1 + c0 * c1 + b0 * c1 + b1 * c0 + b0 * d1 + b1 * d0
        nxt = NEXT_F[i]
        val += self._f(self._canon(l), nxt, depth + 1) + self._f(self._canon(r), nxt, depth + 1)
        out = val & 1
        self._f_memo[key] = out
        return out

    def e(self, word: str) -> int:
        w = reduce(word)
        _, b, _, d = self._gbits(w)
        b0, _, d0 = self.xi_all(self.group.state(w, (0,)))
        return (self.f(w, 3) + self.empty(w) * (b + d) + b0 + d0) & 1

    def f_central(self, word: str) -> int:
        """The exponent of [a,c] in pi(word)."""
        w = reduce(word)
        _, _, c, d = self._gbits(w)
        b0, _, d0 = self.xi_all(self.group.state(w, (0,)))
        return (self.empty(w) * (c + d) + b0 + d0) & 1

    def _gbits(self, w: str) -> Tuple[int, int, int, int]:
        return (self.empty(w),) + self.xi_all(w)

    def pi(self, word: str) -> GammaElement:
        w = reduce(word)
        g = self._gbits(w)
        return GammaElement(sum(x << i for i, x in enumerate(g)), self.e(w) | (self.f_central(w) << 1))

    def pi_n(self, word: str, n: int) -> "GermWreathElement":
        if n < 0:
            raise ValueError("level must be >= 0")
        w = reduce(word)
        values = []
        for v in range(1 << n):
            bits = [(v >> (n - 1 - k)) & 1 for k in range(n)]
            values.append(self.pi(self.group.state(w, bits)))
        return GermWreathElement(tuple(values), self.group.level_permutation(w, n))


# -- cocycle tables --------------------------------------------------------
#
# Each row gives phi(s g) - phi(g) for s = a, b, c, d as a sum of basic
# functionals of g ("" means 0).

_BASIC = {
    "[]": lambda ev, w: ev.empty(w),
    "[b]": lambda ev, w: ev.xi(w, "b"),
    "[c]": lambda ev, w: ev.xi(w, "c"),
    "[d]": lambda ev, w: ev.xi(w, "d"),
}
for _x in (0, 1):
    for _l in XI_LETTERS:
        _BASIC[f"[{_x}{_l}]"] = (lambda x, l: lambda ev, w: ev.x_xi(w, x, l))(_x, _l)
for _i in (1, 2, 3):
    _BASIC[f"f{_i}"] = (lambda i: lambda ev, w: ev.f(w, i))(_i)
_BASIC["e"] = lambda ev, w: ev.e(w)
_BASIC["f"] = lambda ev, w: ev.f_central(w)
for _l in XI_LETTERS:
    _BASIC[f"[]*[{_l}]"] = (lambda l: lambda ev, w: ev.empty(w) * ev.xi(w, l))(_l)

COCYCLE_TABLES: Dict[str, Tuple[Tuple[str, Tuple[str, str, str, str]], ...]] = {
    "products": (
        ("[]*[b]", ("[b]", "[]", "", "")),
        ("[]*[c]", ("[c]", "", "[]", "")),
        ("[]*[d]", ("[d]", "", "", "[]")),
    ),
    "sections": (
        ("[1c]", ("[b]", "", "", "")),
        ("[0d]", ("[c]", "", "", "")),
        ("[0b]", ("[d]", "", "", "")),
    ),
    "f": (
        ("f1", ("[b]+[c]", "[c]+[d]", "", "[c]")),
        ("f2", ("[b]+[d]", "[d]", "[b]+[d]", "")),
        ("f3", ("[b]+[c]", "", "[b]", "[b]+[c]")),
    ),
    "ef": (
        ("e", ("", "[]", "[b]", "[b]+[c]+[]")),
        ("f", ("", "", "[]", "[]")),
    ),
}


def eval_functional(ev: "GermEvaluator", expr: str, word: str) -> int:
    """Evaluate a ``+``-separated sum of basic functionals mod 2."""
    return sum(_BASIC[t](ev, word) for t in expr.split("+") if t) & 1


def table_entries(table: str) -> List[Tuple[str, str, str]]:
    """``(row, generator, expected)`` for every cell of a cocycle table."""
    return [(row, s, cells[k]) for row, cells in COCYCLE_TABLES[table] for k, s in enumerate("abcd")]


def check_table_entry(ev: "GermEvaluator", row: str, s: str, expected: str, word: str) -> bool:
    lhs = eval_functional(ev, row, reduce(s + word)) ^ eval_functional(ev, row, word)
    return lhs == eval_functional(ev, expected, word)


@dataclass(frozen=True)
class GermWreathElement:
    """Element of ``Gamma wr Aut X^n``: leaf values plus a leaf permutation."""

    leaf_values: Tuple[GammaElement, ...]
    leaf_perm: Perm

    @property
    def level(self) -> int:
        return len(self.leaf_perm).bit_length() - 1

    def __mul__(self, other: "GermWreathElement") -> "GermWreathElement":
        vals = tuple(self.leaf_values[v] * other.leaf_values[self.leaf_perm[v]] for v in range(len(self.leaf_perm)))
        return GermWreathElement(vals, perm_mul(self.leaf_perm, other.leaf_perm))

    def is_identity(self) -> bool:
        return all(x == GAMMA_ID for x in self.leaf_values) and all(i == p for i, p in enumerate(self.leaf_perm))

    def to_dict(self) -> dict:
        return {"values": [x.to_bits() for x in self.leaf_values], "perm": list(self.leaf_perm)}


def germ_perm_rep(w: GermWreathElement) -> Perm:
    """Permutation of ``Gamma x X^n``: point ``64 v + x`` goes to ``(x w_v, v^perm)``."""
    out: List[int] = []
    for v, val in enumerate(w.leaf_values):
        base = 64 * w.leaf_perm[v]
        row = [r[val.index] for r in _MUL]
        out.extend(base + row[x] for x in range(64))
    return tuple(out)


_DEFAULT = None


def default_evaluator() -> GermEvaluator:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = GermEvaluator()
    return _DEFAULT


def functional_empty(word: str) -> int:
    return default_evaluator().empty(reduce(word))


def functional_xi(word: str, letter: str) -> int:
    return default_evaluator().xi(word, letter)


def functional_x_xi(word: str, x: int, letter: str) -> int:
    return default_evaluator().x_xi(word, x, letter)


def f_i(word: str, i: int) -> int:
    return default_evaluator().f(word, i)


def pi(word: str) -> GammaElement:
    return default_evaluator().pi(word)


def pi_n(word: str, n: int) -> GermWreathElement:
    return default_evaluator().pi_n(word, n)


def germ_image_perm(word: str, n: int) -> Perm:
    return germ_perm_rep(pi_n(word, n))
