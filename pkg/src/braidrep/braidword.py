"""Braid words over four group families, with a small parser and macro table.

Families and their generator alphabets:

    B    classical braid group on n strands: s1..s(n-1)
    CPB  braids in a cylinder, n marked slots: s1..sn (slot indices wrap), z
    VCB  cylinder braids with virtual crossings: s1..sn, t1..tn (wrapping), z
    FVB  flat-virtual braids on n strands: s1..s(n-1), p1..p(n-1), t1..t(n-1)

Letter kinds are single characters matching the text grammar: "s" crossing,
"t" virtual, "p" flat, "z" slot rotation. Words are stored free-reduced:
adjacent powers of the same generator merge, involutive kinds ("p", "t")
keep powers in {1}, zero powers vanish. No braid-type rewriting happens.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import (IndexOutOfRange, KindNotInGroup, UnknownMacro,
                     WordSyntaxError)

FAMILIES = ("B", "CPB", "VCB", "FVB")
_KINDS_BY_FAMILY = {
    "B": "s",
    "CPB": "sz",
    "VCB": "stz",
    "FVB": "spt",
}
_INVOLUTIVE = ("t", "p")


@dataclass(frozen=True)
class GroupId:
    family: str
    strands: int
    flat_braid_relation: bool = False

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.strands < 2:
            raise ValueError("need at least 2 strands")
        if self.flat_braid_relation and self.family != "FVB":
            raise ValueError("flat_braid_relation only applies to FVB")

    @property
    def kinds(self) -> str:
        return _KINDS_BY_FAMILY[self.family]

    def index_range(self, kind: str) -> tuple[int, int]:
        """Legal generator indices (inclusive) for an indexed kind."""
        if self.family in ("CPB", "VCB"):
            return (1, self.strands)
        return (1, self.strands - 1)

    @property
    def cyclic(self) -> bool:
        return self.family in ("CPB", "VCB")

    def __str__(self) -> str:
        return f"{self.family}{self.strands}"


def parse_group(text: str, flat_braid_relation: bool = False) -> GroupId:
    m = re.fullmatch(r"(B|CPB|VCB|FVB)(\d+)", text.strip())
    if not m:
        raise WordSyntaxError(f"bad group {text!r}; expected e.g. B5, VCB4")
    try:
        return GroupId(m.group(1), int(m.group(2)), flat_braid_relation)
    except ValueError as exc:
        raise WordSyntaxError(str(exc)) from exc


@dataclass(frozen=True)
class Letter:
    kind: str
    index: int | None
    power: int

    def __post_init__(self):
        if self.kind not in "stpz":
            raise ValueError(f"unknown kind {self.kind!r}")
        if (self.index is None) != (self.kind == "z"):
            raise ValueError("index is required exactly for indexed kinds")
        if self.power == 0:
            raise ValueError("zero power letter")

    def inverse(self) -> "Letter":
        return Letter(self.kind, self.index, -self.power)


def sigma(i: int, power: int = 1) -> Letter:
    return Letter("s", i, power)


def tau(i: int, power: int = 1) -> Letter:
    return Letter("t", i, power)


def pi(i: int, power: int = 1) -> Letter:
    return Letter("p", i, power)


def zeta(power: int = 1) -> Letter:
    return Letter("z", None, power)


def _check_letter(group: GroupId, letter: Letter) -> None:
    if letter.kind not in group.kinds:
        raise KindNotInGroup(f"{letter.kind!r} not available in {group}")
    if letter.kind != "z":
        lo, hi = group.index_range(letter.kind)
        if not lo <= letter.index <= hi:
            raise IndexOutOfRange(
                f"{letter.kind}{letter.index} outside {lo}..{hi} in {group}")


def free_reduce_letters(letters: Iterable[Letter]) -> tuple[Letter, ...]:
    out: list[Letter] = []
    for l in letters:
        p = l.power
        if l.kind in _INVOLUTIVE:
            p %= 2
        if p == 0:
            continue
        if out and out[-1].kind == l.kind and out[-1].index == l.index:
            merged = out[-1].power + p
            if l.kind in _INVOLUTIVE:
                merged %= 2
            out.pop()
            if merged:
                out.append(Letter(l.kind, l.index, merged))
        else:
            out.append(Letter(l.kind, l.index, p))
    return tuple(out)


@dataclass(frozen=True)
class Word:
    group: GroupId
    letters: tuple[Letter, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))
        for l in self.letters:
            _check_letter(self.group, l)

    @classmethod
    def empty(cls, group: GroupId) -> "Word":
        return cls(group, ())

    def __mul__(self, other: "Word") -> "Word":
        if other.group != self.group:
            raise ValueError("cannot concatenate words over different groups")
        return Word(self.group, free_reduce_letters(self.letters + other.letters))

    def __len__(self) -> int:
        return len(self.letters)

    def expanded(self) -> tuple[Letter, ...]:
        """Letters with |power| 1, in order."""
        out = []
        for l in self.letters:
            unit = 1 if l.power > 0 else -1
            out.extend(Letter(l.kind, l.index, unit) for _ in range(abs(l.power)))
        return tuple(out)


def invert(w: Word) -> Word:
    return Word(w.group, free_reduce_letters(l.inverse() for l in reversed(w.letters)))


def free_reduce(w: Word) -> Word:
    return Word(w.group, free_reduce_letters(w.letters))


# -- text form -----------------------------------------------------------------


def format_word(w: Word) -> str:
    parts = []
    for l in w.letters:
        body = "z" if l.kind == "z" else f"{l.kind}{l.index}"
        parts.append(body if l.power == 1 else f"{body}^{l.power}")
    return " ".join(parts)


_TOKEN_RE = re.compile(
    r"\s+|(?P<macro_call>comm\()|(?P<abrack>A\[)|(?P<name>BIGELOW5|Dc|Dv)"
    r"|(?P<gen>[stp]\d+)|(?P<zeta>z)|(?P<caret>\^)|(?P<int>-?\d+)"
    r"|(?P<open>\()|(?P<close>\))|(?P<semi>;)|(?P<comma>,)|(?P<rbrack>\])"
    r"|(?P<word>[A-Za-z]\w*)")


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise WordSyntaxError(f"unexpected character {text[pos]!r} at {pos}")
        pos = m.end()
        if m.lastgroup is None:
            continue
        if m.lastgroup == "word":
            raise UnknownMacro(f"unknown name {m.group()!r}")
        tokens.append((m.lastgroup, m.group()))
    return tokens


class _Parser:
    def __init__(self, tokens: list[tuple[str, str]], group: GroupId, comm: str):
        self.toks = tokens
        self.i = 0
        self.group = group
        self.comm = comm

    def peek(self) -> str | None:
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def take(self, kind: str) -> str:
        if self.peek() != kind:
            got = self.toks[self.i][1] if self.i < len(self.toks) else "end of input"
            raise WordSyntaxError(f"expected {kind}, got {got!r}")
        tok = self.toks[self.i][1]
        self.i += 1
        return tok

    def parse_word(self, *, stop: tuple[str, ...] = ()) -> list[Letter]:
        out: list[Letter] = []
        while self.peek() is not None and self.peek() not in stop:
            out.extend(self.parse_term())
        return out

    def parse_term(self) -> list[Letter]:
        atom = self.parse_atom()
        if self.peek() == "caret":
            self.take("caret")
            k = int(self.take("int"))
            if k < 0:
                atom = [l.inverse() for l in reversed(atom)]
                k = -k
            atom = atom * k
        return atom

    def parse_atom(self) -> list[Letter]:
        kind = self.peek()
        if kind == "gen":
            tok = self.take("gen")
            return [Letter(tok[0], int(tok[1:]), 1)]
        if kind == "zeta":
            self.take("zeta")
            return [zeta()]
        if kind == "open":
            self.take("open")
            inner = self.parse_word(stop=("close",))
            self.take("close")
            return inner
        if kind == "name":
            name = self.take("name")
            if name == "Dc":
                return [sigma(i) for i in range(1, self.group.strands)]
            if name == "Dv":
                return [tau(i) for i in range(1, self.group.strands)]
            return bigelow5_letters(self.group)
        if kind == "abrack":
            self.take("abrack")
            i = int(self.take("int"))
            self.take("comma")
            j = int(self.take("int"))
            self.take("rbrack")
            return band_generator_letters(self.group, i, j)
        if kind == "macro_call":
            self.take("macro_call")
            a = self.parse_word(stop=("semi",))
            self.take("semi")
            b = self.parse_word(stop=("close",))
            self.take("close")
            return commutator_letters(a, b, self.comm)
        got = self.toks[self.i][1] if self.i < len(self.toks) else "end of input"
        raise WordSyntaxError(f"expected a generator, group or macro, got {got!r}")


def parse_word(text: str, group: GroupId, comm_convention: str = "direct") -> Word:
    if comm_convention not in ("direct", "inverse-first"):
        raise ValueError(f"unknown comm convention {comm_convention!r}")
    parser = _Parser(_tokenize(text), group, comm_convention)
    letters = parser.parse_word()
    if parser.peek() is not None:
        raise WordSyntaxError(f"unbalanced {parser.toks[parser.i][1]!r}")
    return Word(group, free_reduce_letters(letters))


# -- macros ---------------------------------------------------------------------


def _invert_letters(letters: Sequence[Letter]) -> list[Letter]:
    return [l.inverse() for l in reversed(letters)]


def commutator_letters(a: Sequence[Letter], b: Sequence[Letter],
                       convention: str = "direct") -> list[Letter]:
    """comm(a; b): direct order a b a^-1 b^-1, or inverse-first."""
    a, b = list(a), list(b)
    if convention == "inverse-first":
        return _invert_letters(a) + _invert_letters(b) + a + b
    return a + b + _invert_letters(a) + _invert_letters(b)


def band_generator_letters(group: GroupId, i: int, j: int) -> list[Letter]:
    """A[i,j]: the band generator taking strand i once around strand j."""
    if not 1 <= i < j <= group.strands:
        raise IndexOutOfRange(f"A[{i},{j}] needs 1 <= i < j <= {group.strands}")
    down = [sigma(x) for x in range(j - 1, i, -1)]
    up = [sigma(x, -1) for x in range(i + 1, j)]
    return down + [sigma(i, 2)] + up


def bigelow5_letters(group: GroupId) -> list[Letter]:
    """The 5-strand commutator word whose unreduced crossing image is trivial.

    Pinned to the direct commutator convention; the surrounding parse flag
    does not alter it.
    """
    if group.family != "B" or group.strands != 5:
        raise KindNotInGroup("BIGELOW5 is a word in B5")
    psi1 = [sigma(3, -1), sigma(2), sigma(1, 2), sigma(2), sigma(4, 3),
            sigma(3), sigma(2)]
    psi2 = [sigma(4, -1), sigma(3), sigma(2), sigma(1, -2), sigma(2),
            sigma(1, 2), sigma(2, 2), sigma(1), sigma(4, 5)]
    a = _invert_letters(psi1) + [sigma(4)] + psi1
    core = [sigma(4), sigma(3), sigma(2), sigma(1, 2), sigma(2), sigma(3),
            sigma(4)]
    b = _invert_letters(psi2) + core + psi2
    return commutator_letters(a, b, "direct")


def bigelow5() -> Word:
    g = GroupId("B", 5)
    return Word(g, free_reduce_letters(bigelow5_letters(g)))


# -- JSON form -------------------------------------------------------------------


def word_to_json(w: Word) -> dict:
    g: dict = {"family": w.group.family, "strands": w.group.strands}
    if w.group.family == "FVB":
        g["flatBraidRelation"] = w.group.flat_braid_relation
    letters = []
    for l in w.letters:
        item: dict = {"k": l.kind, "p": l.power}
        if l.index is not None:
            item["i"] = l.index
        letters.append(item)
    return {"group": g, "letters": letters}


def word_from_json(data: dict) -> Word:
    try:
        g = data["group"]
        group = GroupId(g["family"], int(g["strands"]),
                        bool(g.get("flatBraidRelation", False)))
        letters = [Letter(item["k"], item.get("i"), int(item["p"]))
                   for item in data["letters"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise WordSyntaxError(f"malformed word JSON: {exc}") from exc
    return Word(group, free_reduce_letters(letters))


def word_to_json_text(w: Word) -> str:
    return json.dumps(word_to_json(w), separators=(",", ":"))


# -- permutations ------------------------------------------------------------------


def underlying_permutation(w: Word) -> tuple[int, ...]:
    """Image positions: entry x-1 is where the strand starting at x ends up."""
    n = w.group.strands
    pos = list(range(n))  # pos[strand] = current 0-based position
    for l in w.letters:
        if l.kind == "z":
            shift = l.power % n
            pos = [(p + shift) % n for p in pos]
            continue
        if l.power % 2 == 0:
            continue
        a = l.index - 1
        b = l.index % n if w.group.cyclic else l.index
        for st in range(n):
            if pos[st] == a:
                pos[st] = b
            elif pos[st] == b:
                pos[st] = a
    return tuple(p + 1 for p in pos)


def is_pure(w: Word) -> bool:
    return underlying_permutation(w) == tuple(range(1, w.group.strands + 1))


# -- relation suites ----------------------------------------------------------------

Relation = tuple[str, Word, Word]


def _w(group: GroupId, letters: Sequence[Letter]) -> Word:
    return Word(group, tuple(letters))


def _slots(group: GroupId, i: int) -> frozenset[int]:
    n = group.strands
    return frozenset({i, i % n + 1}) if group.cyclic else frozenset({i, i + 1})


def relation_suite(group: GroupId) -> list[Relation]:
    """Defining relations as word pairs, labels included for failure reports.

    Words on both sides are kept unreduced so involutions stay visible.
    """
    if group.family == "B":
        return _suite_b(group)
    if group.family == "CPB":
        return _suite_cyclic(group, kinds="s")
    if group.family == "VCB":
        return _suite_cyclic(group, kinds="st")
    return _suite_fvb(group)


def _suite_b(group: GroupId) -> list[Relation]:
    n = group.strands
    rel: list[Relation] = []
    for i in range(1, n):
        for j in range(i + 2, n):
            rel.append((f"far s{i} s{j}",
                        _w(group, [sigma(i), sigma(j)]),
                        _w(group, [sigma(j), sigma(i)])))
    for i in range(1, n - 1):
        rel.append((f"braid s{i} s{i + 1}",
                    _w(group, [sigma(i), sigma(i + 1), sigma(i)]),
                    _w(group, [sigma(i + 1), sigma(i), sigma(i + 1)])))
    return rel


def _suite_cyclic(group: GroupId, kinds: str) -> list[Relation]:
    n = group.strands
    rel: list[Relation] = []
    mk = {"s": sigma, "t": tau}

    def far_pairs():
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if i != j and not _slots(group, i) & _slots(group, j):
                    yield i, j

    for x in kinds:
        for i, j in far_pairs():
            if i > j:
                continue
            rel.append((f"far {x}{i} {x}{j}",
                        _w(group, [mk[x](i), mk[x](j)]),
                        _w(group, [mk[x](j), mk[x](i)])))
    if len(kinds) > 1:
        for i, j in far_pairs():
            rel.append((f"far s{i} t{j}",
                        _w(group, [sigma(i), tau(j)]),
                        _w(group, [tau(j), sigma(i)])))

    if n >= 3:
        for x in kinds:
            for i in range(1, n + 1):
                j = i % n + 1
                rel.append((f"braid {x}{i} {x}{j}",
                            _w(group, [mk[x](i), mk[x](j), mk[x](i)]),
                            _w(group, [mk[x](j), mk[x](i), mk[x](j)])))

    if "t" in kinds:
        for i in range(1, n + 1):
            rel.append((f"involution t{i}",
                        _w(group, [tau(i), tau(i)]), Word.empty(group)))
        if n >= 3:
            for i in range(1, n + 1):
                for j in (i % n + 1, (i - 2) % n + 1):
                    rel.append((f"mixed t{i} t{j} s{i}",
                                _w(group, [tau(i), tau(j), sigma(i)]),
                                _w(group, [sigma(j), tau(i), tau(j)])))

    for x in kinds:
        for i in range(1, n + 1):
            j = (i - 2) % n + 1
            rel.append((f"rotation z {x}{i}",
                        _w(group, [zeta(), mk[x](i)]),
                        _w(group, [mk[x](j), zeta()])))
    return rel


def _suite_fvb(group: GroupId) -> list[Relation]:
    n = group.strands
    top = n - 1
    rel: list[Relation] = []
    mk = {"s": sigma, "t": tau, "p": pi}

    for x in "spt":
        for i in range(1, top + 1):
            for j in range(i + 2, top + 1):
                rel.append((f"far {x}{i} {x}{j}",
                            _w(group, [mk[x](i), mk[x](j)]),
                            _w(group, [mk[x](j), mk[x](i)])))
    for x, y in (("s", "p"), ("s", "t"), ("p", "t")):
        for i in range(1, top + 1):
            for j in range(1, top + 1):
                if abs(i - j) >= 2:
                    rel.append((f"far {x}{i} {y}{j}",
                                _w(group, [mk[x](i), mk[y](j)]),
                                _w(group, [mk[y](j), mk[x](i)])))

    braid_kinds = "st" + ("p" if group.flat_braid_relation else "")
    for x in braid_kinds:
        for i in range(1, top):
            rel.append((f"braid {x}{i} {x}{i + 1}",
                        _w(group, [mk[x](i), mk[x](i + 1), mk[x](i)]),
                        _w(group, [mk[x](i + 1), mk[x](i), mk[x](i + 1)])))

    for x in "pt":
        for i in range(1, top + 1):
            rel.append((f"involution {x}{i}",
                        _w(group, [mk[x](i), mk[x](i)]), Word.empty(group)))

    for x, y in (("p", "s"), ("t", "s"), ("t", "p")):
        for i in range(1, top + 1):
            for j in (i - 1, i + 1):
                if 1 <= j <= top:
                    rel.append((f"mixed {x}{i} {x}{j} {y}{i}",
                                _w(group, [mk[x](i), mk[x](j), mk[y](i)]),
                                _w(group, [mk[y](j), mk[x](i), mk[x](j)])))
    return rel


# -- seeded word generators ----------------------------------------------------------


def random_pure_word(n: int, rng, factors: int = 8) -> Word:
    """Product of band generators A[i,j]^{+-1}; always pure."""
    group = GroupId("B", n)
    letters: list[Letter] = []
    for _ in range(factors):
        i = rng.randrange(1, n)
        j = rng.randrange(i + 1, n + 1)
        band = band_generator_letters(group, i, j)
        if rng.random() < 0.5:
            band = _invert_letters(band)
        letters.extend(band)
    return Word(group, free_reduce_letters(letters))


def random_zero_linking_word(n: int, rng, factors: int = 2) -> Word:
    """Product of commutators of band generators; every pairwise winding is zero."""
    group = GroupId("B", n)
    letters: list[Letter] = []
    for _ in range(factors):
        i = rng.randrange(1, n)
        j = rng.randrange(i + 1, n + 1)
        while True:
            k = rng.randrange(1, n)
            l = rng.randrange(k + 1, n + 1)
            if (k, l) != (i, j):
                break
        a = band_generator_letters(group, i, j)
        if rng.random() < 0.5:
            a = _invert_letters(a)
        b = band_generator_letters(group, k, l)
        if rng.random() < 0.5:
            b = _invert_letters(b)
        letters.extend(commutator_letters(a, b))
    return Word(group, free_reduce_letters(letters))
