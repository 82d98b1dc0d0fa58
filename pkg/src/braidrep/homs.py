"""Word-level strand removal and rotation-power maps, and their composite
matrix pipeline.

strand_removal (p_k) rewrites a pure braid word on n strands as a cylinder
word on the remaining n-1 strands, tracking the removed strand's position as
state; rotation_power (f_d) rewrites a cylinder word so that one full slot
rotation becomes d of them, at the cost of virtual letters. Composing with
the crossing representation gives Laurent matrices of size n-1.
"""

from __future__ import annotations

from dataclasses import dataclass

from .braidword import (GroupId, Letter, Word, free_reduce_letters, invert,
                        is_pure, sigma, tau, zeta)
from .errors import NotPure
from .laurent import Assignment, Matrix
from . import rep


@dataclass(frozen=True)
class PipelineConfig:
    """Parameters of the composite map on pure braid words: remove strand k,
    then apply the d-th rotation power, then take crossing matrices."""

    n: int
    k: int
    d: int = 1

    def __post_init__(self):
        if self.n < 3:
            raise ValueError("need at least 3 strands")
        if not 1 <= self.k <= self.n:
            raise ValueError(f"k={self.k} outside 1..{self.n}")
        if self.d < 1:
            raise ValueError("d must be positive")


def _delta_c_letters(m: int, power: int) -> list[Letter]:
    if power > 0:
        return [sigma(i) for i in range(1, m)]
    return [sigma(i, -1) for i in range(m - 1, 0, -1)]


def strand_removal_letters(letters, n: int, start_pos: int):
    """Translate expanded crossing letters, returning (letters, end_pos).

    The distinguished strand sits at position start_pos; each crossing either
    moves it (emitting a rotation or a full twist of the others) or braids
    two of the remaining strands, whose slot is the crossing position counted
    from the removed strand's current position.
    """
    m = n - 1
    pos = start_pos
    out: list[Letter] = []
    for letter in letters:
        if letter.kind != "s":
            raise NotPure(f"unexpected {letter.kind!r} letter")
        i, e = letter.index, letter.power
        if e not in (1, -1):
            raise ValueError("letters must be expanded to unit powers")
        if i == pos - 1:
            out.extend([zeta(-1)] if e > 0 else _delta_c_letters(m, 1))
            pos -= 1
        elif i == pos:
            out.extend(_delta_c_letters(m, -1) if e > 0 else [zeta()])
            pos += 1
        else:
            slot = (pos - i - 1) % n
            assert 1 <= slot <= m - 1
            out.append(sigma(slot, e))
    return out, pos


def p_k(word: Word, k: int, *, start_pos: int | None = None,
        allow_nonpure: bool = False) -> Word:
    """Remove strand k from a pure braid word; image lives in the cylinder
    group on n-1 strands.

    start_pos is only meaningful with allow_nonpure, which translates
    letter sequences without the purity precondition (the relation checker
    uses this to test the translation from every start position).
    """
    if word.group.family != "B":
        raise ValueError("strand removal expects a braid word (family B)")
    n = word.group.strands
    if not 1 <= k <= n:
        raise ValueError(f"k={k} outside 1..{n}")
    if not allow_nonpure:
        if start_pos is not None and start_pos != k:
            raise ValueError("start_pos is only available with allow_nonpure")
        if not is_pure(word):
            raise NotPure(f"word is not pure; strand removal at k={k} undefined")
    pos = start_pos if start_pos is not None else k
    out, end = strand_removal_letters(word.expanded(), n, pos)
    if not allow_nonpure and end != k:
        raise AssertionError("position bookkeeping corrupted")
    return Word(GroupId("CPB", n - 1), free_reduce_letters(out))


def rotation_block_letters(m: int, d: int, power: int) -> list[Letter]:
    """Image of one slot rotation under the d-th power map:
    z (Dv z)^(d-1), inverted for power -1."""
    block = [zeta()]
    for _ in range(d - 1):
        block.extend(tau(i) for i in range(1, m))
        block.append(zeta())
    if power < 0:
        block = [l.inverse() for l in reversed(block)]
    return block


def f_d(word: Word, d: int) -> Word:
    """Rotation-power map on cylinder words; image has virtual letters."""
    if word.group.family != "CPB":
        raise ValueError("rotation power expects a cylinder word (family CPB)")
    if d < 1:
        raise ValueError("d must be positive")
    m = word.group.strands
    out: list[Letter] = []
    for letter in word.expanded():
        if letter.kind == "z":
            out.extend(rotation_block_letters(m, d, letter.power))
        elif letter.index < m:
            out.append(letter)
        else:
            conj = rotation_block_letters(m, d, 1)
            out.extend(conj)
            out.append(sigma(1, letter.power))
            out.extend([l.inverse() for l in reversed(conj)])
    return Word(GroupId("VCB", m), free_reduce_letters(out))


def pipeline_word(word: Word, cfg: PipelineConfig) -> Word:
    if word.group.strands != cfg.n:
        raise ValueError(f"word has {word.group.strands} strands, config expects {cfg.n}")
    return f_d(p_k(word, cfg.k), cfg.d)


def pipeline_matrix(word: Word, cfg: PipelineConfig,
                    assignment: Assignment | None = None):
    """Matrix of the composite map; symbolic Matrix by default, Fraction rows
    when an assignment is given."""
    return rep.word_image(pipeline_word(word, cfg), rep.RHO, assignment)
