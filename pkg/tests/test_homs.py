import random

import pytest

from braidrep.braidword import (GroupId, Word, format_word, invert,
                                parse_word, random_pure_word)
from braidrep.errors import NotPure
from braidrep.homs import (PipelineConfig, f_d, p_k, pipeline_matrix,
                           pipeline_word, rotation_block_letters,
                           strand_removal_letters)
from braidrep.laurent import mat_mul
from braidrep.rep import RHO, word_image

B3 = GroupId("B", 3)
B5 = GroupId("B", 5)


def test_strand_removal_frozen_small_cases():
    # removing the last strand of B3: s2 acts on the watched strand
    out, pos = strand_removal_letters(parse_word("s2 s2", B3).expanded(), 3, 3)
    assert [(l.kind, l.index, l.power) for l in out] == \
        [("z", None, -1), ("s", 1, -1)]
    assert pos == 3
    # removing strand 1: s1^2 pushes the watcher away and back
    out, pos = strand_removal_letters(parse_word("s1^2", B3).expanded(), 3, 1)
    assert [(l.kind, l.index, l.power) for l in out] == \
        [("s", 1, -1), ("z", None, -1)]
    assert pos == 1
    # a far letter keeps its slot relative to the watcher
    out, pos = strand_removal_letters(parse_word("s1", B3).expanded(), 3, 3)
    assert [(l.kind, l.index, l.power) for l in out] == [("s", 1, 1)]
    assert pos == 3


def test_far_slots_always_interior():
    rng = random.Random(21)
    for n in (4, 5, 6):
        for _ in range(30):
            w = random_pure_word(n, rng, factors=2)
            for k in range(1, n + 1):
                out, pos = strand_removal_letters(w.expanded(), n, k)
                assert pos == k
                for l in out:
                    if l.kind == "s":
                        assert 1 <= l.index <= n - 2


def test_p_k_requires_pure():
    with pytest.raises(NotPure):
        p_k(parse_word("s1", B3), 2)
    w = p_k(parse_word("A[1,3]", B3), 2)
    assert w.group == GroupId("CPB", 2)


def test_p_k_nonpure_with_tracked_position():
    out, pos = strand_removal_letters(parse_word("s2", B3).expanded(), 3, 3)
    assert pos == 2
    out2, pos2 = strand_removal_letters(parse_word("s2", B3).expanded(), 3,
                                        start_pos=pos)
    assert pos2 == 3
    # the same composite through the pure word in one pass
    whole, pos3 = strand_removal_letters(parse_word("s2 s2", B3).expanded(),
                                         3, 3)
    assert pos3 == 3
    assert [(l.kind, l.index, l.power) for l in out + out2] == \
        [(l.kind, l.index, l.power) for l in whole]


def test_cocycle_split_matches_whole():
    rng = random.Random(8)
    for n in (4, 5):
        for _ in range(20):
            u = random_pure_word(n, rng, factors=1)
            v = random_pure_word(n, rng, factors=1)
            k = rng.randrange(1, n + 1)
            left, p1 = strand_removal_letters(u.expanded(), n, k)
            right, p2 = strand_removal_letters(v.expanded(), n, start_pos=p1)
            whole, p3 = strand_removal_letters((u * v).expanded(), n, k)
            assert p2 == p3 == k
            lhs = word_image(Word(GroupId("CPB", n - 1),
                                  tuple(left + right)), RHO)
            rhs = word_image(Word(GroupId("CPB", n - 1), tuple(whole)), RHO)
            assert lhs == rhs


def test_power_substitution_frozen_blocks():
    assert [(l.kind, l.index, l.power) for l in rotation_block_letters(4, 1, 1)] \
        == [("z", None, 1)]
    assert [(l.kind, l.index, l.power) for l in rotation_block_letters(4, 2, 1)] \
        == [("z", None, 1), ("t", 1, 1), ("t", 2, 1), ("t", 3, 1),
            ("z", None, 1)]
    fwd = rotation_block_letters(3, 3, 1)
    bwd = rotation_block_letters(3, 3, -1)
    assert [(l.kind, l.index, -l.power) for l in reversed(bwd)] == \
        [(l.kind, l.index, l.power) for l in fwd]


def test_f_d_images():
    w = parse_word("z", GroupId("CPB", 4))
    assert format_word(f_d(w, 2)) == "z t1 t2 t3 z"
    assert format_word(f_d(w, 1)) == "z"
    # interior crossings pass through
    w2 = parse_word("s2", GroupId("CPB", 4))
    assert format_word(f_d(w2, 3)) == "s2"
    # the wrap crossing is conjugated into slot 1
    w3 = parse_word("s4", GroupId("CPB", 4))
    img = f_d(w3, 1)
    assert format_word(img) == "z s1 z^-1"
    imgd = f_d(w3, 2)
    assert format_word(imgd).startswith("z t1 t2 t3 z s1")


def test_f_d_multiplicative_on_images():
    rng = random.Random(13)
    g = GroupId("CPB", 3)
    from braidrep.braidword import Letter, free_reduce_letters
    def rand_word():
        letters = []
        for _ in range(rng.randrange(1, 6)):
            if rng.random() < 0.3:
                letters.append(Letter("z", None, rng.choice((-1, 1))))
            else:
                letters.append(Letter("s", rng.randrange(1, 4),
                               rng.choice((-1, 1))))
        return Word(g, free_reduce_letters(letters))
    for d in (1, 2, 3):
        for _ in range(25):
            u, v = rand_word(), rand_word()
            lhs = word_image(f_d(u * v, d), RHO)
            rhs = mat_mul(word_image(f_d(u, d), RHO),
                          word_image(f_d(v, d), RHO))
            assert lhs == rhs


def test_pipeline_word_and_matrix_shape():
    w = random_pure_word(5, random.Random(3), factors=2)
    cfg = PipelineConfig(5, 2, 2)
    pw = pipeline_word(w, cfg)
    assert pw.group == GroupId("VCB", 4)
    m = pipeline_matrix(w, cfg)
    assert m.dim == 4
    # inverse word gives the inverse matrix
    minv = pipeline_matrix(invert(w), cfg)
    from braidrep.laurent import Matrix
    assert mat_mul(m, minv) == Matrix.identity(4)


def test_pipeline_config_validation():
    with pytest.raises(ValueError):
        PipelineConfig(2, 1, 1)
    with pytest.raises(ValueError):
        PipelineConfig(5, 6, 1)
    with pytest.raises(ValueError):
        PipelineConfig(5, 1, 0)


def test_d_one_never_emits_virtual_letters():
    rng = random.Random(14)
    for _ in range(20):
        w = random_pure_word(5, rng, factors=2)
        pw = pipeline_word(w, PipelineConfig(5, rng.randrange(1, 6), 1))
        assert all(l.kind != "t" for l in pw.letters)
