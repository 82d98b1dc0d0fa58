import cmath
import math
import random

import pytest

from braidrep.braidword import (GroupId, Word, format_word, parse_word,
                                random_pure_word, random_zero_linking_word,
                                sigma)
from braidrep.errors import (NonGenericInput, NonIntegerWinding,
                             NonZeroLinking, PunctureCollision,
                             SeparationViolated)
from braidrep.geom import (SEPARATION_TOL, Conventions, GeomBraid,
                           artin_dynamics, base_points, braid_from_json,
                           braid_to_json, concat, cylinder_events,
                           cylinder_events_json, initial_order,
                           linking_number, perturb, power_map_extract,
                           project_pk, q_kl, render_svg, resample)
from braidrep.homs import PipelineConfig, pipeline_matrix, \
    strand_removal_letters
from braidrep.rep import RHO, word_image

TWO_PI = 2 * math.pi

B4 = GroupId("B", 4)
B5 = GroupId("B", 5)


def rigid_rotation(direction: int, steps: int = 8, m: int = 4) -> GeomBraid:
    """Watched strand pinned at the origin, m satellites on the unit circle
    turning by one gap; exactly one passes a cut fixed at angle 0."""
    strands = [tuple((i / steps, 0j) for i in range(steps + 1))]
    for j in range(m):
        ang0 = TWO_PI * j / m + 0.05
        bps = []
        for i in range(steps + 1):
            ang = ang0 + direction * (TWO_PI / m) * i / steps
            bps.append((i / steps, cmath.exp(1j * ang)))
        strands.append(tuple(bps))
    return GeomBraid(m + 1, tuple(strands))


FIXED_CUT = Conventions(cut_angle=0.0)


# -- model validation -------------------------------------------------------


def test_braid_validation():
    with pytest.raises(ValueError):
        GeomBraid(2, (((0.0, 0j), (1.0, 0j)),))          # count mismatch
    with pytest.raises(ValueError):
        GeomBraid(2, (((0.0, 0j), (0.5, 0j)),            # does not reach t=1
                      ((0.0, 1j), (1.0, 1j))))
    with pytest.raises(ValueError):
        GeomBraid(2, (((0.0, 0j), (0.5, 1j), (0.4, 2j), (1.0, 0j)),
                      ((0.0, 5j), (1.0, 5j))))           # times not increasing
    with pytest.raises(SeparationViolated):
        GeomBraid(2, (((0.0, 0j), (1.0, 1 + 0j)),
                      ((0.0, 1 + 0j), (1.0, 0j))))       # paths cross


def test_at_interpolates():
    b = GeomBraid(2, (((0.0, 0j), (0.5, 1 + 0j), (1.0, 1 + 1j)),
                      ((0.0, 5 + 0j), (1.0, 5 + 0j))))
    assert b.at(1, 0.25) == 0.5 + 0j
    assert b.at(1, 0.75) == 1 + 0.5j
    assert b.at(2, 0.3) == 5 + 0j


def test_base_points_separated_and_deterministic():
    for n in (3, 5, 7):
        pts = base_points(n)
        assert pts == base_points(n)
        for i in range(n):
            for j in range(i + 1, n):
                assert abs(pts[i] - pts[j]) > 0.1
    spread = base_points(5, radial_spread=0.25)
    radii = sorted(abs(z) for z in spread)
    assert radii[-1] - radii[0] > 0.2


# -- synthesis ---------------------------------------------------------------


def test_artin_dynamics_exact_endpoints():
    w = parse_word("A[1,3]", B4)
    b = artin_dynamics(w)
    assert b.pure
    assert b.start_config() == b.end_config()
    assert b.start_config() == tuple(base_points(4))
    nb = parse_word("s2", B4)
    bn = artin_dynamics(nb)
    assert not bn.pure
    # the two movers land exactly on each other's start
    pts = base_points(4)
    assert bn.end_config() == (pts[0], pts[2], pts[1], pts[3])


def test_artin_rejects_other_families():
    with pytest.raises(ValueError):
        artin_dynamics(parse_word("z", GroupId("CPB", 3)))


def test_artin_deterministic():
    w = random_pure_word(5, random.Random(40), factors=2)
    assert artin_dynamics(w) == artin_dynamics(w)


def test_perturb_guard_and_determinism():
    b = artin_dynamics(parse_word("A[1,3]", B4))
    with pytest.raises(SeparationViolated):
        perturb(b, 1, SEPARATION_TOL)
    p1 = perturb(b, 7, 1e-6)
    p2 = perturb(b, 7, 1e-6)
    assert p1 == p2
    assert p1 != b
    # endpoints are never moved
    assert p1.start_config() == b.start_config()
    assert p1.end_config() == b.end_config()


def test_resample_preserves_paths():
    b = artin_dynamics(parse_word("A[2,4]", B4))
    r = resample(b, 3)
    assert sum(len(s) for s in r.strands) > sum(len(s) for s in b.strands)
    rng = random.Random(3)
    for _ in range(50):
        t = rng.random()
        s = rng.randrange(1, 5)
        assert abs(r.at(s, t) - b.at(s, t)) < 1e-12


def test_concat_requires_matching_junction():
    b1 = artin_dynamics(parse_word("A[1,3]", B4))
    b2 = artin_dynamics(parse_word("A[2,4]^-1", B4))
    both = concat(b1, b2)
    assert both.pure
    assert abs(both.at(1, 0.25) - b1.at(1, 0.5)) < 1e-15
    bad = artin_dynamics(parse_word("s2", B4))
    with pytest.raises(ValueError):
        concat(bad, b1)


# -- winding -----------------------------------------------------------------


def test_linking_numbers_of_band_words():
    rng = random.Random(15)
    n = 5
    for _ in range(10):
        i = rng.randrange(1, n)
        j = rng.randrange(i + 1, n + 1)
        e = rng.choice((1, -1))
        suffix = "" if e == 1 else "^-1"
        b = artin_dynamics(parse_word(f"A[{i},{j}]{suffix}", B5))
        for a in range(1, n + 1):
            for c in range(a + 1, n + 1):
                want = e if (a, c) == (i, j) else 0
                assert linking_number(b, a, c) == want


def test_non_integer_winding_raises():
    b = artin_dynamics(parse_word("s2", B4))
    with pytest.raises(NonIntegerWinding):
        linking_number(b, 2, 3)


# -- cylinder extraction -------------------------------------------------------


def test_rigid_rotation_frozen_words():
    cw = rigid_rotation(-1)
    ccw = rigid_rotation(+1)
    assert format_word(project_pk(cw, 1, FIXED_CUT)) == "z"
    assert format_word(project_pk(ccw, 1, FIXED_CUT)) == "z^-1"
    assert format_word(power_map_extract(cw, 1, 2, FIXED_CUT)) == \
        "z t1 t2 t3 z"
    assert format_word(power_map_extract(ccw, 1, 2, FIXED_CUT)) == \
        "z^-1 t3 t2 t1 z^-1"
    assert format_word(power_map_extract(cw, 1, 3, FIXED_CUT)) == \
        "z t1 t2 t3 z t1 t2 t3 z"
    events = cylinder_events(cw, 1, FIXED_CUT)
    assert len(events) == 1 and events[0][0] == "cut"


def test_single_crossings_match_word_pipeline():
    for n in (4, 5):
        g = GroupId("B", n)
        for i in range(1, n):
            for e in (1, -1):
                w = Word(g, (sigma(i, e),))
                b = artin_dynamics(w)
                for k in range(1, n + 1):
                    lets, _ = strand_removal_letters(w.expanded(), n, k)
                    want = Word(GroupId("CPB", n - 1), tuple(lets))
                    got = project_pk(b, k)
                    assert word_image(got, RHO) == word_image(want, RHO), \
                        (n, i, e, k)


def test_power_extraction_matches_pipeline_random():
    rng = random.Random(23)
    for _ in range(8):
        w = random_pure_word(5, rng, factors=2)
        k = rng.randrange(1, 6)
        d = rng.randrange(1, 3)
        b = artin_dynamics(w)
        got = word_image(power_map_extract(b, k, d), RHO)
        want = pipeline_matrix(w, PipelineConfig(5, k, d))
        assert got == want


def test_extraction_invariant_under_perturb_and_resample():
    w = random_pure_word(4, random.Random(31), factors=2)
    b = artin_dynamics(w)
    base = word_image(project_pk(b, 2), RHO)
    assert word_image(project_pk(perturb(b, 5, 1e-6), 2), RHO) == base
    assert word_image(project_pk(resample(b, 2), 2), RHO) == base


def test_reading_depends_on_calibration():
    w = random_pure_word(4, random.Random(2), factors=2)
    b = artin_dynamics(w)
    want = pipeline_matrix(w, PipelineConfig(4, 1, 1))
    assert word_image(project_pk(b, 1), RHO) == want
    flipped = Conventions(over_is_farther=False)
    assert word_image(project_pk(b, 1, flipped), RHO) != want


def test_persistent_alignment_rejected():
    # two satellites frozen on a common ray from the watched strand
    strands = (((0.0, 0j), (1.0, 0j)),
               ((0.0, 1 + 0j), (1.0, 1 + 0j)),
               ((0.0, 2 + 0j), (1.0, 2 + 0j)))
    b = GeomBraid(3, strands)
    with pytest.raises(NonGenericInput):
        cylinder_events(b, 1, FIXED_CUT)


def test_cylinder_events_json_records():
    b = artin_dynamics(parse_word("A[1,3]", B4))
    records = cylinder_events_json(b, 2)
    assert records == sorted(records, key=lambda r: r["t"])
    for r in records:
        assert r["kind"] in ("crossing", "cut")
        if r["kind"] == "crossing":
            assert 1 <= r["slot"] <= 2 and r["sign"] in (1, -1)


# -- pair normalization -----------------------------------------------------


def test_q_kl_requires_zero_linking():
    b = artin_dynamics(parse_word("A[1,2]", B4))
    with pytest.raises(NonZeroLinking):
        q_kl(b, 3, 4)


def test_q_kl_normalizes_and_renumbers():
    w = random_zero_linking_word(6, random.Random(44), factors=1)
    b = artin_dynamics(w, radial_spread=0.25)
    q = q_kl(b, 2, 5)
    assert q.n == 4
    # surviving strands keep their relative order by original id
    originals = [1, 3, 4, 6]
    den0 = b.at(5, 0.0) - b.at(2, 0.0)
    for new_id, old in enumerate(originals, start=1):
        expect = (b.at(old, 0.0) - b.at(2, 0.0)) / den0
        assert abs(q.at(new_id, 0.0) - expect) < 1e-12


def test_puncture_collision_guard():
    # strand 3 sits within the puncture margin of strand 1 after scaling
    strands = (((0.0, 0j), (1.0, 0j)),
               ((0.0, 1e4 + 0j), (1.0, 1e4 + 0j)),
               ((0.0, 5e-6 + 0j), (1.0, 5e-6 + 0j)),
               ((0.0, 5e3 + 1j), (1.0, 5e3 + 1j)))
    b = GeomBraid(4, strands, pure=True)
    with pytest.raises(PunctureCollision):
        q_kl(b, 1, 2)


def test_initial_order_sorts_by_position():
    strands = (((0.0, 3 + 0j), (1.0, 3 + 0j)),
               ((0.0, -1 + 0j), (1.0, -1 + 0j)),
               ((0.0, 1 + 0j), (1.0, 1 + 0j)))
    b = GeomBraid(3, strands)
    assert initial_order(b) == (2, 3, 1)


# -- serialization and drawing ---------------------------------------------


def test_braid_json_round_trip():
    b = artin_dynamics(parse_word("A[1,3] A[2,4]^-1", B4))
    data = braid_to_json(b)
    back = braid_from_json(data)
    assert back == b
    with pytest.raises(ValueError):
        braid_from_json({"n": 2})
    with pytest.raises(ValueError):
        braid_from_json({"n": "x", "strands": []})


def test_render_svg_structure():
    b = artin_dynamics(parse_word("A[1,3]", B4))
    svg = render_svg(b, cylinder_events_json(b, 2))
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")
    assert svg.count("<polyline") == 4
    assert "<circle" in svg
