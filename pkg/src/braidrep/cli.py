"""Command-line interface.

Subcommands: parse (normalize a word), rep (matrix image of a word), map
(word-level strand removal and power substitution), check (relation suites,
cocycle checks, trajectory cross-checks), geom (trajectory synthesis and
extraction), example (built-in kernel-element demonstration).

Exit codes: 0 success, 1 a check reported failures, 2 usage or syntax
errors, 3 purity or winding violations, 4 genericity violations, 5 nonzero
winding where zero is required.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import braidword, geom, homs, relcheck, rep as repmod
from .errors import (BraidrepError, DimMismatch, IncompatibleRepGroup,
                     IndexOutOfRange, KindNotInGroup, NonGenericInput,
                     NonIntegerWinding, NonZeroLinking, NotPure,
                     PunctureCollision, SeparationViolated, WordSyntaxError,
                     ZeroAssignment)
from .laurent import Assignment, mat_to_json, mat_to_text

_EXIT_CODES = (
    (NonZeroLinking, 5),
    ((NonGenericInput, SeparationViolated, PunctureCollision), 4),
    ((NotPure, NonIntegerWinding), 3),
    ((WordSyntaxError, IndexOutOfRange, KindNotInGroup, ZeroAssignment,
      DimMismatch, IncompatibleRepGroup, ValueError,
      json.JSONDecodeError), 2),
)


def _exit_code(exc: BaseException) -> int:
    for kinds, code in _EXIT_CODES:
        if isinstance(exc, kinds):
            return code
    return 2


def _parse_eval(text: str) -> Assignment:
    vals = {}
    for chunk in text.replace(",", " ").split():
        name, _, value = chunk.partition("=")
        if name not in ("t", "s", "r") or not value:
            raise ValueError(f"bad assignment {chunk!r}; expected t=..,s=..,r=..")
        vals[name] = Fraction(value)
    if "t" not in vals or "s" not in vals:
        raise ValueError("assignment must bind at least t and s")
    return Assignment(vals["t"], vals["s"], vals.get("r", Fraction(1)))


def _print_matrix(mat, evaluated: bool) -> None:
    if evaluated:
        for row in mat:
            print(",".join(str(x) for x in row))
    else:
        print(mat_to_text(mat))


def _load_word(args) -> braidword.Word:
    group = braidword.parse_group(args.group)
    return braidword.parse_word(args.word, group,
                                comm_convention=args.comm_convention)


def _conventions(args) -> geom.Conventions:
    return geom.Conventions(
        positive_crossing_rotation="cw" if args.cw else "ccw",
        over_is_farther=not args.over_nearer,
        cut_angle=args.cut_angle)


def _add_word_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("word", help="word text; macros: comm(a;b), A[i,j], Dc, Dv, BIGELOW5")
    p.add_argument("--group", required=True,
                   help="group id, e.g. B5, CPB4, VCB4, FVB3")
    p.add_argument("--comm-convention", choices=("direct", "inverse-first"),
                   default="direct", help="expansion used by comm(a;b)")


def _cmd_parse(args) -> int:
    word = _load_word(args)
    if args.json:
        print(json.dumps(braidword.word_to_json(word), indent=2))
        return 0
    print(braidword.format_word(word))
    perm = braidword.underlying_permutation(word)
    print(f"group: {word.group}  letters: {len(word.expanded())}  "
          f"pure: {braidword.is_pure(word)}")
    print("permutation: " + " ".join(str(p) for p in perm))
    return 0


def _cmd_rep(args) -> int:
    word = _load_word(args)
    assignment = _parse_eval(args.eval) if args.eval else None
    if args.pipeline:
        if args.pipeline == "pk-fd":
            cfg = homs.PipelineConfig(word.group.strands, args.k, args.d)
            mat = homs.pipeline_matrix(word, cfg, assignment)
        else:
            raise ValueError(f"unknown pipeline {args.pipeline!r}")
    else:
        mat = repmod.rep_image(word, args.rep, assignment)
    if args.json:
        if assignment is None:
            print(json.dumps(mat_to_json(mat), indent=2))
        else:
            print(json.dumps([[str(x) for x in row] for row in mat], indent=2))
        return 0
    _print_matrix(mat, assignment is not None)
    return 0


def _cmd_map(args) -> int:
    word = _load_word(args)
    if args.pk is None and args.fd is None:
        raise ValueError("nothing to do: pass --pk and/or --fd")
    if args.pk is not None:
        word = homs.p_k(word, args.pk)
    if args.fd is not None:
        word = homs.f_d(word, args.fd)
    if args.json:
        print(json.dumps(braidword.word_to_json(word), indent=2))
    else:
        print(braidword.format_word(word))
        print(f"group: {word.group}")
    return 0


def _cmd_check(args) -> int:
    if args.rep:
        group = braidword.parse_group(args.group)
        if group.family == "FVB" and args.flat_braid:
            group = braidword.GroupId("FVB", group.strands,
                                      flat_braid_relation=True)
        report = relcheck.verify_relations(args.rep, group)
    elif args.cocycle:
        report = relcheck.verify_pk_cocycle(args.n, args.k, args.d,
                                            seed=args.seed, pairs=args.pairs)
    elif args.oracle:
        rng_words = []
        import random as _random
        rng = _random.Random(args.seed)
        for _ in range(args.count):
            rng_words.append(braidword.random_pure_word(args.n, rng,
                                                        factors=args.factors))
        cfg = homs.PipelineConfig(args.n, args.k, args.d)
        conv = geom.Conventions(over_is_farther=not args.over_nearer) \
            if args.over_nearer else None
        report = relcheck.verify_oracle_agreement(rng_words, cfg, conv)
    else:
        raise ValueError("pass one of --rep, --cocycle, --oracle")
    if args.json:
        print(json.dumps(report.to_json(), indent=2))
    else:
        print(report.summary())
    return 0 if report.passed else 1


def _obtain_braid(args) -> geom.GeomBraid:
    if args.synth:
        group = braidword.parse_group(args.group or f"B{args.n}")
        word = braidword.parse_word(args.synth, group)
        braid = geom.artin_dynamics(word, _conventions(args),
                                    segments_per_crossing=args.segments,
                                    radial_spread=args.spread)
    elif args.infile:
        with open(args.infile, "r", encoding="utf-8") as fh:
            braid = geom.braid_from_json(json.load(fh))
    else:
        raise ValueError("pass --synth WORD or --in FILE")
    if args.perturb:
        braid = geom.perturb(braid, args.seed, args.perturb)
    if args.resample > 1:
        braid = geom.resample(braid, args.resample)
    return braid


def _cmd_geom(args) -> int:
    braid = _obtain_braid(args)
    conv = _conventions(args)
    emitted = False
    word = None
    if args.project_pk is not None:
        word = geom.project_pk(braid, args.project_pk, conv)
    elif args.power_map is not None:
        word = geom.power_map_extract(braid, args.power_map, args.d, conv)
    elif args.psi is not None:
        k, l = args.psi
        word = geom.flat_virtual_word(braid, k, l, d=args.psi_d, conv=conv,
                                      scheme=args.scheme, refine=args.refine)
    if args.linking:
        for i in range(1, braid.n + 1):
            for j in range(i + 1, braid.n + 1):
                print(f"lk({i},{j}) = {geom.linking_number(braid, i, j)}")
        emitted = True
    if args.emit_events:
        if args.psi is not None:
            k, l = args.psi
            punct = geom.q_kl(braid, k, l, args.refine)
            if args.psi_d is None:
                events = geom.psi_events(punct, conv)
            else:
                events = geom.psi_d_events(punct, args.psi_d, conv)
            print(json.dumps(geom.events_to_json(events), indent=2))
        elif args.project_pk is not None or args.power_map is not None:
            k = args.project_pk if args.project_pk is not None else args.power_map
            print(json.dumps(geom.cylinder_events_json(braid, k, conv), indent=2))
        else:
            raise ValueError("--emit-events needs an extraction flag")
        emitted = True
    if word is not None:
        print(braidword.format_word(word))
        print(f"group: {word.group}")
        emitted = True
        if args.emit_matrix:
            rep_id = repmod.RHO if word.group.family in ("CPB", "VCB") \
                else repmod.RHO_TILDE
            assignment = _parse_eval(args.eval) if args.eval else None
            mat = repmod.rep_image(word, rep_id, assignment)
            _print_matrix(mat, assignment is not None)
    if args.emit_braid:
        print(json.dumps(geom.braid_to_json(braid)))
        emitted = True
    if args.svg:
        marks = None
        if args.project_pk is not None:
            marks = geom.cylinder_events_json(braid, args.project_pk, conv)
        with open(args.svg, "w", encoding="utf-8") as fh:
            fh.write(geom.render_svg(braid, marks))
        print(f"wrote {args.svg}")
        emitted = True
    if not emitted:
        print(f"braid: {braid.n} strands, "
              f"{sum(len(s) for s in braid.strands)} breakpoints, "
              f"pure: {braid.pure}")
    return 0


def _cmd_example(args) -> int:
    word = braidword.bigelow5()
    cfg = homs.PipelineConfig(5, args.k, args.d)
    print(f"# kernel-element word on 5 strands, {len(word.expanded())} letters")
    print(f"# reduced-dimension image is the identity: "
          f"{repmod.burau_reduced(word).is_identity}")
    assignment = Assignment(Fraction(-1), Fraction(1))
    mat = homs.pipeline_matrix(word, cfg, assignment)
    print(f"# image under the k={cfg.k}, d={cfg.d} pipeline at t=-1, s=1:")
    _print_matrix(mat, True)
    return 0


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="braidrep",
        description="Exact matrix representations of cylindrical and "
                    "flat-virtual braid words, with a trajectory engine "
                    "for independent cross-checks.")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="normalize a word and show its data")
    _add_word_args(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_parse)

    p = sub.add_parser("rep", help="matrix image of a word")
    _add_word_args(p)
    p.add_argument("--rep", default=None,
                   choices=(repmod.RHO, repmod.RHO_TILDE,
                            repmod.BURAU_REDUCED, repmod.BURAU_UNREDUCED))
    p.add_argument("--pipeline", default=None, choices=("pk-fd",),
                   help="composite map from plain braid words")
    p.add_argument("--k", type=int, default=1, help="strand to remove")
    p.add_argument("--d", type=int, default=1, help="power substitution")
    p.add_argument("--eval", default=None, metavar="t=..,s=..[,r=..]",
                   help="evaluate at rational values instead of symbolically")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_rep)

    p = sub.add_parser("map", help="apply word-level maps")
    _add_word_args(p)
    p.add_argument("--pk", type=int, default=None, metavar="K",
                   help="strand removal at K")
    p.add_argument("--fd", type=int, default=None, metavar="D",
                   help="power substitution by D")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_map)

    p = sub.add_parser("check", help="run verification suites")
    p.add_argument("--rep", default=None,
                   choices=(repmod.RHO, repmod.RHO_TILDE,
                            repmod.BURAU_REDUCED, repmod.BURAU_UNREDUCED))
    p.add_argument("--group", default=None, help="group id for --rep")
    p.add_argument("--flat-braid", action="store_true",
                   help="include the flat braid relation (FVB only)")
    p.add_argument("--cocycle", action="store_true",
                   help="strand-removal consistency across start positions")
    p.add_argument("--oracle", action="store_true",
                   help="trajectory extraction against the algebraic pipeline")
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--pairs", type=int, default=4)
    p.add_argument("--count", type=int, default=3)
    p.add_argument("--factors", type=int, default=2)
    p.add_argument("--over-nearer", action="store_true",
                   help="read crossings with the nearer strand on top "
                        "(demonstrates the calibration; fails --oracle)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("geom", help="trajectory synthesis and extraction")
    p.add_argument("--synth", default=None, metavar="WORD",
                   help="synthesize trajectories for a braid word")
    p.add_argument("--group", default=None, help="group id for --synth")
    p.add_argument("--n", type=int, default=4,
                   help="strand count when --group is omitted")
    p.add_argument("--in", dest="infile", default=None, metavar="FILE",
                   help="load a braid from JSON")
    p.add_argument("--segments", type=int, default=16)
    p.add_argument("--spread", type=float, default=0.0,
                   help="radial spread of the base configuration")
    p.add_argument("--perturb", type=float, default=0.0, metavar="MAG")
    p.add_argument("--resample", type=int, default=1, metavar="FACTOR")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--project-pk", type=int, default=None, metavar="K",
                   help="cylinder word with strand K removed")
    p.add_argument("--power-map", type=int, default=None, metavar="K",
                   help="cylinder word of the d-th power reading")
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--psi", type=int, nargs=2, default=None,
                   metavar=("K", "L"), help="flat-virtual word via punctures")
    p.add_argument("--psi-d", type=int, default=None,
                   help="power reading for --psi")
    p.add_argument("--scheme", default="route-and-return",
                   choices=("route-and-return", "swap-in-place"))
    p.add_argument("--refine", type=int, default=2)
    p.add_argument("--linking", action="store_true",
                   help="print all pairwise winding numbers")
    p.add_argument("--emit-braid", action="store_true")
    p.add_argument("--emit-events", action="store_true")
    p.add_argument("--emit-matrix", action="store_true")
    p.add_argument("--eval", default=None, metavar="t=..,s=..[,r=..]")
    p.add_argument("--svg", default=None, metavar="FILE")
    p.add_argument("--cut-angle", type=float, default=None,
                   help="fixed cut direction instead of the moving radial cut")
    p.add_argument("--cw", action="store_true",
                   help="positive crossings rotate clockwise")
    p.add_argument("--over-nearer", action="store_true",
                   help="the nearer strand passes over")
    p.set_defaults(func=_cmd_geom, comm_convention="direct")

    p = sub.add_parser("example",
                       help="built-in kernel-element demonstration")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--d", type=int, default=2)
    p.set_defaults(func=_cmd_example)

    return top


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        return 0
    except (BraidrepError, ValueError, json.JSONDecodeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _exit_code(exc)


if __name__ == "__main__":
    sys.exit(main())
