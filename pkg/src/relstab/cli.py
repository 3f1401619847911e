"""Command-line workbench: ``relstab <command> [<sub>] --group G.grp ...``.

Exit codes: 0 success, 1 usage or input error, 2 verification failure
(a counterexample directory is written alongside the report).
"""
from __future__ import annotations

import argparse
import itertools
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .cache import DecompCache, resolve_path
from .decomposition import CertificationError
from .formats import FormatError, load_corpus, load_group, load_module, parse_map_file, print_group, print_map, print_module
from .groups import FiniteGroup, GroupError
from .linalg import LinalgError
from .modules import (GMap, GModule, ModuleError, dual_module, hom_space, is_intertwiner, tensor_product,
                      trivial_module, zero_map)
from .relative import (RelativeError, check_les, make_ctx, rel_cone, rel_hom,
                       sigma_B, stable_B_iso, stable_B_iso_solve, stable_B_iso_strip, strip_relative)
from .stable import StableError, check_les_st, cone_st, is_projective, omega, sigma, stable_hom
from .tt import (DEFAULT_CAP_NILP, DEFAULT_DIM_CAP, TTError, birational_report, graded_unit_dims, in_thick,
                 nilpotence_order, phantom_identities, rank_variety_support, relative_nilpotence_order,
                 stable_unit_dims, thick_closure, _has_trivial_summand)

DEFAULT_DUMP = "relstab-counterexample"
RANDOM_MAPS_PER_PAIR = 2


class UsageError(Exception):
    pass


class VerificationFailure(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# --------------------------------------------------------------------------
# reporting


@dataclass
class Report:
    facts: list[tuple[str, str]] = field(default_factory=list)

    def add(self, key: str, value) -> None:
        """Record ``key``; a repeated key is dropped from its old slot and appended."""
        self.facts = [kv for kv in self.facts if kv[0] != key]
        self.facts.append((key, _fmt(value)))

    def render(self, fmt: str) -> str:
        sep = "=" if fmt == "records" else ": "
        return "".join(f"{k}{sep}{v}\n" for k, v in self.facts)


def _fmt(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (list, tuple)):
        return ",".join(_fmt(v) for v in value) if value else "-"
    return str(value)


class Dumper:
    """Collects the files needed to reproduce a failing check."""

    def __init__(self, directory: Path, group: FiniteGroup):
        self.directory = directory
        self.files: dict[str, str] = {"group.grp": print_group(group)}
        self.notes: list[str] = []

    def module(self, name: str, m: GModule):
        self.files[f"{name}.mod"] = print_module(m)

    def map(self, name: str, f: GMap):
        self.files[f"{name}.map"] = print_map(f.matrix, f.p)

    def note(self, line: str):
        self.notes.append(line)

    def write(self) -> Path:
        self.directory.mkdir(parents=True, exist_ok=True)
        for name, text in self.files.items():
            (self.directory / name).write_text(text)
        (self.directory / "failure.txt").write_text("".join(n + "\n" for n in self.notes))
        return self.directory


def _dims(m: GModule, cache: DecompCache, seed: int) -> list[str]:
    if m.dim == 0:
        return []
    return [f"{x.dim}x{k}" for x, k in cache.decompose(m, seed).summands]


# --------------------------------------------------------------------------
# argument plumbing


@dataclass
class Env:
    args: argparse.Namespace
    group: FiniteGroup
    cache: DecompCache
    report: Report

    @property
    def seed(self) -> int:
        return self.args.seed

    def module(self, attr: str, required: bool = True) -> GModule | None:
        path = getattr(self.args, attr, None)
        if path is None:
            if required:
                raise UsageError(f"--{attr} is required for this command")
            return None
        return load_module(path, self.group)

    def corpus(self, default=None) -> list[tuple[str, GModule]]:
        if self.args.corpus is not None:
            return load_corpus(self.args.corpus, self.group)
        named = [("x", self.module("x", False)), ("y", self.module("y", False))]
        named = [(n, m) for n, m in named if m is not None]
        return named or (default or [])

    def dims(self, m: GModule) -> list[str]:
        return _dims(m, self.cache, self.seed)

    def ctx(self):
        b = self.module("module")
        return make_ctx(self.group, b.p, b, self.seed)

    def dumper(self) -> Dumper:
        return Dumper(Path(self.args.dump_dir), self.group)


def _default_corpus(group: FiniteGroup, p: int, seed: int) -> list[tuple[str, GModule]]:
    k = trivial_module(group, p)
    return [("k", k), ("omega_k", omega(k, seed)), ("sigma_k", sigma(k, seed))]


def _pick_map(env: Env, x: GModule, y: GModule) -> GMap:
    args = env.args
    if getattr(args, "zero_map", False):
        return zero_map(x, y)
    if getattr(args, "map", None):
        p, mat = parse_map_file(Path(args.map).read_text(), args.map)
        if p != x.p or mat.shape != (y.dim, x.dim):
            raise UsageError(f"map file has p={p} shape {mat.shape}, expected p={x.p} shape {(y.dim, x.dim)}")
        if not is_intertwiner(x, y, mat):
            raise UsageError("map file does not describe a module homomorphism")
        return GMap(x, y, mat)
    hom = hom_space(x, y)
    k = args.basis_index
    if hom.dim == 0:
        return zero_map(x, y)
    if not 0 <= k < hom.dim:
        raise UsageError(f"--basis-index {k} out of range; Hom has dimension {hom.dim}")
    return hom.maps()[k]


# --------------------------------------------------------------------------
# plain commands


def cmd_info(env: Env):
    g, r = env.group, env.report
    r.add("order", g.order)
    r.add("degree", g.degree)
    r.add("generators", len(g.generators))
    r.add("word_table_size", len(g.words))
    r.add("abelian", g.is_abelian())
    r.add("fingerprint", g.fingerprint())
    for p in (2, 3, 5, 7):
        if g.is_p_group(p) and g.order > 1:
            r.add("p_group", p)


def cmd_decompose(env: Env):
    m = env.module("module")
    dec = env.cache.decompose(m, env.seed)
    env.report.add("dim", m.dim)
    env.report.add("summands", [f"{x.dim}x{k}" for x, k in dec.summands])
    for i, (x, k) in enumerate(dec.summands):
        env.report.add(f"summand.{i}.dim", x.dim)
        env.report.add(f"summand.{i}.mult", k)
        if m.group.is_p_group(m.p):
            env.report.add(f"summand.{i}.projective", is_projective(x))


def cmd_tensor(env: Env):
    m, n = env.module("module"), env.module("y")
    t = tensor_product(m, n)
    env.report.add("dim", t.dim)
    env.report.add("summands", env.dims(t))
    if env.args.out:
        Path(env.args.out).write_text(print_module(t))
        env.report.add("written", env.args.out)


def cmd_homs(env: Env):
    m, n = env.module("module"), env.module("y")
    env.report.add("hom_dim", hom_space(m, n).dim)


def _write_out(env: Env, m: GModule):
    if env.args.out:
        Path(env.args.out).write_text(print_module(m))
        env.report.add("written", env.args.out)


def cmd_stable_omega(env: Env):
    m = omega(env.module("module"), env.seed)
    env.report.add("dim", m.dim)
    env.report.add("summands", env.dims(m))
    _write_out(env, m)


def cmd_stable_sigma(env: Env):
    m = sigma(env.module("module"), env.seed)
    env.report.add("dim", m.dim)
    env.report.add("summands", env.dims(m))
    _write_out(env, m)


def cmd_stable_homs(env: Env):
    m, n = env.module("module"), env.module("y")
    sh = stable_hom(m, n)
    env.report.add("hom_dim", sh.hom.dim)
    env.report.add("projective_null_dim", sh.null.shape[0])
    env.report.add("stable_hom_dim", sh.dim)


def cmd_stable_cone(env: Env):
    x, y = env.module("module"), env.module("y")
    f = _pick_map(env, x, y)
    t = cone_st(f, env.seed)
    r = env.report
    r.add("Z.dim", t.Z.dim)
    r.add("Z.summands", env.dims(t.Z))
    r.add("valid", t.validate())
    bad = [rep for w in (x, y) for rep in check_les_st(t, w) if not rep.ok]
    r.add("les_exact", not bad)
    _write_out(env, t.Z)


# --------------------------------------------------------------------------
# relative commands


def cmd_rel_ctx(env: Env):
    ctx = env.ctx()
    r = env.report
    r.add("B.dim", ctx.B.dim)
    r.add("B.summands", env.dims(ctx.B))
    r.add("FB.dim", ctx.FB.dim)
    r.add("FB.summands", env.dims(ctx.FB))
    r.add("B_has_trivial_summand", _has_trivial_summand(ctx))
    one = ctx.unit
    r.add("rel_hom_unit", rel_hom(ctx, one, one).dim)
    for key, ok in phantom_identities(ctx).items():
        r.add(key, ok)


def cmd_rel_homs(env: Env):
    ctx = env.ctx()
    x, y = env.module("x"), env.module("y")
    env.report.add("stable_hom_dim", stable_hom(x, y).dim)
    env.report.add("rel_hom_dim", rel_hom(ctx, x, y).dim)


def cmd_rel_sigma(env: Env):
    ctx = env.ctx()
    s = sigma_B(ctx, env.module("x"))
    env.report.add("dim", s.dim)
    env.report.add("summands", env.dims(s))
    _write_out(env, s)


def cmd_rel_strip(env: Env):
    ctx = env.ctx()
    s = strip_relative(ctx, env.module("x"))
    env.report.add("dim", s.dim)
    env.report.add("summands", env.dims(s))
    _write_out(env, s)


def cmd_rel_iso(env: Env):
    ctx = env.ctx()
    x, y = env.module("x"), env.module("y")
    a = stable_B_iso_strip(ctx, x, y)
    b = stable_B_iso_solve(ctx, x, y)
    env.report.add("iso_strip", a)
    env.report.add("iso_solve", b)
    env.report.add("routes_agree", a == b)
    if a != b:
        d = env.dumper()
        d.module("B", ctx.B), d.module("x", x), d.module("y", y)
        d.note(f"strip route says {a}, solve route says {b}")
        raise VerificationFailure(d)


def cmd_rel_cone(env: Env):
    ctx = env.ctx()
    x, y = env.module("x"), env.module("y")
    f = _pick_map(env, x, y)
    t = rel_cone(ctx, f)
    r = env.report
    r.add("Z.dim", t.Z.dim)
    r.add("Z.summands", env.dims(t.Z))
    r.add("valid", t.validate(ctx))
    ws = env.corpus() if env.args.corpus else [("x", x), ("y", y)]
    for name, w in ws:
        r.add(f"les.{name}", all(rep.ok for rep in check_les(ctx, t, w)))
    _write_out(env, t.Z)


# --------------------------------------------------------------------------
# tt commands


def cmd_tt_nilp(env: Env):
    ctx = env.ctx()
    cap = env.args.cap_nilp
    for name, x in env.corpus(_default_corpus(env.group, ctx.p, env.seed)):
        env.report.add(f"{name}.nilpotence", _cap_fmt(nilpotence_order(ctx, x, cap), cap))
        env.report.add(f"{name}.relative_nilpotence", _cap_fmt(relative_nilpotence_order(ctx, x, cap), cap))


def _cap_fmt(n: int | None, cap: int) -> str:
    return f">{cap}" if n is None else str(n)


def cmd_tt_thick(env: Env):
    b = env.module("module")
    uni = thick_closure(env.group, b.p, [b], env.args.cap_dim, seed=env.seed)
    r = env.report
    r.add("saturated", uni.saturated)
    r.add("members", len(uni.members))
    r.add("member_dims", uni.dims())
    if uni.saturated:
        for name, x in env.corpus():
            r.add(f"{name}.in_thick", in_thick(uni, x))


def cmd_tt_support(env: Env):
    m = env.module("module")
    s = rank_variety_support(m)
    r = env.report
    r.add("points", ["(" + " ".join(map(str, q)) + ")" for q in s.points])
    r.add("complete", s.complete)
    for name, x in env.corpus():
        sx = rank_variety_support(x)
        r.add(f"{name}.points", ["(" + " ".join(map(str, q)) + ")" for q in sx.points])
        r.add(f"{name}.inside", sx.issubset(s))


def cmd_tt_birational(env: Env):
    ctx = env.ctx()
    rep = birational_report(ctx, env.corpus(_default_corpus(env.group, ctx.p, env.seed)),
                            env.args.cap_nilp, env.args.cap_dim)
    for line in rep.records():
        k, v = line.split("=", 1)
        env.report.facts.append((k, v))
    return rep


def cmd_tt_graded(env: Env):
    ctx = env.ctx()
    stable = dict(stable_unit_dims(env.group, ctx.p, env.args.n_max))
    for n, d in graded_unit_dims(ctx, env.args.n_max):
        env.report.add(f"n={n}.rel", d)
        env.report.add(f"n={n}.stable", stable[n])


# --------------------------------------------------------------------------
# verification commands


def cmd_verify_axioms(env: Env):
    ctx = env.ctx()
    corpus = env.corpus(_default_corpus(env.group, ctx.p, env.seed))
    rng = np.random.default_rng(env.seed)
    checked = 0
    for (nx, x), (ny, y) in itertools.product(corpus, repeat=2):
        hom = hom_space(x, y)
        maps = [zero_map(x, y)]
        for _ in range(RANDOM_MAPS_PER_PAIR if hom.dim else 0):
            maps.append(hom.combine(rng.integers(0, ctx.p, hom.dim)))
        for f in maps:
            t = rel_cone(ctx, f)
            fails = []
            if not t.validate(ctx):
                fails.append("triangle composites are not contractible")
            for nw, w in corpus:
                for rep in check_les(ctx, t, w):
                    if not rep.ok:
                        fails.append(f"long exact sequence fails at {rep.position} against {nw}")
            checked += 1
            if fails:
                d = env.dumper()
                d.module("B", ctx.B), d.module("x", x), d.module("y", y), d.map("f", f)
                for nw, w in corpus:
                    d.module(f"w_{nw}", w)
                for line in fails:
                    d.note(line)
                env.report.add("failed_pair", f"{nx}->{ny}")
                raise VerificationFailure(d)
    env.report.add("triangles_checked", checked)
    env.report.add("ok", True)


def cmd_verify_lemma_iso(env: Env):
    ctx = env.ctx()
    corpus = env.corpus(_default_corpus(env.group, ctx.p, env.seed))
    pairs = 0
    for i, (nx, x) in enumerate(corpus):
        for ny, y in corpus[i:]:
            a = stable_B_iso_strip(ctx, x, y)
            b = stable_B_iso_solve(ctx, x, y)
            pairs += 1
            if a != b:
                d = env.dumper()
                d.module("B", ctx.B), d.module("x", x), d.module("y", y)
                d.note(f"{nx} vs {ny}: strip route says {a}, solve route says {b}")
                env.report.add("failed_pair", f"{nx},{ny}")
                raise VerificationFailure(d)
    env.report.add("pairs", pairs)
    env.report.add("ok", True)


def cmd_verify_thm_fb(env: Env):
    ctx = env.ctx()
    corpus = env.corpus(_default_corpus(env.group, ctx.p, env.seed))
    r = env.report
    fb_fbd = strip_relative(ctx, tensor_product(ctx.FB, dual_module(ctx.FB)))
    inv = stable_B_iso(ctx, fb_fbd, ctx.unit)
    r.add("FB_invertible", inv)
    if not inv:
        d = env.dumper()
        d.module("B", ctx.B), d.module("FB", ctx.FB), d.module("FB_FBdual_stripped", fb_fbd)
        d.note("F_B tensor its dual is not stably B-isomorphic to the unit")
        raise VerificationFailure(d)
    for name, x in corpus:
        lhs = sigma_B(ctx, x)
        rhs = strip_relative(ctx, tensor_product(ctx.FB, sigma(x, ctx.seed)))
        ok = stable_B_iso(ctx, lhs, rhs)
        r.add(f"{name}.sigma_B_twist", ok)
        if not ok:
            d = env.dumper()
            d.module("B", ctx.B), d.module("x", x), d.module("sigma_B_x", lhs), d.module("FB_sigma_x", rhs)
            d.note(f"sigma_B({name}) differs from F_B tensor sigma({name}) in the relative category")
            raise VerificationFailure(d)
    r.add("ok", True)


def cmd_verify_birational(env: Env):
    rep = cmd_tt_birational(env)
    if not rep.ok:
        d = env.dumper()
        ctx = env.ctx()
        d.module("B", ctx.B)
        for name, x in env.corpus(_default_corpus(env.group, ctx.p, env.seed)):
            d.module(name, x)
        for line in rep.records():
            d.note(line)
        raise VerificationFailure(d)


# --------------------------------------------------------------------------
# parser


COMMANDS = {
    ("info",): (cmd_info, ()),
    ("decompose",): (cmd_decompose, ("module",)),
    ("tensor",): (cmd_tensor, ("module", "y", "out")),
    ("homs",): (cmd_homs, ("module", "y")),
    ("stable", "omega"): (cmd_stable_omega, ("module", "out")),
    ("stable", "sigma"): (cmd_stable_sigma, ("module", "out")),
    ("stable", "cone"): (cmd_stable_cone, ("module", "y", "map", "out")),
    ("stable", "homs"): (cmd_stable_homs, ("module", "y")),
    ("rel", "ctx"): (cmd_rel_ctx, ("module",)),
    ("rel", "homs"): (cmd_rel_homs, ("module", "x", "y")),
    ("rel", "sigma"): (cmd_rel_sigma, ("module", "x", "out")),
    ("rel", "cone"): (cmd_rel_cone, ("module", "x", "y", "map", "corpus", "out")),
    ("rel", "iso"): (cmd_rel_iso, ("module", "x", "y", "dump")),
    ("rel", "strip"): (cmd_rel_strip, ("module", "x", "out")),
    ("tt", "nilp"): (cmd_tt_nilp, ("module", "x", "y", "corpus")),
    ("tt", "thick"): (cmd_tt_thick, ("module", "x", "y", "corpus")),
    ("tt", "support"): (cmd_tt_support, ("module", "x", "y", "corpus")),
    ("tt", "birational"): (cmd_tt_birational, ("module", "x", "y", "corpus")),
    ("tt", "graded"): (cmd_tt_graded, ("module", "n_max")),
    ("verify", "axioms"): (cmd_verify_axioms, ("module", "x", "y", "corpus", "dump")),
    ("verify", "lemma-iso"): (cmd_verify_lemma_iso, ("module", "x", "y", "corpus", "dump")),
    ("verify", "thm-fb"): (cmd_verify_thm_fb, ("module", "x", "y", "corpus", "dump")),
    ("verify", "birational"): (cmd_verify_birational, ("module", "x", "y", "corpus", "dump")),
}


def _common(parser: argparse.ArgumentParser, suppress: bool):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--seed", type=int, default=d(1), help="random seed (default 1)")
    parser.add_argument("--cap-nilp", type=int, default=d(DEFAULT_CAP_NILP),
                        help=f"largest tensor power of xi tried (default {DEFAULT_CAP_NILP})")
    parser.add_argument("--cap-dim", type=int, default=d(DEFAULT_DIM_CAP),
                        help=f"dimension cap for thick closures (default {DEFAULT_DIM_CAP})")
    parser.add_argument("--format", choices=("text", "records"), default=d("text"))
    parser.add_argument("--cache", default=d(None), help="decomposition cache file ($RELSTAB_CACHE wins)")


_OPTIONS = {
    "module": dict(help="module file (for rel, tt and verify commands: the object B)"),
    "x": dict(help="module file for the object X"),
    "y": dict(help="module file for the object Y"),
    "corpus": dict(help="corpus file listing module files"),
    "map": dict(help="map file for f: X -> Y (default: a Hom basis element)"),
    "out": dict(help="write the resulting module to this file"),
    "dump": dict(),
    "n_max": dict(),
}


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="relstab", description="Relative stable categories of p-groups at desk scale.")
    top.add_argument("--version", action="version", version=f"relstab {__version__}")
    _common(top, suppress=False)
    sub = top.add_subparsers(dest="command", required=True, parser_class=_Parser)
    groups: dict[str, argparse._SubParsersAction] = {}
    for key, (func, opts) in COMMANDS.items():
        if len(key) == 1:
            p = sub.add_parser(key[0])
        else:
            if key[0] not in groups:
                gp = sub.add_parser(key[0])
                groups[key[0]] = gp.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)
            p = groups[key[0]].add_parser(key[1])
        p.set_defaults(func=func)
        p.add_argument("--group", required=True, help="group file")
        for opt in opts:
            if opt == "dump":
                p.add_argument("--dump-dir", default=DEFAULT_DUMP,
                               help=f"where to write a counterexample (default {DEFAULT_DUMP})")
            elif opt == "n_max":
                p.add_argument("--n-max", type=int, default=4)
            elif opt == "map":
                p.add_argument("--map", help=_OPTIONS["map"]["help"])
                p.add_argument("--basis-index", type=int, default=0)
                p.add_argument("--zero-map", action="store_true")
            else:
                p.add_argument(f"--{opt}", **_OPTIONS[opt])
        _common(p, suppress=True)
    return top


INPUT_ERRORS = (FormatError, GroupError, ModuleError, LinalgError, StableError, RelativeError, TTError,
                CertificationError, OSError, KeyError)


def run_command(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(str(exc), file=stderr)
        return 1
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    for attr in ("x", "y", "corpus", "map", "out", "module", "zero_map", "n_max", "dump_dir"):
        if not hasattr(args, attr):
            setattr(args, attr, None)
    if args.cap_nilp < 1 or args.cap_dim < 1:
        print("relstab: caps must be positive", file=stderr)
        return 1
    cache = DecompCache(resolve_path(args.cache))
    report = Report()
    code = 0
    try:
        env = Env(args, load_group(args.group), cache, report)
        args.func(env)
    except UsageError as exc:
        print(f"relstab: {exc}", file=stderr)
        return 1
    except VerificationFailure as exc:
        where = exc.args[0].write()
        report.add("counterexample", str(where))
        report.add("ok", False)
        code = 2
    except INPUT_ERRORS as exc:
        print(f"relstab: error: {exc}", file=stderr)
        return 1
    finally:
        cache.save()
    stdout.write(report.render(args.format))
    return code


def main(argv=None):
    logging.basicConfig(level=logging.WARNING, format="relstab: %(levelname)s: %(message)s")
    sys.exit(run_command(argv))


if __name__ == "__main__":
    main()
