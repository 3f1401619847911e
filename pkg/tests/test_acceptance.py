"""Acceptance criteria 1-9, each with a pinned time limit and a printed verdict."""
import itertools
import json
import subprocess
import sys
import time
from pathlib import Path

import numpy as np

from relstab.groups import subgroup
from relstab.modules import direct_sum_module, dual_module, hom_space, tensor_product, zero_map
from relstab.relative import (check_les, naturality_square, rel_cone, rel_hom, restrict_ctx,
                              sigma_B, stable_B_iso, stable_B_iso_solve, stable_B_iso_strip, strip_relative)
from relstab.sandboxes import SHIPPED, c2_regular, c4_j2, c4_regular, c4_trivial_summand, sandbox, v4_cosets
from relstab.stable import check_les_st, cone_st, sigma, stable_hom
from relstab.tt import in_thick, nilpotence_order, phantom_identities, rank_variety_support, thick_closure

from .conftest import ACCEPTANCE_LINES

ROOT = Path(__file__).resolve().parent.parent
LIMITS = {1: 30, 2: 30, 3: 60, 4: 60, 5: 10, 6: 120, 7: 30, 8: 30, 9: 120}


class Verdict:
    def __init__(self, n):
        self.n = n
        self.t0 = time.perf_counter()

    def finish(self, ok: bool, detail: str):
        dt = time.perf_counter() - self.t0
        in_time = dt < LIMITS[self.n]
        status = "PASS" if ok and in_time else "FAIL"
        line = f"criterion {self.n}: {status} ({detail}; {dt:.1f}s, limit {LIMITS[self.n]}s)"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line
        assert in_time, line


def test_criterion_1_frobenius_layer():
    v = Verdict(1)
    sb = c4_j2()
    corpus = [sb.module(f"j{n}") for n in range(1, 5)]
    pairs = bad = 0
    for x, y in itertools.product(corpus, repeat=2):
        for f in hom_space(x, y).maps():
            t = cone_st(f)
            for w in corpus:
                pairs += 1
                if not all(r.ok for r in check_les_st(t, w)):
                    bad += 1
    v.finish(bad == 0 and pairs >= 50, f"{pairs} triangle/W pairs, {bad} inexact")


def test_criterion_2_lemma_iso():
    v = Verdict(2)
    sb = c4_j2()
    ctx = sb.ctx()
    corpus = [m for _, m in sb.corpus]
    pairs = agree = 0
    for i, x in enumerate(corpus):
        for y in corpus[i:]:
            pairs += 1
            agree += stable_B_iso_strip(ctx, x, y) == stable_B_iso_solve(ctx, x, y)
    v.finish(pairs == 28 and agree == pairs, f"{agree}/{pairs} pairs agree")


def test_criterion_3_fb_invertible():
    v = Verdict(3)
    instances = failures = 0
    for build in (c2_regular, c4_j2, v4_cosets):
        sb = build()
        ctx = sb.ctx()
        unit_ok = stable_B_iso(ctx, strip_relative(ctx, tensor_product(ctx.FB, dual_module(ctx.FB))), ctx.unit)
        failures += not unit_ok
        for _, x in sb.corpus:
            instances += 1
            twisted = strip_relative(ctx, tensor_product(ctx.FB, sigma(x)))
            failures += not stable_B_iso(ctx, sigma_B(ctx, x), twisted)
    v.finish(failures == 0 and instances >= 12, f"3 contexts, {instances} twist instances, {failures} failures")


def test_criterion_4_relative_cone():
    v = Verdict(4)
    rng = np.random.default_rng(4)
    maps = failures = zero_checks = 0
    for build in (c4_j2, v4_cosets):
        sb = build()
        ctx = sb.ctx()
        corpus = [m for _, m in sb.corpus]
        for _ in range(12):
            x, y = corpus[rng.integers(len(corpus))], corpus[rng.integers(len(corpus))]
            hom = hom_space(x, y)
            f = hom.combine(rng.integers(0, 2, hom.dim)) if hom.dim else zero_map(x, y)
            t = rel_cone(ctx, f)
            maps += 1
            ok = t.validate(ctx) and all(r.ok for w in corpus for r in check_les(ctx, t, w))
            failures += not ok
        for x, y in itertools.islice(itertools.product(corpus, repeat=2), 0, None, 5):
            t = rel_cone(ctx, zero_map(x, y))
            zero_checks += 1
            failures += not stable_B_iso(ctx, t.Z, direct_sum_module(y, sigma_B(ctx, x)) if x.dim else y)
    v.finish(failures == 0 and maps >= 20, f"{maps} random maps, {zero_checks} zero-map cones, {failures} failures")


def test_criterion_5_phantom_identities():
    v = Verdict(5)
    results = {name: phantom_identities(sandbox(name).ctx()) for name in SHIPPED}
    bad = [f"{n}:{k}" for n, r in results.items() for k, ok in r.items() if not ok]
    v.finish(not bad, f"{len(results)} contexts, failing: {bad or 'none'}")


def test_criterion_6_nilpotence_cross_check():
    v = Verdict(6)
    sb = v4_cosets()
    ctx = sb.ctx()
    uni = thick_closure(sb.group, 2, [ctx.B], 64)
    supp_b = rank_variety_support(ctx.B)
    rows, disagreements = [], []
    for name, x in sb.corpus:
        nil = nilpotence_order(ctx, x, 8) is not None
        thick = in_thick(uni, x) if uni.saturated else None
        supp = rank_variety_support(x).issubset(supp_b)
        rows.append(f"{name}={int(nil)}{int(bool(thick))}{int(supp)}")
        if len({nil, thick, supp}) != 1:
            disagreements.append(name)
    detail = f"saturated={uni.saturated}, rows {' '.join(rows)}, disagreeing: {disagreements or 'none'}"
    v.finish(uni.saturated and not disagreements and len(rows) == 6, detail)


def test_criterion_7_faithfulness_dichotomy():
    v = Verdict(7)
    triv = c4_trivial_summand()
    tctx = triv.ctx()
    nonzero = [n for n, x in triv.corpus if rel_hom(tctx, x, x).dim != 0]
    reg = c4_regular()
    rctx = reg.ctx()
    mismatched = [f"{a},{b}" for (a, x), (b, y) in itertools.product(reg.corpus, repeat=2)
                  if rel_hom(rctx, x, y).dim != stable_hom(x, y).dim]
    v.finish(not nonzero and not mismatched,
             f"trivial-summand nonzero endos: {nonzero or 'none'}; regular mismatches: {mismatched or 'none'}")


def test_criterion_8_naturality():
    v = Verdict(8)
    sb = c4_j2()
    ctx = sb.ctx()
    g = sb.group
    gen = g.element_index(g.generators[0])
    h = subgroup(g, [int(g.mult[gen, gen])])
    hctx = restrict_ctx(ctx, h)
    bad = [name for name, x in sb.corpus if not naturality_square(ctx, hctx, x)[2]]
    v.finish(not bad, f"{len(sb.corpus)} objects, squares failing: {bad or 'none'}")


def test_criterion_9_oracle_preregistration(tmp_path):
    v = Verdict(9)
    script = ROOT / "scripts" / "generate_fixtures.py"
    committed = ROOT / "tests" / "fixtures" / "derived_values.json"
    standalone = "relstab" not in "\n".join(
        line for line in script.read_text().splitlines() if line.startswith(("import", "from")))
    fresh = tmp_path / "fresh.json"
    gen = subprocess.run([sys.executable, str(script), "--out", str(fresh)], capture_output=True, text=True)
    same = gen.returncode == 0 and json.loads(fresh.read_text()) == json.loads(committed.read_text())
    rep = subprocess.run([sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider",
                          str(ROOT / "tests" / "test_fixtures.py")], capture_output=True, text=True, cwd=ROOT)
    n = len(json.loads(committed.read_text()))
    v.finish(standalone and same and rep.returncode == 0,
             f"{n} fixtures, standalone={standalone}, regenerated identical={same}, "
             f"reproduced={rep.returncode == 0}")
