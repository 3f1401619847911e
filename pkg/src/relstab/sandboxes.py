"""Named desk-scale sandboxes: a group, a choice of B and a test corpus."""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .formats import print_corpus, print_group, print_module
from .groups import FiniteGroup, cyclic_group, elementary_abelian, subgroup
from .modules import (GModule, direct_sum_module, jordan_block_module, perm_on_cosets,
                      regular_module, tensor_product, trivial_module)
from .relative import RelCtx, make_ctx
from .stable import omega


@dataclass
class Sandbox:
    name: str
    group: FiniteGroup
    p: int
    B: GModule
    corpus: list[tuple[str, GModule]] = field(default_factory=list)
    group_file: str = ""
    b_file: str = ""

    def ctx(self, seed: int = 1) -> RelCtx:
        return make_ctx(self.group, self.p, self.B, seed)

    def module(self, name: str) -> GModule:
        for n, m in self.corpus:
            if n == name:
                return m
        raise KeyError(name)


def _named(m: GModule, name: str) -> tuple[str, GModule]:
    return name, m


def _cyclic_corpus(g: FiniteGroup, n: int) -> dict[str, GModule]:
    return {f"j{i}": jordan_block_module(g, 2, i) for i in range(1, n + 1)}


def c2_regular() -> Sandbox:
    g = cyclic_group(2)
    j = _cyclic_corpus(g, 2)
    corpus = [("j1", j["j1"]), ("j2", j["j2"]),
              ("j1_j1", direct_sum_module(j["j1"], j["j1"])),
              ("j1_j2", direct_sum_module(j["j1"], j["j2"]))]
    return Sandbox("c2-regular", g, 2, regular_module(g, 2), corpus, "c2.grp", "kc2.mod")


def c4_corpus(g: FiniteGroup) -> list[tuple[str, GModule]]:
    j = _cyclic_corpus(g, 4)
    return list(j.items()) + [
        ("j1_j2", direct_sum_module(j["j1"], j["j2"])),
        ("j1_j3", direct_sum_module(j["j1"], j["j3"])),
        ("j3_j4", direct_sum_module(j["j3"], j["j4"])),
    ]


def c4_j2() -> Sandbox:
    g = cyclic_group(4)
    corpus = c4_corpus(g)
    return Sandbox("c4-j2", g, 2, dict(corpus)["j2"], corpus, "c4.grp", "j2.mod")


def c4_regular() -> Sandbox:
    g = cyclic_group(4)
    return Sandbox("c4-regular", g, 2, regular_module(g, 2), c4_corpus(g), "c4.grp", "kc4.mod")


def c4_trivial_summand() -> Sandbox:
    g = cyclic_group(4)
    corpus = c4_corpus(g)
    b = direct_sum_module(trivial_module(g, 2), dict(corpus)["j2"])
    return Sandbox("c4-k-j2", g, 2, b, corpus, "c4.grp", "k_j2.mod")


def v4_cosets() -> Sandbox:
    g = elementary_abelian(2, 2)
    h1 = subgroup(g, [g.element_index(g.generators[0])])
    h2 = subgroup(g, [g.element_index(g.generators[1])])
    k = trivial_module(g, 2)
    b = perm_on_cosets(g, h1, 2)
    corpus = [
        ("k", k),
        ("bH", b),
        ("omega_k", omega(k)),
        ("bH2", perm_on_cosets(g, h2, 2)),
        ("bH_bH", tensor_product(b, b)),
        ("k_bH", direct_sum_module(k, b)),
    ]
    return Sandbox("v4-cosets", g, 2, b, corpus, "v4.grp", "bH.mod")


BUILDERS = {
    "c2-regular": c2_regular,
    "c4-j2": c4_j2,
    "c4-regular": c4_regular,
    "c4-k-j2": c4_trivial_summand,
    "v4-cosets": v4_cosets,
}

# contexts in which the module-level identities are exercised by default
SHIPPED = ("c2-regular", "c4-j2", "v4-cosets", "c4-k-j2")


def sandbox(name: str) -> Sandbox:
    try:
        return BUILDERS[name]()
    except KeyError:
        raise KeyError(f"unknown sandbox {name!r}; choose from {sorted(BUILDERS)}") from None


def write_files(directory: Path | str) -> list[Path]:
    """Write every sandbox's group, B and corpus files into ``directory``."""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    written: dict[Path, str] = {}
    for name in BUILDERS:
        sb = sandbox(name)
        written[out / sb.group_file] = print_group(sb.group)
        written[out / sb.b_file] = print_module(sb.B)
        stem = Path(sb.group_file).stem
        paths = []
        for mod_name, m in sb.corpus:
            path = out / f"{stem}_{mod_name}.mod"
            written[path] = print_module(m)
            paths.append(path)
        written[out / f"{name}.corpus"] = print_corpus(paths, out)
    for path, text in written.items():
        path.write_text(text)
    return sorted(written)
