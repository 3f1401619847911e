import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from relstab.formats import (FormatError, load_corpus, parse_corpus_file, parse_group_file, parse_map_file,
                             parse_module_file, print_corpus, print_group, print_map, print_module)
from relstab.groups import cyclic_group, elementary_abelian
from relstab.modules import jordan_block_module, perm_on_cosets, regular_module

V4 = elementary_abelian(2, 2)


def test_group_round_trip():
    g = parse_group_file(print_group(V4))
    assert g.order == 4 and g.generators == V4.generators


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 8))
def test_module_round_trip(n):
    c8 = cyclic_group(8)
    m = jordan_block_module(c8, 2, n)
    assert parse_module_file(print_module(m), c8).same_data(m)


def test_module_round_trip_on_v4():
    for m in (regular_module(V4, 2), perm_on_cosets(V4, V4, 2)):
        assert parse_module_file(print_module(m), V4).same_data(m)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 5), st.integers(0, 5), st.sampled_from([2, 3, 97]), st.integers(0, 10**6))
def test_map_round_trip(r, c, p, seed):
    mat = np.random.default_rng(seed).integers(0, p, (r, c))
    q, back = parse_map_file(print_map(mat, p))
    assert q == p and np.array_equal(back, mat)


def test_comments_and_blank_lines_are_ignored():
    text = "# a comment\n\ngroup degree=2   # trailing\ngen 1 0\n"
    assert parse_group_file(text).order == 2


@pytest.mark.parametrize("text, line, fragment", [
    ("group degree=3\ngen 0 1 1\n", 2, "not a permutation"),
    ("group degree=3\ngen 0 1\n", 2, "expected 3"),
    ("group deg=3\n", 1, "unknown header field"),
    ("group degree=x\n", 1, "not an integer"),
    ("# c\ngroup degree=2\nperm 1 0\n", 3, "expected 'gen'"),
])
def test_group_errors_carry_line_numbers(text, line, fragment):
    with pytest.raises(FormatError) as info:
        parse_group_file(text, "g.grp")
    assert info.value.line == line
    assert str(info.value).startswith(f"g.grp:line {line}: ") and fragment in str(info.value)


def test_module_errors():
    c2 = cyclic_group(2)
    with pytest.raises(FormatError, match="line 2"):
        parse_module_file("module p=2 dim=2\nmat 1 1 0\n", c2)
    with pytest.raises(FormatError):
        parse_module_file("module p=2 dim=2\n", c2)
    with pytest.raises(FormatError):
        parse_module_file("module p=2 dim=2\nmat 0 1 1 1\n", c2)  # order 3, not a C2 action
    with pytest.raises(FormatError, match="empty"):
        parse_module_file("# nothing\n", c2)


def test_map_row_count_checked():
    with pytest.raises(FormatError, match="rows"):
        parse_map_file("map p=2 rows=2 cols=1\nrow 1\n")


def test_corpus_paths_and_loading(tmp_path):
    c2 = cyclic_group(2)
    (tmp_path / "a.mod").write_text(print_module(regular_module(c2, 2)))
    (tmp_path / "list.corpus").write_text(print_corpus([tmp_path / "a.mod"], tmp_path))
    assert parse_corpus_file("a.mod\n", tmp_path) == [tmp_path / "a.mod"]
    [(stem, m)] = load_corpus(tmp_path / "list.corpus", c2)
    assert stem == "a" and m.dim == 2
    with pytest.raises(FormatError, match="cannot read"):
        load_corpus(tmp_path / "missing.corpus", c2)
