import json
import logging

import numpy as np

from relstab.cache import ENV_VAR, DecompCache, cache_key, resolve_path
from relstab.groups import cyclic_group
from relstab.modules import direct_sum_module, jordan_block_module

C4 = cyclic_group(4)
M = direct_sum_module(jordan_block_module(C4, 2, 1), jordan_block_module(C4, 2, 3))


def test_round_trip_hits(tmp_path):
    path = tmp_path / "c.json"
    first = DecompCache(path)
    dec = first.decompose(M)
    first.save()
    second = DecompCache(path)
    again = second.get(M)
    assert second.hits == 1 and again.dims() == dec.dims()
    assert np.array_equal(again.iso.matrix, dec.iso.matrix)


def test_key_separates_isomorphic_but_different_data():
    n = direct_sum_module(jordan_block_module(C4, 2, 3), jordan_block_module(C4, 2, 1))
    assert cache_key(M) != cache_key(n)


def test_corrupt_file_warns_and_starts_empty(tmp_path, caplog):
    path = tmp_path / "c.json"
    path.write_text("{not json")
    with caplog.at_level(logging.WARNING):
        cache = DecompCache(path)
    assert cache.entries == {} and "unreadable" in caplog.text


def test_tampered_entry_is_rejected(tmp_path, caplog):
    path = tmp_path / "c.json"
    cache = DecompCache(path)
    cache.decompose(M)
    cache.save()
    data = json.loads(path.read_text())
    entry = next(iter(data["entries"].values()))
    entry["iso"] = [[0] * M.dim for _ in range(M.dim)]
    path.write_text(json.dumps(data))
    cache = DecompCache(path)
    with caplog.at_level(logging.WARNING):
        assert cache.get(M) is None
    assert cache.rejected == 1 and "failed validation" in caplog.text
    assert cache.decompose(M).dims() == [(1, 1), (3, 1)]


def test_environment_overrides_flag(tmp_path, monkeypatch):
    monkeypatch.setenv(ENV_VAR, str(tmp_path / "env.json"))
    assert resolve_path(str(tmp_path / "flag.json")) == tmp_path / "env.json"
    monkeypatch.delenv(ENV_VAR)
    assert resolve_path(str(tmp_path / "flag.json")) == tmp_path / "flag.json"
    assert resolve_path(None) is None
