import io
import shutil
from pathlib import Path

import pytest

from relstab.cli import run_command

SANDBOXES = Path(__file__).resolve().parent.parent / "sandboxes"


@pytest.fixture
def box(tmp_path, monkeypatch):
    dst = tmp_path / "sb"
    shutil.copytree(SANDBOXES, dst)
    monkeypatch.chdir(dst)
    monkeypatch.delenv("RELSTAB_CACHE", raising=False)
    return dst


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_command(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def records(text):
    return dict(line.split("=", 1) for line in text.splitlines())


def test_info_and_decompose(box):
    code, out, _ = run("info", "--group", "v4.grp")
    assert code == 0 and "order: 4" in out
    code, out, _ = run("decompose", "--group", "c4.grp", "--module", "c4_j1_j3.mod", "--format", "records")
    assert code == 0 and records(out)


def test_stable_and_relative_commands(box, tmp_path):
    code, _, _ = run("stable", "omega", "--group", "c4.grp", "--module", "c4_j1.mod", "--out", str(tmp_path / "o.mod"))
    assert code == 0 and "dim=3" in (tmp_path / "o.mod").read_text()
    code, out, _ = run("rel", "homs", "--group", "c4.grp", "--module", "j2.mod", "--x", "c4_j1.mod",
                       "--y", "c4_j1.mod", "--format", "records")
    assert code == 0 and records(out)["rel_hom_dim"] == "1"
    code, out, _ = run("rel", "cone", "--group", "c4.grp", "--module", "j2.mod", "--x", "c4_j1.mod",
                       "--y", "c4_j3.mod", "--zero-map", "--format", "records")
    rec = records(out)
    assert code == 0 and rec["valid"] == "true" and rec["Z.summands"] == "1x1,3x1"


@pytest.mark.parametrize("argv", [
    ["verify", "thm-fb", "--group", "c4.grp", "--module", "j2.mod", "--corpus", "c4-j2.corpus"],
    ["verify", "lemma-iso", "--group", "c4.grp", "--module", "j2.mod", "--corpus", "c4-j2.corpus"],
    ["verify", "birational", "--group", "v4.grp", "--module", "bH.mod", "--corpus", "v4-cosets.corpus"],
])
def test_verify_commands_pass(box, argv):
    code, out, err = run(*argv, "--format", "records")
    assert code == 0, err
    assert records(out)["ok"] == "true"


def test_records_are_byte_identical_across_runs(box):
    argv = ["tt", "birational", "--group", "v4.grp", "--module", "bH.mod", "--corpus", "v4-cosets.corpus",
            "--format", "records"]
    assert run(*argv)[1] == run(*argv)[1]


def test_verification_failure_dumps_counterexample(box, tmp_path):
    dump = tmp_path / "cex"
    code, out, _ = run("verify", "birational", "--group", "c4.grp", "--module", "j2.mod",
                       "--corpus", "c4-j2.corpus", "--cap-nilp", "1", "--dump-dir", str(dump),
                       "--format", "records")
    assert code == 2
    rec = records(out)
    assert rec["ok"] == "false" and rec["counterexample"] == str(dump)
    assert {"group.grp", "B.mod", "failure.txt"} <= {f.name for f in dump.iterdir()}
    # the dump is itself a valid input
    assert run("decompose", "--group", str(dump / "group.grp"), "--module", str(dump / "B.mod"))[0] == 0


@pytest.mark.parametrize("argv, fragment", [
    (["info"], "--group"),
    (["rel", "bogus", "--group", "c4.grp"], "invalid choice"),
    (["decompose", "--group", "missing.grp", "--module", "j2.mod"], "cannot read"),
    (["decompose", "--group", "v4.grp", "--module", "j2.mod"], "error"),
    (["tt", "support", "--group", "c4.grp", "--module", "j2.mod"], "elementary abelian"),
    (["tt", "nilp", "--group", "c4.grp", "--module", "j2.mod", "--cap-nilp", "0"], "positive"),
])
def test_input_errors_exit_1(box, argv, fragment):
    code, _, err = run(*argv)
    assert code == 1 and fragment in err


def test_cache_flag_writes_file(box, tmp_path):
    path = tmp_path / "cache.json"
    code, _, _ = run("decompose", "--group", "c4.grp", "--module", "c4_j3_j4.mod", "--cache", str(path))
    assert code == 0 and path.exists()
