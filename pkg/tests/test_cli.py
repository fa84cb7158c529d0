import io
import os
import subprocess
import sys
from pathlib import Path

import pytest

from blockade.cli import main

DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    try:
        code = main([str(a) for a in argv], out, err)
    except SystemExit as exc:
        code = exc.code
    return code, out.getvalue(), err.getvalue()


@pytest.mark.parametrize("golden,argv", [
    ("fxm2_partition.txt", ["mat", "partition", DATA / "fxm2.tmat"]),
    ("fxm4_partition.txt", ["mat", "partition", DATA / "fxm4.tmat"]),
    ("fxm2_partition.txt", ["mat", "partition", "--format", "records", DATA / "fxm2.tmat"]),
    ("fx2_certificate.txt", ["certify", DATA / "fx2.ctree"]),
    ("fx2_vote_records.txt", ["vote", "--format", "records", DATA / "fx2.ctree"]),
    ("comb_stability.txt", ["stability", DATA / "comb.pgen", "--depth-min", 2,
                            "--depth-max", 4]),
])
def test_golden(golden, argv):
    code, out, _ = run(*argv)
    assert code == 0
    assert out == (GOLDEN / golden).read_text()


class TestVote:
    def test_tie(self):
        assert run("vote", DATA / "fx1.ctree")[:2] == (0, "Tie\n")

    def test_blue_margin(self):
        assert run("vote", DATA / "fx3.ctree")[:2] == (0, "Blue margin 1\n")

    def test_open_vertex(self):
        code, _, err = run("vote", DATA / "fxp.ctree")
        assert code == 2 and "open" in err

    def test_missing_file(self):
        assert run("vote", DATA / "nope.ctree")[0] == 2

    def test_root_in_party(self, tmp_path):
        path = tmp_path / "bad.ctree"
        path.write_text("ctree v1\nv r root B\n")
        assert run("vote", path)[0] == 3


class TestCertify:
    def test_own_certificate_verifies(self, tmp_path):
        cert = tmp_path / "fx3.cert"
        code, out, _ = run("certify", DATA / "fx3.ctree")
        assert code == 0 and out.startswith("cert StrongBlue\n")
        cert.write_text(out)
        code, out, _ = run("verify", DATA / "fx3.ctree", cert)
        assert code == 0 and out.endswith("verified\n")

    def test_foreign_certificate_fails(self, tmp_path):
        cert = tmp_path / "fx1.cert"
        cert.write_text(run("certify", DATA / "fx1.ctree")[1])
        code, out, _ = run("verify", DATA / "fx3.ctree", cert)
        assert code == 1 and "rejected" in out

    def test_weak_blue_claim_fails(self, tmp_path):
        cert = tmp_path / "weak.cert"
        cert.write_text("cert StrongBlue\nedges b\nflow d\nrootacc 0\n")
        assert run("verify", DATA / "fx1.ctree", cert)[0] == 1

    def test_garbled_certificate(self, tmp_path):
        cert = tmp_path / "junk.cert"
        cert.write_text("hello\n")
        assert run("verify", DATA / "fx1.ctree", cert)[0] == 2


class TestStability:
    def test_finite(self):
        code, out, _ = run("stability", DATA / "finite.pgen", "--depth-min", 1,
                           "--depth-max", 5)
        assert code == 0 and "mode finite" in out and out.endswith("stabilized 2\n")

    def test_bad_spec(self):
        assert run("stability", DATA / "bad.pgen")[0] == 2

    def test_single_mode(self):
        code, out, _ = run("stability", DATA / "comb.pgen", "--mode", "red",
                           "--depth-min", 1, "--depth-max", 3)
        assert code == 0 and out.count("mode red") == 3


class TestMat:
    def test_circuits(self):
        assert run("mat", "circuits", DATA / "fxm2.tmat")[:2] == (0, "{a,b}\n")
        assert run("mat", "circuits", "--format", "records",
                   DATA / "fxm2.tmat")[1] == "circuit a b\n"

    def test_independent_and_rank(self):
        assert run("mat", "independent", DATA / "fxm2.tmat", "a")[1] == "true\n"
        assert run("mat", "independent", DATA / "fxm2.tmat", "a", "b")[1] == "false\n"
        assert run("mat", "rank", DATA / "fxm4.tmat", "x1", "x2", "x3")[1] == "2\n"
        assert run("mat", "rank", "--side", "N", DATA / "fxm4.tmat", "x1", "x2")[1] == "1\n"

    def test_unknown_element(self):
        assert run("mat", "rank", DATA / "fxm2.tmat", "g")[0] == 2

    def test_intersect(self):
        code, out, _ = run("mat", "intersect", DATA / "fxm4.tmat")
        assert code == 0 and out.startswith("|I|=1\n")

    def test_partition_hypothesis(self, tmp_path):
        path = tmp_path / "loose.tmat"
        path.write_text("tmat v1\nnode s rankM 0 rankN 1 elems g a\n"
                        "node t rankM 1 rankN 1 elems g b\nlink s t dummy g\n")
        assert run("mat", "partition", path)[0] == 3


class TestGen:
    def test_tree_deterministic(self):
        first = run("gen", "tree", "--seed", 1, "--n", 10)
        assert first == run("gen", "tree", "--seed", 1, "--n", 10)
        assert first[1].startswith("ctree v1\n")

    def test_pgen_feeds_stability(self, tmp_path):
        path = tmp_path / "g.pgen"
        path.write_text(run("gen", "pgen", "--seed", 4, "--states", 3)[1])
        assert run("stability", path, "--depth-max", 3)[0] == 0

    def test_tmat_impossible(self):
        assert run("gen", "tmat", "--min-nodes", 5, "--max-rank", 1)[0] == 2

    def test_tmat_partition(self, tmp_path):
        path = tmp_path / "r.tmat"
        path.write_text(run("gen", "tmat", "--seed", 9)[1])
        code, out, _ = run("mat", "partition", path)
        assert code == 0 and out.endswith("verified pass\n")

    def test_seed_range(self):
        assert run("gen", "tree", "--seed", 2**64)[0] == 2


class TestEnumerate:
    def test_small(self):
        code, out, _ = run("enumerate", 4)
        assert code == 0 and "failures 0" in out

    def test_guard(self):
        assert run("enumerate", 10)[0] == 2

    def test_trivial(self):
        code, out, _ = run("enumerate", 1)
        assert code == 0 and "instances 1" in out


def test_bad_flag():
    assert run("vote", "--bogus", DATA / "fx1.ctree")[0] == 2


def test_console_script_and_pure_python_backend():
    env = dict(os.environ, BLOCKADE_PURE_PYTHON="1")
    proc = subprocess.run([sys.executable, "-m", "blockade.cli", "certify",
                           str(DATA / "fx2.ctree")], capture_output=True, text=True, env=env)
    assert proc.returncode == 0
    assert proc.stdout == (GOLDEN / "fx2_certificate.txt").read_text()
    proc = subprocess.run([sys.executable, "-c", "import blockade; print(blockade.BACKEND)"],
                          capture_output=True, text=True, env=env)
    assert proc.stdout.strip() == "python"
