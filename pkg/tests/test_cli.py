import json
from fractions import Fraction

import pytest

from ctp_outerplanar import fixture
from ctp_outerplanar.cli import ExperimentRow, build_parser, dispatch, write_report
from ctp_outerplanar.instance import dump_instance
from ctp_outerplanar.instances import gen_westphal

HEADER = "instance,strategy,k,traversed,d_opt,ratio,bound,pass,recursions,events"


@pytest.fixture
def fig5_file(tmp_path):
    path = tmp_path / "fig5.json"
    dump_instance(fixture("fig5"), path)
    return path


def run(argv, capsys):
    code = dispatch(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_help_lists_subcommands(capsys):
    text = build_parser().format_help()
    for cmd in ("validate", "run", "worst", "minimax", "gen", "cert", "gk", "sweep"):
        assert cmd in text


def test_unknown_flag_exits_4(capsys):
    with pytest.raises(SystemExit) as exc:
        dispatch(["run", "--bogus"])
    assert exc.value.code == 4


def test_validate(fig5_file, tmp_path, capsys):
    assert run(["validate", str(fig5_file)], capsys)[:2] == (0, "ok\n")
    bad = tmp_path / "w4.json"
    dump_instance(gen_westphal(4, Fraction(1, 10)), bad)
    code, out, _ = run(["validate", str(bad)], capsys)
    assert code == 1 and out.strip()


def test_run_fig5_row(fig5_file, tmp_path, capsys):
    trace = tmp_path / "trace.jsonl"
    code, out, _ = run(["run", "--strategy", "expbalancing", "--instance", str(fig5_file),
                        "--trace", str(trace)], capsys)
    assert code == 0
    header, row = out.strip().splitlines()
    assert header == HEADER
    assert row.startswith("fig5,expbalancing,1,4,2,2,9,true,0,")
    events = [json.loads(line) for line in trace.read_text().splitlines()]
    moves = [ev for ev in events if ev["event"] == "move"]
    assert moves[-1] == {"event": "move", "vertex": "t1", "cost": "4"}


def test_reposition_runs_on_non_outerplanar(tmp_path, capsys):
    path = tmp_path / "w3.json"
    dump_instance(gen_westphal(3, Fraction(1, 10)), path)
    code, out, _ = run(["run", "--strategy", "reposition", "--instance", str(path)], capsys)
    assert code == 0 and "westphal-k3,reposition,3,11/10,11/10,1,7,true," in out
    code, _, err = run(["run", "--strategy", "expbalancing", "--instance", str(path)], capsys)
    assert code == 1 and err


def test_worst_and_minimax(tmp_path, capsys):
    path = tmp_path / "w1.json"
    dump_instance(gen_westphal(1, Fraction(1, 100)), path)
    code, out, _ = run(["worst", "--strategy", "reposition", "--instance", str(path)], capsys)
    assert code == 0 and out.splitlines()[0] == "ratio=301/101"
    assert run(["minimax", "--instance", str(path)], capsys)[:2] == (0, "301/101\n")


def test_minimax_needs_universe(fig5_file, capsys):
    code, _, err = run(["minimax", "--instance", str(fig5_file)], capsys)
    assert code == 4 and "universe" in err


def test_gen_round_trip_is_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        assert dispatch(["gen", "random", "--n", "9", "--seed", "3", "--weights", "stretch:4",
                         "--out", str(out)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert run(["validate", str(a)], capsys)[0] == 0
    rows = [run(["run", "--strategy", "expbalancing", "--instance", str(a)], capsys)[1] for _ in range(2)]
    assert rows[0] == rows[1]


@pytest.mark.parametrize("kind,args", [("shell", ["--n", "4"]), ("westphal", ["--k", "2"]),
                                       ("hfamily", ["--i", "2"])])
def test_gen_kinds(kind, args, capsys):
    code, out, _ = run(["gen", kind, *args], capsys)
    assert code == 0 and "universe" in json.loads(out)


def test_cert(tmp_path, capsys):
    out_file = tmp_path / "c.json"
    code, out, _ = run(["cert", "--eps", "0.1", "--out", str(out_file)], capsys)
    assert code == 0
    lines = dict(line.split("=", 1) for line in out.splitlines())
    assert lines["j"] == "29" and lines["verified"] == "true" and lines["clamped"] == "11"
    assert json.loads(out_file.read_text())["j"] == 29


def test_gk(capsys):
    assert run(["gk", "--k", "1"], capsys)[:2] == (0, "0\n")
    code, out, _ = run(["gk", "--k", "1000000", "--report"], capsys)
    assert out.splitlines()[0] == "3.5555357052"
    assert "ln k / ln ln k = 5.26146" in out


def test_sweep(tmp_path, capsys):
    corpus = tmp_path / "corpus"
    corpus.mkdir()
    for name in ("fig5", "fig6", "fig3"):
        dump_instance(fixture(name), corpus / f"{name}.json")
    report = tmp_path / "r.csv"
    code, out, _ = run(["sweep", "--corpus", str(corpus), "--strategy", "expbalancing",
                        "--report", str(report)], capsys)
    assert code == 0
    lines = report.read_text().splitlines()
    assert lines[0] == HEADER
    assert [line.split(",")[0] for line in lines[1:]] == ["fig3", "fig5", "fig6"]


def test_report_rows():
    row = ExperimentRow("b", "x", 1, Fraction(20), Fraction(2), Fraction(10), Fraction(9), 0, 3)
    other = ExperimentRow("a", "x", 1, Fraction(3, 2), Fraction(1), Fraction(3, 2), Fraction(9), 0, 3)
    text = write_report([row, other])
    assert text.splitlines()[1] == "a,x,1,3/2,1,3/2,9,true,0,3"
    assert text.splitlines()[2] == "b,x,1,20,2,10,9,false,0,3"
    with pytest.raises(OSError):
        write_report([])
