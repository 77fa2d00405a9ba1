import json

import pytest

from hallforge.cli import main
from hallforge.hall import HallElement, TensorElement


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_orbits_table(capsys):
    code, out, _ = run(capsys, "orbits", "--quiver", "A2", "--p", "2", "--dim", "1,1")
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 3
    assert lines[0].split()[0] == "id"


def test_orbits_zero_and_jordan(capsys):
    code, out, _ = run(capsys, "orbits", "--quiver", "A2", "--p", "3", "--dim", "0,0", "--format", "json")
    assert code == 0 and [json.loads(l)["id"] for l in out.splitlines()] == ["0,0:0"]
    code, out, _ = run(capsys, "orbits", "--quiver", "Jordan", "--p", "3", "--dim", "1", "--format", "json")
    rows = [json.loads(l) for l in out.splitlines()]
    assert len(rows) == 3 and all(r["aut"] == 2 and r["absolutely_indecomposable"] for r in rows)


def test_orbits_csv(capsys):
    code, out, _ = run(capsys, "orbits", "--quiver", "Kronecker", "--p", "2", "--dim", "1,1", "--format", "csv")
    lines = out.strip().splitlines()
    assert lines[0] == "id,dim,orbit_size,aut,indecomposable,absolutely_indecomposable,min_field_degree"
    assert len(lines) == 5


def test_quiver_file(capsys, tmp_path):
    path = tmp_path / "loop.json"
    path.write_text(json.dumps({"vertices": ["x"], "arrows": [{"src": "x", "tgt": "x"}]}))
    code, out, _ = run(capsys, "orbits", "--quiver", str(path), "--p", "2", "--dim", "1", "--format", "json")
    assert code == 0 and len(out.splitlines()) == 2


def test_hall_ops(capsys):
    base = ("--quiver", "A2", "--p", "2")
    assert run(capsys, "hall", "mul", "S1", "S2", *base)[1].strip() == "[1,1:0] + [1,1:1]"
    assert run(capsys, "hall", "antipode", "S1", *base)[1].strip() == "-[1,0:0]"
    code, out, _ = run(capsys, "hall", "pairing", "1,1:1", "1,1:1", "--quiver", "A2", "--p", "3")
    assert code == 0 and out.strip() == "1/2"


def test_hall_json_parses(capsys):
    base = ("--quiver", "A2", "--p", "2", "--format", "json")
    _, out, _ = run(capsys, "hall", "mul", "S1", "S2", "--twisted", *base)
    x = HallElement.from_json(out.strip())
    assert x.dumps() == out.strip()
    _, out, _ = run(capsys, "hall", "comul", "1,1:1", *base)
    t = TensorElement.from_json(out.strip())
    assert t.dumps() == out.strip()


def test_hall_input_errors(capsys):
    code, _, err = run(capsys, "hall", "comul", "1,1:9", "--quiver", "A2", "--p", "2")
    assert code == 2 and "unknown class id" in err
    code, _, err = run(capsys, "hall", "pairing", "S1", "--quiver", "A2", "--p", "2")
    assert code == 2
    code, _, _ = run(capsys, "hall", "mul", "S1", "--quiver", "A2", "--p", "2")
    assert code == 2


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["orbits", "--quiver", "A2", "--p", "0", "--dim", "1,1"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
    capsys.readouterr()
    assert run(capsys, "orbits", "--quiver", "E9", "--p", "2", "--dim", "1")[0] == 2
    assert run(capsys, "orbits", "--quiver", "A2", "--p", "4", "--dim", "1,1")[0] == 2
    assert run(capsys, "orbits", "--quiver", "A2", "--p", "2", "--dim", "1,1,1")[0] == 2


def test_size_guard_exit_3(capsys):
    code, _, err = run(capsys, "orbits", "--quiver", "Jordan", "--p", "3", "--dim", "3", "--max-points", "100")
    assert code == 3 and "size guard" in err


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "green", "--quiver", "A2", "--p", "2", "--limit-dim", "3")
    assert code == 0 and "green" in out.lower()
    code, out, _ = run(capsys, "verify", "serre", "--quiver", "A2", "--p", "3", "--format", "json")
    rows = [json.loads(l) for l in out.splitlines()]
    assert code == 0 and all(r["ok"] for r in rows)
    code, out, _ = run(capsys, "verify", "bialgebra", "--quiver", "Kronecker", "--p", "2", "--limit-dim", "1,1", "--format", "csv")
    assert code == 0 and out.splitlines()[0] == "sweep,checked,failed,diagnostics,ok"


def test_verify_all_jordan(capsys):
    code, out, _ = run(capsys, "verify", "all", "--quiver", "Jordan", "--p", "2", "--limit-dim", "2", "--format", "json")
    rows = [json.loads(l) for l in out.splitlines()]
    assert code == 0 and len(rows) >= 8 and all(r["ok"] for r in rows)
    assert all("elapsed" not in r for r in rows)


def test_census(capsys):
    code, out, _ = run(capsys, "census", "--quiver", "Jordan", "--p", "2", "--dim", "1", "--s", "1", "2", "3", "--format", "json")
    rows = [json.loads(l) for l in out.splitlines()]
    assert code == 0
    assert [(r["s"], r["M_F_direct"], r["M_min"]) for r in rows] == [(1, 2, 2), (2, 3, 2), (3, 4, 6)]
    assert all(r["agree"] for r in rows)
    code, _, err = run(capsys, "census", "--quiver", "Jordan", "--p", "2")
    assert code == 2 and "--dim" in err


def _threads_output(capsys, threads, *argv):
    return run(capsys, *argv, "--threads", str(threads))[:2]


@pytest.mark.parametrize("argv", [
    ("verify", "all", "--quiver", "A2", "--p", "2", "--limit-dim", "3", "--format", "json"),
    ("census", "--quiver", "Kronecker", "--p", "2", "--dim", "1,1", "--dim", "1,2", "--s", "1", "2"),
    ("orbits", "--quiver", "Kronecker", "--p", "3", "--dim", "1,1", "--dim", "2,1", "--format", "json"),
], ids=lambda a: a[0])
def test_threads_do_not_change_output(capsys, argv):
    assert _threads_output(capsys, 1, *argv) == _threads_output(capsys, 8, *argv)
