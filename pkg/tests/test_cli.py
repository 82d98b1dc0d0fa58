import json

from braidrep.cli import main

TARGET_ROWS = ["481,-880,800,-400", "480,-879,800,-400",
               "480,-880,801,-400", "480,-880,800,-399"]


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_rep_pipeline_evaluated(capsys):
    code, out, _ = run(capsys, "rep", "BIGELOW5", "--group", "B5",
                       "--pipeline", "pk-fd", "--k", "1", "--d", "2",
                       "--eval", "t=-1,s=1")
    assert code == 0
    assert out.splitlines() == TARGET_ROWS


def test_example_command(capsys):
    code, out, _ = run(capsys, "example")
    assert code == 0
    rows = [line for line in out.splitlines() if not line.startswith("#")]
    assert rows == TARGET_ROWS
    assert any("identity: True" in line for line in out.splitlines())


def test_parse_command(capsys):
    code, out, _ = run(capsys, "parse", "comm(s1; s3)", "--group", "B4")
    assert code == 0
    assert out.splitlines()[0] == "s1 s3 s1^-1 s3^-1"
    code, out, _ = run(capsys, "parse", "s1 s2", "--group", "B4", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["group"]["family"] == "B"
    assert len(data["letters"]) == 2


def test_rep_symbolic_output(capsys):
    code, out, _ = run(capsys, "rep", "z", "--group", "CPB3", "--rep", "rho")
    assert code == 0
    assert out.splitlines() == ["0,1,0", "0,0,1", "1,0,0"]


def test_map_command(capsys):
    code, out, _ = run(capsys, "map", "A[1,2] A[2,3]^-1", "--group", "B3",
                       "--pk", "3", "--fd", "2")
    assert code == 0
    assert out.splitlines()[0] == "s1^3 z t1 z"
    assert "VCB2" in out


def test_check_commands(capsys):
    code, out, _ = run(capsys, "check", "--rep", "rho", "--group", "VCB3")
    assert code == 0 and "PASS" in out
    code, out, _ = run(capsys, "check", "--cocycle", "--n", "3", "--k", "2",
                       "--d", "2")
    assert code == 0 and "PASS" in out
    code, out, _ = run(capsys, "check", "--oracle", "--n", "4", "--k", "1",
                       "--d", "1", "--count", "2", "--factors", "1")
    assert code == 0 and "PASS" in out


def test_check_oracle_fails_with_flipped_reading(capsys):
    code, out, _ = run(capsys, "check", "--oracle", "--n", "4", "--k", "1",
                       "--d", "1", "--count", "2", "--factors", "1",
                       "--over-nearer")
    assert code == 1
    assert "FAIL" in out


def test_geom_extraction_matches_rep(capsys):
    code, out, _ = run(capsys, "geom", "--synth", "A[1,3]", "--group", "B4",
                       "--project-pk", "2", "--emit-matrix",
                       "--eval", "t=-1,s=1")
    assert code == 0
    lines = out.splitlines()
    assert "CPB3" in lines[1]
    code2, out2, _ = run(capsys, "rep", lines[0], "--group", "CPB3",
                         "--rep", "rho", "--eval", "t=-1,s=1")
    assert code2 == 0
    assert out2.splitlines() == lines[2:]


def test_geom_emit_braid_and_events(capsys, tmp_path):
    code, out, _ = run(capsys, "geom", "--synth", "A[1,3]", "--group", "B4",
                       "--emit-braid")
    assert code == 0
    data = json.loads(out)
    assert data["n"] == 4 and data["pure"]
    path = tmp_path / "braid.json"
    path.write_text(out)
    code, out, _ = run(capsys, "geom", "--in", str(path), "--project-pk", "2",
                       "--emit-events")
    assert code == 0
    events, end = json.JSONDecoder().raw_decode(out)
    assert all("t" in e and "kind" in e for e in events)
    assert "CPB3" in out[end:]  # projected word follows the event list


def test_geom_svg(capsys, tmp_path):
    target = tmp_path / "out.svg"
    code, out, _ = run(capsys, "geom", "--synth", "A[1,3]", "--group", "B4",
                       "--project-pk", "2", "--svg", str(target))
    assert code == 0
    assert target.read_text().startswith("<svg")


def test_exit_code_syntax_error(capsys):
    code, _, err = run(capsys, "parse", "s1^", "--group", "B4")
    assert code == 2 and "error:" in err
    code, _, err = run(capsys, "parse", "s9", "--group", "B4")
    assert code == 2
    code, _, err = run(capsys, "rep", "s1", "--group", "B4",
                       "--rep", "rho-tilde")
    assert code == 2  # incompatible representation


def test_exit_code_purity(capsys):
    code, _, err = run(capsys, "map", "s1", "--group", "B4", "--pk", "1")
    assert code == 3


def test_exit_code_nonzero_linking(capsys):
    code, _, err = run(capsys, "geom", "--synth", "A[1,2]", "--group", "B4",
                       "--psi", "3", "4")
    assert code == 5


def test_exit_code_genericity(capsys):
    code, _, err = run(capsys, "geom", "--synth", "A[1,2]", "--group", "B4",
                       "--perturb", "0.5")
    assert code == 4


def test_eval_argument_validation(capsys):
    code, _, err = run(capsys, "rep", "s1", "--group", "B5",
                       "--rep", "burau-reduced", "--eval", "t=0,s=1")
    assert code == 2
    code, _, err = run(capsys, "rep", "s1", "--group", "B5",
                       "--rep", "burau-reduced", "--eval", "q=3")
    assert code == 2


def test_rep_rational_eval(capsys):
    code, out, _ = run(capsys, "rep", "s1", "--group", "B5",
                       "--rep", "burau-unreduced", "--eval", "t=1/2,s=1")
    assert code == 0
    assert out.splitlines()[0] == "1/2,1/2,0,0,0"
