import csv
import io
import json
import math

import pytest

from walshkit.cli import RunConfig, main, run


def invoke(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_lebesgue_table(capsys):
    code, out, _ = invoke(capsys, "lebesgue", "--max", "5")
    assert code == 0
    assert out == (
        "n,V,norm_num,norm_exp,norm_float,lower_ok,upper_ok\n"
        "1,2,1,0,1.0,true,true\n"
        "2,2,1,0,1.0,true,true\n"
        "3,2,3,1,1.5,true,true\n"
        "4,2,1,0,1.0,true,true\n"
        "5,4,7,2,1.75,true,true\n"
    )


def test_divergence_single_record(capsys):
    code, out, _ = invoke(capsys, "divergence", "--n-min", "1", "--n-max", "1", "--phi", "one")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == ["n", "block_sum", "phi_at_block", "ratio", "path"]
    assert len(rows) == 1
    expected = 1 / (3 * math.log(4) ** 2) + 1 / (4 * math.log(5) ** 2)
    assert float(rows[0]["block_sum"]) == pytest.approx(expected, rel=1e-15)
    assert rows[0]["path"] == "1d"


def test_divergence_json_and_oracle(capsys):
    code, out, _ = invoke(capsys, "divergence", "--n-min", "0", "--n-max", "3",
                          "--phi", "power", "--alpha", "0.5", "--oracle", "--out", "json")
    assert code == 0
    recs = [json.loads(line) for line in out.splitlines()]
    assert [r["n"] for r in recs] == [0, 1, 2, 3]
    assert all(r["path"] == "2d" for r in recs)


def test_divergence_log_base_two(capsys):
    _, e_out, _ = invoke(capsys, "divergence", "--n-min", "3", "--n-max", "3", "--phi", "one")
    _, t_out, _ = invoke(capsys, "divergence", "--n-min", "3", "--n-max", "3", "--phi", "one",
                         "--log-base", "2")
    e = float(list(csv.DictReader(io.StringIO(e_out)))[0]["block_sum"])
    t = float(list(csv.DictReader(io.StringIO(t_out)))[0]["block_sum"])
    assert t == pytest.approx(e * math.log(2) ** 2)


def test_fine(capsys):
    code, out, _ = invoke(capsys, "fine", "--max-n", "16", "--variant", "variation")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [int(r["n"]) for r in rows] == [2, 4, 8, 16]
    assert float(rows[1]["ratio"]) == pytest.approx(8 / (4 * math.log(4)))


def test_counterexample_table(capsys):
    code, out, _ = invoke(capsys, "counterexample", "--n-max", "3")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 4
    for r in rows:
        assert r["l1"] == r["h1"] == "1/2^0"
        assert r["coefficients_ok"] == r["closed_form_ok"] == "true"


def test_hardy_json(capsys):
    code, out, _ = invoke(capsys, "hardy", "--family", "counterexample", "--n", "3")
    assert code == 0
    assert json.loads(out) == {"l1": "1/2^0", "h1": "1/2^0", "h1_float": 1.0}
    code, out, _ = invoke(capsys, "hardy", "--family", "dirichlet", "--n", "3", "--p", "0.5")
    rec = json.loads(out)
    assert rec["l1"] == "3/2^1"
    assert "hp_float" in rec


@pytest.mark.parametrize("family", ["constant", "walsh", "walsh-tensor", "difference"])
def test_hardy_unit_families(capsys, family):
    code, out, _ = invoke(capsys, "hardy", "--family", family, "--n", "2")
    assert code == 0
    assert json.loads(out)["h1"] == "1/2^0"


def test_kernel_dump(capsys):
    code, out, _ = invoke(capsys, "kernel-dump", "--kind", "dirichlet", "--n", "3")
    assert code == 0
    assert out.splitlines() == [
        "cell_index,value_numerator,value_exponent,value_float",
        "0,3,0,3.0", "1,1,0,1.0", "2,1,0,1.0", "3,-1,0,-1.0"]


def test_kernel_dump_spectrum(capsys):
    code, out, _ = invoke(capsys, "kernel-dump", "--kind", "dirichlet", "--n", "3", "--spectrum")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "coeff_index,value_numerator,value_exponent,value_float"
    assert [line.split(",")[1] for line in lines[1:]] == ["1", "1", "1", "0"]


def test_kernel_dump_2d_row_major(capsys):
    code, out, _ = invoke(capsys, "kernel-dump", "--kind", "counterexample", "--n", "0")
    assert code == 0
    assert [line.split(",")[1] for line in out.splitlines()[1:]] == ["1", "-1", "-1", "1"]


def test_output_file(tmp_path, capsys):
    path = tmp_path / "t.csv"
    code, out, _ = invoke(capsys, "lebesgue", "--max", "3", "--output", str(path))
    assert code == 0 and out == ""
    assert path.read_text().startswith("n,V,")


def test_cap_refusal_exit_status(capsys):
    code, out, err = invoke(capsys, "counterexample", "--n-max", "12")
    assert code == 2 and out == "" and "refused" in err
    code, _, _ = invoke(capsys, "divergence", "--n-max", "15")
    assert code == 2
    code, _, _ = invoke(capsys, "divergence", "--n-max", "8", "--oracle")
    assert code == 2
    code, _, _ = invoke(capsys, "kernel-dump", "--kind", "dirichlet", "--n", "5", "--cap-1d", "2")
    assert code == 2


def test_validation_exit_status(capsys):
    assert invoke(capsys, "lebesgue", "--max", "0")[0] == 1
    assert invoke(capsys, "divergence", "--n-min", "4", "--n-max", "2")[0] == 1
    assert invoke(capsys, "fine", "--max-n", "1")[0] == 1
    assert invoke(capsys, "no-such-command")[0] == 1
    assert invoke(capsys, "lebesgue", "--threads", "0")[0] == 1
    code, _, err = invoke(capsys, "lebesgue", "--out", "text")
    assert code == 1 and err.count("\n") == 1


def test_verify_kernels_suite(capsys):
    code, out, _ = invoke(capsys, "verify", "--suite", "kernels")
    assert code == 0
    lines = out.splitlines()
    assert all(line.startswith("PASS kernels.") for line in lines[:-1])
    assert lines[-1] == f"{len(lines) - 1}/{len(lines) - 1} checks passed"


def test_thread_env_var(monkeypatch):
    monkeypatch.setenv("WALSHKIT_THREADS", "3")
    assert RunConfig("lebesgue", {"max": 3}).threads == 3
    assert RunConfig("lebesgue", {"max": 3}, thread_count=1).threads == 1


def test_thread_count_does_not_change_output():
    outs = []
    for threads in (1, 4):
        buf = io.StringIO()
        run(RunConfig("lebesgue", {"max": 700}, thread_count=threads), stdout=buf)
        outs.append(buf.getvalue())
    assert outs[0] == outs[1]
