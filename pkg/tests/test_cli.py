import json

import numpy as np
import pytest
from click.testing import CliRunner

from qeuler import jsonio, state_from_two_unitary, two_unitarity_defect
from qeuler.cli import main


@pytest.fixture
def runner():
    return CliRunner()


def invoke(runner, *args, **kwargs):
    return runner.invoke(main, list(args), catch_exceptions=False, **kwargs)


# ---------------------------------------------------------------------------
# design commands


def test_gen_latin_square_to_stdout(runner):
    result = invoke(runner, "design", "gen", "--kind", "ls", "--order", "4")
    assert result.exit_code == 0
    kind, cells = jsonio.design_from_json(json.loads(result.output))
    assert kind == "ls"
    assert cells.shape == (4, 4)


def test_gen_writes_file_and_verify_passes(runner, tmp_path):
    path = tmp_path / "pair.json"
    result = invoke(
        runner, "design", "gen", "--kind", "ols", "--order", "5", "--out", str(path)
    )
    assert result.exit_code == 0
    assert f"wrote {path}" in result.output
    check = invoke(runner, "design", "verify", "--in", str(path))
    assert check.exit_code == 0
    assert "ols: PASS" in check.output


def test_gen_mols_order_six_is_a_math_failure(runner):
    result = invoke(runner, "design", "gen", "--kind", "mols", "--order", "6")
    assert result.exit_code == 1
    assert "failed:" in result.output
    assert "order 6" in result.output


def test_gen_cards_rendering(runner):
    result = invoke(
        runner, "design", "gen", "--kind", "ols", "--order", "3",
        "--render", "cards",
    )
    assert result.exit_code == 0
    # the order-3 construction holds (x+y, 2x+y) at cell (x, y)
    assert "A♠ K♦ Q♣" in result.output
    assert "K♣ Q♠ A♦" in result.output
    assert "Q♦ A♣ K♠" in result.output


def test_gen_digit_rendering(runner):
    result = invoke(
        runner, "design", "gen", "--kind", "ols", "--order", "3",
        "--render", "digits",
    )
    assert result.exit_code == 0
    assert "00 11 22" in result.output


def test_no_rendering_without_the_flag(runner):
    result = invoke(runner, "design", "gen", "--kind", "ols", "--order", "3")
    assert "♠" not in result.output


def test_verify_reports_violations_and_fails(runner, tmp_path):
    cells = np.array([[0, 1, 2], [1, 2, 0], [2, 0, 1]])
    cells[0, 0] = 1  # duplicate symbol in row 0 and column 0
    path = tmp_path / "bad.json"
    jsonio.save_json(jsonio.design_to_json("ls", cells), path)
    result = invoke(runner, "design", "verify", "--in", str(path))
    assert result.exit_code == 1
    assert "latin: FAIL" in result.output
    assert "violation" in result.output


def test_verify_mols_checks_every_pair(runner, tmp_path):
    path = tmp_path / "mols.json"
    gen = invoke(
        runner, "design", "gen", "--kind", "mols", "--order", "4", "--out", str(path)
    )
    assert gen.exit_code == 0
    result = invoke(runner, "design", "verify", "--in", str(path))
    assert result.exit_code == 0
    assert "pair(0,1): PASS" in result.output
    assert "pair(1,2): PASS" in result.output
    assert "latin[2]: PASS" in result.output


def test_verify_missing_file_is_usage_error(runner, tmp_path):
    result = invoke(runner, "design", "verify", "--in", str(tmp_path / "no.json"))
    assert result.exit_code == 2


def test_verify_malformed_json_is_usage_error(runner, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    result = invoke(runner, "design", "verify", "--in", str(path))
    assert result.exit_code == 2
    assert "error:" in result.output


def test_encode_classic_pair(runner, tmp_path, classic_pair, p9):
    pair_path = tmp_path / "pair.json"
    jsonio.save_json(jsonio.design_to_json("ols", classic_pair), pair_path)
    out_path = tmp_path / "perm.json"
    result = invoke(
        runner, "design", "encode", "--in", str(pair_path), "--out", str(out_path)
    )
    assert result.exit_code == 0
    encoded = jsonio.matrix_from_json(jsonio.load_json(out_path))
    assert np.array_equal(encoded.real.astype(np.int64), p9)


def test_encode_rejects_wrong_kind(runner, tmp_path):
    path = tmp_path / "ls.json"
    jsonio.save_json(jsonio.design_to_json("ls", np.array([[0, 1], [1, 0]])), path)
    result = invoke(runner, "design", "encode", "--in", str(path))
    assert result.exit_code == 2


# ---------------------------------------------------------------------------
# state commands


def test_state_build_and_check_pass(runner, tmp_path, classic_pair):
    pair_path = tmp_path / "pair.json"
    jsonio.save_json(jsonio.design_to_json("ols", classic_pair), pair_path)
    state_path = tmp_path / "state.json"
    built = invoke(
        runner, "state", "build", "--from", "ols",
        "--in", str(pair_path), "--out", str(state_path),
    )
    assert built.exit_code == 0
    checked = invoke(runner, "state", "check", "--in", str(state_path))
    assert checked.exit_code == 0
    assert "PASS" in checked.output
    assert "max residual" in checked.output


def test_state_check_k_flag_and_failure(runner, tmp_path):
    amps = [[0.0, 0.0]] * 16
    amps[0] = [1.0, 0.0]
    path = tmp_path / "product.json"
    jsonio.save_json({"dims": [2, 2, 2, 2], "amplitudes": amps}, path)
    result = invoke(runner, "state", "check", "--in", str(path), "--k", "2")
    assert result.exit_code == 1
    assert "FAIL" in result.output
    assert "parties (0, 1)" in result.output


def test_state_build_from_matrix(runner, tmp_path, p9):
    m_path = tmp_path / "m.json"
    jsonio.save_json(jsonio.matrix_to_json(p9.astype(complex)), m_path)
    out = tmp_path / "state.json"
    built = invoke(
        runner, "state", "build", "--from", "matrix",
        "--in", str(m_path), "--out", str(out),
    )
    assert built.exit_code == 0
    psi = jsonio.state_from_json(jsonio.load_json(out))
    assert psi.dims == (3, 3, 3, 3)
    expected = state_from_two_unitary(p9.astype(complex))
    assert np.array_equal(psi.amplitudes, expected.amplitudes)


def test_state_build_kind_mismatch(runner, tmp_path):
    path = tmp_path / "ls.json"
    jsonio.save_json(jsonio.design_to_json("ls", np.array([[0, 1], [1, 0]])), path)
    result = invoke(runner, "state", "build", "--from", "ols", "--in", str(path))
    assert result.exit_code == 2


# ---------------------------------------------------------------------------
# search command


def test_search_converges_near_order_three_solution(runner, tmp_path, p9):
    base_path = tmp_path / "base.json"
    jsonio.save_json(jsonio.matrix_to_json(p9.astype(complex)), base_path)
    record = tmp_path / "record.json"
    best = tmp_path / "best.json"
    trace = tmp_path / "trace.csv"
    result = invoke(
        runner, "search", "--dim", "3", "--seeds", "4", "--rng-seed", "1",
        "--epsilon", "0.1", "--base-matrix", str(base_path),
        "--out", str(record), "--best-matrix", str(best),
        "--trace-csv", str(trace),
    )
    assert result.exit_code == 0
    assert "runs 4, converged" in result.output
    assert "best terminal defect" in result.output
    assert "converged after iterations:" in result.output

    doc = jsonio.load_json(record)
    assert doc["config"]["n_seeds"] == 4
    assert doc["summary"]["n_converged"] >= 1
    terminal = jsonio.matrix_from_json(jsonio.load_json(best))
    assert two_unitarity_defect(terminal) <= 1e-10
    assert trace.read_text().startswith("iteration,defect")


def test_search_zero_convergence_exits_one(runner):
    result = invoke(
        runner, "search", "--dim", "2", "--seeds", "3", "--max-iter", "60",
    )
    assert result.exit_code == 1
    assert "converged 0" in result.output


def test_search_env_var_seeds_the_sweep(runner, tmp_path, p9):
    base_path = tmp_path / "base.json"
    jsonio.save_json(jsonio.matrix_to_json(p9.astype(complex)), base_path)

    def run(env):
        out = tmp_path / f"r{env.get('QEULER_RNG_SEED', 'none')}.json"
        res = invoke(
            runner, "search", "--dim", "3", "--seeds", "1", "--max-iter", "10",
            "--base-matrix", str(base_path), "--out", str(out),
            env=env,
        )
        assert res.exit_code in (0, 1)
        return jsonio.load_json(out)

    doc = run({"QEULER_RNG_SEED": "42"})
    assert doc["config"]["rng_seed"] == 42
    assert doc["runs"][0]["seed"]["rng_seed"] == 42


def test_search_user_matrix_seed(runner, tmp_path, p9):
    m_path = tmp_path / "m.json"
    jsonio.save_json(jsonio.matrix_to_json(p9.astype(complex)), m_path)
    result = invoke(
        runner, "search", "--dim", "3", "--seeds", "1",
        "--seed-kind", "user-matrix", "--seed-matrix", str(m_path),
    )
    # the seed is already 2-unitary, so the search converges immediately
    assert result.exit_code == 0
    assert "converged after iterations: min 0" in result.output


def test_search_bad_dimension_is_usage_error(runner):
    result = invoke(runner, "search", "--dim", "1", "--seeds", "1")
    assert result.exit_code == 2


# ---------------------------------------------------------------------------
# bruteforce command


def test_bruteforce_order_four_finds_nothing(runner):
    result = invoke(runner, "bruteforce", "--dim", "2")
    assert result.exit_code == 0
    assert "searched 24 permutations of order 4" in result.output
    assert "0 found" in result.output


def test_bruteforce_out_of_reach_is_usage_error(runner):
    result = invoke(runner, "bruteforce", "--dim", "4")
    assert result.exit_code == 2
    assert "out of reach" in result.output


def test_missing_required_flag_is_usage_error(runner):
    result = invoke(runner, "search")
    assert result.exit_code == 2
