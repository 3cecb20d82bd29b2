import json

import pytest
from click.testing import CliRunner

from genusmaps.cli import main


@pytest.fixture
def runner():
    return CliRunner()


class TestConstantsCommand:
    def test_tg_json_roundtrip(self, runner):
        result = runner.invoke(main, ["constants", "--tg", "1"])
        assert result.exit_code == 0
        record = json.loads(result.output)
        assert json.loads(json.dumps(record)) == record
        out = record["outputs"][0]
        assert out["name"] == "t_1"
        assert out["value"].startswith("0.041666")
        assert out["provenance"] == "exact-recursion"

    def test_t0_value(self, runner):
        result = runner.invoke(main, ["constants", "--tg", "0"])
        record = json.loads(result.output)
        assert record["outputs"][0]["value"].startswith("1.12837916709551")

    def test_pg_requires_v0_and_tags_conjectured(self, runner):
        result = runner.invoke(main, ["constants", "--pg", "2"])
        assert result.exit_code == 2
        result = runner.invoke(main, ["constants", "--pg", "2", "--v0", "1"])
        assert result.exit_code == 0
        out = json.loads(result.output)["outputs"][0]
        assert out["provenance"] == "conjectured"
        assert out["conjectured"] is True

    def test_graph_constants_table(self, runner):
        result = runner.invoke(main, ["constants", "--graph-constants"])
        assert result.exit_code == 0
        record = json.loads(result.output)
        names = {o["name"] for o in record["outputs"]}
        assert {"x3", "x2", "x1", "x0", "beta3", "beta2", "beta1", "beta0",
                "alpha3", "alpha2", "alpha1", "alpha0", "t_hat"} <= names

    def test_no_selector_is_usage_error(self, runner):
        result = runner.invoke(main, ["constants"])
        assert result.exit_code == 2

    def test_env_precision_override(self, runner, monkeypatch):
        monkeypatch.setenv("GENUS_ASYM_PREC", "96")
        result = runner.invoke(main, ["constants", "--tg", "0"])
        assert json.loads(result.output)["precision_bits"] == 96
        monkeypatch.setenv("GENUS_ASYM_PREC", "banana")
        result = runner.invoke(main, ["constants", "--tg", "0"])
        assert result.exit_code == 2


class TestMapsCommand:
    def test_r1_components(self, runner):
        result = runner.invoke(
            main, ["maps", "-g", "1", "-k", "2", "-n", "1000", "-m", "2000"])
        assert result.exit_code == 0
        record = json.loads(result.output)
        by_name = {o["name"]: o for o in record["outputs"]}
        assert float(by_name["r"]["value"]) == pytest.approx(1.0)
        assert float(by_name["per_vertex_base"]["value"]) == pytest.approx(1.0)
        assert float(by_name["per_edge_base"]["value"]) == pytest.approx(27 / 4)
        assert "log10" in by_name["map_count"]

    def test_density_error_exit_code(self, runner):
        result = runner.invoke(
            main, ["maps", "-g", "0", "-k", "3", "-n", "100", "-m", "500"])
        assert result.exit_code == 3
        assert "density interval" in result.output

    def test_mean_and_variance(self, runner):
        result = runner.invoke(
            main, ["maps", "-g", "0", "-k", "3", "-n", "1000",
                   "--mean-edges", "--variance"])
        assert result.exit_code == 0
        by_name = {o["name"]: o for o in json.loads(result.output)["outputs"]}
        assert float(by_name["mean_edges"]["value"]) == pytest.approx(2411.44, abs=0.01)

    def test_mean_for_k1_is_domain_error(self, runner):
        result = runner.invoke(
            main, ["maps", "-g", "0", "-k", "1", "-n", "1000", "--mean-edges"])
        assert result.exit_code == 3


class TestGraphsCommand:
    def test_vertices_only_k3(self, runner):
        result = runner.invoke(
            main, ["graphs", "-g", "0", "-k", "3", "-n", "1000",
                   "--vertices-only"])
        assert result.exit_code == 0
        by_name = {o["name"]: o for o in json.loads(result.output)["outputs"]}
        assert by_name["externally_sourced"]["value"] == "False"

    def test_bivariate_2conn(self, runner):
        result = runner.invoke(
            main, ["graphs", "-g", "2", "-k", "2", "-n", "500", "-m", "1000"])
        assert result.exit_code == 0
        by_name = {o["name"]: o for o in json.loads(result.output)["outputs"]}
        assert float(by_name["graph_count_over_nfact"]["log10"]) > 0

    def test_k1_bivariate_is_usage_error(self, runner):
        result = runner.invoke(
            main, ["graphs", "-g", "1", "-k", "1", "-n", "100", "-m", "200"])
        assert result.exit_code == 2


class TestOracleCommand:
    def test_m1_totals(self, runner):
        result = runner.invoke(main, ["oracle", "--edges", "1"])
        assert result.exit_code == 0
        by_name = {o["name"]: o for o in json.loads(result.output)["outputs"]}
        assert by_name["total_rooted_maps"]["value"] == "2"
        assert by_name["genus_0"]["value"] == "2"

    def test_m3_genus0_total(self, runner):
        result = runner.invoke(main, ["oracle", "--edges", "3"])
        by_name = {o["name"]: o for o in json.loads(result.output)["outputs"]}
        assert by_name["genus_0"]["value"] == "54"

    def test_csv_output_and_file(self, runner, tmp_path):
        out = tmp_path / "census.csv"
        result = runner.invoke(
            main, ["oracle", "--edges", "2", "--format", "csv",
                   "--out", str(out)])
        assert result.exit_code == 0
        header = "edges,vertices,faces,genus,connectivity,count"
        assert result.output.startswith(header)
        assert out.read_text().startswith(header)

    def test_resource_guard_exit_code(self, runner):
        result = runner.invoke(main, ["oracle", "--edges", "6"])
        assert result.exit_code == 4


class TestCheckCommand:
    def test_constants_suite_reports_known_failures(self, runner):
        # beta3/alpha3 published values are inconsistent with their own
        # closed forms, so this suite fails honestly with exactly those two
        result = runner.invoke(main, ["check", "--suite", "constants"])
        assert result.exit_code == 1
        payload = json.loads(result.output)
        failed = {r["name"] for r in payload["results"] if not r["passed"]}
        assert failed == {"constants.table.beta3", "constants.table.alpha3"}

    def test_text_format_lines(self, runner):
        result = runner.invoke(
            main, ["check", "--suite", "constants", "--format", "text"])
        assert "[PASS]" in result.output
        assert "constants.t_g_reproduction" in result.output
