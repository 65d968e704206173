import csv
import json
import re

import numpy as np
import pytest

from paretosel.cli import main
from paretosel.fixtures import load_points, table2_points
from paretosel.pareto import pareto_frontier
from paretosel.svgplot import render_frontier_svg

from conftest import poisson_dataset

STARRED6 = "area + precip + precip^2 + temp + temp^2"


@pytest.fixture
def avian_csv(tmp_path):
    d = poisson_dataset()
    path = tmp_path / "avian.csv"
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["state", "richness", "area", "temp", "precip"])
        for i in range(d.n):
            w.writerow([f"S{i:02d}", int(d.response[i]), *(repr(float(d.covariates[c][i]))
                                                            for c in ("area", "temp", "precip"))])
    return path


@pytest.fixture
def gaussian_csv(tmp_path, gaussian_data):
    path = tmp_path / "g.csv"
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["y", *gaussian_data.covariates])
        for i in range(gaussian_data.n):
            w.writerow([repr(float(gaussian_data.response[i])),
                        *(repr(float(c[i])) for c in gaussian_data.covariates.values())])
    return path


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


class TestFit:
    def test_paper_models(self, avian_csv, tmp_path):
        out = tmp_path / "fits.csv"
        assert main(["fit", "--data", str(avian_csv), "--response", "richness",
                     "--models", "paper", "--output", str(out)]) == 0
        rows = read_csv(out)
        assert len(rows) == 24
        assert all(r["converged"] == "1" for r in rows)
        assert {r["n"] for r in rows} == {"49"}
        assert all(int(r["f2"]) == int(r["p"]) for r in rows)

    def test_enumerate(self, avian_csv, tmp_path):
        out = tmp_path / "fits.csv"
        assert main(["fit", "--data", str(avian_csv), "--response", "richness",
                     "--enumerate", "--output", str(out)]) == 0
        assert len(read_csv(out)) == 27

    def test_null_only(self, avian_csv, tmp_path):
        models = tmp_path / "m.txt"
        models.write_text("# null\n1\n")
        out = tmp_path / "fits.csv"
        assert main(["fit", "--data", str(avian_csv), "--response", "richness",
                     "--models", str(models), "--output", str(out)]) == 0
        (row,) = read_csv(out)
        assert row["f2"] == "1" and row["label"] == "1"

    def test_empty_list(self, avian_csv, tmp_path):
        models = tmp_path / "m.txt"
        models.write_text("# nothing\n")
        assert main(["fit", "--data", str(avian_csv), "--response", "richness",
                     "--models", str(models), "--output", str(tmp_path / "o.csv")]) == 2

    def test_constant_flag(self, avian_csv, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        base = ["fit", "--data", str(avian_csv), "--response", "richness", "--models", "paper"]
        main(base + ["--output", str(a)])
        main(base + ["--no-constant", "--output", str(b)])
        diffs = {round(float(x["f1"]) - float(y["f1"]), 6)
                 for x, y in zip(read_csv(a), read_csv(b))}
        assert len(diffs) == 1 and diffs.pop() > 0

    def test_results_feed_rank(self, avian_csv, tmp_path, capsys):
        out = tmp_path / "fits.csv"
        main(["fit", "--data", str(avian_csv), "--response", "richness",
              "--models", "paper", "--output", str(out)])
        assert load_points(out).n == 49
        assert main(["rank", "--fixture", str(out), "--criterion", "bic"]) == 0

    def test_missing_data_file(self, tmp_path):
        assert main(["fit", "--data", str(tmp_path / "x.csv"), "--response", "y",
                     "--models", "paper", "--output", str(tmp_path / "o.csv")]) == 2

    def test_models_and_enumerate(self, avian_csv, tmp_path):
        assert main(["fit", "--data", str(avian_csv), "--response", "richness",
                     "--models", "paper", "--enumerate", "--output", str(tmp_path / "o")]) == 1


class TestRank:
    def test_aic_fixture(self, capsys, tmp_path):
        out = tmp_path / "rank.csv"
        assert main(["rank", "--fixture", "paper", "--criterion", "aic",
                     "--output", str(out)]) == 0
        assert f"top model: {STARRED6}" in capsys.readouterr().out
        rows = read_csv(out)
        assert rows[0]["label"] == STARRED6 and float(rows[0]["delta"]) == 0.0
        assert list(rows[0]) == ["rank", "label", "p", "f1", "f2", "score", "delta"]

    def test_bic_fixture(self, capsys):
        assert main(["rank", "--fixture", "paper", "--criterion", "bic"]) == 0
        assert f"top model: {STARRED6}" in capsys.readouterr().out

    def test_nonsense(self, capsys):
        assert main(["rank", "--fixture", "paper", "--criterion", "nonsense"]) == 1
        assert "valid: aic" in capsys.readouterr().err

    def test_argparse_errors_exit_one(self):
        with pytest.raises(SystemExit) as exc:
            main(["plot", "--fixture", "paper"])
        assert exc.value.code == 1

    def test_unknown_criterion_lists_valid(self, capsys):
        code = main(["rank", "--fixture", "paper", "--criterion", "ridge"])
        assert code == 1
        assert "aic, aicc, qaic, qaicc, bic" in capsys.readouterr().err

    def test_live_fit(self, avian_csv, capsys):
        assert main(["rank", "--data", str(avian_csv), "--response", "richness",
                     "--models", "paper", "--criterion", "qaic"]) == 0

    def test_rank_winner_on_frontier(self, avian_csv, tmp_path):
        out, front = tmp_path / "r.csv", tmp_path / "f.json"
        src = ["--data", str(avian_csv), "--response", "richness", "--enumerate"]
        main(["frontier", *src, "--output", str(front)])
        ids = json.loads(front.read_text())["frontier_ids"]
        for crit in ("aic", "aicc", "bic", "qaic", "qaicc"):
            main(["rank", *src, "--criterion", crit, "--output", str(out)])
            assert read_csv(out)[0]["label"] in ids


class TestFrontier:
    def test_fixture(self, tmp_path, capsys):
        out = tmp_path / "f.json"
        assert main(["frontier", "--fixture", "paper", "--output", str(out)]) == 0
        assert "6 Pareto optimal, 18 dominated of 24" in capsys.readouterr().out
        doc = json.loads(out.read_text())
        assert len(doc["frontier_ids"]) == 6

    def test_single(self, tmp_path):
        fx = tmp_path / "one.csv"
        fx.write_text("label,f1,f2\nonly,10.0,2\n")
        out = tmp_path / "f.json"
        assert main(["frontier", "--fixture", str(fx), "--output", str(out)]) == 0
        assert json.loads(out.read_text())["frontier_ids"] == ["only"]

    def test_bad_fixture(self, tmp_path):
        fx = tmp_path / "bad.csv"
        fx.write_text("label,f1\nx,1\n")
        assert main(["frontier", "--fixture", str(fx)]) == 2

    def test_fixture_with_data_is_usage_error(self, avian_csv):
        assert main(["frontier", "--fixture", "paper", "--data", str(avian_csv)]) == 1


class TestPlot:
    def test_fixture(self, tmp_path):
        out = tmp_path / "p.svg"
        assert main(["plot", "--fixture", "paper", "--output", str(out)]) == 0
        svg = out.read_text()
        assert len(re.findall(r'<circle class="(?:frontier|dominated)"', svg)) == 24
        assert len(re.findall(r'<circle class="frontier"', svg)) == 6
        poly = re.search(r'<polyline class="frontier-line" points="([^"]+)"', svg).group(1)
        assert len(poly.split()) == 6
        assert 'class="highlight"' not in svg

    def test_highlight_aic(self, tmp_path):
        out = tmp_path / "p.svg"
        assert main(["plot", "--fixture", "paper", "--highlight", "aic",
                     "--output", str(out)]) == 0
        svg = out.read_text()
        m = re.search(r'<circle class="highlight"[^>]*><title>([^<]+)</title>', svg)
        assert m.group(1) == STARRED6

    def test_deterministic(self, tmp_path):
        a, b = tmp_path / "a.svg", tmp_path / "b.svg"
        main(["plot", "--fixture", "paper", "--highlight", "bic", "--output", str(a)])
        main(["plot", "--fixture", "paper", "--highlight", "bic", "--output", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_parses_as_xml(self):
        import xml.etree.ElementTree as ET
        root = ET.fromstring(render_frontier_svg(pareto_frontier(table2_points())))
        assert root.tag.endswith("svg")


class TestSensitivity:
    def test_fixture(self, capsys, tmp_path):
        out = tmp_path / "s.csv"
        assert main(["sensitivity", "--fixture", "paper", "--criterion", "aic,aicc,bic",
                     "--output", str(out)]) == 0
        assert "agreement: yes" in capsys.readouterr().out
        rows = read_csv(out)
        assert {r["label"] for r in rows} == {STARRED6} and len(rows) == 3

    def test_single_criterion(self):
        assert main(["sensitivity", "--fixture", "paper", "--criterion", "aic"]) == 1

    def test_adversarial(self, tmp_path, capsys):
        fx = tmp_path / "adv.csv"
        fx.write_text("label,f1,f2\n" + "".join(
            f"p{p},{100 - 1.5 * p},{p}\n" for p in range(1, 6)))
        assert main(["sensitivity", "--fixture", str(fx), "--n", "49",
                     "--criterion", "aic", "--criterion", "bic"]) == 0
        assert "agreement: no" in capsys.readouterr().out


class TestPath:
    def run(self, gaussian_csv, tmp_path, *extra):
        out = tmp_path / "path.csv"
        code = main(["path", "--data", str(gaussian_csv), "--response", "y", *extra,
                     "--output", str(out)])
        return code, (read_csv(out) if code == 0 else None)

    def test_ridge(self, gaussian_csv, tmp_path, gaussian_data):
        code, rows = self.run(gaussian_csv, tmp_path, "--penalty", "ridge", "--grid", "0,1,10")
        assert code == 0 and len(rows) == 3
        from paretosel.data import ModelSpec, build_design_matrix
        from paretosel.glm import fit_gaussian_ols
        spec = ModelSpec(tuple((c, 1) for c in gaussian_data.covariates))
        ols = fit_gaussian_ols(build_design_matrix(gaussian_data, spec), gaussian_data.response)
        first = [float(rows[0][k]) for k in ("(Intercept)", "x0", "x1", "x2", "x3")]
        np.testing.assert_allclose(first, ols.coefficients, atol=1e-6)

    def test_lasso_large(self, gaussian_csv, tmp_path):
        code, rows = self.run(gaussian_csv, tmp_path, "--penalty", "lasso",
                              "--grid", "0,10,1e6")
        assert code == 0
        assert all(float(rows[-1][k]) == 0.0 for k in ("x0", "x1", "x2", "x3"))

    def test_descending(self, gaussian_csv, tmp_path):
        code, _ = self.run(gaussian_csv, tmp_path, "--penalty", "ridge", "--grid", "10,1")
        assert code == 1
