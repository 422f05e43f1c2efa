import xml.etree.ElementTree as ET

import pytest

from plane_supports.cli import main
from plane_supports.fileio import parse_hypergraph, parse_support, serialize_hypergraph
from plane_supports.model import ConstraintSet, Hypergraph, satisfies, total_length


X_CONFIG_HG = ("H 4 2\n"
               "V 0 0 0 1 0\n"
               "V 1 1 1 1 0\n"
               "V 2 0 1 1 1\n"
               "V 3 1 0 1 1\n")


def run(*argv):
    return main(list(argv))


def test_generate_solve_check_round_trip(tmp_path):
    hg_path = tmp_path / "inst.hg"
    sup_path = tmp_path / "inst.sup"
    assert run("generate", "--n", "14", "--k", "2", "--scheme", "mid",
               "--seed", "7", "--out", str(hg_path)) == 0
    assert run("solve", "--in", str(hg_path), "--algo", "local-search",
               "--constraints", "pt", "--out", str(sup_path), "--report") == 0
    h = parse_hypergraph(hg_path.read_text())
    g = parse_support(sup_path.read_text(), h)
    assert satisfies(g, h, ConstraintSet.from_label("pt"))
    assert run("check", "--in", str(hg_path), "--support", str(sup_path),
               "--constraints", "pt") == 0


def test_generate_deterministic(tmp_path):
    a = tmp_path / "a.hg"
    b = tmp_path / "b.hg"
    for out in (a, b):
        assert run("generate", "--n", "10", "--k", "3", "--scheme", "low",
                   "--seed", "5", "--out", str(out)) == 0
    assert a.read_text() == b.read_text()


def test_solve_exact_and_emit_lp(tmp_path):
    hg_path = tmp_path / "x.hg"
    hg_path.write_text(X_CONFIG_HG)
    sup_path = tmp_path / "x.sup"
    assert run("solve", "--in", str(hg_path), "--algo", "exact",
               "--constraints", "u", "--out", str(sup_path)) == 0
    h = parse_hypergraph(X_CONFIG_HG)
    g = parse_support(sup_path.read_text(), h)
    assert g.sorted_edges() == [(0, 1), (2, 3)]

    lp1 = tmp_path / "m1.lp"
    lp2 = tmp_path / "m2.lp"
    for lp in (lp1, lp2):
        assert run("emit-lp", "--in", str(hg_path), "--constraints", "p",
                   "--out", str(lp)) == 0
    assert lp1.read_bytes() == lp2.read_bytes()
    assert "cx_0" in lp1.read_text()


def test_infeasible_exit_codes(tmp_path):
    hg_path = tmp_path / "x.hg"
    hg_path.write_text(X_CONFIG_HG)
    sup_path = tmp_path / "x.sup"
    # plane support provably impossible
    assert run("solve", "--in", str(hg_path), "--algo", "exact",
               "--constraints", "p", "--out", str(sup_path)) == 2
    # local search needs a core
    assert run("solve", "--in", str(hg_path), "--algo", "local-search",
               "--out", str(sup_path)) == 2
    # check against a regime the support violates
    sup_path.write_text("E 0 1\nE 2 3\n")
    assert run("check", "--in", str(hg_path), "--support", str(sup_path),
               "--constraints", "p") == 2
    assert run("check", "--in", str(hg_path), "--support", str(sup_path)) == 0


def test_usage_and_parse_errors_exit_one(tmp_path):
    assert run("solve", "--algo", "nonsense") == 1
    assert run("nope") == 1
    bad = tmp_path / "bad.hg"
    bad.write_text("H x y\n")
    out = tmp_path / "o.sup"
    assert run("solve", "--in", str(bad), "--algo", "mst-iter", "--out", str(out)) == 1
    # mst heuristics only run unrestricted
    good = tmp_path / "g.hg"
    assert run("generate", "--n", "8", "--k", "2", "--scheme", "even",
               "--seed", "1", "--out", str(good)) == 0
    assert run("solve", "--in", str(good), "--algo", "mst-approx",
               "--constraints", "pt", "--out", str(out)) == 1


def test_family_and_render(tmp_path):
    hg_path = tmp_path / "fam.hg"
    assert run("family", "--n", "12", "--out", str(hg_path)) == 0
    h = parse_hypergraph(hg_path.read_text())
    assert h.n == 12 and h.k == 2
    sup_path = tmp_path / "fam.sup"
    assert run("solve", "--in", str(hg_path), "--algo", "mst-iter",
               "--out", str(sup_path)) == 0
    svg_path = tmp_path / "fam.svg"
    assert run("render", "--in", str(hg_path), "--support", str(sup_path),
               "--out", str(svg_path)) == 0
    ET.fromstring(svg_path.read_text())


def test_seeded_solve(tmp_path):
    hg_path = tmp_path / "i.hg"
    assert run("generate", "--n", "12", "--k", "2", "--scheme", "mid",
               "--seed", "9", "--out", str(hg_path)) == 0
    seed_sup = tmp_path / "seed.sup"
    assert run("solve", "--in", str(hg_path), "--algo", "mst-iter",
               "--out", str(seed_sup)) == 0
    out_sup = tmp_path / "out.sup"
    assert run("solve", "--in", str(hg_path), "--algo", "local-search",
               "--seed-support", str(seed_sup), "--out", str(out_sup)) == 0
    h = parse_hypergraph(hg_path.read_text())
    seeded_len = total_length(parse_support(out_sup.read_text(), h), h)
    base_len = total_length(parse_support(seed_sup.read_text(), h), h)
    assert seeded_len <= base_len + 1e-9


def test_bench_csv_deterministic(tmp_path):
    csv_a = tmp_path / "a.csv"
    csv_b = tmp_path / "b.csv"
    for out in (csv_a, csv_b):
        assert run("bench", "--n", "10", "--k", "2", "--scheme", "mid,low",
                   "--algo", "mst-approx,mst-iter,local-search",
                   "--constraints", "u", "--trials", "3", "--seed", "77",
                   "--out", str(out)) == 0

    def strip_time(path):
        rows = [line.split(",") for line in path.read_text().splitlines()]
        return [row[:9] + row[10:] for row in rows]

    assert strip_time(csv_a) == strip_time(csv_b)
    assert len(csv_a.read_text().splitlines()) == 1 + 2 * 3 * 3


def test_bench_skips_unsupported_combos(tmp_path, capsys):
    out = tmp_path / "c.csv"
    assert run("bench", "--n", "8", "--k", "2", "--scheme", "mid",
               "--algo", "mst-iter,local-search", "--constraints", "u,t",
               "--trials", "2", "--seed", "3", "--out", str(out)) == 0
    captured = capsys.readouterr()
    assert "skipping unsupported combination mst-iter/t" in captured.err
    # grid ran: mst-iter/u, local-search/u, local-search/t
    assert len(out.read_text().splitlines()) == 1 + 3 * 2
