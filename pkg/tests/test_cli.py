from partspread.cli import main


def run_cli(capsys, *argv) -> tuple[int, str]:
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_count_bell(capsys):
    code, out = run_cli(capsys, "count", "bell", "--n", "10")
    assert code == 0
    assert "115975" in out


def test_count_variants(capsys):
    assert run_cli(capsys, "count", "stirling2", "--n", "4", "--l", "2")[1].count("7")
    assert "11" in run_cli(capsys, "count", "tilde-bell", "--n", "5")[1]
    assert "15" in run_cli(capsys, "count", "profiled", "--profile", "2,2,2")[1]
    assert "105" in run_cli(capsys, "count", "uniform", "--k", "2", "--l", "4")[1]
    code, out = run_cli(capsys, "count", "derangements", "--partition", "1,2|3,4")
    assert code == 0 and "12" in out


def test_enumerate(capsys):
    code, out = run_cli(capsys, "enumerate", "partitions", "--n", "4")
    assert code == 0 and "15" in out
    code, out = run_cli(capsys, "enumerate", "blocks", "--n", "4", "--l", "2", "--list")
    assert code == 0 and out.count("partition") == 7


def test_extremal_conjecture(capsys):
    code, out = run_cli(capsys, "extremal", "conjecture", "--k", "2", "--l", "3", "--t", "2")
    assert code == 0
    assert "conjecture" in out and "pass" in out


def test_extremal_oracle(capsys):
    code, out = run_cli(
        capsys, "extremal", "oracle", "--setting", "bell", "--n", "3",
        "--predicate", "t-intersect", "--t", "1",
    )
    assert code == 0 and "2" in out


def test_verify_bell_ratio(capsys):
    code, out = run_cli(capsys, "verify", "bell-ratio", "--n-max", "20")
    assert code == 0
    assert out.splitlines()[1].split()[-1] == "pass"


def test_spread_factor_cli(capsys):
    code, out = run_cli(capsys, "spread", "factor", "--family", "bell:5")
    assert code == 0 and "2.2039" in out


def test_spread_check_cli(capsys):
    code, out = run_cli(capsys, "spread", "check", "--family", "kl:2,3", "--r", "2")
    assert code == 0 and "pass" in out
    code, out = run_cli(capsys, "spread", "check", "--family", "bell:4", "--r", "9/2")
    assert code == 1  # a failing verdict exits 1


def test_approximate_cli(capsys):
    code, out = run_cli(
        capsys, "approximate", "--family", "ct:2,4,2", "--ambient", "kl:2,4",
        "--r", "2", "--q", "4", "--r0", "4", "--t", "1",
    )
    assert code == 0
    assert "peel-step" in out and "approx-conservation" in out


def test_approximate_cli_parts_ambient(capsys):
    # parts-kind subfamily must share the ambient's lazy part indices
    code, out = run_cli(
        capsys, "approximate", "--family", "blocks:5,2", "--ambient", "bell:5",
        "--r", "2", "--q", "5", "--r0", "3", "--t", "1",
    )
    assert code == 0
    assert "approx-conservation" in out
    code, _ = run_cli(
        capsys, "approximate", "--family", "blocks:4,2", "--ambient", "bell:5",
        "--r", "2", "--q", "4", "--r0", "3", "--t", "1",
    )
    assert code == 2  # mismatched ground sets are rejected


def test_reduce_cli(capsys):
    code, out = run_cli(
        capsys, "reduce", "minimize", "--family", "kl:2,2", "--s", "0,1;0,2",
        "--q", "2", "--t", "1",
    )
    assert code == 0 and "[0]" in out
    code, out = run_cli(
        capsys, "reduce", "dominance", "--family", "kl:2,3", "--s", "0",
        "--q", "1", "--t", "1", "--eps", "1",
    )
    assert code == 0


def test_verify_nonintersect_cli(capsys):
    code, out = run_cli(
        capsys, "verify", "nonintersect", "--k", "2", "--l", "3", "--t", "2",
        "--t-set", "1,2", "--y", "1,3|2,4|5,6",
    )
    assert code == 0 and "pass" in out


def test_verify_spreadness_cli(capsys):
    code, out = run_cli(
        capsys, "verify", "spreadness", "--setting", "kl-edges",
        "--k", "2", "--l", "3",
    )
    assert code == 0


def test_guard_flag_and_exit_codes(capsys):
    code, _ = run_cli(capsys, "enumerate", "partitions", "--n", "14")
    assert code == 2  # default guard rejects n = 14
    code, _ = run_cli(capsys, "count", "bell")  # missing --n
    assert code == 2
    code, _ = run_cli(capsys, "count", "bell", "--n", "5", "--bogus")
    assert code == 2
    # an overridden guard turns a guard error into a run
    code, _ = run_cli(
        capsys, "spread", "factor", "--family", "bell:4", "--guard-spread", "10"
    )
    assert code == 2


def test_structured_records_format(capsys):
    code, out = run_cli(
        capsys, "count", "bell", "--n", "6", "--format", "structured-records"
    )
    assert code == 0
    assert out == "count-bell\tn=6\t203\t-\t-\tinfo\n"


def test_out_file_and_determinism(tmp_path, capsys):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    for path in (a, b):
        code, _ = run_cli(
            capsys, "verify", "containment", "--family", "bell:3", "--r", "1",
            "--m", "1", "--delta", "1/2", "--trials", "10000", "--seed", "5",
            "--out", str(path), "--format", "structured-records",
        )
        assert code == 0
    assert a.read_bytes() == b.read_bytes()


def test_export_round_trip(tmp_path, capsys):
    path = tmp_path / "fam.txt"
    code, _ = run_cli(capsys, "export", "--family", "kl:2,3", "--path", str(path))
    assert code == 0
    text = path.read_text()
    assert text.startswith("N 15\n")
    code, out = run_cli(capsys, "spread", "factor", "--family", f"file:{path}")
    assert code == 0


def test_extremal_catalog(tmp_path, capsys):
    cat = tmp_path / "instances.txt"
    cat.write_text(
        "# setting k l t n [expected]\n"
        "partial 2 3 2 6 3\n"
        "bell - - 1 3 2\n"
        "blocks - 3 2 5 1\n"
    )
    results = tmp_path / "results.txt"
    code, out = run_cli(
        capsys, "extremal", "catalog", "--file", str(cat), "--results", str(results)
    )
    assert code == 0
    lines = results.read_text().splitlines()
    assert len(lines) == 3 and all(l.endswith("pass") for l in lines)
    # appending: a second run doubles the result table
    code, _ = run_cli(
        capsys, "extremal", "catalog", "--file", str(cat), "--results", str(results)
    )
    assert len(results.read_text().splitlines()) == 6
    bad = tmp_path / "bad.txt"
    bad.write_text("partial 2 3 2 6 999\n")
    code, _ = run_cli(capsys, "extremal", "catalog", "--file", str(bad))
    assert code == 1


def test_weak_spread_cli(capsys):
    code, out = run_cli(capsys, "spread", "weak", "--family", "bell:4", "--t", "1")
    assert code == 0 and "spread-weak" in out


def test_sunflower_and_covering_cli(capsys):
    code, out = run_cli(capsys, "spread", "sunflower", "--family", "kl:2,2", "--l", "3")
    assert code == 0
    code, out = run_cli(capsys, "spread", "covering", "--family", "kl:2,2")
    assert code == 0 and "covering-number" in out
