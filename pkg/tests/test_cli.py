from __future__ import annotations

import json

import pytest

from jumpstat.cli import main
from jumpstat.trees import catalan


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_stats(capsys):
    code, out, err = run(capsys, "stats", "[[.,.],[.,[.,.]]]")
    assert code == 0
    assert json.loads(out) == {"internal": 4, "jumps": 1, "depth": 3,
                               "jumpdist": 1}
    assert err == ""


def test_stats_parse_error(capsys):
    code, out, err = run(capsys, "stats", "[.,")
    assert code == 2
    assert out == ""
    assert "position 3" in err


def test_enumerate_plain(capsys):
    code, out, err = run(capsys, "enumerate", "3")
    assert code == 0
    assert out.splitlines() == [
        "[.,[.,[.,.]]]",
        "[.,[[.,.],.]]",
        "[[.,.],[.,.]]",
        "[[.,[.,.]],.]",
        "[[[.,.],.],.]",
    ]


def test_enumerate_with_stats(capsys):
    code, out, err = run(capsys, "enumerate", "2", "--with-stats")
    assert code == 0
    records = [json.loads(line) for line in out.splitlines()]
    assert records == [
        {"tree": "[.,[.,.]]", "internal": 2, "jumps": 0, "depth": 2,
         "jumpdist": 0},
        {"tree": "[[.,.],.]", "internal": 2, "jumps": 1, "depth": 1,
         "jumpdist": 1},
    ]


def test_enumerate_cap_refusal(capsys):
    code, out, err = run(capsys, "enumerate", "17")
    assert code == 3
    assert out == ""
    assert "cap" in err
    code, _, _ = run(capsys, "enumerate", "5", "--cap", "4")
    assert code == 3
    # raising the cap explicitly is allowed
    code, out, _ = run(capsys, "enumerate", "5", "--cap", "5")
    assert code == 0
    assert len(out.splitlines()) == catalan(5)


def test_series_json(capsys):
    code, out, err = run(capsys, "series", "jumps", "--order", "3")
    assert code == 0
    data = json.loads(out)
    assert data["name"] == "H"
    assert data["order"] == 3
    assert data["series"][3] == {"n": 3, "terms": [
        {"et": 0, "eq": 0, "num": 1, "den": 1},
        {"et": 0, "eq": 1, "num": 3, "den": 1},
        {"et": 0, "eq": 2, "num": 1, "den": 1},
    ]}


def test_series_alias_and_bad_order(capsys):
    code, out, _ = run(capsys, "series", "f", "--order", "5")
    assert code == 0
    data = json.loads(out)
    assert [t["num"] for row in data["series"] for t in row["terms"]] == \
        [1, 1, 2, 5, 14, 42]
    code, _, err = run(capsys, "series", "f", "--order", "-1")
    assert code == 2
    assert "--order" in err


def test_series_unknown_name_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["series", "Z"])
    assert exc.value.code == 2


def test_verify_pass(capsys):
    code, out, err = run(capsys, "verify", "3", "--order", "12")
    assert code == 0
    verdict = json.loads(out)
    assert verdict == {"theorem": "3", "order": 12, "pass": True,
                       "first_failure": None}


def test_verify_all_ids_quick(capsys):
    for tid in "0123456":
        code, out, _ = run(capsys, "verify", tid, "--order", "8",
                           "--oracle-cap", "6")
        assert code == 0, (tid, out)
        assert json.loads(out)["pass"] is True


def test_verify_rejects_unknown_id(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "9"])
    assert exc.value.code == 2


def test_moments_csv(capsys):
    code, out, err = run(capsys, "moments", "jumps", "--format", "csv",
                         "--nmax", "3")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("n,b_n,m_1")
    assert lines[4].startswith("3,5,1,7/5")
    assert err == ""


def test_moments_check_jumps_passes(capsys):
    code, out, err = run(capsys, "moments", "jumps", "--check",
                         "--nmax", "12", "--format", "csv")
    assert code == 0
    checks = err.splitlines()
    assert checks == [
        "check 7.1: pass [n=2..12]",
        "check 7.2: pass [n=2..12]",
        "check 7.3: pass [n=2..12]",
    ]


def test_moments_check_jumpdist_reports_sign_failure(capsys):
    code, out, err = run(capsys, "moments", "jumpdist", "--check",
                         "--nmax", "12", "--format", "csv")
    assert code == 1
    checks = err.splitlines()
    assert "check 8.1: pass [n=2..12]" in checks
    assert "check 8.2: pass [n=2..12]" in checks
    assert "check 8.4: pass [n=2..12]" in checks
    assert ("check 8.3: FAIL [n=2..12] (first mismatch n=4: "
            "sign -1 where positive is required)") in checks


def test_moments_json_default(capsys):
    code, out, _ = run(capsys, "moments", "jumpdist", "--nmax", "4",
                       "--max-moment", "2")
    assert code == 0
    data = json.loads(out)
    assert data["stat"] == "jumpdist"
    assert data["rows"][2]["raw"] == ["1/2", "1/2"]


def test_moments_bad_max_moment(capsys):
    code, _, err = run(capsys, "moments", "jumps", "--max-moment", "0")
    assert code == 2
    assert "max_moment" in err


def test_guess_variance(capsys):
    code, out, _ = run(capsys, "guess", "jumps", "--moment", "variance",
                       "--n-to", "30")
    assert code == 0
    data = json.loads(out)
    assert data["stat"] == "jumps"
    assert data["moment"] == {"kind": "central", "r": 2}
    assert data["points"] == {"from": 2, "to": 30, "holdout": 5}
    assert data["formula"]["text"] == "(n^2 - 1)/(8*n - 4)"
    assert data["degrees"] == [2, 1]
    assert data["limit"] == {"kind": "divergent", "value": None}


def test_guess_mean_jumpdist(capsys):
    code, out, _ = run(capsys, "guess", "jumpdist", "--moment", "mean",
                       "--n-from", "0", "--n-to", "20")
    assert code == 0
    data = json.loads(out)
    assert data["moment"] == {"kind": "raw", "r": 1}
    assert data["formula"]["text"] == "(n^2 - n)/(n + 2)"


def test_guess_scaled_odd_uses_squared_values(capsys):
    code, out, _ = run(capsys, "guess", "jumpdist", "--moment", "scaled:3",
                       "--n-to", "36")
    assert code == 0
    data = json.loads(out)
    assert data["moment"] == {"kind": "scaled_squared", "r": 3}
    assert data["points"]["from"] == 2
    assert data["formula"]["numerator"] == [0, 108, -72, -9, 9]
    assert data["formula"]["denominator"] == [-32, -48, 46, 30, 4]


def test_guess_bad_moment_spec(capsys):
    for spec in ("skew", "raw:0", "central:1", "scaled:x", "raw:"):
        code, _, err = run(capsys, "guess", "jumps", "--moment", spec)
        assert code == 2, spec
        assert "bad --moment" in err


def test_guess_bad_range(capsys):
    code, _, err = run(capsys, "guess", "jumps", "--moment", "mean",
                       "--n-from", "10", "--n-to", "10")
    assert code == 2
    assert "--n-to" in err


def test_guess_unfittable_data_fails_cleanly(capsys):
    # jumps kurtosis needs total degree 6; a lower bound exhausts cleanly
    code, _, err = run(capsys, "guess", "jumps", "--moment", "scaled:4",
                       "--n-to", "20", "--max-total-degree", "3")
    assert code == 1
    assert "no rational function" in err


def test_limits_filtered(capsys):
    code, out, _ = run(capsys, "limits", "--stat", "jumps")
    assert code == 0
    refs = json.loads(out)
    assert [r["theorem"] for r in refs] == ["7.1", "7.2", "7.3", "7.4", "7.5"]
    kurt = next(r for r in refs if r["theorem"] == "7.3")
    assert kurt["limit"] == {"kind": "finite", "value": "3"}
    code, out, _ = run(capsys, "limits")
    assert len(json.loads(out)) == 9


def test_env_default_and_flag_override(capsys, monkeypatch):
    monkeypatch.setenv("JUMPSTAT_ORDER", "4")
    code, out, _ = run(capsys, "series", "f")
    assert code == 0
    assert json.loads(out)["order"] == 4
    code, out, _ = run(capsys, "series", "f", "--order", "2")
    assert json.loads(out)["order"] == 2


def test_invalid_env_value_is_usage_error(capsys, monkeypatch):
    monkeypatch.setenv("JUMPSTAT_ORDER", "soon")
    code, _, err = run(capsys, "series", "f")
    assert code == 2
    assert "JUMPSTAT_ORDER" in err


def test_env_applies_to_moments_nmax(capsys, monkeypatch):
    monkeypatch.setenv("JUMPSTAT_NMAX", "3")
    code, out, _ = run(capsys, "moments", "jumps", "--format", "csv")
    assert code == 0
    assert len(out.splitlines()) == 5  # header + sizes 0..3
