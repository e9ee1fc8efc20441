from __future__ import annotations

import json
import subprocess
import sys

import mpmath
import pytest

from modid.cli import SuiteConfig, ConfigError, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def _value(out):
    line = next(l for l in out.splitlines() if l.startswith("value:"))
    return mpmath.mpf(line.split(":", 1)[1])


def test_eval_besselk_half(capsys):
    code, out, _ = run(capsys, "eval", "besselk", "--nu", "0.5", "--z", "3", "--digits", "30")
    assert code == 0
    with mpmath.workdps(40):
        ref = mpmath.sqrt(mpmath.pi / 6) * mpmath.exp(-3)
        assert abs(_value(out) - ref) < mpmath.mpf(10) ** -29 * ref
    assert "rigor: rigorous" in out and "error:" in out


def test_eval_rk(capsys):
    code, out, _ = run(capsys, "eval", "rk", "--k", "2", "--n", "5")
    assert code == 0 and "value: 8" in out


def test_eval_zeta(capsys):
    code, out, _ = run(capsys, "eval", "zeta", "--s", "2")
    assert code == 0
    with mpmath.workdps(40):
        assert abs(_value(out) - mpmath.pi ** 2 / 6) < mpmath.mpf(10) ** -29


def test_eval_complex_and_symbolic_pi(capsys):
    code, out, _ = run(capsys, "eval", "gamma", "--z", "1+i/3")
    assert code == 0 and "i" in out.splitlines()[0]
    code, out, _ = run(capsys, "eval", "besselj", "--nu", "1/2", "--z", "pi")
    assert code == 0 and abs(_value(out)) < 1e-28


def test_eval_exit_codes(capsys):
    assert run(capsys, "eval", "nosuchfunction")[0] == 2
    assert run(capsys, "eval", "gamma", "--z", "0")[0] == 3
    assert run(capsys, "eval", "zeta", "--s", "1")[0] == 3
    assert run(capsys, "eval", "zeta")[0] == 2


def test_verify_exit_codes(capsys):
    code, out, _ = run(capsys, "verify", "ramanujan-odd-zeta", "--m", "1", "--alpha",
                       "3.14159265358979323846264338327950288", "--digits", "30")
    assert code == 0 and "pass" in out
    assert run(capsys, "verify", "theta-rk", "--k", "2", "--z", "1")[0] == 0
    assert run(capsys, "verify", "sigma-2m", "--m", "0", "--y", "1")[0] == 3
    assert run(capsys, "verify", "no-such-id")[0] == 2


def test_verify_fail_exit_code(capsys, monkeypatch):
    from modid import identities as ids
    spec = ids.get_identity("zeta3")
    broken = ids.IdentitySpec(**{**spec.__dict__, "rhs": lambda p, c: ids._side([ids.ValueWithError(mpmath.mpf(1), 0)])})
    monkeypatch.setitem(ids._BY_ID, "zeta3", broken)
    assert run(capsys, "verify", "zeta3", "--y", "1")[0] == 1


def test_verify_params_flag_and_record(capsys, tmp_path):
    out = tmp_path / "r.jsonl"
    code, _, _ = run(capsys, "verify", "zeta3", "--params", "y=2", "--out", str(out))
    assert code == 0
    rec = json.loads(out.read_text().splitlines()[0])
    assert list(rec) == ["id", "params", "lhs", "rhs", "abs_diff", "rel_diff", "verdict", "lhs_terms",
                         "rhs_terms", "seconds"]
    assert rec["verdict"] == "pass"


def test_verify_limit(capsys):
    code, out, _ = run(capsys, "verify", "wigert-dn", "--y", "1", "--limit", "a=0")
    assert code == 0 and "pass" in out


def test_suite_config_validation(tmp_path):
    bad = tmp_path / "c.json"
    bad.write_text(json.dumps({"digits": 5}))
    with pytest.raises(ConfigError):
        SuiteConfig.load(str(bad))
    bad.write_text(json.dumps({"grids": {"nope": [{}]}}))
    with pytest.raises(ConfigError):
        SuiteConfig.load(str(bad))
    bad.write_text(json.dumps({"colour": "red"}))
    with pytest.raises(ConfigError):
        SuiteConfig.load(str(bad))


def test_suite_config_error_exit(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"digits": 5}))
    assert run(capsys, "suite", str(cfg))[0] == 2
    assert run(capsys, "suite", "--include", "nothing-matches-*")[0] == 2
    assert run(capsys, "suite", str(tmp_path / "missing.json"))[0] == 2


def test_suite_include_filter():
    cfg = SuiteConfig(include=["koshliakov-*"]).validate()
    assert cfg.selected() == ["koshliakov-transform", "koshliakov-w0", "koshliakov-w1"]


def test_suite_grid_override_and_determinism(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    rep = tmp_path / "out.jsonl"
    cfg.write_text(json.dumps({
        "digits": 30, "include": ["zeta*", "lerch-coth"], "exclude": ["zeta5"], "parallelism": 2,
        "grids": {"zeta3": [{"y": "1"}, {"y": "3"}]}, "output": str(rep),
    }))
    code1, out1, _ = run(capsys, "suite", str(cfg))
    recs1 = [json.loads(l) for l in rep.read_text().splitlines()]
    code2, out2, _ = run(capsys, "suite", str(cfg), "--jobs", "1")
    recs2 = [json.loads(l) for l in rep.read_text().splitlines()]
    assert code1 == code2 == 0
    assert out1 == out2
    for r in recs1 + recs2:
        r.pop("seconds")
    assert recs1 == recs2
    assert [r["id"] for r in recs1] == ["lerch-coth"] * 3 + ["zeta3"] * 2


def test_catalog_lists_every_identity(capsys):
    from modid.identities import list_identities
    code, out, _ = run(capsys, "catalog")
    assert code == 0
    for s in list_identities():
        assert s.id in out


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "modid", "eval", "rk", "--k", "4", "--n", "2"],
                       capture_output=True, text=True, timeout=60)
    assert r.returncode == 0 and "value: 24" in r.stdout
