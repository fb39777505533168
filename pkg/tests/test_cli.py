from __future__ import annotations

import subprocess
import sys

import pytest

from listdecode.cli import (
    encode_message,
    format_message,
    load_code,
    main,
    message_space,
    parse_word,
)
from listdecode.designs import design_verify
from listdecode.hermitian import folded_decode_report
from listdecode.rng import SplitMix64
from listdecode.rs import precode_encode, rs_decode_report


def run(*argv):
    return main([str(a) for a in argv])


@pytest.fixture
def rs_code(tmp_path):
    path = tmp_path / "rs.code"
    assert run("construct", "--kind", "rs", "--q", 16, "--m", 4, "--n", 16, "--k", 4, "--seed", 7, "--out", path) == 0
    return path


def write_message(cf, path, seed=1):
    F, length = message_space(cf)
    rng = SplitMix64(seed)
    msg = [F.random(rng) for _ in range(length)]
    path.write_text(format_message(cf, msg))
    return msg


def parse_list(cf, text):
    F, _ = message_space(cf)
    return [[F.parse(tok) for tok in ln.split()] for ln in text.splitlines() if ln.strip()]


def test_construct_rs(rs_code, tmp_path):
    text = rs_code.read_text()
    kv = dict(ln.split("=", 1) for ln in text.splitlines())
    assert len(kv["alphas"].split()) == 16
    cf = load_code(rs_code)
    assert cf.code.n == 16 and cf.code.k == 4 and cf.code.m == 4
    again = tmp_path / "again.code"
    run("construct", "--kind", "rs", "--q", 16, "--m", 4, "--n", 16, "--k", 4, "--seed", 7, "--out", again)
    assert again.read_bytes() == rs_code.read_bytes()


def test_construct_same_seed_same_bytes(tmp_path):
    outs = []
    for i in range(2):
        p = tmp_path / f"d{i}.code"
        run(
            "construct", "--kind", "rs", "--q", 2, "--m", 4, "--n", 2, "--k", 1, "--precode", "design",
            "--t", 2, "--r", 2, "--seed", 11, "--out", p,
        )
        outs.append(p.read_bytes())
    assert outs[0] == outs[1]
    p = tmp_path / "d2.code"
    run(
        "construct", "--kind", "rs", "--q", 2, "--m", 4, "--n", 2, "--k", 1, "--precode", "design",
        "--t", 2, "--r", 2, "--seed", 12, "--out", p,
    )
    assert p.read_bytes() != outs[0]


def test_construct_budget_exit(tmp_path):
    code = run(
        "construct", "--kind", "design", "--q", 2, "--lambda", 6, "--t", 3, "--count", 4, "--r", 2,
        "--budget", 100, "--out", tmp_path / "x",
    )
    assert code == 3


def test_round_trip_without_errors(rs_code, tmp_path):
    cf = load_code(rs_code)
    msg = write_message(cf, tmp_path / "msg")
    assert run("encode", "--spec", rs_code, tmp_path / "msg", "--out", tmp_path / "cw") == 0
    assert parse_word(cf, (tmp_path / "cw").read_text()) == encode_message(cf, msg)
    assert run("corrupt", "--spec", rs_code, tmp_path / "cw", "--e", 0, "--out", tmp_path / "rx") == 0
    assert (tmp_path / "rx").read_bytes() == (tmp_path / "cw").read_bytes()
    assert run("decode", "--spec", rs_code, tmp_path / "rx", "--s", 3, "--radius", 0, "--out", tmp_path / "list") == 0
    assert parse_list(cf, (tmp_path / "list").read_text()) == [msg]


def test_corrupt_is_deterministic(rs_code, tmp_path):
    cf = load_code(rs_code)
    write_message(cf, tmp_path / "msg")
    run("encode", "--spec", rs_code, tmp_path / "msg", "--out", tmp_path / "cw")
    for name in ("a", "b"):
        run("corrupt", "--spec", rs_code, tmp_path / "cw", "--e", 9, "--seed", 3, "--out", tmp_path / name)
    assert (tmp_path / "a").read_bytes() == (tmp_path / "b").read_bytes()
    run("corrupt", "--spec", rs_code, tmp_path / "cw", "--e", 9, "--seed", 4, "--out", tmp_path / "c")
    assert (tmp_path / "c").read_bytes() != (tmp_path / "a").read_bytes()
    cw = parse_word(cf, (tmp_path / "cw").read_text())
    rx = parse_word(cf, (tmp_path / "a").read_text())
    assert sum(x != y for x, y in zip(cw, rx)) == 9


def test_decode_transcript_matches_library(rs_code, tmp_path):
    cf = load_code(rs_code)
    msg = write_message(cf, tmp_path / "msg")
    run("encode", "--spec", rs_code, tmp_path / "msg", "--out", tmp_path / "cw")
    run("corrupt", "--spec", rs_code, tmp_path / "cw", "--e", 9, "--seed", 5, "--out", tmp_path / "rx")
    assert (
        run("decode", "--spec", rs_code, tmp_path / "rx", "--s", 3, "--radius", 9,
            "--out", tmp_path / "list", "--transcript", tmp_path / "tr") == 0
    )
    tr = dict(ln.split("=", 1) for ln in (tmp_path / "tr").read_text().splitlines())
    rx = parse_word(cf, (tmp_path / "rx").read_text())
    rep = rs_decode_report(cf.code, rx, 3, 9)
    assert int(tr["D"]) == rep.D == (16 - 4 + 1) // 4
    assert int(tr["threshold"]) == 16 - 9
    assert int(tr["solver_dim"]) == rep.solver_dim
    assert int(tr["pruned_dim"]) == rep.pruned_dim
    assert int(tr["list_size"]) == len(rep.results)
    assert msg in parse_list(cf, (tmp_path / "list").read_text())


def test_folded_hse_transcript(tmp_path):
    code = tmp_path / "fh.code"
    assert (
        run("construct", "--kind", "folded-hermitian", "--tower-r", 4, "--e", 2, "--m", 5, "--s", 2,
            "--N", 12, "--k", 8, "--precode", "hse", "--delta", 4, "--seed", 2, "--out", code) == 0
    )
    cf = load_code(code)
    msg = write_message(cf, tmp_path / "msg")
    run("encode", "--spec", code, tmp_path / "msg", "--out", tmp_path / "cw")
    t = cf.code.threshold
    run("corrupt", "--spec", code, tmp_path / "cw", "--e", cf.code.N - t, "--seed", 1, "--out", tmp_path / "rx")
    assert (
        run("decode", "--spec", code, tmp_path / "rx", "--agreement", t,
            "--out", tmp_path / "list", "--transcript", tmp_path / "tr") == 0
    )
    tr = dict(ln.split("=", 1) for ln in (tmp_path / "tr").read_text().splitlines())
    rep = folded_decode_report(cf.code, parse_word(cf, (tmp_path / "rx").read_text()), t, cf.precode)
    assert int(tr["D"]) == rep.D and int(tr["threshold"]) == rep.threshold == t
    assert int(tr["solver_dim"]) == rep.solver_dim
    assert tr["frontier"] == " ".join(map(str, rep.frontier))
    assert msg in parse_list(cf, (tmp_path / "list").read_text())


def test_verify_design(tmp_path, capsys):
    path = tmp_path / "design"
    run("construct", "--kind", "design", "--q", 2, "--lambda", 6, "--t", 3, "--count", 4, "--r", 2, "--seed", 1, "--out", path)
    capsys.readouterr()
    assert run("verify-design", path) == 0
    out = dict(ln.split("=") for ln in capsys.readouterr().out.split())
    cf = load_code(path)
    assert int(out["d"]) == design_verify(cf.precode, 2) == cf.precode.certified[1]
    assert int(out["scanned"]) == 651
    # tamper: make every member equal to the first, which raises the maximum sum
    lines = path.read_text().splitlines()
    first = next(ln for ln in lines if ln.startswith("design.member1=")).split("=", 1)[1]
    tampered = [ln if not ln.startswith("design.member") else ln.split("=")[0] + "=" + first for ln in lines]
    path.write_text("\n".join(tampered) + "\n")
    assert run("verify-design", path) == 1
    assert "certificate mismatch" in capsys.readouterr().err


def test_exit_codes(rs_code, tmp_path, capsys):
    assert run("encode", "--spec", tmp_path / "missing", tmp_path / "msg") == 2
    (tmp_path / "bad").write_text("kind=rs\nnot a pair\n")
    assert run("encode", "--spec", tmp_path / "bad", tmp_path / "msg") == 2
    (tmp_path / "short").write_text("1000\n")
    assert run("encode", "--spec", rs_code, tmp_path / "short") == 2
    cw = tmp_path / "cw"
    cf = load_code(rs_code)
    write_message(cf, tmp_path / "msg")
    run("encode", "--spec", rs_code, tmp_path / "msg", "--out", cw)
    assert run("decode", "--spec", rs_code, cw, "--s", 3, "--radius", 10) == 4
    assert run("decode", "--spec", rs_code, cw, "--radius", 1) == 1
    capsys.readouterr()


def test_simulate_jobs_are_deterministic(rs_code, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run("simulate", "--spec", rs_code, "--s", 3, "--radius", 9, "--trials", 6, "--seed", 4, "--transcript", a) == 0
    assert (
        run("simulate", "--spec", rs_code, "--s", 3, "--radius", 9, "--trials", 6, "--seed", 4, "--jobs", 2, "--transcript", b)
        == 0
    )
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().splitlines()[-1] == "found=6/6"


def test_module_entry_point(rs_code, tmp_path):
    cf = load_code(rs_code)
    msg = write_message(cf, tmp_path / "msg")
    proc = subprocess.run(
        [sys.executable, "-m", "listdecode", "encode", "--spec", str(rs_code), str(tmp_path / "msg")],
        capture_output=True,
        text=True,
        check=True,
    )
    assert parse_word(cf, proc.stdout) == encode_message(cf, msg)
    assert precode_encode(cf.code, msg) == msg
