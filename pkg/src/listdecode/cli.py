"""Command-line front end.

    listdecode construct --kind rs --q 16 --m 4 --n 16 --k 4 --seed 1 --out code.txt
    listdecode encode --spec code.txt msg.txt --out cw.txt
    listdecode corrupt --spec code.txt cw.txt --e 6 --seed 2 --out rx.txt
    listdecode decode --spec code.txt rx.txt --s 3 --radius 6 --out list.txt --transcript t.txt
    listdecode simulate --spec code.txt --trials 50 --s 3 --radius 6 --seed 3 --jobs 4
    listdecode verify-design code.txt --r 2

Code files are line-oriented ``key=value`` text; messages and codewords
hold one element (or, for folded codes, one column) per line.  All
randomness comes from ``--seed`` through the splitmix64 stream, so every
output file is reproducible byte for byte.

Exit codes: 0 success, 1 invalid parameters or failed verification,
2 I/O or format errors, 3 budget exceeded, 4 radius beyond the guarantee.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .designs import SubspaceDesign, design_sample, design_verify, gaussian_binomial
from .errors import (
    BadDims,
    FormatError,
    FrontierOverflow,
    ListDecodeError,
    RadiusTooLarge,
    ThresholdTooLow,
    TooLarge,
    VerificationFailed,
)
from .fields import FieldSpec, field_make, prime_factors, tower_make
from .hermitian import (
    FoldedSpec,
    HermitianTower,
    folded_decode_report,
    folded_encode,
    folded_make,
    folded_precode_encode,
)
from .hse import HseSet, format_hse, hse_build, hse_params, parse_hse
from .linalg import DEFAULT_CAP, linear_span
from .rng import SplitMix64, derive_seed
from .rs import (
    RsCodeSpec,
    guaranteed_radius,
    precode_decode,
    precode_encode,
    rs_decode_report,
    rs_encode,
    rs_make,
)

EXIT_OK, EXIT_FAIL, EXIT_IO, EXIT_BUDGET, EXIT_RADIUS = 0, 1, 2, 3, 4

DESIGN_SEED, HSE_SEED = 0, 1


@dataclass(frozen=True)
class CodeFile:
    kind: str  # "rs" | "folded-hermitian" | "design"
    seed: int
    code: RsCodeSpec | FoldedSpec | None
    precode: SubspaceDesign | HseSet | None


# ---------------------------------------------------------------------------
# serialization


def _prime_power(q: int) -> tuple[int, int]:
    ps = prime_factors(q) if q > 1 else []
    if len(ps) != 1:
        raise BadDims(f"q={q} is not a prime power")
    p, a = ps[0], 0
    while q > 1:
        q //= p
        a += 1
    return p, a


def _format_design(D: SubspaceDesign) -> list[str]:
    F = D.field
    lines = [f"design.lambda={D.dim}", f"design.t={D.t}", f"design.count={D.count}"]
    if D.certified is not None:
        lines += [f"design.r={D.certified[0]}", f"design.d={D.certified[1]}"]
    for j, H in enumerate(D.subspaces, start=1):
        rows = ";".join(" ".join(F.format(c) for c in row) for row in H.basis)
        lines.append(f"design.member{j}={rows}")
    return lines


def _parse_design(F: FieldSpec, kv: dict[str, str]) -> SubspaceDesign:
    lam = int(kv["design.lambda"])
    members = []
    for j in range(1, int(kv["design.count"]) + 1):
        text = kv[f"design.member{j}"].strip()
        rows = [[F.parse(tok) for tok in row.split()] for row in text.split(";")] if text else []
        if any(len(row) != lam for row in rows):
            raise FormatError(f"member {j} has a row of the wrong length")
        members.append(linear_span(F, lam, rows))
    cert = (int(kv["design.r"]), int(kv["design.d"])) if "design.r" in kv else None
    return SubspaceDesign(F, lam, int(kv["design.t"]), tuple(members), cert)


def format_code(cf: CodeFile) -> str:
    lines = [f"kind={cf.kind}", f"seed={cf.seed}"]
    if isinstance(cf.code, RsCodeSpec):
        T = cf.code.tower
        lines += [
            f"p={T.base.p}",
            f"a={T.base.a}",
            f"base_poly={T.base.format_poly()}",
            f"m={T.m}",
            f"tower_poly={T.format_poly()}",
            f"n={cf.code.n}",
            f"k={cf.code.k}",
            "alphas=" + " ".join(T.base.format(T.to_vector(x)[0]) for x in cf.code.alphas),
        ]
    elif isinstance(cf.code, FoldedSpec):
        S = cf.code
        F = S.tower.field
        lines += [
            f"r={S.tower.r}",
            f"e={S.tower.e}",
            f"field_poly={F.format_poly()}",
            f"gamma={F.format(S.tower.gamma)}",
            f"m={S.m}",
            f"s={S.s}",
            f"N={S.N}",
            f"k={S.k}",
            "reps=" + " ".join(",".join(F.format(c) for c in P) for P in S.reps),
        ]
    else:
        F = cf.precode.field
        lines += [f"p={F.p}", f"a={F.a}", f"base_poly={F.format_poly()}"]
    P = cf.precode
    if P is None:
        lines.append("precode=none")
    elif isinstance(P, SubspaceDesign):
        lines.append("precode=design")
        lines += _format_design(P)
    else:
        lines.append("precode=hse")
        lines += ["hse." + ln for ln in format_hse(P).splitlines()]
    return "\n".join(lines) + "\n"


def _check(what: str, stored: str, actual: str) -> None:
    if stored != actual:
        raise FormatError(f"{what} in file ({stored}) does not match the reconstruction ({actual})")


@lru_cache(maxsize=8)
def parse_code(text: str) -> CodeFile:
    kv: dict[str, str] = {}
    for ln in text.splitlines():
        if not ln.strip() or ln.lstrip().startswith("#"):
            continue
        if "=" not in ln:
            raise FormatError(f"expected key=value, got {ln!r}")
        key, val = ln.split("=", 1)
        kv[key.strip()] = val.strip()
    try:
        kind, seed = kv["kind"], int(kv["seed"])
        if kind in ("rs", "design"):
            base = field_make(int(kv["p"]), int(kv["a"]), [int(c, 36) for c in kv["base_poly"]])
        if kind == "folded-hermitian":
            tower = HermitianTower(int(kv["r"]), int(kv["e"]))
            base = tower.field
            _check("field_poly", kv["field_poly"], base.format_poly())
            _check("gamma", kv["gamma"], base.format(tower.gamma))
        elif kind not in ("rs", "design"):
            raise FormatError(f"unknown kind {kind!r}")
        precode: SubspaceDesign | HseSet | None = None
        if kv["precode"] == "design":
            precode = _parse_design(base, kv)
        elif kv["precode"] == "hse":
            hse_text = "".join(f"{k[4:]}={v}\n" for k, v in kv.items() if k.startswith("hse."))
            precode = parse_hse(base, hse_text)
        elif kv["precode"] != "none":
            raise FormatError(f"unknown precode {kv['precode']!r}")
        code: RsCodeSpec | FoldedSpec | None = None
        if kind == "rs":
            T = tower_make(base, int(kv["m"]), [base.parse(t) for t in kv["tower_poly"].split(":")])
            alphas = [T.embed(base.parse(t)) for t in kv["alphas"].split()]
            code = rs_make(T, int(kv["n"]), int(kv["k"]), alphas, precode)
        elif kind == "folded-hermitian":
            code = folded_make(tower, int(kv["m"]), int(kv["s"]), int(kv["N"]), int(kv["k"]))
            reps = " ".join(",".join(base.format(c) for c in P) for P in code.reps)
            _check("reps", kv["reps"], reps)
    except KeyError as exc:
        raise FormatError(f"missing key {exc.args[0]!r}") from exc
    except ValueError as exc:
        raise FormatError(str(exc)) from exc
    return CodeFile(kind, seed, code, precode)


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _emit(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def load_code(path: str) -> CodeFile:
    return parse_code(_read(path))


# ---------------------------------------------------------------------------
# messages, symbols and codewords


def message_space(cf: CodeFile):
    """(field, length) of the messages accepted by ``encode``."""
    P = cf.precode
    if isinstance(cf.code, RsCodeSpec):
        spec = cf.code
        return (spec.tower if P is None else spec.tower.base), spec.message_length()
    F = cf.code.tower.field
    if P is None:
        return F, cf.code.k
    if isinstance(P, SubspaceDesign):
        return F, sum(H.dim for H in P.subspaces)
    return F, P.params.input_len


def encode_message(cf: CodeFile, msg: Sequence[int]) -> list:
    """Codeword symbols: tower elements for RS, columns (lists) for folded codes."""
    if isinstance(cf.code, RsCodeSpec):
        return rs_encode(cf.code, precode_encode(cf.code, msg))
    return folded_encode(cf.code, folded_precode_encode(cf.code, cf.precode, msg))


def format_message(cf: CodeFile, msg: Sequence[int]) -> str:
    F, _ = message_space(cf)
    return "".join(F.format(x) + "\n" for x in msg)


def parse_message(cf: CodeFile, text: str) -> list[int]:
    F, length = message_space(cf)
    msg = [F.parse(ln) for ln in text.splitlines() if ln.strip()]
    if len(msg) != length:
        raise FormatError(f"message file has {len(msg)} symbols, expected {length}")
    return msg


def format_word(cf: CodeFile, word: Sequence) -> str:
    if isinstance(cf.code, RsCodeSpec):
        return "".join(cf.code.tower.format(x) + "\n" for x in word)
    F = cf.code.tower.field
    return "".join(" ".join(F.format(x) for x in col) + "\n" for col in word)


def parse_word(cf: CodeFile, text: str) -> list:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if isinstance(cf.code, RsCodeSpec):
        word = [cf.code.tower.parse(ln) for ln in lines]
        n = cf.code.n
    else:
        F, m = cf.code.tower.field, cf.code.m
        word = [[F.parse(tok) for tok in ln.split()] for ln in lines]
        if any(len(col) != m for col in word):
            raise FormatError(f"every column needs {m} symbols")
        n = cf.code.N
    if len(word) != n:
        raise FormatError(f"word has {len(word)} symbols, expected {n}")
    return word


def _random_symbol(cf: CodeFile, rng: SplitMix64):
    if isinstance(cf.code, RsCodeSpec):
        return cf.code.tower.random(rng)
    F = cf.code.tower.field
    return [F.random(rng) for _ in range(cf.code.m)]


def corrupt_word(cf: CodeFile, word: Sequence, e: int, rng: SplitMix64) -> list:
    """Replace e distinct positions (Fisher-Yates prefix) by different uniform symbols."""
    if not 0 <= e <= len(word):
        raise BadDims(f"cannot corrupt {e} of {len(word)} positions")
    out = list(word)
    for pos in rng.sample_distinct(len(word), e):
        sym = out[pos]
        while sym == out[pos]:
            sym = _random_symbol(cf, rng)
        out[pos] = sym
    return out


@dataclass
class DecodeRun:
    D: int
    threshold: int
    solver_dim: int
    pruned_dim: int
    candidates: int
    frontier: list[int]
    results: list[list[int]]

    def transcript(self) -> list[str]:
        return [
            f"D={self.D}",
            f"threshold={self.threshold}",
            f"solver_dim={self.solver_dim}",
            f"pruned_dim={self.pruned_dim}",
            f"candidates={self.candidates}",
            "frontier=" + " ".join(map(str, self.frontier)),
            f"list_size={len(self.results)}",
        ]


def decode_word(cf: CodeFile, word: Sequence, s: int | None, bound: int, cap: int) -> DecodeRun:
    """``bound`` is the error radius for RS codes and the agreement for folded codes."""
    if isinstance(cf.code, RsCodeSpec):
        spec = cf.code
        if s is None:
            raise BadDims("--s is required for Reed-Solomon decoding")
        rep = rs_decode_report(spec, word, s, bound, cap)
        results = sorted(precode_decode(spec, f) for f in rep.results)
        return DecodeRun(rep.D, spec.n - bound, rep.solver_dim, rep.pruned_dim, rep.candidates, rep.frontier, results)
    spec = cf.code
    if s is not None and s != spec.s:
        spec = folded_make(spec.tower, spec.m, s, spec.N, spec.k)
    rep = folded_decode_report(spec, word, bound, cf.precode, cap)
    return DecodeRun(rep.D, rep.threshold, rep.solver_dim, rep.pruned_dim, rep.candidates, rep.frontier, sorted(rep.results))


# ---------------------------------------------------------------------------
# commands


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a fraction: {text!r}") from exc


def _build_precode(args, F: FieldSpec, seed: int, lam: int, count: int, hse_q: int, hse_k: int):
    if args.precode == "none":
        return None
    if args.precode == "design":
        if args.t is None or args.r is None:
            raise BadDims("a design pre-code needs --t and --r")
        D = design_sample(F, lam, args.t, count, derive_seed(seed, DESIGN_SEED))
        return _certify(D, args.r, args.budget)
    if args.delta is None:
        raise BadDims("an h.s.e. pre-code needs --delta")
    if hse_k % args.delta:
        raise BadDims(f"--delta must divide the message length {hse_k}")
    params = hse_params(hse_q, args.delta, hse_k // args.delta, args.zeta, seed=derive_seed(seed, HSE_SEED))
    return hse_build(F, params)


def _certify(D: SubspaceDesign, r: int, budget: int) -> SubspaceDesign:
    d = design_verify(D, r, budget)
    return SubspaceDesign(D.field, D.dim, D.t, D.subspaces, (r, d))


def cmd_construct(args) -> int:
    if args.kind == "rs":
        for name in ("q", "m", "n", "k"):
            if getattr(args, name) is None:
                raise BadDims(f"--{name} is required for --kind rs")
        p, a = _prime_power(args.q)
        T = tower_make(field_make(p, a), args.m)
        precode = _build_precode(args, T.base, args.seed, args.m, args.k, args.q, args.k * args.m)
        if isinstance(precode, HseSet) and args.delta % args.m:
            raise BadDims("--delta must be a multiple of m")
        code = rs_make(T, args.n, args.k, None, precode)
        cf = CodeFile("rs", args.seed, code, precode)
    elif args.kind == "folded-hermitian":
        for name in ("tower_r", "e", "m", "s", "N", "k"):
            if getattr(args, name) is None:
                raise BadDims(f"--{name.replace('_', '-')} is required for --kind folded-hermitian")
        tower = HermitianTower(args.tower_r, args.e)
        code = folded_make(tower, args.m, args.s, args.N, args.k)
        lam = args.design_lambda or args.k
        if args.precode == "design" and args.k % lam:
            raise BadDims("--lambda must divide k")
        precode = _build_precode(args, tower.field, args.seed, lam, args.k // lam, tower.q, args.k)
        cf = CodeFile("folded-hermitian", args.seed, code, precode)
    else:
        for name in ("q", "design_lambda", "t", "count", "r"):
            if getattr(args, name) is None:
                raise BadDims(f"--{name.replace('design_', '')} is required for --kind design")
        p, a = _prime_power(args.q)
        F = field_make(p, a)
        D = design_sample(F, args.design_lambda, args.t, args.count, derive_seed(args.seed, DESIGN_SEED))
        cf = CodeFile("design", args.seed, None, _certify(D, args.r, args.budget))
    _emit(format_code(cf), args.out)
    return EXIT_OK


def cmd_encode(args) -> int:
    cf = load_code(args.spec)
    msg = parse_message(cf, _read(args.message))
    _emit(format_word(cf, encode_message(cf, msg)), args.out)
    return EXIT_OK


def cmd_corrupt(args) -> int:
    cf = load_code(args.spec)
    word = parse_word(cf, _read(args.codeword))
    _emit(format_word(cf, corrupt_word(cf, word, args.e, SplitMix64(args.seed))), args.out)
    return EXIT_OK


def _s_value(cf: CodeFile, s: int | None) -> int | None:
    if s is None and isinstance(cf.code, FoldedSpec):
        return cf.code.s
    return s


def _bound(cf: CodeFile, args) -> int:
    if isinstance(cf.code, RsCodeSpec):
        if args.radius is None:
            raise BadDims("--radius is required for Reed-Solomon decoding")
        return args.radius
    if args.agreement is None:
        raise BadDims("--agreement is required for folded decoding")
    return args.agreement


def cmd_decode(args) -> int:
    cf = load_code(args.spec)
    word = parse_word(cf, _read(args.received))
    run = decode_word(cf, word, args.s, _bound(cf, args), args.budget)
    _emit("".join(" ".join(message_space(cf)[0].format(x) for x in msg) + "\n" for msg in run.results), args.out)
    if args.transcript:
        head = ["command=decode", f"kind={cf.kind}", f"s={_s_value(cf, args.s)}", f"bound={_bound(cf, args)}"]
        _emit("\n".join(head + run.transcript()) + "\n", args.transcript)
    return EXIT_OK


def simulate_trial(text: str, trial: int, seed: int, s: int | None, bound: int, cap: int) -> str:
    """One encode/corrupt/decode round with its own derived stream; returns a transcript line."""
    cf = parse_code(text)
    rng = SplitMix64(derive_seed(seed, trial))
    F, length = message_space(cf)
    msg = [F.random(rng) for _ in range(length)]
    word = encode_message(cf, msg)
    errors = bound if isinstance(cf.code, RsCodeSpec) else cf.code.N - bound
    rx = corrupt_word(cf, word, errors, rng)
    run = decode_word(cf, rx, s, bound, cap)
    fields = [f"trial={trial}", f"errors={errors}"] + run.transcript()[:-2]
    fields += [f"frontier={','.join(map(str, run.frontier)) or '-'}", f"list_size={len(run.results)}"]
    fields.append(f"found={int(list(msg) in run.results)}")
    return " ".join(fields)


def cmd_simulate(args) -> int:
    cf = load_code(args.spec)
    text = format_code(cf)
    bound = _bound(cf, args)
    if isinstance(cf.code, RsCodeSpec) and args.s is not None and bound > guaranteed_radius(cf.code.n, cf.code.k, args.s):
        raise RadiusTooLarge(f"radius {bound} exceeds the guaranteed {guaranteed_radius(cf.code.n, cf.code.k, args.s)}")
    jobs = max(1, args.jobs)
    trials = range(args.trials)
    call = [(text, i, args.seed, args.s, bound, args.budget) for i in trials]
    if jobs == 1:
        lines = [simulate_trial(*c) for c in call]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            lines = list(pool.map(simulate_trial, *zip(*call)))
    found = sum(ln.endswith("found=1") for ln in lines)
    head = ["command=simulate", f"kind={cf.kind}", f"seed={args.seed}", f"s={_s_value(cf, args.s)}", f"bound={bound}", f"trials={args.trials}"]
    _emit("\n".join(head + lines + [f"found={found}/{args.trials}"]) + "\n", args.transcript or args.out)
    return EXIT_OK


def cmd_verify_design(args) -> int:
    cf = load_code(args.file)
    D = cf.precode
    if not isinstance(D, SubspaceDesign):
        raise FormatError("file carries no subspace design")
    r = args.r if args.r is not None else (D.certified[0] if D.certified else None)
    if r is None:
        raise BadDims("--r is required for an uncertified design")
    d = design_verify(D, r, args.budget)
    scanned = gaussian_binomial(D.dim, r, D.field.order)
    _emit(f"r={r}\nd={d}\nscanned={scanned}\n", args.out)
    if D.certified is not None and D.certified[0] == r and D.certified[1] != d:
        raise VerificationFailed(f"certificate mismatch: file records d={D.certified[1]}, scan gives d={d}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="listdecode", description="List decoding of RS and folded Hermitian codes.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, out: bool = True) -> None:
        p.add_argument("--budget", type=int, default=DEFAULT_CAP, help="enumeration / verification cap")
        if out:
            p.add_argument("--out", default=None, help="output file (default stdout)")

    p = sub.add_parser("construct", help="sample a code (and pre-code) and write its description")
    p.add_argument("--kind", choices=("rs", "folded-hermitian", "design"), default="rs")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--q", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--r", type=int, help="design rank bound")
    p.add_argument("--tower-r", type=int, dest="tower_r", help="Hermitian tower parameter r")
    p.add_argument("--e", type=int, help="Hermitian tower depth")
    p.add_argument("--s", type=int)
    p.add_argument("--N", type=int)
    p.add_argument("--precode", choices=("none", "design", "hse"), default="none")
    p.add_argument("--t", type=int, help="design member dimension")
    p.add_argument("--count", type=int, help="design size (kind=design)")
    p.add_argument("--lambda", type=int, dest="design_lambda", help="design ambient dimension")
    p.add_argument("--delta", type=int)
    p.add_argument("--zeta", type=_fraction, default=Fraction(1, 2))
    common(p)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("encode", help="encode a message file")
    p.add_argument("--spec", required=True)
    p.add_argument("message")
    common(p)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("corrupt", help="inject e symbol errors")
    p.add_argument("--spec", required=True)
    p.add_argument("codeword")
    p.add_argument("--e", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_corrupt)

    for name, helptext in (("decode", "list-decode a received word"), ("simulate", "run seeded round trips")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--spec", required=True)
        if name == "decode":
            p.add_argument("received")
        else:
            p.add_argument("--trials", type=int, default=1)
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--s", type=int)
        g = p.add_mutually_exclusive_group()
        g.add_argument("--radius", type=int, help="error radius (RS)")
        g.add_argument("--agreement", type=int, help="agreement threshold (folded)")
        p.add_argument("--transcript", default=None)
        common(p)
        p.set_defaults(func=cmd_decode if name == "decode" else cmd_simulate)

    p = sub.add_parser("verify-design", help="re-verify a design by exhaustive scan")
    p.add_argument("file")
    p.add_argument("--r", type=int)
    common(p)
    p.set_defaults(func=cmd_verify_design)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:
        code = exit_code(exc)
        if code is None:
            raise
        print(f"error: {exc}", file=sys.stderr)
        return code


def exit_code(exc: BaseException) -> int | None:
    if isinstance(exc, (OSError, FormatError)):
        return EXIT_IO
    if isinstance(exc, (TooLarge, FrontierOverflow)):
        return EXIT_BUDGET
    if isinstance(exc, (RadiusTooLarge, ThresholdTooLow)):
        return EXIT_RADIUS
    if isinstance(exc, (ListDecodeError, ValueError)):
        return EXIT_FAIL
    return None


if __name__ == "__main__":
    sys.exit(main())
