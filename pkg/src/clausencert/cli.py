"""Command-line front end: check, scan, verify-lemma, coeffs.

Exit codes: 0 Holds / success, 1 Fails, 2 PreconditionViolated,
3 Inconclusive, 64 usage error, 74 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

from .certificates import (
    _EXCESS,
    Certificate,
    TheoremId,
    Verdict,
    cross_validate,
    evaluate,
    parse_theorem,
)
from .errors import DomainError
from .lemma import LEMMA_PARTS, lemma4_closed_forms, lemma_margins, lemma_sum_brute, lemma_sum_closed
from .operator import OperatorParams, hyper_coefficients, log_hyper_coefficients
from .series import DEFAULT_CONFIG, EvalConfig

EXIT_OK = 0
EXIT_FAILS = 1
EXIT_PRECONDITION = 2
EXIT_INCONCLUSIVE = 3
EXIT_USAGE = 64
EXIT_IO = 74

VERDICT_EXIT = {
    Verdict.HOLDS: EXIT_OK,
    Verdict.FAILS: EXIT_FAILS,
    Verdict.PRECONDITION_VIOLATED: EXIT_PRECONDITION,
    Verdict.INCONCLUSIVE: EXIT_INCONCLUSIVE,
}

CONFIG_ENV = "CLAUSENCERT_CONFIG"
CSV_FIELDS = ("theorem", "a", "b", "c", "lambda", "beta", "lhs", "rhs", "margin", "verdict", "oracle_T")
PARAM_ORDER = ("a", "b", "c", "lambda", "beta")
MAX_COEFFS = 10_000
_CONFIG_KEYS = {
    "rel_tol": float,
    "abs_tol": float,
    "max_terms": int,
    "margin": float,
    "precondition_margin": float,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


# ---------------------------------------------------------------- formatting


def fmt_float(x) -> str:
    """17 significant digits, empty for missing values."""
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    return format(float(x), ".17g")


def csv_row(record: dict) -> list[str]:
    return [fmt_float(record[k]) for k in CSV_FIELDS]


def write_rows(records, fh, fmt: str) -> None:
    if fmt == "csv":
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_FIELDS)
        for r in records:
            w.writerow(csv_row(r))
    else:
        for r in records:
            fh.write(json.dumps({k: r[k] for k in CSV_FIELDS}) + "\n")


# ---------------------------------------------------------------- config


def read_config_file(path: str) -> dict:
    """Parse ``key = value`` lines; '#' starts a comment."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in _CONFIG_KEYS:
                raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
            try:
                out["margin" if key == "precondition_margin" else key] = _CONFIG_KEYS[key](value)
            except ValueError:
                raise UsageError(f"{path}:{lineno}: bad value {value!r}") from None
    return out


def build_config(args) -> EvalConfig:
    """Flags override the config file, which overrides the defaults."""
    settings: dict = {}
    path = getattr(args, "config", None) or os.environ.get(CONFIG_ENV)
    if path:
        try:
            settings.update(read_config_file(path))
        except OSError as exc:
            raise UsageError(f"cannot read config file {path}: {exc}") from None
    if getattr(args, "tol", None) is not None:
        settings["rel_tol"] = args.tol
    if getattr(args, "max_terms", None) is not None:
        settings["max_terms"] = args.max_terms
    try:
        return replace(DEFAULT_CONFIG, **settings)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# ---------------------------------------------------------------- parameters


def parse_scalar(text: str, allow_complex: bool = False) -> float | complex:
    s = text.strip()
    if allow_complex and "j" in s.lower():
        try:
            return complex(s.replace(" ", ""))
        except ValueError:
            raise UsageError(f"cannot parse complex value {text!r}") from None
    try:
        return float(s)
    except ValueError:
        raise UsageError(f"cannot parse number {text!r}") from None


def parse_range(text: str) -> tuple[float, float, float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"range must be start:stop:step, got {text!r}")
    start, stop, step = (parse_scalar(p) for p in parts)
    if not step > 0:
        raise UsageError(f"range step must be positive, got {text!r}")
    if not start < stop:
        raise UsageError(f"range needs start < stop, got {text!r}")
    return start, stop, step


def range_values(start: float, stop: float, step: float) -> list[float]:
    """start + k*step for k = 0.. while within stop (inclusive, 1e-9 step slack)."""
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [start + k * step for k in range(count)]


def _params(a, b, c) -> OperatorParams:
    if isinstance(a, complex) or isinstance(b, complex):
        return OperatorParams.from_complex(a, b, c)
    return OperatorParams(abs(a), abs(b), c)


def theorem_requirements(theorem: TheoremId) -> list[str]:
    out = ["a", "b", "c"]
    if theorem.uses_lambda:
        out.append("lambda")
    if theorem.uses_beta:
        out.append("beta")
    return out


def precondition_table(theorem: TheoremId) -> str:
    lines = [f"{theorem.value} parameters: " + ", ".join(theorem_requirements(theorem))]
    lines.append("  c > 0")
    if theorem in (TheoremId.T2_2, TheoremId.T5_2):
        lines += [
            "  |a| != 1, |b| != 1, |b| != 2",
            "  c > max{|a|+1, |a|+|b|-1}",
            "  c > |a|+|b|",
        ]
    else:
        k = _EXCESS[theorem]
        lines.append("  c > |a|+|b|" + (f"+{k}" if k else ""))
    if theorem.uses_lambda:
        lines.append("  0 < lambda <= 1")
    if theorem.uses_beta:
        lines.append("  0 <= beta < 1")
    lines.append("  strict inequalities must hold by more than the precondition margin")
    return "\n".join(lines)


# ---------------------------------------------------------------- check


def certify(theorem: TheoremId, a, b, c, lam, beta, cfg: EvalConfig, oracle: bool = True) -> Certificate:
    cert = evaluate(theorem, _params(a, b, c), lam, beta, cfg)
    return cross_validate(cert, cfg) if oracle else cert


def cmd_check(args) -> int:
    theorem = parse_theorem(args.theorem)
    cfg = build_config(args)
    values = {}
    for name in theorem_requirements(theorem):
        raw = getattr(args, name.replace("lambda", "lam"))
        if raw is None:
            if name == "lambda" and theorem is TheoremId.COR2:
                continue
            raise UsageError(f"{theorem.value} needs --{name}")
        values[name] = parse_scalar(raw, allow_complex=name in ("a", "b"))
    for name in ("lambda", "beta"):
        if name not in theorem_requirements(theorem) and getattr(args, name.replace("lambda", "lam")) is not None:
            if not (name == "lambda" and theorem is TheoremId.COR2):
                raise UsageError(f"{theorem.value} takes no --{name}")
    lam = values.get("lambda")
    if theorem is TheoremId.COR2 and args.lam is not None:
        lam = parse_scalar(args.lam)
    cert = certify(theorem, values["a"], values["b"], values["c"], lam, values.get("beta"), cfg, not args.no_oracle)
    print(cert.to_json(indent=2 if args.json else None))
    return VERDICT_EXIT[cert.verdict]


# ---------------------------------------------------------------- scan


@dataclass(frozen=True)
class ScanRequest:
    theorem: TheoremId
    fixed: dict = field(default_factory=dict)
    swept: tuple = ()
    out: str | None = None
    format: str = "csv"

    def __post_init__(self):
        need = set(theorem_requirements(self.theorem))
        names = [s[0] for s in self.swept]
        if not 1 <= len(self.swept) <= 3:
            raise UsageError("scan needs between one and three swept parameters")
        if len(set(names)) != len(names) or set(names) & set(self.fixed):
            raise UsageError("each parameter must be fixed or swept exactly once")
        given = set(names) | set(self.fixed)
        if self.theorem is TheoremId.COR2:
            given.add("lambda")
            need.add("lambda")
        if given != need:
            missing, extra = need - given, given - need
            msg = []
            if missing:
                msg.append("missing " + ", ".join(sorted(missing)))
            if extra:
                msg.append("unexpected " + ", ".join(sorted(extra)))
            raise UsageError(f"{self.theorem.value}: " + "; ".join(msg))
        if self.format not in ("csv", "jsonl"):
            raise UsageError(f"unknown format {self.format!r}")

    def points(self):
        """Grid points in lexicographic order of the swept parameters."""
        order = sorted(self.swept, key=lambda s: PARAM_ORDER.index(s[0]))
        axes = [range_values(*s[1:]) for s in order]
        for combo in itertools.product(*axes):
            point = dict(self.fixed)
            point.update(zip((s[0] for s in order), combo))
            yield point


def _scan_point(job):
    theorem, point, cfg = job
    lam = point.get("lambda")
    if theorem is TheoremId.COR2 and lam is None:
        lam = 1.0
    try:
        cert = certify(theorem, point["a"], point["b"], point["c"], lam, point.get("beta"), cfg)
    except DomainError:
        # out-of-range lambda/beta or a nonpositive a, b, c on the grid
        params = {"a": abs(point["a"]), "b": abs(point["b"]), "c": point["c"]}
        rec = dict.fromkeys(CSV_FIELDS)
        rec.update(params, theorem=theorem.value, verdict=Verdict.PRECONDITION_VIOLATED.value)
        rec["lambda"], rec["beta"] = lam, point.get("beta")
        return rec
    return cert.record()


def run_scan(req: ScanRequest, cfg: EvalConfig, workers: int = 1) -> list[dict]:
    jobs = [(req.theorem, p, cfg) for p in req.points()]
    if workers <= 1 or len(jobs) < 2:
        return [_scan_point(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        # map keeps submission order, so output order never depends on scheduling
        return list(pool.map(_scan_point, jobs, chunksize=max(1, len(jobs) // (4 * workers))))


def scan_request_from_args(args) -> ScanRequest:
    theorem = parse_theorem(args.theorem)
    fixed, swept = {}, []
    for name in PARAM_ORDER:
        raw = getattr(args, name.replace("lambda", "lam"))
        if raw is None:
            continue
        if ":" in raw:
            swept.append((name, *parse_range(raw)))
        else:
            fixed[name] = parse_scalar(raw, allow_complex=name in ("a", "b"))
    return ScanRequest(theorem, fixed, tuple(swept), args.out, args.format)


def cmd_scan(args) -> int:
    req = scan_request_from_args(args)
    cfg = build_config(args)
    rows = run_scan(req, cfg, args.workers)
    buf = io.StringIO()
    write_rows(rows, buf, req.format)
    try:
        if req.out in (None, "-"):
            sys.stdout.write(buf.getvalue())
        else:
            with open(req.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(buf.getvalue())
    except OSError as exc:
        print(f"cannot write {req.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


# ---------------------------------------------------------------- verify-lemma


def default_lemma_grid(part: int) -> list[tuple[float, float, float]]:
    """Admissible points spread over small, unit and larger parameters."""
    pts = []
    for a in (0.3, 0.75, 1.5, 2.5):
        for b in (0.4, 1.5, 3.5):
            if part == 4:
                if abs(a - 1.0) < 0.05:
                    continue
                base = max(a + 1.0, a + b - 1.0)
            else:
                base = a + b + part
            for e in (0.25, 1.0, 3.0):
                pts.append((a, b, base + e))
    return pts


def _grid_from_args(args) -> list[tuple[float, float, float]]:
    if args.default_grid:
        return default_lemma_grid(args.part)
    axes = []
    for name in ("a", "b", "c"):
        raw = getattr(args, name)
        if raw is None:
            raise UsageError(f"verify-lemma needs --{name} or --default-grid")
        axes.append(range_values(*parse_range(raw)) if ":" in raw else [parse_scalar(raw)])
    return list(itertools.product(*axes))


def verify_point(part: int, a: float, b: float, c: float, cfg: EvalConfig) -> dict:
    row = {"a": a, "b": b, "c": c}
    bad = [(n, m) for n, m in lemma_margins(part, a, b, c) if not m > cfg.margin]
    if bad:
        row["skipped"] = "; ".join(f"{n} margin {m:.3g}" for n, m in bad)
        return row
    brute = lemma_sum_brute(part, a, b, c, cfg)
    if part == 4:
        forms = lemma4_closed_forms(a, b, c, cfg)
        closed = forms["statement"]
        row["closed_proof_form"] = forms["proof"]
    else:
        closed = lemma_sum_closed(part, a, b, c, cfg)
    row.update(
        closed=closed,
        brute=brute.value,
        tail=brute.tail_bound,
        converged=brute.converged,
        rel_err=abs(closed - brute.value) / max(abs(brute.value), 1e-300),
    )
    return row


def cmd_verify_lemma(args) -> int:
    part = args.part
    cfg = build_config(argparse.Namespace(config=args.config, tol=None, max_terms=args.max_terms))
    rows = [verify_point(part, *p, cfg) for p in _grid_from_args(args)]
    checked = [r for r in rows if "skipped" not in r]
    worst = max(checked, key=lambda r: r["rel_err"], default=None)
    ok = all(r["converged"] and r["rel_err"] <= args.tol for r in checked)
    if args.json:
        summary = {"part": part, "tol": args.tol, "points": len(rows), "checked": len(checked), "worst": worst, "ok": ok}
        print(json.dumps({"summary": summary, "rows": rows}))
    else:
        for r in rows:
            head = f"a={fmt_float(r['a'])} b={fmt_float(r['b'])} c={fmt_float(r['c'])}"
            if "skipped" in r:
                print(f"{head} skipped ({r['skipped']})")
                continue
            line = f"{head} closed={fmt_float(r['closed'])}"
            if "closed_proof_form" in r:
                line += f" closed_proof_form={fmt_float(r['closed_proof_form'])}"
            line += f" brute={fmt_float(r['brute'])} +/- {r['tail']:.2g} rel_err={r['rel_err']:.3g}"
            if not r["converged"]:
                line += " (brute sum not converged)"
            print(line)
        if worst is None:
            print(f"part {part}: no admissible points")
        else:
            print(
                f"part {part}: {len(checked)} checked, {len(rows) - len(checked)} skipped, "
                f"worst rel_err {worst['rel_err']:.3g} at a={worst['a']:g} b={worst['b']:g} c={worst['c']:g}, "
                + ("all within" if ok else "NOT all within")
                + f" tol {args.tol:g}"
            )
    return EXIT_OK if ok else EXIT_FAILS


# ---------------------------------------------------------------- coeffs


def _render_coefficient(value: float, log_value: float) -> str:
    if value != 0.0 and math.isfinite(value):
        return fmt_float(value)
    # outside the double range: mantissa and exponent from the logarithm
    l10 = log_value / math.log(10.0)
    e = math.floor(l10)
    m = 10.0 ** (l10 - e)
    if m >= 10.0:
        m, e = m / 10.0, e + 1
    return f"{m:.16f}e{e:+d}"


def cmd_coeffs(args) -> int:
    if args.N is None or not 1 <= args.N <= MAX_COEFFS:
        raise UsageError(f"--N must lie in [1, {MAX_COEFFS}]")
    vals = [parse_scalar(getattr(args, n), allow_complex=n in ("a", "b")) for n in ("a", "b", "c")]
    params = _params(*vals)
    coeffs = hyper_coefficients(params, args.N)
    logs = log_hyper_coefficients(params, args.N)
    buf = io.StringIO()
    if args.json:
        for n, (v, lv) in enumerate(zip(coeffs, logs), 1):
            buf.write(json.dumps({"n": n, "B_n": _render_coefficient(float(v), float(lv))}) + "\n")
    else:
        buf.write("n,B_n\n")
        for n, (v, lv) in enumerate(zip(coeffs, logs), 1):
            buf.write(f"{n},{_render_coefficient(float(v), float(lv))}\n")
    try:
        if args.out in (None, "-"):
            sys.stdout.write(buf.getvalue())
        else:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(buf.getvalue())
    except OSError as exc:
        print(f"cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="clausencert", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, tol_help="relative tolerance of every series"):
        sp.add_argument("--a", help="|a| (or a complex value such as 0.6+0.8j)")
        sp.add_argument("--b", help="|b| (or a complex value)")
        sp.add_argument("--c", help="real parameter c")
        sp.add_argument("--tol", type=float, help=tol_help)
        sp.add_argument("--max-terms", type=int, dest="max_terms")
        sp.add_argument("--config", help=f"key = value config file (default: ${CONFIG_ENV})")
        sp.add_argument("--json", action="store_true")

    c = sub.add_parser("check", help="evaluate one certificate")
    c.add_argument("--theorem", required=True)
    common(c)
    c.add_argument("--lambda", dest="lam")
    c.add_argument("--beta")
    c.add_argument("--no-oracle", action="store_true", help="skip the brute-force cross-check")
    c.set_defaults(func=cmd_check)

    s = sub.add_parser("scan", help="sweep a parameter grid (values or start:stop:step)")
    s.add_argument("--theorem", required=True)
    common(s)
    s.add_argument("--lambda", dest="lam")
    s.add_argument("--beta")
    s.add_argument("--out")
    s.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_scan)

    v = sub.add_parser("verify-lemma", help="closed form against direct summation")
    v.add_argument("--part", type=int, required=True, choices=LEMMA_PARTS)
    v.add_argument("--a")
    v.add_argument("--b")
    v.add_argument("--c")
    v.add_argument("--default-grid", action="store_true")
    v.add_argument("--tol", type=float, default=1e-8, help="acceptance threshold on relative error")
    v.add_argument("--max-terms", type=int, dest="max_terms")
    v.add_argument("--config")
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_verify_lemma)

    k = sub.add_parser("coeffs", help="dump B_1..B_N as CSV")
    k.add_argument("--a", required=True)
    k.add_argument("--b", required=True)
    k.add_argument("--c", required=True)
    k.add_argument("--N", type=int, required=True)
    k.add_argument("--out")
    k.add_argument("--json", action="store_true", help="JSON lines instead of CSV")
    k.set_defaults(func=cmd_coeffs)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, DomainError, ValueError) as exc:
        print(f"clausencert {args.command}: error: {exc}", file=sys.stderr)
        theorem = getattr(args, "theorem", None)
        if theorem:
            try:
                print(precondition_table(parse_theorem(theorem)), file=sys.stderr)
            except ValueError:
                print("known theorems: " + ", ".join(t.value for t in TheoremId), file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
