"""tdq command-line front end.

Exit codes: 0 pass, 1 parse error, 2 domain error, 3 identity violation,
4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import math
import random
import sys
from fractions import Fraction
from pathlib import Path

from . import digit_sums, odometer, takagi, trollope
from .digit_sums import WeightSequence, iter_S_direct
from .errors import DomainError, ModeError, ParseError, TdqError, VerificationError
from .scalar import (
    Mode,
    QWeight,
    Scalar,
    as_dyadic_fraction,
    as_qweight,
    infer_mode,
    parse_scalar,
)

N_LIMIT_DEFAULT = 1 << 62
GRID_LIMIT = 20


def _parse_scalar_arg(text: str | None, mode_opt: str | None) -> Scalar:
    if text is None:
        raise ParseError("missing scalar argument (--q/--a/--x)")
    if mode_opt:
        mode = {"exact": Mode.EXACT, "float": Mode.FLOAT, "complex": Mode.COMPLEX}[mode_opt]
    else:
        mode = infer_mode(text)
    return parse_scalar(text, mode)


def _check_n(n: int, limit: int) -> int:
    if n > limit:
        raise DomainError(f"n = {n} exceeds the configured limit {limit} (see --n-limit)")
    return n


def _parse_omega(text: str, seed: int) -> odometer.OdometerPoint:
    if text == "random":
        rng = random.Random(seed)
        bits = tuple(rng.getrandbits(1) for _ in range(64))
        return odometer.OdometerPoint(bits)
    if not text or any(c not in "01" for c in text):
        raise ParseError(f"--omega must be an LSB-first bit string or 'random': {text!r}")
    return odometer.OdometerPoint(tuple(int(c) for c in text))


def _grid(m: int) -> list[Fraction]:
    if m < 0 or m > GRID_LIMIT:
        raise DomainError(f"grid density must be in [0, {GRID_LIMIT}]")
    return [Fraction(j, 1 << m) for j in range((1 << m) + 1)]


# ---------------------------------------------------------------------------
# table output


def _write_table(args, meta: dict, columns: list[str], rows: list[list[str]]) -> None:
    fmt = getattr(args, "format", "csv")
    out = getattr(args, "out", None)
    if fmt == "json":
        payload = json.dumps({"meta": meta, "columns": columns, "rows": rows}, indent=2)
        text = payload + "\n"
    else:
        lines = ["# " + ", ".join(f"{k}={v}" for k, v in meta.items())]
        lines.append(",".join(columns))
        lines.extend(",".join(r) for r in rows)
        text = "\n".join(lines) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def _curve_rows(grid, values) -> tuple[list[str], list[list[str]]]:
    complex_mode = any(v.mode is Mode.COMPLEX for v in values)
    if complex_mode:
        cols = ["t", "re", "im"]
        rows = [
            [
                Scalar.exact(t).render(),
                Scalar.flt(complex(v.value).real).render(),
                Scalar.flt(complex(v.value).imag).render(),
            ]
            for t, v in zip(grid, values)
        ]
    else:
        cols = ["t", "value"]
        rows = [[Scalar.exact(t).render(), v.render()] for t, v in zip(grid, values)]
    return cols, rows


# ---------------------------------------------------------------------------
# eval


def cmd_eval(args) -> int:
    target = args.target
    limit = args.n_limit
    if target == "sq":
        q = _parse_scalar_arg(args.q, args.mode)
        print(digit_sums.s_q(_check_n(args.n, limit), q).render())
    elif target == "Sq":
        q = _parse_scalar_arg(args.q, args.mode)
        n = _check_n(args.n, limit)
        route = {
            "direct": digit_sums.S_q_direct,
            "recursive": digit_sums.S_q_recursive,
        }
        if args.route == "pow2":
            if n & (n - 1):
                raise DomainError("--route pow2 needs n to be a power of two")
            print(digit_sums.S_q_pow2(n.bit_length() - 1, q).render())
        else:
            print(route[args.route](n, q).render())
    elif target == "takagi":
        a = _parse_scalar_arg(args.a, args.mode)
        x = _parse_scalar_arg(args.x, None)
        if as_dyadic_fraction(x) is not None:
            print(takagi.takagi_dyadic_exact(x, a).render())
        else:
            print(takagi.takagi_series(x, a, args.tol).render())
    elif target == "hatF":
        q = _parse_scalar_arg(args.q, args.mode)
        print(takagi.hat_F_q(args.u, q).render())
    elif target == "tildeF":
        q = _parse_scalar_arg(args.q, args.mode)
        print(takagi.tilde_F_q(args.u, q).render())
    elif target == "tildeF1":
        print(takagi.tilde_F_1(args.t).render())
    elif target == "Gq":
        q = _parse_scalar_arg(args.q, args.mode)
        print(odometer.G_q(_check_n(args.n, limit), q).render())
    elif target == "vdc":
        print(trollope.vdc_star_discrepancy(_check_n(args.n, limit)).render())
    else:  # pragma: no cover - argparse restricts choices
        raise ParseError(f"unknown eval target {target}")
    return 0


# ---------------------------------------------------------------------------
# verify


def _render_residual(worst, mode: Mode) -> str:
    if mode is Mode.EXACT:
        f = Fraction(worst)
        return f"{f.numerator}/{f.denominator}"
    return Scalar.flt(float(worst)).render()


def _report(name: str, qtext: str, worst, witness, mode: Mode, ok: bool) -> int:
    tag = "PASS" if ok else f"FAIL at n={witness}"
    print(f"{name}: q={qtext} mode={mode.value} max residual {_render_residual(worst, mode)}, {tag}")
    return 0 if ok else 3


def _sweep(n_max, qv, rhs_fn):
    """Max |rhs(n) - S_q(n)/n| over n in [1, n_max]; returns (worst, witness)."""
    worst = 0
    witness = None
    for n, s_acc in iter_S_direct(n_max, qv):
        residual = abs(rhs_fn(n) - s_acc / n)
        if residual > worst:
            worst, witness = residual, n
    return worst, witness


def cmd_verify(args) -> int:
    target = args.target
    if target == "theorem1":
        q = _parse_scalar_arg(args.q, args.mode)
        qw = QWeight.of(q)
        worst, witness = _sweep(
            args.n_max, qw.q.value, lambda n: trollope.theorem1_rhs(n, qw).value
        )
        ok = worst == 0 if q.mode is Mode.EXACT else worst <= args.tol
        return _report("theorem1", args.q, worst, witness, q.mode, ok)

    if target == "dyadic":
        q = _parse_scalar_arg(args.q, args.mode)
        worst, witness = _sweep(
            args.n_max, q.value, lambda n: trollope.dyadic_formula(n, q).value
        )
        ok = worst == 0 if q.mode is Mode.EXACT else worst <= args.tol
        return _report("dyadic", args.q, worst, witness, q.mode, ok)

    if target == "prop2":
        q = _parse_scalar_arg(args.q, args.mode)
        qw = QWeight.of(q)
        worst = 0
        witness = None
        for N in range(2, args.N + 1):
            r = odometer.prop2_exact(qw, N).max_residual.value
            if r > worst:
                worst, witness = r, N
        ok = worst == 0 if q.mode is Mode.EXACT else worst <= args.tol
        tag = "PASS" if ok else f"FAIL at N={witness}"
        print(
            f"prop2: q={args.q} mode={q.mode.value} N<={args.N} "
            f"max residual {_render_residual(worst, Mode.EXACT if q.mode is Mode.EXACT else Mode.FLOAT)}, {tag}"
        )
        return 0 if ok else 3

    if target == "recursions":
        q = _parse_scalar_arg(args.q, args.mode)
        qv = q.value
        worst = 0
        witness = None
        for n, s_acc in iter_S_direct(args.n_max, qv):
            r = abs(digit_sums.S_rec_payload(n, qv) - s_acc)
            if n & (n - 1) == 0:
                r = max(r, abs(digit_sums.S_pow2_payload(n.bit_length() - 1, qv) - s_acc))
            if r > worst:
                worst, witness = r, n
        ok = worst == 0 if q.mode is Mode.EXACT else worst <= args.tol
        return _report("recursions", args.q, worst, witness, q.mode, ok)

    if target == "corollary":
        q = _parse_scalar_arg(args.q, args.mode)
        qf = float(q.promote(Mode.FLOAT).value)
        if qf <= 0.5 or qf == 1.0:
            raise DomainError("corollary requires real q > 1/2, q != 1")
        worst = 0.0
        witness = None
        for n, s_acc in iter_S_direct(args.n_max, qf):
            lg = math.log2(n)
            rhs = qf / 2 * (
                (1 - qf ** lg) / (1 - qf)
                + qf ** lg * float(takagi.tilde_F_q(lg, q).value)
            )
            lhs = s_acc / n
            rel = abs(rhs - lhs) / (1.0 + abs(lhs))
            if rel > worst:
                worst, witness = rel, n
        ok = worst <= args.tol
        return _report("corollary", args.q, worst, witness, Mode.FLOAT, ok)

    if target == "larcher":
        c = float(args.gamma_limit)
        gamma_const = WeightSequence.constant(Scalar.flt(c))
        worst = 0.0
        witness = None
        for n in (3, 5, 17, 100, 255, 1024):
            r = abs(float(trollope.larcher_residual(n, gamma_const, args.tol).value))
            if r > n * args.tol + 1e-9:
                if r > worst:
                    worst, witness = r, n
        gamma_decay = WeightSequence(
            values=tuple(Scalar.flt(c + 2.0 ** -i) for i in range(64)),
            tail=Scalar.flt(c),
        )
        r_small = abs(float(trollope.larcher_residual(1 << 6, gamma_decay, args.tol).value)) / (1 << 6)
        r_big = abs(float(trollope.larcher_residual(1 << 10, gamma_decay, args.tol).value)) / (1 << 10)
        trend_ok = r_big < r_small
        ok = witness is None and trend_ok
        print(
            f"larcher: gamma_limit={c:g} constant-weight residual "
            f"{'ok' if witness is None else f'violated at n={witness} ({worst:g})'}; "
            f"decay trend |r/n|: {r_small:.3g} -> {r_big:.3g} "
            f"({'decreasing' if trend_ok else 'NOT decreasing'}), {'PASS' if ok else 'FAIL'}"
        )
        return 0 if ok else 3

    raise ParseError(f"unknown verify target {target}")  # pragma: no cover


# ---------------------------------------------------------------------------
# curve / figures


def _takagi_curve_values(a: Scalar, grid) -> list[Scalar]:
    return [takagi.takagi_dyadic_exact(t, a) for t in grid]


def cmd_curve(args) -> int:
    target = args.target
    grid = _grid(args.grid)
    if target == "takagi":
        a = _parse_scalar_arg(args.a, args.mode)
        values = _takagi_curve_values(a, grid)
        meta = {"curve": "takagi", "a": args.a, "mode": a.mode.value, "depth": args.grid}
    elif target == "F":
        q = _parse_scalar_arg(args.q, args.mode)
        values = [takagi.F_q(t, q) for t in grid]
        meta = {"curve": "F", "q": args.q, "mode": q.mode.value, "depth": args.grid}
    elif target == "tildeF":
        q = _parse_scalar_arg(args.q, args.mode)
        if q.value == 1:
            values = [takagi.tilde_F_1(float(t)) for t in grid]
        else:
            values = [takagi.tilde_F_q(float(t), q) for t in grid]
        meta = {"curve": "tildeF", "q": args.q, "mode": "float", "depth": args.grid}
    elif target == "complex-takagi":
        q = _parse_scalar_arg(args.q, "complex")
        qw = QWeight.of(q)
        values = [takagi.takagi_dyadic_exact(t, qw.a) for t in grid]
        meta = {"curve": "complex-takagi", "q": args.q, "mode": "complex", "depth": args.grid}
    elif target == "Gtilde":
        values = [takagi.G_tilde_gamma(float(t), float(args.gamma_limit), args.tol) for t in grid]
        meta = {
            "curve": "Gtilde",
            "gamma_limit": args.gamma_limit,
            "mode": "float",
            "depth": args.grid,
        }
    elif target == "fluctuation":
        return _fluctuation(args)
    else:  # pragma: no cover
        raise ParseError(f"unknown curve target {target}")
    cols, rows = _curve_rows(grid, values)
    _write_table(args, meta, cols, rows)
    return 0


def _fluctuation(args) -> int:
    q = _parse_scalar_arg(args.q, args.mode)
    qw = QWeight.of(q)
    omega = _parse_omega(args.omega, args.seed)
    l = _check_n(args.l, args.n_limit)
    grid = _grid(args.grid)
    partials = odometer.orbit_partial_sums(omega, qw, l)
    if args.R == "auto-prop2":
        if l & (l - 1) or l < 2:
            raise DomainError("--R auto-prop2 needs l to be a power of two >= 2")
        N = l.bit_length() - 1
        r = Scalar(qw.q.mode, (2 * qw.q.value) ** (N - 1))
        curve = odometer.phi_curve(partials, l, grid, odometer.Normalization.EXPLICIT, r)
    elif args.R == "max-abs":
        curve = odometer.phi_curve(partials, l, grid, odometer.Normalization.MAX_ABS)
    else:
        r = _parse_scalar_arg(args.R, args.mode)
        curve = odometer.phi_curve(partials, l, grid, odometer.Normalization.EXPLICIT, r)
    meta = {
        "curve": "fluctuation",
        "q": args.q,
        "omega": args.omega,
        "l": l,
        "R": curve.R.render(),
        "mode": qw.q.mode.value,
        "depth": args.grid,
        "seed": args.seed,
    }
    cols, rows = _curve_rows(grid, curve.values)
    _write_table(args, meta, cols, rows)
    dist = odometer.sup_distance_to_limit(curve, qw)
    print(f"sup distance to -q*T_a: {dist.render()}", file=sys.stderr)
    return 0


FIG1_PANELS = ("-1/2", "1/2", "2/3", "1/4")
FIGT_PANELS = ("2/3", "1", "3/2", "4")
FIG3_PANELS = ("i", "0.5+0.5i", "0.5-0.5i")


def _slug(text: str) -> str:
    """Filename-safe parameter slug: short exact decimal if one exists, else p_q."""
    try:
        fr = Fraction(text)
    except (ValueError, ZeroDivisionError):
        return text.replace("/", "_")
    for digits in range(4):
        scaled = fr * 10 ** digits
        if scaled.denominator == 1:
            return str(fr.numerator) if digits == 0 else f"{float(fr):g}"
    return text.replace("/", "_")


def cmd_figures(args) -> int:
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    grid = _grid(args.grid)
    written = []

    def emit(name: str, meta: dict, values) -> None:
        cols, rows = _curve_rows(grid, values)
        lines = ["# " + ", ".join(f"{k}={v}" for k, v in meta.items())]
        lines.append(",".join(cols))
        lines.extend(",".join(r) for r in rows)
        (outdir / name).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
        written.append(name)

    for a_text in FIG1_PANELS:
        a = parse_scalar(a_text, Mode.EXACT)
        emit(
            f"fig1_a{_slug(a_text)}.csv",
            {"figure": 1, "a": a_text, "mode": "exact", "depth": args.grid},
            _takagi_curve_values(a, grid),
        )
    q23 = parse_scalar("2/3", Mode.EXACT)
    emit(
        "fig2_F_q2_3.csv",
        {"figure": 2, "q": "2/3", "mode": "exact", "depth": args.grid},
        [takagi.F_q(t, q23) for t in grid],
    )
    for q_text in FIGT_PANELS:
        q = parse_scalar(q_text, Mode.EXACT)
        if q.value == 1:
            vals = [takagi.tilde_F_1(float(t)) for t in grid]
        else:
            vals = [takagi.tilde_F_q(float(t), q) for t in grid]
        emit(
            f"figT_q{_slug(q_text)}.csv",
            {"figure": "tildeF", "q": q_text, "mode": "float", "depth": args.grid},
            vals,
        )
    for q_text in FIG3_PANELS:
        q = parse_scalar(q_text, Mode.COMPLEX)
        qw = QWeight.of(q)
        emit(
            f"fig3_q_{_slug(q_text)}.csv",
            {"figure": 3, "q": q_text, "mode": "complex", "depth": args.grid},
            [takagi.takagi_dyadic_exact(t, qw.a) for t in grid],
        )
    print(f"wrote {len(written)} files to {outdir}")
    return 0


# ---------------------------------------------------------------------------
# odometer


def cmd_odometer(args) -> int:
    target = args.target
    if target == "run":
        pt = _parse_omega(args.omega, args.seed)
        for i in range(args.steps):
            bits = "".join(str(b) for b in pt.bits)
            print(f"{bits} (n={pt.value()})")
            if i + 1 < args.steps:
                pt = odometer.odometer_step(pt)
        return 0

    if target == "birkhoff":
        q = _parse_scalar_arg(args.q, args.mode)
        # Monte Carlo proxy: computed in float regardless of how q parses
        qf = complex(q.promote(Mode.COMPLEX).value)
        qf = qf.real if qf.imag == 0 else qf
        qw = as_qweight(qf)
        if qw.q.modulus() >= 1:
            raise DomainError("birkhoff requires |q| < 1")
        omega = _parse_omega(args.omega, args.seed)
        n = _check_n(args.n, args.n_limit)
        mean_target = qw.q.value / (2 * (1 - qw.q.value))
        acc = odometer._OrbitAccumulator(omega, qw.q.value)
        total = acc.s
        print(f"# q={args.q} omega={args.omega} seed={args.seed} E[s_q]={Scalar(qw.q.mode, mean_target).render()}")
        checkpoint = 1
        for j in range(1, n + 1):
            if j == checkpoint or j == n:
                dev = total / j - mean_target
                print(f"n={j} deviation={Scalar(qw.q.mode, dev).render()}")
                while checkpoint <= j:
                    checkpoint <<= 1
            if j < n:
                acc.step()
                total = total + acc.s
        return 0

    if target == "fluctuation":
        return _fluctuation(args)

    if target == "search":
        q = _parse_scalar_arg(args.q, args.mode)
        omega = _parse_omega(args.omega, args.seed)
        windows = [int(w) for w in args.candidates.split(",") if w]
        grid = _grid(args.grid)
        report = odometer.stabilizer_search(omega, q, windows, grid)
        print(f"# q={args.q} omega={args.omega} seed={args.seed}")
        for l, dist in report.entries:
            print(f"l={l} sup_distance={dist:.6g}")
        print(f"best l={report.best_l} distance={report.best_distance:.6g}")
        return 0

    raise ParseError(f"unknown odometer target {target}")  # pragma: no cover


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tdq", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, q=False, a=False):
        if q:
            sp.add_argument("--q", required=True, help="weight parameter (rational, float, or complex)")
        if a:
            sp.add_argument("--a", required=True, help="Takagi parameter a")
        sp.add_argument("--mode", choices=["exact", "float", "complex"], default=None)
        sp.add_argument("--n-limit", type=int, default=N_LIMIT_DEFAULT)
        sp.add_argument("--seed", type=int, default=0)

    pe = sub.add_parser("eval", help="evaluate a single quantity")
    pe.add_argument("target", choices=["sq", "Sq", "takagi", "hatF", "tildeF", "tildeF1", "Gq", "vdc"])
    pe.add_argument("--q")
    pe.add_argument("--a")
    pe.add_argument("--x")
    pe.add_argument("--n", type=int)
    pe.add_argument("--u", type=float)
    pe.add_argument("--t", type=float)
    pe.add_argument("--tol", type=float, default=takagi.DEFAULT_SERIES_TOL)
    pe.add_argument("--route", choices=["direct", "recursive", "pow2"], default="recursive")
    common(pe)
    pe.set_defaults(func=cmd_eval)

    pv = sub.add_parser("verify", help="run an identity sweep")
    pv.add_argument("target", choices=["theorem1", "dyadic", "prop2", "recursions", "corollary", "larcher"])
    pv.add_argument("--q", default="2/3")
    pv.add_argument("--n-max", type=int, default=4096)
    pv.add_argument("--N", type=int, default=8)
    pv.add_argument("--tol", type=float, default=1e-9)
    pv.add_argument("--gamma-limit", type=float, default=1.0)
    common(pv)
    pv.set_defaults(func=cmd_verify)

    pc = sub.add_parser("curve", help="sample a curve to CSV/JSON")
    pc.add_argument("target", choices=["takagi", "tildeF", "F", "complex-takagi", "Gtilde", "fluctuation"])
    pc.add_argument("--q")
    pc.add_argument("--a")
    pc.add_argument("--grid", type=int, default=10, help="grid density m; 2^m+1 points")
    pc.add_argument("--tol", type=float, default=takagi.DEFAULT_SERIES_TOL)
    pc.add_argument("--gamma-limit", type=float, default=1.0)
    pc.add_argument("--omega", default="0")
    pc.add_argument("--l", type=int, default=1024)
    pc.add_argument("--R", default="max-abs")
    pc.add_argument("--out")
    pc.add_argument("--format", choices=["csv", "json"], default="csv")
    common(pc)
    pc.set_defaults(func=cmd_curve)

    pf = sub.add_parser("figures", help="emit figure-reproduction data files")
    pf.add_argument("--out", default="figures")
    pf.add_argument("--grid", type=int, default=10)
    common(pf)
    pf.set_defaults(func=cmd_figures)

    po = sub.add_parser("odometer", help="odometer trajectories and fluctuation curves")
    po.add_argument("target", choices=["run", "birkhoff", "fluctuation", "search"])
    po.add_argument("--q", default="2/3")
    po.add_argument("--omega", default="0")
    po.add_argument("--steps", type=int, default=8)
    po.add_argument("--n", type=int, default=1 << 16)
    po.add_argument("--l", type=int, default=1024)
    po.add_argument("--R", default="auto-prop2")
    po.add_argument("--grid", type=int, default=6)
    po.add_argument("--candidates", default="16,32,64,128,256,512,1024")
    po.add_argument("--out")
    po.add_argument("--format", choices=["csv", "json"], default="csv")
    common(po)
    po.set_defaults(func=cmd_odometer)

    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except SystemExit as exc:  # argparse usage errors map onto the parse slot
        return 0 if exc.code in (0, None) else 1
    except ParseError as exc:
        print(f"tdq: parse error: {exc}", file=sys.stderr)
        return 1
    except (DomainError, ModeError) as exc:
        print(f"tdq: domain error: {exc}", file=sys.stderr)
        return 2
    except VerificationError as exc:
        print(f"tdq: identity violation: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"tdq: i/o error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
