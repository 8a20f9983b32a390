"""phaselab command line.

Every subcommand runs one lab, writes a report (JSON by default, CSV with
``--format csv``) and prints a one-line summary. Exit status: 0 when every
checked invariant holds, 1 when one fails, 2 on usage errors (bad flags,
unreadable vector files, dimensions over the cap).

JSON reports have the layout ``{schema, command, config, rows, pass}``;
CSV reports hold the rows with a header line. CSV columns per subcommand:

  phi-matrix    n, m, re, im
  heisenberg    D, residual, residual_sq, residual_sq_over_D, expected_sq
  cancellation  n, term, partial_sum
  density       k, distance_sq, expected, S_abs
  graphnorm     M, sum | n_max, log_series_error
  weyl          s, t, D, defect, relative_change
  covariance    a, b, t, D, defect
  povm          j, a, b, min_eig, max_eig, idempotency_defect | resolution_error
  riemann       k, error, bound, within_bound, ratio
  moments       k, D, defect
  distribution  j, a, b, mass
  spectrum      index, eigenvalue
  selftest      module, check, value, limit, pass

Reports are written to ``--output`` if given, else to
``$PHASELAB_OUTPUT_DIR/<command>.<format>`` (default: current directory).
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from phaselab import commutator, hardy, linalg, povm, reports, selftest, weyl
from phaselab.hardy import Arc, Arg, CoeffVec, Indicator, TrigMonomial, toeplitz
from phaselab.linalg import DimensionError, hermitian_eigen

TOLERANCES = {
    "phi_fidelity": 1e-15,
    "heisenberg": 1e-10,
    "membership": commutator.MEMBERSHIP_TOL,
    "cancellation_floor": commutator.CANCELLATION_FLOOR,
    "weyl_axis": 1e-10,
    "stabilization": 0.05,
    "covariance": 1e-12,
    "povm": 1e-10,
    "resolution": 1e-13,
    "moment": 1e-14,
    "distribution": 1e-10,
    "spectrum": 1e-10,
}


class UsageError(Exception):
    pass


def _int_list(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _float_list(text):
    out = []
    for x in text.split(","):
        x = x.strip().lower()
        if not x:
            continue
        try:
            out.append(_angle(x))
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    return out


def _angle(x):
    # accepts plain floats and the forms pi, -pi, pi/3, 2pi
    x = x.replace(" ", "")
    if "pi" not in x:
        return float(x)
    head, _, tail = x.partition("pi")
    coef = {"": 1.0, "-": -1.0, "+": 1.0}.get(head.rstrip("*"), None)
    if coef is None:
        coef = float(head.rstrip("*"))
    value = coef * math.pi
    if tail:
        if not tail.startswith("/"):
            raise ValueError(x)
        value /= float(tail[1:])
    return value


def _arc(text):
    parts = _float_list(text)
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("an arc is given as a,b")
    try:
        return Arc(parts[0], parts[1])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _tol_pair(text):
    name, sep, value = text.partition("=")
    if not sep or name not in TOLERANCES:
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE with NAME in {sorted(TOLERANCES)}")
    try:
        return name, float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad tolerance value {value!r}")


def load_vector(source):
    """Inline JSON ``[[re, im], ...]`` or a path to a file holding it."""
    if source.lstrip().startswith("["):
        text = source
    else:
        try:
            with open(source) as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read vector file {source!r}: {exc.strerror}")
    try:
        return CoeffVec.from_json(text)
    except (ValueError, TypeError) as exc:
        raise UsageError(f"bad vector: {exc}")


class Context:
    def __init__(self, args):
        self.args = args
        self.tol = dict(TOLERANCES)
        self.tol.update(dict(args.tol or []))
        self.cap = args.dim_cap

    def dims(self, *dims):
        for d in dims:
            if d < 1:
                raise UsageError(f"dimension must be >= 1, got {d}")
            if d > self.cap:
                raise UsageError(f"dimension {d} exceeds the cap {self.cap}")
        return dims

    def config(self, **extra):
        cfg = {
            "seed": self.args.seed,
            "dim_cap": self.cap,
            "backend": linalg.get_backend(),
            "tolerances": {k: self.tol[k] for k in sorted(self.tol)},
        }
        cfg.update(extra)
        return cfg


def cmd_phi_matrix(ctx, a):
    ctx.dims(a.dim)
    if a.symbol == "arg":
        sym = Arg()
    elif a.symbol == "indicator":
        sym = Indicator(a.arc)
    else:
        sym = TrigMonomial(a.k)
    e = toeplitz(sym, a.dim).entries
    rows = [{"n": n, "m": m, "re": float(e[n, m].real), "im": float(e[n, m].imag)}
            for n in range(a.dim) for m in range(a.dim)]
    ok = True
    if a.symbol == "arg":
        n, m = np.indices(e.shape)
        diff = np.where(n == m, 1, m - n)
        closed = np.where(n == m, 0, -1j * (1 - 2 * ((m - n) & 1)) / diff)
        ok = float(np.max(np.abs(e - closed))) <= ctx.tol["phi_fidelity"]
    return rows, ok, {"dim": a.dim, "symbol": a.symbol}


def cmd_heisenberg(ctx, a):
    f = load_vector(a.vector)
    ctx.dims(*a.dims)
    rep = commutator.heisenberg_residuals(f, a.dims)
    s_sq = abs(rep.S) ** 2
    rows, ok = [], True
    prev = 0.0
    for d, r in rep.residuals:
        expected = s_sq * d
        rows.append({"D": d, "residual": r, "residual_sq": r * r, "residual_sq_over_D": r * r / d,
                     "expected_sq": expected})
        # exact law: every coordinate of [Phi,N]f - if has modulus |S|
        ok &= abs(r * r - expected) <= ctx.tol["heisenberg"] * max(1.0, expected)
        ok &= r >= prev - ctx.tol["heisenberg"]
        prev = r
    member = commutator.in_commutator_domain(f, ctx.tol["membership"])
    if member:
        ok &= all(r <= ctx.tol["heisenberg"] for _, r in rep.residuals)
    cfg = {"vector": f.to_pairs(), "dims": sorted(a.dims), "S": rep.S, "in_Y": member}
    return rows, ok, cfg


def cmd_cancellation(ctx, a):
    f = load_vector(a.vector)
    rep = commutator.cancellation_report(f, a.n_max)
    tol = rep.tolerance(ctx.tol["cancellation_floor"])
    err = abs(rep.tail_average - abs(rep.S) ** 2)
    ok = err <= tol and bool(np.all(rep.terms >= 0))
    cfg = {"vector": f.to_pairs(), "n_max": a.n_max, "S": rep.S, "window_start": rep.window_start,
           "tail_average": rep.tail_average, "tolerance": tol}
    return rep.rows(), ok, cfg


def cmd_density(ctx, a):
    rows, ok = [], True
    for k in a.ks:
        f, dist = commutator.density_witness(k)
        s = abs(hardy.eval_at_minus_one(f))
        rows.append({"k": k, "distance_sq": dist, "expected": 1.0 / k, "S_abs": s})
        ok &= abs(dist - 1.0 / k) <= 1e-15 and s <= ctx.tol["membership"]
    return rows, ok, {"ks": a.ks}


def cmd_graphnorm(ctx, a):
    rows, ok = [], True
    for M in a.ms:
        total = commutator.graph_norm_witness(M)
        rows.append({"M": M, "sum": total})
        ok &= total == M
    err = commutator.log_series_crosscheck(a.log_m)
    rows.append({"n_max": a.log_m, "log_series_error": err})
    ok &= err <= 1e-15
    return rows, ok, {"ms": a.ms, "log_m": a.log_m}


def cmd_weyl(ctx, a):
    dims = a.dims or [a.dim]
    ctx.dims(*dims)
    if min(dims) < 2:
        raise UsageError("weyl needs D >= 2")
    rep = weyl.weyl_scan(a.s, a.t, dims)
    rows, ok = [], True
    prev = {}
    for s, t, d, x in rep.grid:
        change = None
        if (s, t) in prev and x > 0:
            change = abs(x - prev[(s, t)]) / x
        prev[(s, t)] = x
        rows.append({"s": s, "t": t, "D": d, "defect": x, "relative_change": change})
        ok &= 0.0 <= x <= 2.0 + 1e-12
        if s == 0 or t == 0:
            ok &= x <= ctx.tol["weyl_axis"]
    top = max(dims)
    for r in rows:
        if r["D"] == top and r["relative_change"] is not None and r["s"] != 0 and r["t"] != 0:
            ok &= r["relative_change"] < ctx.tol["stabilization"]
    return rows, ok, {"s": list(a.s), "t": list(a.t), "dims": sorted(dims)}


def cmd_covariance(ctx, a):
    ctx.dims(*a.dims)
    rows, ok = [], True
    for t in a.t:
        for d in a.dims:
            x = weyl.covariance_defect(a.arc, t, d)
            rows.append({"a": a.arc.a, "b": a.arc.b, "t": t, "D": d, "defect": x})
            ok &= x <= ctx.tol["covariance"]
    return rows, ok, {"arc": [a.arc.a, a.arc.b], "t": list(a.t), "dims": list(a.dims)}


def cmd_povm(ctx, a):
    ctx.dims(a.dim)
    tol = ctx.tol["povm"]
    rows, ok = [], True
    total = np.zeros((a.dim, a.dim), dtype=np.complex128)
    for j, cell in enumerate(povm.equipartition(a.k), start=1):
        q = povm.povm_element(cell, a.dim)
        total += q.entries
        w = hermitian_eigen(q, vectors=False).eigenvalues
        idem = linalg.operator_norm(q @ q - q)
        rows.append({"j": j, "a": cell.a, "b": cell.b, "min_eig": float(w[0]), "max_eig": float(w[-1]),
                     "idempotency_defect": idem})
        ok &= w[0] >= -tol and w[-1] <= 1 + tol
    res = float(np.max(np.abs(total - np.eye(a.dim))))
    rows.append({"j": "sum", "resolution_error": res})
    ok &= res <= ctx.tol["resolution"]
    return rows, ok, {"k": a.k, "dim": a.dim}


def cmd_riemann(ctx, a):
    ctx.dims(a.dim)
    rep = povm.riemann_convergence(a.ks, a.dim)
    rows = rep.rows()
    for prev, row in zip([None] + rows[:-1], rows):
        row["ratio"] = row["error"] / prev["error"] if prev and prev["error"] > 0 else None
    return rows, rep.all_within_bound, {"ks": a.ks, "dim": a.dim}


def cmd_moments(ctx, a):
    ctx.dims(a.dim)
    rows, ok = [], True
    for k in a.ks:
        if k < 0:
            raise UsageError("moment order must be >= 0")
        x = povm.moment_defect(k, a.dim)
        rows.append({"k": k, "D": a.dim, "defect": x})
        ok &= x <= ctx.tol["moment"]
    return rows, ok, {"ks": a.ks, "dim": a.dim}


def cmd_distribution(ctx, a):
    f = load_vector(a.vector)
    ctx.dims(a.dim)
    if a.rotate:
        f = povm.rotate_vector(f, a.rotate)
    try:
        dist = povm.phase_distribution(f, a.k, a.dim)
    except ValueError as exc:
        raise UsageError(str(exc))
    m = dist.masses
    tol = ctx.tol["distribution"]
    ok = abs(m.sum() - 1.0) <= tol and m.min() >= -1e-12
    cfg = {"vector": f.to_pairs(), "k": a.k, "dim": a.dim, "rotate": a.rotate}
    return dist.rows(), bool(ok), cfg


def cmd_spectrum(ctx, a):
    ctx.dims(a.dim)
    w = hermitian_eigen(toeplitz(Arg(), a.dim), vectors=False).eigenvalues
    rows = [{"index": i, "eigenvalue": float(x)} for i, x in enumerate(w)]
    bound = math.pi + ctx.tol["spectrum"]
    return rows, bool(np.all(np.abs(w) <= bound)), {"dim": a.dim}


def cmd_selftest(ctx, a):
    dims = weyl.DEFAULT_DIMS if a.full else selftest.QUICK_WEYL_DIMS
    ctx.dims(*dims)
    rows = selftest.run_selftest(seed=a.seed, weyl_dims=dims)
    return rows, all(r["pass"] for r in rows), {"weyl_dims": list(dims)}


COMMANDS = {
    "phi-matrix": (cmd_phi_matrix, "entries of a Toeplitz section (default symbol: arg)"),
    "heisenberg": (cmd_heisenberg, "residuals of [Phi,N]f = if over D"),
    "cancellation": (cmd_cancellation, "tail of n^2 |(Phi f)_n|^2 against |f(-1)|^2"),
    "density": (cmd_density, "density witnesses f_k and their distance to e_0"),
    "graphnorm": (cmd_graphnorm, "divergence witness for Phi 1 and the log-series check"),
    "weyl": (cmd_weyl, "Weyl-relation defect over an (s, t, D) grid"),
    "covariance": (cmd_covariance, "covariance of Q(B) under the number group"),
    "povm": (cmd_povm, "positivity, resolution of identity and idempotency of Q"),
    "riemann": (cmd_riemann, "Riemann-sum reconstruction of Phi from Q"),
    "moments": (cmd_moments, "shift powers against the moments of Q"),
    "distribution": (cmd_distribution, "phase distribution of a vector over an equipartition"),
    "spectrum": (cmd_spectrum, "eigenvalues of Phi_D"),
    "selftest": (cmd_selftest, "run every invariant check"),
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--output", "-o", help="report path (default: $PHASELAB_OUTPUT_DIR/<command>.<format>)")
    common.add_argument("--seed", type=lambda x: int(x, 0), default=selftest.DEFAULT_SEED,
                        help="RNG seed (default 0x5EED)")
    common.add_argument("--dim-cap", type=int, default=linalg.MAX_DIM, help="largest accepted D (default 4096)")
    common.add_argument("--tol", type=_tol_pair, action="append", metavar="NAME=VALUE",
                        help="override a tolerance; repeatable")
    common.add_argument("--backend", choices=linalg.available_backends(), default=linalg.get_backend(),
                        help="Jacobi kernel")

    parser = argparse.ArgumentParser(
        prog="phaselab",
        description="Number-phase operator lab on truncated Hardy space.",
        epilog=__doc__.split("\n\n", 2)[2],
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    p = {name: sub.add_parser(name, parents=[common], help=text, description=text)
         for name, (_, text) in COMMANDS.items()}

    p["phi-matrix"].add_argument("--dim", type=int, default=8)
    p["phi-matrix"].add_argument("--symbol", choices=["arg", "indicator", "monomial"], default="arg")
    p["phi-matrix"].add_argument("--arc", type=_arc, default=Arc(0.0, math.pi), help="a,b for --symbol indicator")
    p["phi-matrix"].add_argument("--k", type=int, default=1, help="exponent for --symbol monomial")

    p["heisenberg"].add_argument("--vector", required=True, help="JSON [[re,im],...] or a file holding it")
    p["heisenberg"].add_argument("--dims", type=_int_list, default=[64, 256, 1024])

    p["cancellation"].add_argument("--vector", required=True)
    p["cancellation"].add_argument("--n-max", type=int, default=512,
                                   help="largest n; with f(-1) = 0 the 1e-10 floor needs n_max ~ 1.2e5")

    p["density"].add_argument("--ks", type=_int_list, default=[1, 4, 100])

    p["graphnorm"].add_argument("--ms", type=_int_list, default=[1, 10, 1000, 10000])
    p["graphnorm"].add_argument("--log-m", type=int, default=100)

    p["weyl"].add_argument("--s", type=_float_list, default=list(weyl.DEFAULT_S))
    p["weyl"].add_argument("--t", type=_float_list, default=list(weyl.DEFAULT_T))
    g = p["weyl"].add_mutually_exclusive_group()
    g.add_argument("--dim", type=int, default=64)
    g.add_argument("--dims", type=_int_list)

    p["covariance"].add_argument("--arc", type=_arc, default=Arc(0.0, math.pi / 2))
    p["covariance"].add_argument("--t", type=_float_list, default=[0.0, 1.0, 2.1])
    p["covariance"].add_argument("--dims", type=_int_list, default=[32, 128])

    p["povm"].add_argument("--k", type=int, default=8)
    p["povm"].add_argument("--dim", type=int, default=64)

    p["riemann"].add_argument("--ks", type=_int_list, default=[4, 16, 64, 256])
    p["riemann"].add_argument("--dim", type=int, default=64)

    p["moments"].add_argument("--ks", type=_int_list, default=list(range(9)))
    p["moments"].add_argument("--dim", type=int, default=16)

    p["distribution"].add_argument("--vector", required=True)
    p["distribution"].add_argument("--k", type=int, default=8)
    p["distribution"].add_argument("--dim", type=int, default=64)
    p["distribution"].add_argument("--rotate", type=_angle, default=0.0, help="apply exp(itN) first")

    p["spectrum"].add_argument("--dim", type=int, default=64)

    p["selftest"].add_argument("--full", action="store_true", help="use the full default Weyl grid up to D=256")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.dim_cap < 2:
        parser.error("--dim-cap must be >= 2")
    for name in ("k", "n_max", "log_m"):
        if getattr(args, name, 1) < 1:
            parser.error(f"--{name.replace('_', '-')} must be >= 1")
    for name in ("ks", "ms", "dims"):
        if getattr(args, name, None) == []:
            parser.error(f"--{name} must not be empty")

    previous_cap = linalg.MAX_DIM
    previous_backend = linalg.set_backend(args.backend)
    linalg.MAX_DIM = args.dim_cap
    handler = COMMANDS[args.command][0]
    ctx = Context(args)
    try:
        rows, ok, extra = handler(ctx, args)
        config = ctx.config(**extra)
    except (UsageError, DimensionError) as exc:
        print(f"phaselab {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"phaselab {args.command}: error: {exc}", file=sys.stderr)
        return 2
    finally:
        linalg.MAX_DIM = previous_cap
        linalg.set_backend(previous_backend)

    report = reports.Report(args.command, config, rows, ok)
    path = reports.default_path(args.command, args.format, args.output)
    try:
        reports.write(report, args.format, path)
    except OSError as exc:
        print(f"phaselab {args.command}: error: cannot write {path}: {exc.strerror}", file=sys.stderr)
        return 2
    failed = sum(1 for r in rows if r.get("pass") is False)
    detail = f", {failed} failed" if failed else ""
    print(f"{args.command}: {len(rows)} rows{detail}, {'PASS' if ok else 'FAIL'} -> {path}")
    return 0 if ok else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
