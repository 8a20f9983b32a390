"""The invariant suite behind ``phaselab selftest``.

Every check yields one row ``{module, check, value, limit, pass}``. Random
inputs come from a single ``numpy.random.default_rng(seed)`` stream consumed
in a fixed order, so a given seed always produces the same rows.
"""

from __future__ import annotations

import math

import numpy as np

from phaselab import commutator, hardy, oracles, povm, weyl
from phaselab.hardy import Arc, Arg, CoeffVec, Indicator, Step, TrigMonomial, toeplitz
from phaselab.linalg import TruncatedOperator, hermitian_eigen, operator_norm, unitary_exp

DEFAULT_SEED = 0x5EED
# the full default Weyl grid takes ~30 s; selftest stops at D=128 unless
# asked for all of the default sections
QUICK_WEYL_DIMS = (32, 64, 128)
# with S = 0, t_n decays like 1/n^2, so the 1e-10 absolute floor of the
# cancellation tolerance is only reached for n_max above ~1.2e5
CANCELLATION_NMAX_S0 = 2 ** 17


def _row(module, check, value, limit, ok):
    return {"module": module, "check": check, "value": float(value), "limit": limit, "pass": bool(ok)}


def random_hermitian(rng, dim):
    x = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return TruncatedOperator(0.5 * (x + x.conj().T), hermitian=True)


def random_vector(rng, max_support=40):
    n = int(rng.integers(1, max_support + 1))
    return CoeffVec(rng.random(n) + 1j * rng.random(n))


def _op_dist(a, b):
    return float(np.linalg.norm(a - b, 2))


def linalg_checks(rng):
    rows = []
    m = random_hermitian(rng, 16)
    s, t = 0.7, -1.3
    eig = hermitian_eigen(m)
    u_s, u_ms, u_t = unitary_exp(m, s, eig), unitary_exp(m, -s, eig), unitary_exp(m, t, eig)
    u_st = unitary_exp(m, s + t, eig)
    eye = np.eye(16)
    inv = _op_dist(u_s.entries @ u_ms.entries, eye)
    rows.append(_row("core-linalg", "unitary_exp(M,s) unitary_exp(M,-s) = I", inv, 1e-10, inv <= 1e-10))
    grp = _op_dist(u_s.entries @ u_t.entries, u_st.entries)
    rows.append(_row("core-linalg", "group law unitary_exp(M,s+t)", grp, 1e-9, grp <= 1e-9))
    orth = _op_dist(eig.vectors.conj().T @ eig.vectors, eye)
    rows.append(_row("core-linalg", "eigenvectors orthonormal", orth, 1e-10, orth <= 1e-10))

    d = rng.normal(size=12)
    w = hermitian_eigen(TruncatedOperator(np.diag(d))).eigenvalues
    exact = bool(np.array_equal(w, np.sort(d)))
    rows.append(_row("core-linalg", "real diagonal eigenvalues exact", 0.0 if exact else 1.0, 0.0, exact))

    big = random_hermitian(rng, 64)
    rec = hermitian_eigen(big)
    err = np.linalg.norm(rec.reconstruct() - big.entries) / np.linalg.norm(big.entries)
    rows.append(_row("core-linalg", "reconstruction D=64 (relative Frobenius)", err, 1e-9, err <= 1e-9))

    worst = -math.inf
    for _ in range(5):
        a = TruncatedOperator(rng.normal(size=(12, 12)) + 1j * rng.normal(size=(12, 12)))
        b = TruncatedOperator(rng.normal(size=(12, 12)) + 1j * rng.normal(size=(12, 12)))
        worst = max(worst, operator_norm(a @ b) - operator_norm(a) * operator_norm(b))
    rows.append(_row("core-linalg", "submultiplicative ||AB|| - ||A|| ||B||", worst, 1e-9, worst <= 1e-9))

    phi = toeplitz(Arg(), 32).entries
    herm = float(np.max(np.abs(phi - phi.conj().T)))
    rows.append(_row("core-linalg", "Phi_32 - Phi_32* entrywise", herm, 1e-13, herm <= 1e-13))
    n2 = operator_norm(toeplitz(Arg(), 2))
    rows.append(_row("core-linalg", "||Phi_2|| = 1", abs(n2 - 1), 1e-12, abs(n2 - 1) <= 1e-12))
    n128 = operator_norm(toeplitz(Arg(), 128))
    rows.append(_row("core-linalg", "||Phi_128|| in (0, pi]", n128, math.pi, 0 < n128 <= math.pi))
    return rows


def _symbol_zoo(rng):
    cells = sorted(rng.uniform(-math.pi, math.pi, size=4))
    step = Step(((Arc(cells[0], cells[1]), 1.5), (Arc(cells[2], cells[3]), -0.25)))
    return [
        ("Arg", Arg()),
        ("Indicator(0,pi]", Indicator(Arc(0.0, math.pi))),
        ("Indicator wrapped", Indicator(Arc(2.0, 4.5))),
        ("TrigMonomial(3)", TrigMonomial(3)),
        ("Step", step),
    ]


def hardy_checks(rng):
    rows = []
    ks = np.arange(-16, 17)
    for name, sym in _symbol_zoo(rng):
        closed = hardy.fourier_coefficients(sym, ks)
        quad = np.array([oracles.simpson_coefficient(sym, int(k)) for k in ks])
        err = float(np.max(np.abs(closed - quad)))
        rows.append(_row("hardy-ops", f"Simpson cross-check {name}", err, 1e-8, err <= 1e-8))
        if sym.real:
            asym = float(np.max(np.abs(closed[::-1] - np.conj(closed))))
            rows.append(_row("hardy-ops", f"conjugate symmetry {name}", asym, 0.0, asym == 0.0))

    fid = float(np.max(np.abs(toeplitz(Arg(), 32).entries - oracles.brute_phi_matrix(32))))
    rows.append(_row("hardy-ops", "toeplitz(Arg,32) vs matrix elements", fid, 1e-15, fid <= 1e-15))

    D, M = 24, 40
    phi = toeplitz(Arg(), D).entries
    col = max(
        float(np.max(np.abs(hardy.phi_apply_exact(CoeffVec.basis(m), M).padded(D) - phi[:, m])))
        for m in range(D)
    )
    rows.append(_row("hardy-ops", "phi_apply_exact(e_m) = column m", col, 1e-15, col <= 1e-15))

    D = 32
    worst = 0.0
    for j, k in [(1, 2), (3, -2), (-4, -1), (5, 0), (2, -5)]:
        lhs = toeplitz(TrigMonomial(j), D).entries @ toeplitz(TrigMonomial(k), D).entries
        rhs = toeplitz(TrigMonomial(j + k), D).entries
        lo, hi = abs(j) + abs(k), D - abs(j) - abs(k)
        worst = max(worst, float(np.max(np.abs(lhs[lo:hi, lo:hi] - rhs[lo:hi, lo:hi]))))
    rows.append(_row("hardy-ops", "trig monomial multiplicativity (interior block)", worst, 1e-15, worst <= 1e-15))
    return rows


def commutator_checks(rng):
    rows = []
    worst = 0.0
    sym = 0.0
    for _ in range(200):
        f, g = random_vector(rng), random_vector(rng)
        d = commutator.sesquilinear_defect(f, g)
        sf, sg = hardy.eval_at_minus_one(f), hardy.eval_at_minus_one(g)
        worst = max(worst, abs(d + 1j * sf * np.conj(sg)))
        sym = max(sym, abs(d + np.conj(commutator.sesquilinear_defect(g, f))))
    rows.append(_row("commutator-lab", "defect law, 200 random pairs", worst, 1e-10, worst <= 1e-10))
    rows.append(_row("commutator-lab", "defect antisymmetry", sym, 1e-12, sym <= 1e-12))

    ys = [CoeffVec.basis(n) + CoeffVec.basis(n + 1) for n in range(21)]
    ys += [commutator.density_witness(k)[0] for k in (1, 4, 100)]
    worst = max(r for f in ys for _, r in commutator.heisenberg_residuals(f, [64, 512]).residuals)
    rows.append(_row("commutator-lab", "Heisenberg residual on Y", worst, 1e-10, worst <= 1e-10))

    rep = commutator.heisenberg_residuals(CoeffVec.basis(0), [64, 1024])
    rel = max(abs(r * r - d) / d for d, r in rep.residuals)
    rows.append(_row("commutator-lab", "e_0: r_D^2 = D", rel, 1e-10, rel <= 1e-10))

    worst = 0.0
    for _ in range(10):
        f = random_vector(rng, max_support=8)
        target = rng.uniform(0.5, 2.0)
        f = f * (target / abs(hardy.eval_at_minus_one(f)))
        rep = commutator.heisenberg_residuals(f, [4096])
        worst = max(worst, abs(rep.slope / abs(rep.S) ** 2 - 1.0))
    rows.append(_row("commutator-lab", "slope r_D^2/D / |S|^2 - 1 at D=4096", worst, 0.2, worst <= 0.2))

    for k, expect in [(1, 1.0), (4, 0.25), (100, 0.01)]:
        f, dist = commutator.density_witness(k)
        err = max(abs(dist - expect), abs(hardy.eval_at_minus_one(f)))
        rows.append(_row("commutator-lab", f"density witness k={k}", err, 1e-15, err <= 1e-15))

    for M in (1, 10, 1000, 10000):
        err = abs(commutator.graph_norm_witness(M) - M)
        rows.append(_row("commutator-lab", f"graph norm witness M={M}", err, 0.0, err == 0.0))

    ls = commutator.log_series_crosscheck(100)
    rec = float(np.max(np.abs(
        hardy.phi_apply_exact(CoeffVec.basis(0), 101).padded(101)[1:] - oracles.log_series_coefficients(100)
    )))
    rows.append(_row("commutator-lab", "log series closed form, n<=100", ls, 1e-15, ls <= 1e-15))
    rows.append(_row("commutator-lab", "log series recurrence, n<=100", rec, 1e-15, rec <= 1e-15))

    decay = [commutator.cancellation_report(CoeffVec([1, 1]), n).tail_average for n in (128, 512)]
    rows.append(_row("commutator-lab", "cancellation tail S=0 at n_max=512", decay[1], 1e-3,
                     decay[1] <= 1e-3 and decay[1] < decay[0]))
    cases = [("S=0", CoeffVec([1, 1]), CANCELLATION_NMAX_S0), ("S=1", CoeffVec([1]), 512), ("S=2", CoeffVec([2]), 512)]
    for label, f, n_max in cases:
        rep = commutator.cancellation_report(f, n_max)
        err = abs(rep.tail_average - abs(rep.S) ** 2)
        rows.append(_row("commutator-lab", f"cancellation tail {label}", err, rep.tolerance(), err <= rep.tolerance()))
    return rows


def weyl_checks(rng, dims=QUICK_WEYL_DIMS):
    rows = []
    report = weyl.weyl_scan(dims=dims)
    axes = max(x for s, t, _, x in report.grid if s == 0 or t == 0)
    rows.append(_row("weyl-lab", "defect on s=0 and t=0 axes", axes, 1e-10, axes <= 1e-10))
    top = max(x for *_, x in report.grid)
    rows.append(_row("weyl-lab", "defect <= 2", top, 2.0, top <= 2.0 + 1e-12))
    nonzero = min(x for s, t, _, x in report.grid if s != 0 and t != 0)
    rows.append(_row("weyl-lab", "defect > 0 off the axes", nonzero, 0.0, nonzero > 0.0))

    d_lo, d_hi = sorted(dims)[-2:]
    stab = [r for r in report.stabilization() if r["D_to"] == d_hi and r["s"] != 0 and r["t"] != 0]
    worst = max(r["relative_change"] for r in stab)
    rows.append(_row("weyl-lab", f"stabilization D={d_lo}->{d_hi}", worst, 0.05, worst < 0.05))
    by = report.by_point()
    ratio = min(dict(by[key])[d_hi] / dict(by[key])[d_lo] for key in by if key[0] != 0 and key[1] != 0)
    rows.append(_row("weyl-lab", "defect(D_max) / defect(D_prev)", ratio, 0.5, ratio >= 0.5))

    # exp(itN) has period 2pi but exp(-ist) only 2pi q for s = p/q
    per = max(
        abs(weyl.weyl_defect(s, t, 32) - weyl.weyl_defect(s, t + 2 * math.pi * q, 32))
        for s, q, t in [(1.0, 1, 1.0), (2.0, 1, 2.0), (-0.5, 2, math.pi / 3)]
    )
    rows.append(_row("weyl-lab", "t-periodicity (period 2pi q at s = p/q)", per, 1e-10, per <= 1e-10))

    arcs = [Arc(0.0, math.pi / 2), Arc(-math.pi, math.pi), Arc(2.5, 4.0), Arc(-3.0, -2.2)]
    a = sorted(rng.uniform(-math.pi, math.pi, size=2))
    arcs.append(Arc(a[0], a[1]))
    worst = max(
        weyl.covariance_defect(arc, t, d)
        for arc in arcs
        for t in (0.0, 0.4, 1.0, 2.1, -2.9)
        for d in (32, 128)
    )
    rows.append(_row("weyl-lab", "covariance 5 arcs x 5 t x 2 D", worst, 1e-12, worst <= 1e-12))
    return rows


def povm_checks(rng):
    rows = []
    worst = 0.0
    for k in (2, 7, 64):
        for D in (16, 128):
            total = sum(povm.povm_element(c, D).entries for c in povm.equipartition(k))
            worst = max(worst, float(np.max(np.abs(total - np.eye(D)))))
    rows.append(_row("povm-lab", "resolution of identity", worst, 1e-13, worst <= 1e-13))

    lo, hi = math.inf, -math.inf
    for arc in povm.equipartition(7) + [Arc(0.3, 2.0), Arc(2.0, 5.0)]:
        w = hermitian_eigen(povm.povm_element(arc, 32), vectors=False).eigenvalues
        lo, hi = min(lo, w[0]), max(hi, w[-1])
    rows.append(_row("povm-lab", "positivity: min eigenvalue", lo, -1e-10, lo >= -1e-10))
    rows.append(_row("povm-lab", "positivity: max eigenvalue", hi, 1 + 1e-10, hi <= 1 + 1e-10))

    q = povm.povm_element(Arc(0.0, math.pi), 64)
    gap = operator_norm(q @ q - q)
    rows.append(_row("povm-lab", "non-projectivity ||Q^2 - Q|| at D=64", gap, 0.01, gap > 0.01))

    rep = povm.riemann_convergence([4, 16, 64, 256], 64)
    slack = max(err - 2 * math.pi / k for k, err in rep.table)
    rows.append(_row("povm-lab", "Riemann error - 2pi/k", slack, 1e-10, slack <= 1e-10))
    errs = [err for _, err in rep.table]
    ratio = max(b / a for a, b in zip(errs, errs[1:]))
    rows.append(_row("povm-lab", "Riemann ratio error_4k / error_k", ratio, 0.5, ratio <= 0.5))

    mom = max(povm.moment_defect(k, D) for k in range(9) for D in (4, 8, 16))
    rows.append(_row("povm-lab", "moment defect k<=8", mom, 1e-14, mom <= 1e-14))

    cuts = np.sort(rng.uniform(-math.pi, math.pi, size=10))
    step = Step(tuple((Arc(cuts[2 * i], cuts[2 * i + 1]), float(rng.normal())) for i in range(5)))
    cons = max(povm.step_symbol_consistency(step, 32), povm.step_symbol_consistency(povm.arg_step_symbol(16), 32))
    rows.append(_row("povm-lab", "step symbol consistency", cons, 1e-13, cons <= 1e-13))

    worst_sum, worst_neg, worst_shift = 0.0, 0.0, 0.0
    for _ in range(5):
        f = random_vector(rng, max_support=12)
        for k in (1, 5, 8):
            dist = povm.phase_distribution(f, k, 48).masses
            worst_sum = max(worst_sum, abs(dist.sum() - 1.0))
            worst_neg = max(worst_neg, -dist.min())
            moved = povm.phase_distribution(povm.rotate_vector(f, 2 * math.pi / k), k, 48).masses
            worst_shift = max(worst_shift, float(np.max(np.abs(moved - np.roll(dist, -1)))))
    rows.append(_row("povm-lab", "distribution sums to 1", worst_sum, 1e-10, worst_sum <= 1e-10))
    rows.append(_row("povm-lab", "distribution nonnegative", worst_neg, 1e-12, worst_neg <= 1e-12))
    rows.append(_row("povm-lab", "rotation shifts distribution cyclically", worst_shift, 1e-10, worst_shift <= 1e-10))
    return rows


def run_selftest(seed=DEFAULT_SEED, weyl_dims=QUICK_WEYL_DIMS):
    rng = np.random.default_rng(seed)
    rows = []
    rows += linalg_checks(rng)
    rows += hardy_checks(rng)
    rows += commutator_checks(rng)
    rows += weyl_checks(rng, weyl_dims)
    rows += povm_checks(rng)
    return rows
