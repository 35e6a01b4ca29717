"""Acceptance gate: one criterion per test, one pass/fail line each.

Tolerances are pinned in the assertions; exact claims are checked with
rational arithmetic and no tolerance at all.
"""

import csv
import json
import subprocess
import sys
import time
from fractions import Fraction

import numpy as np

from susyfactor.core import Poly, Problem, QuasiFunction
from susyfactor.diffop import DiffOp, hamiltonian
from susyfactor import associated, degenerate, numeric, principal

from conftest import FAMILIES, confluent, hermite, hypergeom, jacobi, legendre

PRESETS = list(FAMILIES.values())


def _report(n: int, desc: str, ok: bool):
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'} - {desc}")
    assert ok, f"criterion {n} failed: {desc}"


def test_criterion_01_exact_spectra():
    t0 = time.perf_counter()
    ok = True
    for a, b in [(0, 0), (1, 0), (2, 3), (Fraction(1, 2), Fraction(1, 2))]:
        table = principal.factor_table(jacobi(a, b), "minus", 10)
        ok &= all(table[n].lam == n * (n + a + b + 1) for n in range(11))
    for n in range(7):
        # b chosen off the integer lattice so no alpha vanishes en route
        for b, c in [(Fraction(7, 3), Fraction(5, 2)),
                     (Fraction(1, 2), Fraction(3, 2))]:
            a = Fraction(-n)
            table = principal.factor_table(hypergeom(a, b, c), "minus", n)
            ok &= table[n].lam == a * b
    for m in (3, Fraction(1, 2)):
        table = principal.factor_table(confluent(m), "minus", 10)
        ok &= all(table[n].lam == n for n in range(11))
    ok &= all(degenerate.hermite_generate(l)[1] == l for l in range(11))
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 5
    _report(1, "closed-form spectra of the classical presets, exact, "
               f"{elapsed:.2f}s < 5s", ok)


def test_criterion_02_exact_eigen_residuals():
    t0 = time.perf_counter()
    ok = True
    for prob in PRESETS:
        for l in range(9):
            for m in range(-l, l + 1):
                h = associated.assoc_hamiltonian(prob, m)
                phi = associated.assoc_bottom_up(prob, l, m).value
                lam = associated.assoc_lambda(prob, l, m)
                res = h.apply(phi, prob).sub(phi.scale(lam), prob)
                ok &= res.is_zero()
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 30
    _report(2, "eigen-equation residuals vanish exactly for 0<=|m|<=l<=8, "
               f"all presets, {elapsed:.2f}s < 30s", ok)


def test_criterion_03_cross_path_consistency():
    t0 = time.perf_counter()
    ok = True
    for prob in PRESETS:
        for l in range(11):
            forms = [associated.assoc_bottom_up(prob, l, 0).value,
                     associated.assoc_top_down(prob, l, 0).value]
            phi, _ = principal.principal_eigenfunction(prob, l)
            forms.append(QuasiFunction(phi))
            for m in range(1, l + 1):
                forms = [associated.assoc_bottom_up(prob, l, m).value,
                         associated.assoc_top_down(prob, l, m).value]
                ok &= forms[0].proportional(forms[1], prob) is not None
            for i in range(len(forms)):
                for j in range(i + 1, len(forms)):
                    ok &= forms[i].proportional(forms[j], prob) is not None
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 30
    _report(3, "ladder/Rodrigues/bottom-up/top-down constructions pairwise "
               f"proportional for m<=l<=10, {elapsed:.2f}s < 30s", ok)


def test_criterion_04_recurrence_vs_closed_form():
    ok = True
    for prob in PRESETS:
        rec = principal.factor_table(prob, "minus", 10) \
            + principal.factor_table(prob, "plus", 10)
        ok &= rec == principal.direct_match_table(prob, 10)
    _report(4, "recurrence factor tables equal closed-form tables "
               "entry-wise, both branches, l<=10, all presets", ok)


def test_criterion_05_operator_identities():
    ok = True
    for prob in PRESETS:
        minus = principal.factor_table(prob, "minus", 9)
        plus = principal.factor_table(prob, "plus", 9)
        for l in range(9):
            if l >= 1:
                ok &= principal.shape_invariance_check(
                    prob, "minus", l).is_zero()
            ok &= principal.shape_invariance_check(prob, "plus", l).is_zero()
            ok &= associated.assoc_shape_invariance(prob, l + 1).is_zero()
            ok &= plus[l + 1].alpha == -minus[l + 1].alpha
            ok &= plus[l + 1].beta == -minus[l + 1].beta
            ok &= plus[l + 1].E == minus[l + 1].E
            ok &= plus[l + 1].lam - minus[l].lam == prob.ppp - prob.qp
            ok &= all(principal.equivalent_forms_check(prob, l).values())
            ok &= associated.standard_hermitian_relation(prob, l)
            for m in range(l + 1):
                ok &= all(associated.principal_form_equivalence(
                    prob, l, m).values())
                ok &= associated.pHm_factorization(prob, l, m)[2]
    _report(5, "shape invariance, branch symmetries, operator-form "
               "equivalences and factorizations hold exactly for l,m<=8", ok)


def test_criterion_06_oracle_equivalence():
    ok = True
    for prob in PRESETS:
        for l in range(13):
            phi, _ = principal.principal_eigenfunction(prob, l)
            psi, lam = principal.brute_force_eigen_oracle(prob, l)
            ok &= lam == principal.factor_table(prob, "minus", l)[l].lam
            ok &= QuasiFunction(phi).proportional(
                QuasiFunction(psi), prob) is not None
    _report(6, "ladder eigenfunctions match the brute-force linear-system "
               "oracle for l<=12, all presets", ok)


def test_criterion_07_degenerate_collapse():
    ok = True
    prob = hermite()
    minus = principal.factor_table(prob, "minus", 10)
    for l in range(11):
        for m in range(l + 1):
            ok &= associated.assoc_lambda(prob, l, m) == minus[l - m].lam
            phi = associated.assoc_bottom_up(prob, l, m).value
            href, _ = degenerate.hermite_generate(l - m)
            ok &= QuasiFunction(phi.c).proportional(
                QuasiFunction(href), prob) is not None
    ok &= all(associated.assoc_delta_plus(prob, n) == -prob.qp
              for n in range(1, 11))
    qprob = Problem(Poly([1]), Poly([0, 2]))
    hq = hamiltonian(qprob)
    for l in range(9):
        poly, lam = degenerate.quasi_hermite_generate(l)
        ok &= lam == -2 * l
        out = hq.apply(QuasiFunction(poly), qprob)
        if l == 0:
            ok &= out.is_zero()
        else:
            ok &= out.proportional(QuasiFunction(poly), qprob) == lam
    _report(7, "constant-p collapse onto the Hermite family and "
               "quasi-Hermite eigenvalues -2l", ok)


def test_criterion_08_numeric_residuals():
    t0 = time.perf_counter()
    ok = True
    rel, order = numeric.schrodinger_residual(legendre(), 4, 0, nodes=2000,
                                              form="y")
    ok &= rel <= 1e-6 and 1.7 <= order <= 2.3
    rel, order = numeric.schrodinger_residual(legendre(), 3, 1, nodes=2000,
                                              form="z")
    ok &= rel <= 1e-6 and 1.7 <= order <= 2.3
    for prob in PRESETS:
        if prob.p.degree == 2 and prob.p[2] > 0:
            continue        # indefinite weight: no orthogonality interval
        g = numeric.orthogonality_matrix(prob, 5)
        d = np.sqrt(np.abs(np.diag(g)))
        off = g / np.outer(d, d)
        np.fill_diagonal(off, 0.0)
        ok &= float(np.max(np.abs(off))) <= 1e-8
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 20
    _report(8, "Schrodinger-form residuals <= 1e-6 at second order and "
               f"weighted orthogonality <= 1e-8, {elapsed:.2f}s < 20s", ok)


def test_criterion_09_sturm_liouville_transforms():
    ok = True
    prob = legendre()
    entry = principal.factor_table(prob, "minus", 3)[3]
    grid = numeric.Grid.uniform(-0.9, 0.9, 201)
    out = numeric.sl_transform_typeI(prob.p, prob.q, Poly([]), grid,
                                     E=float(entry.E),
                                     Lambda=float(entry.lam))
    V = numeric.potential_poly(prob, 3)(grid.nodes)
    ok &= float(np.max(np.abs(out["U"] - V))) <= 1e-10

    rgrid = numeric.Grid.uniform(0.5, 3.0, 201)
    out2 = numeric.sl_transform_typeII(
        lambda x: np.ones_like(x), lambda x: 1.0 / x,
        lambda x: np.zeros_like(x), rgrid)
    ok &= float(np.max(np.abs(out2["W_rho"] + 1 / (2 * rgrid.nodes)))) \
        <= 1e-10

    P, Q, Q1 = Poly([0, 1]), Poly([2, -1]), Poly([3, -2])
    lam1 = 1.5

    def R(t):
        t = np.asarray(t, dtype=float)
        W = Q1(t) / (2 * P(t))
        num = Q1.derivative() * P - Q1 * P.derivative()
        Wp = num(t) / (2 * P(t) ** 2)
        return -(P(t) * (Wp + W * W) + Q(t) * W + lam1)

    ok &= numeric.sl_full_susy_residual(
        P, Q, R, Q1, lam1, numeric.Grid.uniform(0.5, 5.0, 400)) <= 1e-10
    _report(9, "Sturm-Liouville type-I/type-II transforms and the full "
               "SUSY round trip agree to 1e-10", ok)


def test_criterion_10_breakdown_cli_contract():
    r = subprocess.run(
        [sys.executable, "-m", "susyfactor.cli", "factorize",
         "--p", "-1,0,1", "--q", "6,0", "--levels", "6", "--branch", "minus"],
        capture_output=True, text=True)
    ok = r.returncode == 2
    err = json.loads(r.stderr) if r.stderr.strip() else {}
    ok &= err.get("error") == "breakdown" and err.get("level") == 4
    partial = json.loads(r.stdout)
    ok &= [e["l"] for e in partial["entries"]] == [0, 1, 2, 3]
    _report(10, "breakdown at level 4 reports exit code 2, the level in "
                "stderr JSON, and the partial table on stdout", ok)
