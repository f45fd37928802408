"""Acceptance criteria 1-12, each reported on one line.

Parameters are drawn from seeded generators so every run checks the
same points.  Run with ``pytest tests/test_acceptance.py -v``.
"""
import random
import time
from fractions import Fraction

import pytest

from exint import bethe, charges, hgen, mpa, ness, rmat
from exint.cli import _r_pair_ok, sample_pairs, sample_rationals, sample_triples

SEED = 20240


def _u_ok(v):
    return not (v.re >= 0 and (2 * v.re).denominator == 1)


def _pairs(offset, count=3, need_u=False):
    rng = random.Random(SEED + offset)
    ok = (lambda l, m: _r_pair_ok(l, m) and _u_ok(l) and _u_ok(m)) if need_u else _r_pair_ok
    return sample_pairs(rng, count, ok)


def _xs(offset, count):
    return sample_rationals(random.Random(SEED + offset), count)


def _report(number, title, reports, elapsed, limit=None):
    failed = [r for r in reports if not r.passed]
    within = limit is None or elapsed < limit
    ok = not failed and within
    budget = f" (limit {limit:g} s)" if limit else ""
    line = f"ACCEPTANCE {number:>2}: {'PASS' if ok else 'FAIL'}  {title}  [{elapsed:.2f} s{budget}]"
    with _CAPTURE["capsys"].disabled():
        print("\n" + line)
    assert not failed, [(r.check, r.params, r.witness) for r in failed]
    assert within, f"runtime {elapsed:.2f} s exceeds {limit} s"


_CAPTURE = {}


@pytest.fixture(autouse=True)
def _show(capsys):
    _CAPTURE["capsys"] = capsys
    yield


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def test_criterion_01_four_forms():
    reps, dt = _timed(lambda: [hgen.check_forms(15, _xs(1, 5))])
    _report(1, "four forms of H agree, alpha <= 15, 5 points", reps, dt, limit=10)


def test_criterion_02_rll():
    reps, dt = _timed(lambda: [rmat.check_rll(l, m, 10) for l, m in _pairs(2)])
    _report(2, "RLL exact in every sector alpha <= 10, 3 pairs", reps, dt, limit=30)


def test_criterion_03_lemmas():
    xs = _xs(3, 3)
    reps, dt = _timed(lambda: [f(x, 12) for x in xs for f in (rmat.check_lemma1, rmat.check_lemma2)])
    _report(3, "commutator lemma and Lambda identities, alpha <= 12", reps, dt, limit=60)


def test_criterion_04_r_properties():
    reps, dt = _timed(lambda: [rmat.check_r_properties(l, m, 10) for l, m in _pairs(4, need_u=True)])
    for r in reps:
        assert all(r.details[k] for k in ("regularity", "p_symmetry", "orthogonality", "pr_squared",
                                          "charpoly", "transposal"))
    _report(4, "R regularity, P-symmetry, unitarity, (PR)^2, char poly, transposal, alpha <= 10", reps, dt)


def test_criterion_05_nilpotent_residues():
    reps, dt = _timed(lambda: [hgen.check_nilpotent(15, _xs(5, 1))])
    _report(5, "residue tensors X^p X^m = 0 for p >= m, alpha <= 15", reps, dt)


def test_criterion_06_transfer_structure():
    lams = _xs(6, 1)
    reps, dt = _timed(lambda: [mpa.check_transfer_structure(n, lam) for n in range(1, 9) for lam in lams])
    _report(6, "S upper triangular, diagonal lam^n, banded, selection rule, n <= 8", reps, dt)


def test_criterion_07_commutation():
    pairs = _pairs(7)
    reps, dt = _timed(lambda: [mpa.check_commute(n, l, m) for n in range(1, 9) for l, m in pairs]
                      + [mpa.check_tilde_commute(n, l, m) for n in range(1, 7) for l, m in pairs])
    _report(7, "[S(lam), S(mu)] = 0 for n <= 8; S~ commutation (empirical) for n <= 6", reps, dt)


def test_criterion_08_ness():
    eps = (Fraction(1, 2), 1, Fraction(3, 5))
    t0 = time.perf_counter()
    exact = [ness.check_ness(n, e) for n in range(1, 7) for e in eps]
    t6 = time.perf_counter()
    [ness.check_ness(6, e) for e in eps]
    t6 = time.perf_counter() - t6
    oracle = [ness.check_ness_oracle(n, e, tol=1e-10) for n in range(1, 6) for e in eps]
    dt = time.perf_counter() - t0
    assert t6 < 120
    _report(8, "NESS stationarity exact for n <= 6; Liouvillian oracle within 1e-10 for n <= 5",
            exact + oracle, dt)


def test_criterion_09_charges():
    reps, dt = _timed(lambda: [charges.check_charge_identities(n, 4) for n in range(1, 9)])
    _report(9, "W(eps)W(-eps) = 1, even log terms vanish, charges commute, n <= 8, k <= 4", reps, dt)


def test_criterion_10_uwt_and_bethe():
    pairs = _pairs(10)
    t0 = time.perf_counter()
    uwt = [bethe.check_uwt(n, l, m) for n in range(1, 6) for l, m in pairs]
    beth = [bethe.check_bethe(n, lam, root_tol=1e-10, eig_tol=1e-8) for n in range(1, 5)
            for lam in (2j, 0.7j, 3.1j)]
    dt = time.perf_counter() - t0
    _report(10, "UWT exact for n <= 5; roots to 1e-10, eigen-residuals and spectrum match to 1e-8, n <= 4",
            uwt + beth, dt)


def test_criterion_11_ybe():
    triples = sample_triples(random.Random(SEED + 11), 3)
    reps, dt = _timed(lambda: [rmat.check_ybe(l, m, e, 6) for l, m, e in triples])
    assert all(r.label == "EMPIRICAL" for r in reps)
    _report(11, "braid Yang-Baxter exact in sectors beta <= 6, 3 triples (empirical)", reps, dt)


def test_criterion_12_engine_oracle():
    lams = _xs(12, 2)
    reps, dt = _timed(lambda: [mpa.check_engine_oracle(n, lam, max_offset=2) for n in range(1, 5)
                               for lam in lams])
    _report(12, "3^n-path brute force equals frontier engine, n <= 4, |k_out - k_in| <= 2", reps, dt)
