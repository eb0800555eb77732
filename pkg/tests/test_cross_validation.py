"""Optional cross-validation against sympy, skipped when unavailable.

The library itself never imports sympy; these checks compare reduced
Groebner bases and colon ideals against an independent implementation on
seeded random inputs.
"""

import random
from fractions import Fraction

import pytest

sympy = pytest.importorskip("sympy")

from lndkit.groebner_engine import Ideal, buchberger, ideal_member, ideal_quotient
from lndkit.poly_core import GREVLEX, Polynomial

VARS = ("x", "y", "z")


@pytest.fixture(scope="module")
def ring():
    syms = sympy.symbols("x y z")
    return syms, sympy.QQ.old_poly_ring(*syms)


def _to_sympy(p, syms):
    expr = 0
    for m, c in p.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for s, e in zip(syms, m):
            term *= s ** e
        expr += term
    return expr


def _from_dmp(e):
    dmp = e if hasattr(e, "to_dict") else e.rep
    terms = {}
    for mono, c in dmp.to_dict().items():
        q = sympy.Rational(str(c))
        terms[tuple(int(k) for k in mono)] = Fraction(int(q.p), int(q.q))
    return Polynomial(VARS, terms)


def _random_poly(rng, deg=2, terms=2):
    t = {}
    for _ in range(rng.randint(1, terms)):
        m = [0, 0, 0]
        for _ in range(rng.randint(0, deg)):
            m[rng.randrange(3)] += 1
        t[tuple(m)] = Fraction(rng.randint(-5, 5))
    return Polynomial(VARS, t)


def test_reduced_bases_match(ring):
    syms, _ = ring
    rng = random.Random(2026)
    compared = 0
    while compared < 15:
        gens = [p for p in (_random_poly(rng, 3, 3) for _ in range(3))
                if not p.is_zero()]
        if not gens:
            continue
        ours = {frozenset(p.terms.items())
                for p in buchberger(gens, GREVLEX).elements}
        basis = sympy.groebner([_to_sympy(g, syms) for g in gens], *syms,
                               order="grevlex")
        theirs = set()
        for e in basis.exprs:
            poly = sympy.Poly(e, *syms)
            terms = {tuple(int(k) for k in mono):
                     Fraction(int(sympy.Rational(c).p), int(sympy.Rational(c).q))
                     for mono, c in poly.terms()}
            theirs.add(frozenset(Polynomial(VARS, terms).monic(GREVLEX).terms.items()))
        assert ours == theirs
        compared += 1


def test_colon_ideals_match(ring):
    syms, R = ring
    rng = random.Random(99)
    compared = 0
    while compared < 10:
        gens = [p for p in (_random_poly(rng) for _ in range(2)) if not p.is_zero()]
        g = _random_poly(rng)
        if not gens or g.is_zero():
            continue
        ours = ideal_quotient(Ideal(gens, VARS), g)
        theirs = R.ideal(*[_to_sympy(p, syms) for p in gens]).quotient(
            R.ideal(_to_sympy(g, syms)))
        for q in ours.generators:
            assert theirs.contains(_to_sympy(q, syms))
        for e in theirs.gens:
            back = _from_dmp(e)
            if not back.is_zero():
                assert ideal_member(back, ours)
        compared += 1
