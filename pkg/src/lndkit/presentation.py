"""Finite presentations of quotient rings and finitely generated subalgebras.

A PresentedRing is an ambient polynomial ring modulo a reduced Groebner
basis of relations; elements are always stored as normal forms, and
equality is equality of normal forms.  A Subalgebra carries a tag-variable
elimination basis, which decides membership and produces witnesses in the
generators.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DegenerateInputError, VariableMismatchError
from .groebner_engine import (
    GroebnerBasis,
    Ideal,
    buchberger,
    ideal_member,
    ideal_quotient,
    normal_form,
)
from .poly_core import GREVLEX, MonomialOrder, Polynomial


class PresentedRing:
    """Q[vars] / (relations), with relations a reduced Groebner basis.

    An empty relation list presents the polynomial ring itself.
    """

    def __init__(self, vars, relations=None, order=GREVLEX):
        self.vars = tuple(vars)
        self.order = order
        if relations is None:
            relations = GroebnerBasis([], order)
        elif isinstance(relations, GroebnerBasis):
            pass
        else:
            gens = [p for p in relations if not p.is_zero()]
            relations = buchberger(gens, order) if gens else GroebnerBasis([], order)
        self.relations = relations

    @classmethod
    def polynomial_ring(cls, vars):
        return cls(vars)

    @classmethod
    def quotient(cls, vars, relation_gens, order=GREVLEX, pair_budget=None):
        gens = [p for p in relation_gens if not p.is_zero()]
        basis = buchberger(gens, order, pair_budget=pair_budget) if gens \
            else GroebnerBasis([], order)
        if basis.is_trivial():
            raise DegenerateInputError("relations generate the unit ideal")
        return cls(vars, basis, order)

    def has_relations(self):
        return bool(self.relations.elements) and not all(
            p.is_zero() for p in self.relations.elements)

    def normal(self, f):
        if f.vars != self.vars:
            raise VariableMismatchError(
                f"element over {f.vars}, ring over {self.vars}")
        if not self.has_relations():
            return f
        return normal_form(f, self.relations)

    def is_zero(self, f):
        return self.normal(f).is_zero()

    def equal(self, f, g):
        return self.normal(f) == self.normal(g)

    def relation_ideal(self):
        gens = [p for p in self.relations.elements] or [Polynomial.zero(self.vars)]
        return Ideal(gens, self.vars)

    def lifted_ideal(self, gens):
        """Ideal of the ambient polynomial ring: (gens) + relations."""
        all_gens = [self.normal(g) for g in gens if not self.is_zero(g)]
        all_gens += list(self.relations.elements)
        if not all_gens:
            all_gens = [Polynomial.zero(self.vars)]
        return Ideal(all_gens, self.vars)

    def zero(self):
        return Polynomial.zero(self.vars)

    def one(self):
        return Polynomial.one(self.vars)

    def variable(self, name):
        return self.normal(Polynomial.variable(name, self.vars))

    def __repr__(self):
        rels = ", ".join(str(p) for p in self.relations.elements) or "0"
        return f"PresentedRing({', '.join(self.vars)}; {rels})"


def _tag_names(count, taken):
    names = []
    taken = set(taken)
    i = 1
    while len(names) < count:
        name = f"T{i}"
        while name in taken:
            name = "_" + name
        names.append(name)
        taken.add(name)
        i += 1
    return names


@dataclass
class MembershipResult:
    member: bool
    witness: object = None  # polynomial in the tag variables when member

    def __bool__(self):
        return self.member


class Subalgebra:
    """A finitely generated subalgebra of a presented ring.

    The tag basis is the Groebner basis of (T_i - g_i) + lifted relations
    under an order eliminating the ambient variables; it is computed once,
    eagerly, so queries are read-only.
    """

    def __init__(self, ambient, generators, pair_budget=None):
        self.ambient = ambient
        gens = []
        for g in generators:
            g = ambient.normal(g)
            if g.is_zero():
                raise DegenerateInputError("zero subalgebra generator")
            gens.append(g)
        if not gens:
            raise ValueError("a subalgebra needs at least one generator")
        self.generators = gens
        self.tag_vars = tuple(_tag_names(len(gens), ambient.vars))
        self.combined_vars = tuple(ambient.vars) + self.tag_vars
        self.tag_order = MonomialOrder.elimination(len(ambient.vars))
        tag_gens = []
        for name, g in zip(self.tag_vars, gens):
            tag_gens.append(Polynomial.variable(name, self.combined_vars)
                            - g.embed(self.combined_vars))
        for rel in ambient.relations.elements:
            tag_gens.append(rel.embed(self.combined_vars))
        self.tag_basis = buchberger(tag_gens, self.tag_order,
                                    pair_budget=pair_budget)
        self._presented = None

    def member(self, f):
        """Membership with a witness expression in the generators."""
        f = self.ambient.normal(f)
        nf = normal_form(f.embed(self.combined_vars), self.tag_basis)
        if nf.uses_only(self.tag_vars):
            return MembershipResult(True, nf.restrict(self.tag_vars))
        return MembershipResult(False)

    def express(self, f):
        res = self.member(f)
        if not res.member:
            raise DegenerateInputError(
                f"{f} is not a member of the subalgebra")
        return res.witness

    def to_ambient(self, tag_poly):
        """Substitute the generators back into a tag polynomial."""
        images = {name: g for name, g in zip(self.tag_vars, self.generators)}
        value = tag_poly.substitute(images, self.ambient.vars)
        return self.ambient.normal(value)

    def presentation_ideal(self, pair_budget=None):
        """Relations among the generators: tag basis intersected with Q[T]."""
        kept = [p.restrict(self.tag_vars) for p in self.tag_basis.elements
                if p.uses_only(self.tag_vars)]
        if not kept:
            kept = [Polynomial.zero(self.tag_vars)]
        return Ideal(kept, self.tag_vars)

    def presented_ring(self):
        """The subalgebra as a presented ring over its tag variables."""
        if self._presented is None:
            ideal = self.presentation_ideal()
            rels = [p for p in ideal.generators if not p.is_zero()]
            basis = buchberger(rels, GREVLEX) if rels else GroebnerBasis([], GREVLEX)
            self._presented = PresentedRing(self.tag_vars, basis)
        return self._presented

    def __repr__(self):
        gens = ", ".join(str(g) for g in self.generators)
        return f"Subalgebra({gens})"


def present_subalgebra(ambient, generators, pair_budget=None):
    return Subalgebra(ambient, generators, pair_budget=pair_budget)


def subalgebra_member(f, subalgebra):
    return subalgebra.member(f)


@dataclass
class NzdResult:
    regular: bool
    witness: object = None  # h with h*g in the ideal but h outside it

    def __bool__(self):
        return self.regular


def nzd_test(g, mod_ideal, ring, pair_budget=None):
    """Is g a nonzerodivisor modulo the ideal in the presented ring?

    True iff ((mod_ideal + relations) : g) equals mod_ideal + relations in
    the ambient polynomial ring.  When false, a witness h with h*g inside
    but h outside is extracted from the quotient basis.
    """
    if isinstance(mod_ideal, Ideal):
        mod_gens = mod_ideal.generators
    else:
        mod_gens = list(mod_ideal)
    lifted = ring.lifted_ideal(mod_gens)
    g = ring.normal(g)
    if g.is_zero() or ideal_member(g, lifted, pair_budget=pair_budget):
        raise DegenerateInputError(
            "element reduces to zero modulo relations and the ideal")
    quotient = ideal_quotient(lifted, g, pair_budget=pair_budget)
    basis = lifted.groebner(pair_budget=pair_budget)
    for h in quotient.generators:
        if not normal_form(h, basis).is_zero():
            return NzdResult(False, ring.normal(h))
    return NzdResult(True)
