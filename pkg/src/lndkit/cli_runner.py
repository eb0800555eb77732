"""Session-file parser, command dispatcher, JSON report emitter, and the
shipped example corpus.

The session grammar is line-oriented (`#` starts a comment; braced blocks
may span lines):

    ring <name> = poly(<vars>)
    ring <name> = quotient(<ring>, (<poly>, ...))
    subalgebra <name> in <ring> = gens { <poly>, ... }
    derivation <name> on <ring|subalgebra> { <var> -> <poly>; ... }
    ideal <name> in <ring|subalgebra> = ( <poly>, ... )

    check nilpotent <D> [bound N]      check fpf <D>
    check irreducible <D>              check contained <D> in (<poly>)
    grade <D>                          grade ideal <I>
    kernel <D> degree N [expect <A>]   slice <D> degree N
    dixmier <D> slice <poly> of <poly>
    symbolic <I> power N saturate <poly>
    rees <I> upto N saturate <poly>
    verify generators <A> claim { <poly>, ... } degree N

Exit codes: 0 all commands succeeded, 1 parse or I/O error, 2 at least one
command-level failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from importlib import resources

from .config import RunConfig
from .derivation_engine import (
    Derivation,
    apply,
    certify_nilpotent,
    check_well_defined,
    contained_in_principal,
    irreducible_over_ufd,
    restrict_to_subalgebra,
    restricts_to,
)
from .errors import LndError, ParseError
from .grade_analyzer import (
    fpf_test,
    generic_combination_grade,
    grade_of_derivation,
    grade_two_generated,
)
from .groebner_engine import Ideal
from .kernel_lab import (
    SliceData,
    compare_kernel_to_subalgebra,
    dixmier,
    kernel_generators,
    slice_search,
    verify_generators_up_to_degree,
)
from .poly_core import Polynomial, format_polynomial, parse_polynomial
from .presentation import PresentedRing, present_subalgebra
from .rees_builder import ideal_power, rees_truncation, symbolic_power

TOOL_NAME = "lndkit"
TOOL_VERSION = "0.1.0"
SCHEMA_VERSION = 1


# ---------------------------------------------------------------------------
# session AST
# ---------------------------------------------------------------------------

@dataclass
class RingDecl:
    name: str
    vars: tuple
    relations: tuple = ()          # polynomial texts already canonical
    base: str = None               # quotient base ring name

    def pretty(self):
        if self.base is None:
            return f"ring {self.name} = poly({', '.join(self.vars)})"
        rels = ", ".join(self.relations)
        return f"ring {self.name} = quotient({self.base}, ({rels}))"


@dataclass
class SubalgebraDecl:
    name: str
    ring: str
    generators: tuple

    def pretty(self):
        gens = ", ".join(self.generators)
        return f"subalgebra {self.name} in {self.ring} = gens {{ {gens} }}"


@dataclass
class DerivationDecl:
    name: str
    host: str
    images: tuple                  # ((var, poly text), ...) in host var order

    def pretty(self):
        imgs = "; ".join(f"{v} -> {p}" for v, p in self.images)
        return f"derivation {self.name} on {self.host} {{ {imgs} }}"


@dataclass
class IdealDecl:
    name: str
    host: str
    generators: tuple

    def pretty(self):
        gens = ", ".join(self.generators)
        return f"ideal {self.name} in {self.host} = ( {gens} )"


@dataclass
class Command:
    kind: str
    args: dict = field(default_factory=dict)

    def pretty(self):
        a = self.args
        if self.kind == "check-nilpotent":
            tail = f" bound {a['bound']}" if a.get("bound") else ""
            return f"check nilpotent {a['name']}{tail}"
        if self.kind == "check-fpf":
            return f"check fpf {a['name']}"
        if self.kind == "check-irreducible":
            return f"check irreducible {a['name']}"
        if self.kind == "check-contained":
            return f"check contained {a['name']} in ({a['poly']})"
        if self.kind == "grade-derivation":
            return f"grade {a['name']}"
        if self.kind == "grade-ideal":
            return f"grade ideal {a['name']}"
        if self.kind == "kernel":
            tail = f" expect {a['expect']}" if a.get("expect") else ""
            return f"kernel {a['name']} degree {a['degree']}{tail}"
        if self.kind == "slice":
            return f"slice {a['name']} degree {a['degree']}"
        if self.kind == "dixmier":
            return f"dixmier {a['name']} slice {a['slice']} of {a['target']}"
        if self.kind == "symbolic":
            return (f"symbolic {a['name']} power {a['power']} "
                    f"saturate {a['saturator']}")
        if self.kind == "rees":
            return (f"rees {a['name']} upto {a['upto']} "
                    f"saturate {a['saturator']}")
        if self.kind == "verify-generators":
            claim = ", ".join(a["claimed"])
            return (f"verify generators {a['name']} claim {{ {claim} }} "
                    f"degree {a['degree']}")
        raise ValueError(f"unknown command kind {self.kind}")


@dataclass
class Session:
    declarations: list
    commands: list

    def pretty(self):
        lines = [d.pretty() for d in self.declarations]
        lines += [c.pretty() for c in self.commands]
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

def _strip_comment(line):
    out = []
    for ch in line:
        if ch == "#":
            break
        out.append(ch)
    return "".join(out)


def _logical_lines(text):
    """Comment-stripped statements; braced blocks may span lines."""
    lines = []
    pending = ""
    pending_line = 0
    for i, raw in enumerate(text.splitlines(), start=1):
        chunk = _strip_comment(raw).strip()
        if not chunk:
            continue
        if pending:
            pending += " " + chunk
        else:
            pending, pending_line = chunk, i
        if pending.count("{") > pending.count("}"):
            continue
        lines.append((pending_line, pending))
        pending = ""
    if pending:
        raise ParseError("unterminated '{' block", line=pending_line)
    return lines


def _split_top_level(text, sep, line):
    parts = []
    depth = 0
    current = ""
    for ch in text:
        if ch in "({":
            depth += 1
        elif ch in ")}":
            depth -= 1
            if depth < 0:
                raise ParseError("unbalanced parentheses", line=line)
        if ch == sep and depth == 0:
            parts.append(current.strip())
            current = ""
        else:
            current += ch
    parts.append(current.strip())
    return parts


def _extract_braced(text, line):
    start = text.find("{")
    if start < 0:
        raise ParseError("expected '{'", line=line)
    depth = 0
    for i in range(start, len(text)):
        if text[i] == "{":
            depth += 1
        elif text[i] == "}":
            depth -= 1
            if depth == 0:
                return text[:start].strip(), text[start + 1:i].strip(), \
                    text[i + 1:].strip()
    raise ParseError("unterminated '{'", line=line)


def _extract_parenthesized(text, line):
    start = text.find("(")
    if start < 0:
        raise ParseError("expected '('", line=line)
    depth = 0
    for i in range(start, len(text)):
        if text[i] == "(":
            depth += 1
        elif text[i] == ")":
            depth -= 1
            if depth == 0:
                return text[:start].strip(), text[start + 1:i].strip(), \
                    text[i + 1:].strip()
    raise ParseError("unterminated '('", line=line)


def _is_name(token):
    return token and (token[0].isalpha() or token[0] == "_") and \
        all(ch.isalnum() or ch == "_" for ch in token)


class _Parser:
    def __init__(self):
        self.names = {}       # name -> (kind, ambient variable tuple)
        self.declarations = []
        self.commands = []

    def declared_vars(self, name, line, kinds=("ring", "subalgebra")):
        info = self.names.get(name)
        if info is None:
            raise ParseError(f"undefined name {name!r}", line=line)
        kind, vars = info
        if kind not in kinds:
            raise ParseError(f"{name!r} is a {kind}, expected one of {kinds}",
                             line=line)
        return vars

    def canonical(self, text, vars, line):
        try:
            return format_polynomial(parse_polynomial(text, vars))
        except ParseError as exc:
            raise ParseError(str(exc), line=line) from None

    def declare(self, name, kind, vars, line):
        if name in self.names:
            raise ParseError(f"duplicate name {name!r}", line=line)
        if not _is_name(name):
            raise ParseError(f"invalid name {name!r}", line=line)
        self.names[name] = (kind, vars)

    # -- statement dispatch -------------------------------------------------

    def feed(self, line, text):
        for prefix, handler in _STATEMENTS:
            if text.startswith(prefix):
                handler(self, line, text)
                return
        raise ParseError(f"unrecognized statement: {text!r}", line=line)

    def ring(self, line, text):
        body = text[len("ring"):].strip()
        if "=" not in body:
            raise ParseError("expected '=' in ring declaration", line=line)
        name, rhs = (s.strip() for s in body.split("=", 1))
        if rhs.startswith("poly"):
            _, inner, rest = _extract_parenthesized(rhs, line)
            if rest:
                raise ParseError(f"trailing input {rest!r}", line=line)
            vars = tuple(v.strip() for v in inner.split(","))
            if not all(_is_name(v) for v in vars):
                raise ParseError(f"bad variable list ({inner})", line=line)
            if len(set(vars)) != len(vars):
                raise ParseError("repeated variable", line=line)
            self.declare(name, "ring", vars, line)
            self.declarations.append(RingDecl(name, vars))
            return
        if rhs.startswith("quotient"):
            _, inner, rest = _extract_parenthesized(rhs, line)
            if rest:
                raise ParseError(f"trailing input {rest!r}", line=line)
            parts = _split_top_level(inner, ",", line)
            base = parts[0]
            vars = self.declared_vars(base, line, kinds=("ring",))
            rel_text = ", ".join(parts[1:])
            if not (rel_text.startswith("(") and rel_text.endswith(")")):
                raise ParseError("quotient relations must be parenthesized",
                                 line=line)
            rels = tuple(self.canonical(t, vars, line)
                         for t in _split_top_level(rel_text[1:-1], ",", line)
                         if t)
            if not rels:
                raise ParseError("empty relation list", line=line)
            self.declare(name, "ring", vars, line)
            self.declarations.append(RingDecl(name, vars, rels, base))
            return
        raise ParseError("expected poly(...) or quotient(...)", line=line)

    def subalgebra(self, line, text):
        body = text[len("subalgebra"):].strip()
        head, brace, rest = _extract_braced(body, line)
        if rest:
            raise ParseError(f"trailing input {rest!r}", line=line)
        tokens = head.split()
        if len(tokens) != 5 or tokens[1] != "in" or tokens[3] != "=" or \
                tokens[4] != "gens":
            raise ParseError("expected '<name> in <ring> = gens { ... }'",
                             line=line)
        name, ring = tokens[0], tokens[2]
        vars = self.declared_vars(ring, line, kinds=("ring",))
        gens = tuple(self.canonical(t, vars, line)
                     for t in _split_top_level(brace, ",", line) if t)
        if not gens:
            raise ParseError("empty generator list", line=line)
        self.declare(name, "subalgebra", vars, line)
        self.declarations.append(SubalgebraDecl(name, ring, gens))

    def derivation(self, line, text):
        body = text[len("derivation"):].strip()
        head, brace, rest = _extract_braced(body, line)
        if rest:
            raise ParseError(f"trailing input {rest!r}", line=line)
        tokens = head.split()
        if len(tokens) != 3 or tokens[1] != "on":
            raise ParseError("expected '<name> on <ring|subalgebra> { ... }'",
                             line=line)
        name, host = tokens[0], tokens[2]
        vars = self.declared_vars(host, line)
        images = []
        for piece in _split_top_level(brace, ";", line):
            if not piece:
                continue
            if "->" not in piece:
                raise ParseError(f"expected 'var -> poly' in {piece!r}",
                                 line=line)
            var, poly = (s.strip() for s in piece.split("->", 1))
            if var not in vars:
                raise ParseError(f"{var!r} is not a variable of {host}",
                                 line=line)
            if not poly:
                raise ParseError(f"empty image for {var!r}", line=line)
            images.append((var, self.canonical(poly, vars, line)))
        seen = [v for v, _ in images]
        if len(seen) != len(set(seen)):
            raise ParseError("repeated variable image", line=line)
        self.declare(name, "derivation", vars, line)
        self.declarations.append(DerivationDecl(name, host, tuple(images)))

    def ideal(self, line, text):
        body = text[len("ideal"):].strip()
        if "=" not in body:
            raise ParseError("expected '=' in ideal declaration", line=line)
        head, rhs = (s.strip() for s in body.split("=", 1))
        tokens = head.split()
        if len(tokens) != 3 or tokens[1] != "in":
            raise ParseError("expected '<name> in <ring|subalgebra>'", line=line)
        name, host = tokens[0], tokens[2]
        vars = self.declared_vars(host, line)
        if not (rhs.startswith("(") and rhs.endswith(")")):
            raise ParseError("ideal generators must be parenthesized", line=line)
        gens = tuple(self.canonical(t, vars, line)
                     for t in _split_top_level(rhs[1:-1], ",", line) if t)
        if not gens:
            raise ParseError("empty ideal", line=line)
        self.declare(name, "ideal", vars, line)
        self.declarations.append(IdealDecl(name, host, gens))

    # -- commands -------------------------------------------------------------

    def require(self, name, kind, line):
        info = self.names.get(name)
        if info is None:
            raise ParseError(f"undefined name {name!r}", line=line)
        if info[0] != kind:
            raise ParseError(f"{name!r} is a {info[0]}, expected {kind}",
                             line=line)
        return info[1]

    def check(self, line, text):
        tokens = text.split()
        if len(tokens) < 3:
            raise ParseError("incomplete check command", line=line)
        sub = tokens[1]
        if sub == "nilpotent":
            name = tokens[2]
            self.require(name, "derivation", line)
            bound = None
            if len(tokens) == 5 and tokens[3] == "bound":
                bound = int(tokens[4])
            elif len(tokens) != 3:
                raise ParseError("expected 'check nilpotent D [bound N]'",
                                 line=line)
            self.commands.append(Command("check-nilpotent",
                                         {"name": name, "bound": bound}))
        elif sub == "fpf":
            self.require(tokens[2], "derivation", line)
            self.commands.append(Command("check-fpf", {"name": tokens[2]}))
        elif sub == "irreducible":
            self.require(tokens[2], "derivation", line)
            self.commands.append(Command("check-irreducible",
                                         {"name": tokens[2]}))
        elif sub == "contained":
            rest = text.split(None, 2)[2]
            parts = rest.split(None, 1)
            name = parts[0]
            vars = self.require(name, "derivation", line)
            tail = parts[1].strip() if len(parts) > 1 else ""
            if not tail.startswith("in"):
                raise ParseError("expected 'check contained D in (poly)'",
                                 line=line)
            _, inner, after = _extract_parenthesized(tail, line)
            if after:
                raise ParseError(f"trailing input {after!r}", line=line)
            poly = self.canonical(inner, vars, line)
            self.commands.append(Command("check-contained",
                                         {"name": name, "poly": poly}))
        else:
            raise ParseError(f"unknown check {sub!r}", line=line)

    def grade(self, line, text):
        tokens = text.split()
        if len(tokens) == 2:
            self.require(tokens[1], "derivation", line)
            self.commands.append(Command("grade-derivation", {"name": tokens[1]}))
        elif len(tokens) == 3 and tokens[1] == "ideal":
            self.require(tokens[2], "ideal", line)
            self.commands.append(Command("grade-ideal", {"name": tokens[2]}))
        else:
            raise ParseError("expected 'grade D' or 'grade ideal I'", line=line)

    def kernel(self, line, text):
        tokens = text.split()
        if len(tokens) not in (4, 6) or tokens[2] != "degree":
            raise ParseError("expected 'kernel D degree N [expect A]'",
                             line=line)
        self.require(tokens[1], "derivation", line)
        args = {"name": tokens[1], "degree": int(tokens[3]), "expect": None}
        if len(tokens) == 6:
            if tokens[4] != "expect":
                raise ParseError("expected 'expect <subalgebra>'", line=line)
            self.require(tokens[5], "subalgebra", line)
            args["expect"] = tokens[5]
        self.commands.append(Command("kernel", args))

    def slice(self, line, text):
        tokens = text.split()
        if len(tokens) != 4 or tokens[2] != "degree":
            raise ParseError("expected 'slice D degree N'", line=line)
        self.require(tokens[1], "derivation", line)
        self.commands.append(Command("slice", {"name": tokens[1],
                                               "degree": int(tokens[3])}))

    def dixmier(self, line, text):
        tokens = text.split(None, 2)
        if len(tokens) < 3:
            raise ParseError("expected 'dixmier D slice <poly> of <poly>'",
                             line=line)
        name = tokens[1]
        vars = self.require(name, "derivation", line)
        rest = tokens[2]
        if not rest.startswith("slice"):
            raise ParseError("expected 'slice <poly> of <poly>'", line=line)
        rest = rest[len("slice"):].strip()
        split_at = _find_keyword(rest, "of", line)
        slice_text = rest[:split_at].strip()
        target_text = rest[split_at + 2:].strip()
        if not slice_text or not target_text:
            raise ParseError("expected 'slice <poly> of <poly>'", line=line)
        self.commands.append(Command("dixmier", {
            "name": name,
            "slice": self.canonical(slice_text, vars, line),
            "target": self.canonical(target_text, vars, line)}))

    def symbolic(self, line, text):
        tokens = text.split()
        if len(tokens) < 6 or tokens[2] != "power" or tokens[4] != "saturate":
            raise ParseError("expected 'symbolic I power N saturate <poly>'",
                             line=line)
        vars = self.require(tokens[1], "ideal", line)
        saturator = text.split("saturate", 1)[1].strip()
        self.commands.append(Command("symbolic", {
            "name": tokens[1], "power": int(tokens[3]),
            "saturator": self.canonical(saturator, vars, line)}))

    def rees(self, line, text):
        tokens = text.split()
        if len(tokens) < 6 or tokens[2] != "upto" or tokens[4] != "saturate":
            raise ParseError("expected 'rees I upto N saturate <poly>'",
                             line=line)
        vars = self.require(tokens[1], "ideal", line)
        saturator = text.split("saturate", 1)[1].strip()
        self.commands.append(Command("rees", {
            "name": tokens[1], "upto": int(tokens[3]),
            "saturator": self.canonical(saturator, vars, line)}))

    def verify(self, line, text):
        body = text[len("verify"):].strip()
        if not body.startswith("generators"):
            raise ParseError("expected 'verify generators ...'", line=line)
        body = body[len("generators"):].strip()
        head, brace, rest = _extract_braced(body, line)
        tokens = head.split()
        if len(tokens) != 2 or tokens[1] != "claim":
            raise ParseError(
                "expected 'verify generators A claim { ... } degree N'",
                line=line)
        name = tokens[0]
        vars = self.require(name, "subalgebra", line)
        claimed = tuple(self.canonical(t, vars, line)
                        for t in _split_top_level(brace, ",", line) if t)
        rest_tokens = rest.split()
        if len(rest_tokens) != 2 or rest_tokens[0] != "degree":
            raise ParseError("expected 'degree N' after the claim", line=line)
        self.commands.append(Command("verify-generators", {
            "name": name, "claimed": claimed,
            "degree": int(rest_tokens[1])}))


def _find_keyword(text, keyword, line):
    depth = 0
    i = 0
    while i < len(text):
        ch = text[i]
        if ch in "({":
            depth += 1
        elif ch in ")}":
            depth -= 1
        elif depth == 0 and text[i:i + len(keyword)] == keyword:
            before_ok = i == 0 or text[i - 1].isspace()
            j = i + len(keyword)
            after_ok = j >= len(text) or text[j].isspace()
            if before_ok and after_ok:
                return i
        i += 1
    raise ParseError(f"expected keyword {keyword!r}", line=line)


_STATEMENTS = (
    ("ring ", _Parser.ring),
    ("subalgebra ", _Parser.subalgebra),
    ("derivation ", _Parser.derivation),
    ("ideal ", _Parser.ideal),
    ("check ", _Parser.check),
    ("grade ", _Parser.grade),
    ("kernel ", _Parser.kernel),
    ("slice ", _Parser.slice),
    ("dixmier ", _Parser.dixmier),
    ("symbolic ", _Parser.symbolic),
    ("rees ", _Parser.rees),
    ("verify ", _Parser.verify),
)


def parse_session(text):
    parser = _Parser()
    for line, statement in _logical_lines(text):
        parser.feed(line, statement)
    return Session(parser.declarations, parser.commands)


def format_session(session):
    return session.pretty()


# ---------------------------------------------------------------------------
# execution
# ---------------------------------------------------------------------------

@dataclass
class _BoundIdeal:
    ideal: Ideal            # over the computational ring's variables
    ring: PresentedRing     # where grade/symbolic computations run
    host: object            # Subalgebra when declared inside one


class _Environment:
    def __init__(self, cfg):
        self.cfg = cfg
        self.rings = {}
        self.subalgebras = {}
        self.derivations = {}
        self.ideals = {}

    def computational_ring(self, host_name):
        if host_name in self.rings:
            return self.rings[host_name], None
        sub = self.subalgebras[host_name]
        return sub.presented_ring(), sub

    def express(self, poly_text, host_name):
        """Parse in ambient coordinates; convert to tags inside a subalgebra."""
        if host_name in self.rings:
            ring = self.rings[host_name]
            return ring.normal(parse_polynomial(poly_text, ring.vars))
        sub = self.subalgebras[host_name]
        ambient = parse_polynomial(poly_text, sub.ambient.vars)
        return sub.presented_ring().normal(sub.express(ambient))


def _poly_str(p):
    return format_polynomial(p)


def _display(p, host):
    """Render an element in ambient coordinates when it lives on tags."""
    if host is not None:
        return _poly_str(host.to_ambient(p))
    return _poly_str(p)


def _execute_declaration(env, decl):
    if isinstance(decl, RingDecl):
        if decl.base is None:
            env.rings[decl.name] = PresentedRing.polynomial_ring(decl.vars)
        else:
            base = env.rings[decl.base]
            rels = [parse_polynomial(t, base.vars) for t in decl.relations]
            env.rings[decl.name] = PresentedRing.quotient(
                base.vars, rels, pair_budget=env.cfg.pair_budget)
        return
    if isinstance(decl, SubalgebraDecl):
        ring = env.rings[decl.ring]
        gens = [parse_polynomial(t, ring.vars) for t in decl.generators]
        env.subalgebras[decl.name] = present_subalgebra(
            ring, gens, pair_budget=env.cfg.pair_budget)
        return
    if isinstance(decl, DerivationDecl):
        ring, sub = env.computational_ring(decl.host)
        if sub is None:
            images = {v: parse_polynomial(t, ring.vars) for v, t in decl.images}
            derivation = Derivation(ring, images)
            if ring.has_relations() and not check_well_defined(
                    derivation, pair_budget=env.cfg.pair_budget):
                raise LndError(
                    f"derivation {decl.name} is not well defined on the "
                    f"quotient {decl.host}: a relation escapes the relation ideal")
            env.derivations[decl.name] = derivation
            return
        ambient = sub.ambient
        images = {v: parse_polynomial(t, ambient.vars) for v, t in decl.images}
        ambient_derivation = Derivation(ambient, images)
        if not restricts_to(ambient_derivation, sub):
            raise LndError(
                f"derivation {decl.name} does not restrict to {decl.host}")
        env.derivations[decl.name] = restrict_to_subalgebra(
            ambient_derivation, sub)
        return
    if isinstance(decl, IdealDecl):
        ring, sub = env.computational_ring(decl.host)
        gens = [env.express(t, decl.host) for t in decl.generators]
        env.ideals[decl.name] = _BoundIdeal(Ideal(gens, ring.vars), ring, sub)
        return
    raise ValueError(f"unknown declaration {decl!r}")


def _run_command(env, command):
    a = command.args
    kind = command.kind
    cfg = env.cfg
    if kind == "check-nilpotent":
        d = env.derivations[a["name"]]
        cert = certify_nilpotent(d, bound=a.get("bound"))
        value = {"certified": cert.certified, "bound": cert.bound}
        if cert.certified:
            value["orders"] = {v: cert.orders[v] for v in sorted(cert.orders)}
        else:
            value["stuck"] = cert.stuck
        return value, [], []
    if kind == "check-fpf":
        d = env.derivations[a["name"]]
        return {"fixed_point_free": fpf_test(d, pair_budget=cfg.pair_budget)}, [], []
    if kind == "check-irreducible":
        d = env.derivations[a["name"]]
        report = irreducible_over_ufd(d)
        value = {"irreducible": report.irreducible}
        witnesses = [] if report.irreducible else [_poly_str(report.witness)]
        return value, witnesses, []
    if kind == "check-contained":
        d = env.derivations[a["name"]]
        host = d.host
        b = parse_polynomial(a["poly"], host.ambient.vars) if host is not None \
            else parse_polynomial(a["poly"], d.ring.vars)
        if host is not None:
            b = d.ring.normal(host.express(b))
        ok = contained_in_principal(d, b, pair_budget=cfg.pair_budget)
        notes = ["checks the named candidate divisor only; "
                 "other localizations are unexamined"]
        return {"contained": ok, "modulus": a["poly"]}, [], notes
    if kind == "grade-derivation":
        d = env.derivations[a["name"]]
        report = grade_of_derivation(d, trials=cfg.trials, seed=cfg.seed,
                                     pair_budget=cfg.pair_budget)
        return _grade_value(report, d.host)
    if kind == "grade-ideal":
        bound = env.ideals[a["name"]]
        gens = bound.ideal.generators
        if len(gens) <= 2:
            b = gens[1] if len(gens) > 1 else Polynomial.zero(bound.ring.vars)
            report = grade_two_generated(gens[0], b, bound.ring,
                                         pair_budget=cfg.pair_budget)
        else:
            report = generic_combination_grade(
                bound.ideal, bound.ring, trials=cfg.trials, seed=cfg.seed,
                pair_budget=cfg.pair_budget)
        return _grade_value(report, bound.host)
    if kind == "kernel":
        d = env.derivations[a["name"]]
        report = kernel_generators(d, a["degree"], dim_budget=cfg.dim_budget,
                                   pair_budget=cfg.pair_budget)
        value = {
            "degree": a["degree"],
            "basis_size": len(report.basis),
            "basis": [_display(p, d.host) for p in report.basis],
            "generators": [_display(p, d.host) for p in report.generators],
        }
        notes = []
        if a.get("expect"):
            expected = env.subalgebras[a["expect"]]
            report = compare_kernel_to_subalgebra(report, d, expected)
            value["expected"] = a["expect"]
            value["kernel_in_expected"] = report.kernel_in_expected
            value["expected_in_kernel"] = report.expected_in_kernel
            notes.append("containment verified up to the stated degree only")
        return value, [], notes
    if kind == "slice":
        d = env.derivations[a["name"]]
        data = slice_search(d, a["degree"], dim_budget=cfg.dim_budget)
        if data is None:
            return {"found": "none"}, [], []
        if data.is_local():
            return {"found": "local",
                    "slice": _display(data.slice, d.host),
                    "cofactor": _display(data.cofactor, d.host)}, [], []
        return {"found": "slice", "slice": _display(data.slice, d.host)}, [], []
    if kind == "dixmier":
        d = env.derivations[a["name"]]
        s = env.express(a["slice"], _host_name(env, d))
        target = env.express(a["target"], _host_name(env, d))
        image = apply(d, s)
        if image == Polynomial.one(d.ring.vars):
            data = SliceData(s)
        elif not image.is_zero() and apply(d, image).is_zero():
            data = SliceData(s, image)
        else:
            raise LndError("supplied element is neither a slice nor a local slice")
        out = dixmier(d, data, target)
        value = {"projection": _display(out.numerator, d.host),
                 "denominator_power": out.denominator_power}
        if out.cofactor is not None:
            value["cofactor"] = _display(out.cofactor, d.host)
        return value, [], []
    if kind == "symbolic":
        bound = env.ideals[a["name"]]
        saturator = _bound_element(bound, a["saturator"])
        sym = symbolic_power(bound.ideal, a["power"], saturator, bound.ring,
                             pair_budget=cfg.pair_budget)
        ordinary = ideal_power(bound.ideal, a["power"])
        from .groebner_engine import ideal_equal
        same = ideal_equal(bound.ring.lifted_ideal(sym.generators),
                           bound.ring.lifted_ideal(ordinary.generators),
                           pair_budget=cfg.pair_budget)
        return {"power": a["power"],
                "generators": sorted(_display(g, bound.host)
                                     for g in sym.generators),
                "equals_ordinary_power": same}, [], []
    if kind == "rees":
        bound = env.ideals[a["name"]]
        saturator = _bound_element(bound, a["saturator"])
        data = rees_truncation(bound.ideal, a["upto"], saturator, bound.ring,
                               pair_budget=cfg.pair_budget)
        return {"truncation": a["upto"],
                "pieces": [sorted(_display(g, bound.host) for g in piece.generators)
                           for piece in data.pieces],
                "checks": "all containment and multiplicativity checks passed"}, [], []
    if kind == "verify-generators":
        sub = env.subalgebras[a["name"]]
        claimed = [parse_polynomial(t, sub.ambient.vars) for t in a["claimed"]]
        out = verify_generators_up_to_degree(sub, claimed, a["degree"],
                                             dim_budget=cfg.dim_budget)
        value = {"verdict": out.verdict, "degree": a["degree"]}
        witnesses = [_poly_str(out.witness)] if out.witness is not None else []
        return value, witnesses, []
    raise ValueError(f"unknown command kind {kind}")


def _express_in(sub, text):
    return sub.express(parse_polynomial(text, sub.ambient.vars))


def _bound_element(bound, text):
    if bound.host is None:
        return bound.ring.normal(parse_polynomial(text, bound.ring.vars))
    return bound.ring.normal(_express_in(bound.host, text))


def _host_name(env, derivation):
    if derivation.host is None:
        for name, ring in env.rings.items():
            if ring is derivation.ring:
                return name
        raise LndError("derivation host not found")
    for name, sub in env.subalgebras.items():
        if sub is derivation.host:
            return name
    raise LndError("derivation host not found")


def _grade_value(report, host):
    value = {
        "grade": str(report.value),
        "method": report.method,
        "exhaustive": report.exhaustive,
        "probabilistic": report.probabilistic,
    }
    witnesses = [_display(w, host) for w in report.witness]
    return value, witnesses, list(report.notes)


def load_environment(session, cfg=None):
    """Execute only the declarations, returning the bound objects.

    Handy for driving the API against objects declared in a session file.
    """
    if cfg is None:
        cfg = RunConfig.from_environment()
    env = _Environment(cfg)
    for decl in session.declarations:
        _execute_declaration(env, decl)
    return env


def run(session, cfg=None, session_name=None):
    """Execute the commands in order; failures are recorded per command and
    do not abort the rest.  Returns (report dict, exit code)."""
    if cfg is None:
        cfg = RunConfig.from_environment()
    env = _Environment(cfg)
    entries = []
    timings = []
    failed = False
    t_start = time.monotonic()
    decl_error = None
    for decl in session.declarations:
        try:
            _execute_declaration(env, decl)
        except LndError as exc:
            decl_error = f"declaration {decl.name!r} failed: {exc}"
            failed = True
            break
    for index, command in enumerate(session.commands):
        entry = {"index": index, "command": command.pretty()}
        t0 = time.monotonic()
        if decl_error is not None:
            entry["status"] = "error"
            entry["error"] = decl_error
            failed = True
        else:
            try:
                value, witnesses, notes = _run_command(env, command)
                entry["status"] = "ok"
                entry["value"] = value
                entry["witnesses"] = witnesses
                entry["notes"] = notes
            except LndError as exc:
                entry["status"] = "error"
                entry["error"] = str(exc)
                failed = True
        timings.append(int((time.monotonic() - t0) * 1000))
        entries.append(entry)
    report = {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": TOOL_NAME, "version": TOOL_VERSION},
        "seed": cfg.seed,
        "session": session_name or "",
        "declaration_error": decl_error,
        "commands": entries,
        "timing": {
            "total_ms": int((time.monotonic() - t_start) * 1000),
            "per_command_ms": timings,
        },
    }
    return report, (2 if failed else 0)


def report_to_json(report):
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def strip_timing(report):
    """Copy of a report without its timing fields, for golden comparison."""
    out = {k: v for k, v in report.items() if k != "timing"}
    return out


# ---------------------------------------------------------------------------
# corpus
# ---------------------------------------------------------------------------

CORPUS_SESSIONS = ("example_6_1.lnd", "example_6_2.lnd", "derived_uv.lnd",
                   "rees_cone.lnd")


def corpus_path(name):
    return resources.files(__package__) / "corpus" / name


def golden_path(name):
    stem = name.rsplit(".", 1)[0]
    return resources.files(__package__) / "corpus" / "golden" / f"{stem}.json"


def run_corpus(cfg=None, write_golden=False, out=None):
    """Run every shipped session and compare against its golden report.

    Returns 0 when every report matches its golden byte for byte after the
    timing fields are stripped.
    """
    if cfg is None:
        cfg = RunConfig.from_environment()
    if out is None:
        out = sys.stdout
    status = 0
    for name in CORPUS_SESSIONS:
        text = corpus_path(name).read_text(encoding="utf-8")
        session = parse_session(text)
        report, code = run(session, cfg, session_name=name)
        if code != 0:
            print(f"FAIL {name}: command failures", file=out)
            status = 2
            continue
        payload = report_to_json(strip_timing(report))
        gpath = golden_path(name)
        if write_golden:
            with open(str(gpath), "w", encoding="utf-8") as fh:
                fh.write(payload)
            print(f"WROTE {name}", file=out)
            continue
        try:
            golden = gpath.read_text(encoding="utf-8")
        except FileNotFoundError:
            print(f"FAIL {name}: golden report missing", file=out)
            status = 2
            continue
        if payload == golden:
            print(f"PASS {name}", file=out)
        else:
            print(f"FAIL {name}: report differs from golden", file=out)
            status = 2
    return status


# ---------------------------------------------------------------------------
# command line
# ---------------------------------------------------------------------------

def _build_config(args):
    cfg = RunConfig.from_environment()
    if args.seed is not None:
        cfg.seed = args.seed
    if args.pair_budget is not None:
        cfg.pair_budget = args.pair_budget
    if args.dim_budget is not None:
        cfg.dim_budget = args.dim_budget
    return cfg


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="lnd",
        description="Analyze locally nilpotent derivations on finitely "
                    "generated Q-algebras")
    sub = parser.add_subparsers(dest="action", required=True)
    runp = sub.add_parser("run", help="run a session file")
    runp.add_argument("file")
    runp.add_argument("--json", dest="json_out", metavar="OUT",
                      help="write the JSON report to OUT")
    corpusp = sub.add_parser("corpus",
                             help="run the shipped corpus against goldens")
    corpusp.add_argument("--write-golden", action="store_true",
                         help="regenerate the golden reports")
    for p in (runp, corpusp):
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--pair-budget", type=int, default=None)
        p.add_argument("--dim-budget", type=int, default=None)
    args = parser.parse_args(argv)
    cfg = _build_config(args)

    if args.action == "corpus":
        return run_corpus(cfg, write_golden=args.write_golden)

    try:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        session = parse_session(text)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 1
    report, code = run(session, cfg, session_name=args.file)
    payload = report_to_json(report)
    if args.json_out:
        try:
            with open(args.json_out, "w", encoding="utf-8") as fh:
                fh.write(payload)
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
    else:
        sys.stdout.write(payload)
    return code


if __name__ == "__main__":
    sys.exit(main())
