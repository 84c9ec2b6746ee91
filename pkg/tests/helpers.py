"""Shared test utilities: independent oracles and generators.

The oracles here deliberately do not reuse the package's internal
machinery: the lambda oracle works on named terms with explicit
renaming, and the ob-condition oracle quantifies over every proposition
triple and every member family, straight from the definitions.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Union

from ddlkit import hol
from ddlkit.hol import (AV, I, NOT, OB, OR, PV, TAU, Abs, App, Arrow, Bound,
                        Const, Free, HolTerm, HolType, O, atom_const,
                        eq_const, pi_const)
from ddlkit.model import CJModel, full_mask, mask_of, subsets

# ---------------------------------------------------------------------------
# named-variable lambda oracle


@dataclass(frozen=True)
class NVar:
    name: str


@dataclass(frozen=True)
class NOpaque:
    """Constants and free variables: opaque heads for the oracle."""

    tag: str


@dataclass(frozen=True)
class NApp:
    fn: "NTerm"
    arg: "NTerm"


@dataclass(frozen=True)
class NAbs:
    var: str
    var_ty: HolType
    body: "NTerm"


NTerm = Union[NVar, NOpaque, NApp, NAbs]

_counter = itertools.count()


def fresh_name() -> str:
    return f"v{next(_counter)}"


def to_named(t: HolTerm, env: tuple[str, ...] = ()) -> NTerm:
    if isinstance(t, Bound):
        return NVar(env[t.index])
    if isinstance(t, Const):
        return NOpaque(f"c:{t.name}:{hol.type_str(t.ty)}")
    if isinstance(t, Free):
        return NOpaque(f"f:{t.name}:{hol.type_str(t.ty)}")
    if isinstance(t, App):
        return NApp(to_named(t.fn, env), to_named(t.arg, env))
    if isinstance(t, Abs):
        name = fresh_name()
        return NAbs(name, t.var_ty, to_named(t.body, (name,) + env))
    raise TypeError(t)


def from_named(t: NTerm, env: tuple[str, ...] = ()) -> HolTerm:
    if isinstance(t, NVar):
        return Bound(env.index(t.name))
    if isinstance(t, NOpaque):
        kind, name, ty = t.tag.split(":", 2)
        parsed = _parse_type(ty)
        return Const(name, parsed) if kind == "c" else Free(name, parsed)
    if isinstance(t, NApp):
        return App(from_named(t.fn, env), from_named(t.arg, env))
    if isinstance(t, NAbs):
        return Abs(t.var_ty, from_named(t.body, (t.var,) + env))
    raise TypeError(t)


def _parse_type(s: str) -> HolType:
    # inverse of hol.type_str; handles o, i, > and parentheses
    pos = 0

    def atom() -> HolType:
        nonlocal pos
        if s[pos] == "(":
            pos += 1
            ty = arrow()
            assert s[pos] == ")"
            pos += 1
            return ty
        if s[pos] == "o":
            pos += 1
            return O
        assert s[pos] == "i"
        pos += 1
        return I

    def arrow() -> HolType:
        nonlocal pos
        left = atom()
        if pos < len(s) and s[pos] == ">":
            pos += 1
            return Arrow(left, arrow())
        return left

    ty = arrow()
    assert pos == len(s), s
    return ty


def nfree(t: NTerm) -> set[str]:
    if isinstance(t, NVar):
        return {t.name}
    if isinstance(t, NOpaque):
        return set()
    if isinstance(t, NApp):
        return nfree(t.fn) | nfree(t.arg)
    return nfree(t.body) - {t.var}


def nsubst(t: NTerm, x: str, s: NTerm) -> NTerm:
    """Textbook capture-avoiding substitution with explicit renaming."""
    if isinstance(t, NVar):
        return s if t.name == x else t
    if isinstance(t, NOpaque):
        return t
    if isinstance(t, NApp):
        return NApp(nsubst(t.fn, x, s), nsubst(t.arg, x, s))
    if t.var == x:
        return t
    if t.var in nfree(s) and x in nfree(t.body):
        renamed = fresh_name()
        body = nsubst(t.body, t.var, NVar(renamed))
        return NAbs(renamed, t.var_ty, nsubst(body, x, s))
    return NAbs(t.var, t.var_ty, nsubst(t.body, x, s))


def named_beta_nf(t: NTerm) -> NTerm:
    def whnf(u: NTerm) -> NTerm:
        while isinstance(u, NApp):
            fn = whnf(u.fn)
            if isinstance(fn, NAbs):
                u = nsubst(fn.body, fn.var, u.arg)
            else:
                return NApp(fn, u.arg)
        return u

    t = whnf(t)
    if isinstance(t, NApp):
        return NApp(named_beta_nf(t.fn), named_beta_nf(t.arg))
    if isinstance(t, NAbs):
        return NAbs(t.var, t.var_ty, named_beta_nf(t.body))
    return t


def named_eta_nf(t: NTerm) -> NTerm:
    if isinstance(t, NApp):
        return NApp(named_eta_nf(t.fn), named_eta_nf(t.arg))
    if isinstance(t, NAbs):
        body = named_eta_nf(t.body)
        if (isinstance(body, NApp) and body.arg == NVar(t.var)
                and t.var not in nfree(body.fn)):
            return body.fn
        return NAbs(t.var, t.var_ty, body)
    return t


def oracle_normalize(t: HolTerm) -> HolTerm:
    """Beta-eta normal form computed entirely on named terms."""
    return from_named(named_eta_nf(named_beta_nf(to_named(t))))


# ---------------------------------------------------------------------------
# random well-typed kernel terms

_TYPE_POOL = (O, I, TAU, Arrow(O, O))


def random_term(rng, ty: HolType | None = None, depth: int = 4,
                binders: tuple[HolType, ...] = ()) -> HolTerm:
    """A random well-typed (possibly open in named Frees) term of type ty."""
    if ty is None:
        ty = rng.choice(_TYPE_POOL)
    if depth <= 0:
        return _leaf(rng, ty, binders)
    roll = rng.random()
    if isinstance(ty, Arrow) and roll < 0.4:
        return Abs(ty.arg, random_term(rng, ty.res, depth - 1,
                                       (ty.arg,) + binders))
    if roll < 0.75:
        sigma = rng.choice(_TYPE_POOL)
        fn = random_term(rng, Arrow(sigma, ty), depth - 1, binders)
        arg = random_term(rng, sigma, depth - 1, binders)
        return App(fn, arg)
    return _leaf(rng, ty, binders)


def _leaf(rng, ty: HolType, binders: tuple[HolType, ...]) -> HolTerm:
    candidates: list[HolTerm] = [Bound(i) for i, b in enumerate(binders)
                                 if b == ty]
    for c in (NOT, OR, AV, PV, OB, atom_const("p"), atom_const("q"),
              pi_const(I), pi_const(O), eq_const(I), eq_const(O)):
        if c.ty == ty:
            candidates.append(c)
    candidates.append(Free(f"x_{hol.type_str(ty)}", ty))
    if isinstance(ty, Arrow) and rng.random() < 0.5:
        return Abs(ty.arg, _leaf(rng, ty.res, (ty.arg,) + binders))
    return rng.choice(candidates)


# ---------------------------------------------------------------------------
# brute-force ob-condition oracle (membership semantics, all triples)


def ob_membership(ob: dict[int, frozenset[int]], context: int,
                  member: int) -> bool:
    trace = member & context
    return trace != 0 and trace in ob.get(context, frozenset())


def brute_force_ob_ok(ob: dict[int, frozenset[int]], n: int) -> bool:
    """Check the five conditions from their definitions: all proposition
    pairs and triples, and for condition 3 every nonempty member family."""
    full = full_mask(n)
    props = range(full + 1)
    for context in ob:
        for trace in ob[context]:
            if trace == 0 or trace & ~context:
                return False
    for x in props:
        if ob_membership(ob, x, 0):
            return False
        for y in props:
            for z in props:
                if y & x == z & x and ob_membership(ob, x, y) != \
                        ob_membership(ob, x, z):
                    return False
                if not y & ~x and ob_membership(ob, x, y) and not x & ~z:
                    if not ob_membership(ob, z, (z & ~x) | y):
                        return False
                if not y & ~x and ob_membership(ob, x, z) and y & z:
                    if not ob_membership(ob, y, z):
                        return False
    for x in props:
        members = [y for y in props if ob_membership(ob, x, y)]
        for pick in range(1, 1 << len(members)):
            family = [members[i] for i in range(len(members)) if pick >> i & 1]
            meet = full
            for y in family:
                meet &= y
            if meet & x and not ob_membership(ob, x, meet):
                return False
    return True


def brute_force_ob3_ok(ob: dict[int, frozenset[int]], n: int) -> bool:
    """Only the intersection-closure condition, over every member family."""
    full = full_mask(n)
    props = range(full + 1)
    for x in props:
        members = [y for y in props if ob_membership(ob, x, y)]
        for pick in range(1, 1 << len(members)):
            family = [members[i] for i in range(len(members)) if pick >> i & 1]
            meet = full
            for y in family:
                meet &= y
            if meet & x and not ob_membership(ob, x, meet):
                return False
    return True


def all_candidate_ob_tables(n: int):
    """Every trace-canonical ob table on n worlds (valid or not)."""
    full = full_mask(n)
    contexts = list(range(1, full + 1))
    per_context = []
    for context in contexts:
        traces = [t for t in subsets(context) if t]
        per_context.append([frozenset(t for i, t in enumerate(traces)
                                      if pick >> i & 1)
                            for pick in range(1 << len(traces))])
    for combo in itertools.product(*per_context):
        yield {c: ts for c, ts in zip(contexts, combo) if ts}


# ---------------------------------------------------------------------------
# minimal THF tokenizer for round-trip checks

_THF_TOKEN = re.compile(
    r"\s*(\$[a-z]+|[a-z][a-zA-Z0-9_]*|[A-Z][a-zA-Z0-9_]*|<=>|=>"
    r"|[()\[\]:,.@~|&=!?^>]|\S)")

THF_KEYWORDS = {"thf", "axiom", "conjecture", "type"}


def thf_tokens(text: str) -> list[str]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _THF_TOKEN.match(text, pos)
        if not m:
            break
        tok = m.group(1)
        assert re.fullmatch(
            r"\$[a-z]+|[a-zA-Z][a-zA-Z0-9_]*|<=>|=>|[()\[\]:,.@~|&=!?^>]",
            tok), f"unknown THF token {tok!r}"
        tokens.append(tok)
        pos = m.end()
    return tokens


def check_thf_problem_text(text: str) -> None:
    """Structural sanity of an emitted problem: every statement is a
    balanced `thf(...).`, and symbols are declared before use."""
    declared: set[str] = set()
    for line in text.strip().splitlines():
        tokens = thf_tokens(line)
        assert tokens[0] == "thf" and tokens[1] == "(" and tokens[-1] == "."
        assert tokens[-2] == ")"
        depth = 0
        for tok in tokens:
            if tok in "([":
                depth += 1
            elif tok in ")]":
                depth -= 1
            assert depth >= 0, line
        assert depth == 0, line
        name, comma1, role = tokens[2], tokens[3], tokens[4]
        assert comma1 == "," and tokens[5] == ","
        body = tokens[6:-2]
        if role == "type":
            declared.add(body[0])
            continue
        assert role in ("axiom", "conjecture"), role
        bound = {tok for tok in body if re.fullmatch(r"[A-Z][a-zA-Z0-9_]*", tok)}
        for tok in body:
            if re.fullmatch(r"[a-z][a-zA-Z0-9_]*", tok):
                assert tok in declared, f"symbol {tok!r} used before declaration"
        del bound


# ---------------------------------------------------------------------------
# hand-built models


def mk_model(n: int, av, pv, ob, val) -> CJModel:
    """Model from literal world lists, e.g. mk_model(2, [[1],[1]], ...)."""
    ob_table = {mask_of(ctx): frozenset(mask_of(t) for t in traces)
                for ctx, traces in ob}
    return CJModel(n, tuple(mask_of(a) for a in av),
                   tuple(mask_of(p) for p in pv), ob_table,
                   {a: mask_of(ws) for a, ws in val.items()})
