"""TPTP THF0 emission, so external higher-order provers can discharge
embedded queries.

A problem file lists the type declarations for the signature constants,
the eight axioms in the fixed order AV, PV1, PV2, OB1..OB5, and one
conjecture: the validity closure of the embedded formula.  Emission is
pure string building and byte-deterministic for a given input; no prover
is invoked here.

Rendering conventions: application is `@`, fully parenthesized and left
associative; binder variables are renamed V0, V1, ... by binder depth;
the existential pattern (negated universal of a negation) and the
conjunction pattern print as `?[...]` and `&`.  A quantifier constant
applied to something that is not a syntactic lambda is eta-expanded on
the fly so every quantifier prints in binder notation.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import hol
from .hol import (EQ_NAME, NOT_NAME, OR_NAME, PI_NAME, Abs, App, Arrow,
                  BaseType, Bound, Const, Free, HolTerm, HolType, embed, vld)
from .syntax import Formula, atoms

RESERVED_SYMBOLS = frozenset({"av", "pv", "ob"})

AV_TYPE = "$i > $i > $o"
PV_TYPE = "$i > $i > $o"
OB_TYPE = "($i > $o) > ($i > $o) > $o"
ATOM_TYPE = "$i > $o"


class ExportError(Exception):
    pass


def thf_type(ty: HolType) -> str:
    if isinstance(ty, BaseType):
        if ty.name == "o":
            return "$o"
        if ty.name == "i":
            return "$i"
        raise ExportError(f"unrenderable base type {ty.name!r}")
    left = thf_type(ty.arg)
    if isinstance(ty.arg, Arrow):
        left = f"({left})"
    return f"{left} > {thf_type(ty.res)}"


def _match_exists(t: HolTerm):
    if (isinstance(t, App) and isinstance(t.fn, Const)
            and t.fn.name == NOT_NAME and isinstance(t.arg, App)
            and isinstance(t.arg.fn, Const) and t.arg.fn.name == PI_NAME
            and isinstance(t.arg.arg, Abs)
            and isinstance(t.arg.arg.body, App)
            and isinstance(t.arg.arg.body.fn, Const)
            and t.arg.arg.body.fn.name == NOT_NAME):
        inner = t.arg.arg
        return inner.var_ty, inner.body.arg
    return None


def _match_and(t: HolTerm):
    if not (isinstance(t, App) and isinstance(t.fn, Const)
            and t.fn.name == NOT_NAME):
        return None
    u = t.arg
    if (isinstance(u, App) and isinstance(u.fn, App)
            and isinstance(u.fn.fn, Const) and u.fn.fn.name == OR_NAME):
        left, right = u.fn.arg, u.arg
        if (isinstance(left, App) and isinstance(left.fn, Const)
                and left.fn.name == NOT_NAME
                and isinstance(right, App) and isinstance(right.fn, Const)
                and right.fn.name == NOT_NAME):
            return left.arg, right.arg
    return None


def _render(t: HolTerm, names: tuple[str, ...]) -> str:
    ex = _match_exists(t)
    if ex is not None:
        var_ty, body = ex
        name = f"V{len(names)}"
        return f"?[{name}:{thf_type(var_ty)}]: " + _render(body, names + (name,))
    both = _match_and(t)
    if both is not None:
        a, b = both
        return f"({_render(a, names)} & {_render(b, names)})"
    if isinstance(t, App) and isinstance(t.fn, Const):
        if t.fn.name == NOT_NAME:
            return "~" + _delimited(t.arg, names)
        if t.fn.name == PI_NAME:
            name = f"V{len(names)}"
            alpha = t.fn.ty.arg.arg
            if isinstance(t.arg, Abs):
                return (f"![{name}:{thf_type(alpha)}]: "
                        + _render(t.arg.body, names + (name,)))
            # eta-expand so the quantifier still prints in binder form
            return (f"![{name}:{thf_type(alpha)}]: "
                    f"({_delimited(t.arg, names)} @ {name})")
    if isinstance(t, App) and isinstance(t.fn, App):
        if isinstance(t.fn.fn, Const) and t.fn.fn.name == OR_NAME:
            return f"({_render(t.fn.arg, names)} | {_render(t.arg, names)})"
        if isinstance(t.fn.fn, Const) and t.fn.fn.name == EQ_NAME:
            return (f"({_delimited(t.fn.arg, names)} = "
                    f"{_delimited(t.arg, names)})")
    if isinstance(t, App):
        return f"({_delimited(t.fn, names)} @ {_delimited(t.arg, names)})"
    if isinstance(t, Abs):
        name = f"V{len(names)}"
        return (f"^[{name}:{thf_type(t.var_ty)}]: "
                + _render(t.body, names + (name,)))
    if isinstance(t, Bound):
        if t.index >= len(names):
            raise ExportError(f"dangling bound variable index {t.index}")
        return names[len(names) - 1 - t.index]
    if isinstance(t, Const):
        if t.name in hol.LOGICAL_NAMES:
            raise ExportError(
                f"logical constant {t.name!r} occurs unapplied; cannot "
                "render in THF0")
        return t.name
    if isinstance(t, Free):
        raise ExportError(f"free variable {t.name!r} in a closed rendering")
    raise ExportError(f"unrenderable term {t!r}")


def _delimited(t: HolTerm, names: tuple[str, ...]) -> str:
    s = _render(t, names)
    if isinstance(t, (Const, Bound)) or s.startswith("("):
        return s
    return f"({s})"


def to_thf_term(t: HolTerm) -> str:
    """Render a closed, well-typed term as a THF0 formula string."""
    return _render(t, ())


@dataclass(frozen=True)
class ThfProblem:
    """Ordered THF0 problem: (name, role, content) triples."""

    entries: tuple[tuple[str, str, str], ...]

    def text(self) -> str:
        return "".join(f"thf({name}, {role}, {content}).\n"
                       for name, role, content in self.entries)

    def __str__(self) -> str:
        return self.text()


def _signature_entries(atom_names: list[str]) -> list[tuple[str, str, str]]:
    for a in atom_names:
        if a in RESERVED_SYMBOLS:
            raise ExportError(
                f"atom name {a!r} collides with a reserved signature symbol")
    entries = [
        ("av_type", "type", f"av: {AV_TYPE}"),
        ("pv_type", "type", f"pv: {PV_TYPE}"),
        ("ob_type", "type", f"ob: {OB_TYPE}"),
    ]
    entries += [(f"{a}_type", "type", f"{a}: {ATOM_TYPE}") for a in atom_names]
    return entries


_AXIOM_LINE_NAMES = {
    "AV": "av", "PV1": "pv1", "PV2": "pv2", "OB1": "ob1",
    "OB2": "ob2", "OB3": "ob3", "OB4": "ob4", "OB5": "ob5",
}


def _axiom_entries() -> list[tuple[str, str, str]]:
    return [(_AXIOM_LINE_NAMES[name], "axiom", to_thf_term(term))
            for name, term in hol.axioms()]


def to_thf_problem(f: Formula) -> ThfProblem:
    """The full problem for "f is valid": declarations, the eight axioms,
    and the quantified embedding as the conjecture."""
    entries = _signature_entries(sorted(atoms(f)))
    entries += _axiom_entries()
    entries.append(("goal", "conjecture", to_thf_term(vld(embed(f)))))
    return ThfProblem(tuple(entries))


def axioms_problem() -> ThfProblem:
    """Declarations and the eight axioms only (no conjecture)."""
    return ThfProblem(tuple(_signature_entries([]) + _axiom_entries()))
