"""Evaluation of lambda terms in finite standard models.

A standard model fixes a world count n and interprets every type by a
finite domain: `o` by the two truth values, `i` by the n worlds, and
each arrow type by the full set of function tables between the domains.
Full function spaces keep quantification decidable by enumeration, at
the price of a domain budget (see `enumerate_domain`).

`build_henkin` turns a valid finite model into such an interpretation
(characteristic-function tables for each atom, av, pv, and ob), and
`extract_model` inverts it for any interpretation satisfying the eight
axioms; round-tripping is exact on trace-canonical models.
`check_faithfulness` samples random models, formulas, and worlds and
confirms that direct evaluation and evaluation of the embedded term
always agree.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterable, Mapping, Union

from .checker import eval_formula, valid_in_model
from .hol import (EQ_NAME, I, LOGICAL_NAMES, NOT_NAME, OR_NAME, PI_NAME, TAU,
                  Abs, App, Arrow, Bound, Const, Free, HolTerm, HolType,
                  O as O_TYPE, axioms, embed, type_str, vld)
from .model import (CJModel, canonicalize, full_mask, model_json, ob_member,
                    random_model, validate)
from .syntax import Formula, pretty, random_formula

DOMAIN_BUDGET = 1 << 20


class EvalError(Exception):
    pass


class DomainBudgetError(EvalError):
    """Enumerating a domain would exceed the configured budget."""


class AxiomCheckError(EvalError):
    """An interpretation fails one of the eight axioms; names the axiom."""

    def __init__(self, axiom: str):
        self.axiom = axiom
        super().__init__(f"interpretation does not satisfy axiom {axiom}")


class ExtractionError(EvalError):
    pass


@dataclass(frozen=True)
class VBool:
    value: bool


@dataclass(frozen=True)
class VWorld:
    index: int


@dataclass(frozen=True)
class VFn:
    """A total function as a canonically sorted, immutable table."""

    table: tuple[tuple["Value", "Value"], ...]

    def __post_init__(self):
        object.__setattr__(self, "_map", dict(self.table))

    def apply(self, v: "Value") -> "Value":
        try:
            return self._map[v]  # type: ignore[attr-defined]
        except KeyError:
            raise EvalError(f"value {v!r} outside the function's domain")


Value = Union[VBool, VWorld, VFn]

TRUE = VBool(True)
FALSE = VBool(False)


def _sort_key(v: Value):
    if isinstance(v, VBool):
        return (0, v.value)
    if isinstance(v, VWorld):
        return (1, v.index)
    return (2, tuple((_sort_key(k), _sort_key(w)) for k, w in v.table))


def make_fn(pairs: Iterable[tuple[Value, Value]]) -> VFn:
    """Canonical function value: table sorted by key."""
    return VFn(tuple(sorted(pairs, key=lambda kv: _sort_key(kv[0]))))


_DOMAIN_CACHE: dict[tuple[int, HolType], tuple[Value, ...]] = {}


def domain_size(n: int, ty: HolType) -> int:
    if ty == O_TYPE:
        return 2
    if ty == I:
        return n
    if isinstance(ty, Arrow):
        return domain_size(n, ty.res) ** domain_size(n, ty.arg)
    raise EvalError(f"type {ty!r} has no finite domain")


def enumerate_domain(n: int, ty: HolType) -> tuple[Value, ...]:
    """All elements of the domain for `ty`, canonically ordered.

    Cached per (n, type).  Refuses to enumerate more than DOMAIN_BUDGET
    elements, naming the offending type in the error.
    """
    cached = _DOMAIN_CACHE.get((n, ty))
    if cached is not None:
        return cached
    if ty == O_TYPE:
        out: tuple[Value, ...] = (FALSE, TRUE)
    elif ty == I:
        out = tuple(VWorld(k) for k in range(n))
    elif isinstance(ty, Arrow):
        size = domain_size(n, ty)
        if size > DOMAIN_BUDGET:
            raise DomainBudgetError(
                f"domain for type {type_str(ty)} has {size} elements, "
                f"exceeding the budget of {DOMAIN_BUDGET}")
        dom = enumerate_domain(n, ty.arg)
        cod = enumerate_domain(n, ty.res)
        out = tuple(sorted(
            (make_fn(zip(dom, combo))
             for combo in itertools.product(cod, repeat=len(dom))),
            key=_sort_key))
    else:
        raise EvalError(f"not a type: {ty!r}")
    _DOMAIN_CACHE[(n, ty)] = out
    return out


@dataclass(frozen=True)
class HenkinModel:
    """Finite standard interpretation: worlds plus constant denotations.

    `interp` covers the deontic constants and the atoms; the logical
    constants are evaluated structurally (their denotations are fixed).
    """

    n: int
    interp: Mapping[str, Value]

    def domain(self, ty: HolType) -> tuple[Value, ...]:
        return enumerate_domain(self.n, ty)


class Assignment:
    """Environment for evaluation: a binder stack plus free-variable map."""

    def __init__(self, free: Mapping[str, Value] | None = None):
        self.stack: list[Value] = []
        self.free: dict[str, Value] = dict(free or {})

    def lookup_bound(self, index: int) -> Value:
        if index >= len(self.stack):
            raise EvalError(f"dangling bound variable index {index}")
        return self.stack[-1 - index]

    def lookup_free(self, name: str, ty: HolType) -> Value:
        try:
            return self.free[name]
        except KeyError:
            raise EvalError(
                f"unassigned free variable {name}:{type_str(ty)}") from None


_LOGICAL_CACHE: dict[tuple[int, Const], Value] = {}


def _logical_value(n: int, c: Const) -> Value:
    """Materialized table for a logical constant (rare slow path; the
    evaluator normally applies these constants without building tables)."""
    cached = _LOGICAL_CACHE.get((n, c))
    if cached is not None:
        return cached
    if c.name == NOT_NAME:
        out: Value = make_fn(((FALSE, TRUE), (TRUE, FALSE)))
    elif c.name == OR_NAME:
        out = make_fn((a, make_fn((b, VBool(a == TRUE or b == TRUE))
                                  for b in (FALSE, TRUE)))
                      for a in (FALSE, TRUE))
    elif c.name == EQ_NAME:
        alpha = c.ty.arg
        dom = enumerate_domain(n, alpha)
        out = make_fn((a, make_fn((b, VBool(a == b)) for b in dom))
                      for a in dom)
    elif c.name == PI_NAME:
        pred_ty = c.ty.arg
        dom = enumerate_domain(n, pred_ty)
        out = make_fn((f, VBool(all(v == TRUE for _, v in f.table)))
                      for f in dom)
    else:
        raise EvalError(f"constant {c.name} has no interpretation")
    _LOGICAL_CACHE[(n, c)] = out
    return out


def eval_term(h: HenkinModel, t: HolTerm,
              free: Mapping[str, Value] | None = None) -> Value:
    """Denotation of a term: constants via the interpretation, variables
    via the assignment, application by table lookup, abstraction by
    building the table over the argument domain.

    Quantifiers and the boolean connectives are applied without
    materializing their tables, enumerating lazily with early exit; the
    resulting value is the same, only cheaper.
    """
    return _eval(h, t, Assignment(free))


def _eval(h: HenkinModel, t: HolTerm, g: Assignment) -> Value:
    if isinstance(t, Bound):
        return g.lookup_bound(t.index)
    if isinstance(t, Free):
        return g.lookup_free(t.name, t.ty)
    if isinstance(t, Const):
        if t.name in LOGICAL_NAMES:
            return _logical_value(h.n, t)
        try:
            return h.interp[t.name]
        except KeyError:
            raise EvalError(f"constant {t.name} has no interpretation") from None
    if isinstance(t, Abs):
        pairs = []
        for d in enumerate_domain(h.n, t.var_ty):
            g.stack.append(d)
            try:
                pairs.append((d, _eval(h, t.body, g)))
            finally:
                g.stack.pop()
        return make_fn(pairs)
    # application: flatten the spine so logical heads can short-circuit
    head, args = t, []
    while isinstance(head, App):
        args.append(head.arg)
        head = head.fn
    args.reverse()
    if isinstance(head, Const):
        if head.name == NOT_NAME and len(args) == 1:
            return FALSE if _eval(h, args[0], g) == TRUE else TRUE
        if head.name == OR_NAME and len(args) == 2:
            if _eval(h, args[0], g) == TRUE:
                return TRUE
            return _eval(h, args[1], g)
        if head.name == EQ_NAME and len(args) == 2:
            return VBool(_eval(h, args[0], g) == _eval(h, args[1], g))
        if head.name == PI_NAME and len(args) == 1:
            alpha = head.ty.arg.arg
            u = args[0]
            if isinstance(u, Abs):
                for d in enumerate_domain(h.n, alpha):
                    g.stack.append(d)
                    try:
                        v = _eval(h, u.body, g)
                    finally:
                        g.stack.pop()
                    if v != TRUE:
                        return FALSE
                return TRUE
            fv = _eval(h, u, g)
            return VBool(all(v == TRUE for _, v in fv.table))
    if isinstance(head, Abs):
        # apply syntactic lambdas by extending the environment rather
        # than building their tables; arguments are evaluated in the
        # current environment first
        argvals = [_eval(h, a, g) for a in args]
        term: HolTerm = head
        consumed = 0
        while isinstance(term, Abs) and consumed < len(argvals):
            g.stack.append(argvals[consumed])
            consumed += 1
            term = term.body
        try:
            out = _eval(h, term, g)
        finally:
            for _ in range(consumed):
                g.stack.pop()
        for v in argvals[consumed:]:
            out = _apply(out, v)
        return out
    out = _eval(h, head, g)
    for a in args:
        out = _apply(out, _eval(h, a, g))
    return out


def _apply(f: Value, v: Value) -> Value:
    if not isinstance(f, VFn):
        raise EvalError(f"cannot apply non-function value {f!r}")
    return f.apply(v)


def prop_value(n: int, mask: int) -> VFn:
    """Characteristic-function table of a proposition bitmask."""
    return make_fn((VWorld(s), VBool(bool(mask >> s & 1))) for s in range(n))


def prop_mask(v: VFn) -> int:
    mask = 0
    for key, out in v.table:
        if out == TRUE:
            mask |= 1 << key.index
    return mask


def build_henkin(m: CJModel) -> HenkinModel:
    """Standard interpretation of a valid model.

    Atoms, av, and pv become characteristic-function tables; ob becomes
    the table sending a pair of propositions to their trace-membership
    verdict, over all pairs from the full proposition domain.
    """
    n = m.n
    interp: dict[str, Value] = {}
    for atom, mask in m.val.items():
        interp[atom] = prop_value(n, mask)
    interp["av"] = make_fn((VWorld(s), prop_value(n, m.av[s]))
                           for s in range(n))
    interp["pv"] = make_fn((VWorld(s), prop_value(n, m.pv[s]))
                           for s in range(n))
    dom_tau = enumerate_domain(n, TAU)
    interp["ob"] = make_fn(
        (x, make_fn((y, VBool(ob_member(m, prop_mask(x), prop_mask(y))))
                    for y in dom_tau))
        for x in dom_tau)
    return HenkinModel(n, interp)


def check_axioms(h: HenkinModel) -> str | None:
    """Name of the first failing axiom, or None if all eight hold."""
    for name, term in axioms():
        if eval_term(h, term) != TRUE:
            return name
    return None


def extract_model(h: HenkinModel, atoms: Iterable[str]) -> CJModel:
    """Read a model back off an interpretation satisfying the axioms.

    The worlds are the individual domain; av, pv, ob, and the valuation
    are read off the tables, with ob quotiented to trace-canonical form.
    Raises AxiomCheckError (naming the axiom) if the interpretation does
    not satisfy all eight axioms, since only then is a valid model
    guaranteed.
    """
    failing = check_axioms(h)
    if failing is not None:
        raise AxiomCheckError(failing)
    n = h.n
    try:
        av_t, pv_t, ob_t = h.interp["av"], h.interp["pv"], h.interp["ob"]
        atom_tables = {a: h.interp[a] for a in sorted(set(atoms))}
    except KeyError as e:
        raise ExtractionError(f"interpretation missing constant {e}") from e
    av = tuple(prop_mask(av_t.apply(VWorld(s))) for s in range(n))
    pv = tuple(prop_mask(pv_t.apply(VWorld(s))) for s in range(n))
    dom_tau = enumerate_domain(n, TAU)
    raw_ob: dict[int, set[int]] = {}
    for x in dom_tau:
        row = ob_t.apply(x)
        members = {prop_mask(y) for y in dom_tau if row.apply(y) == TRUE}
        if members:
            raw_ob[prop_mask(x)] = members
    ob, _ = canonicalize(raw_ob, n)
    val = {a: prop_mask(table) for a, table in atom_tables.items()}
    m = CJModel(n, av, pv, ob, val)
    report = validate(m)
    if not report.ok:
        raise ExtractionError(
            f"extracted model violates the model conditions:\n{report}")
    return m


def frame_condition_failures(h: HenkinModel) -> list[str]:
    """Check the frame conditions directly on the interpreted tables.

    Returns the names of violated clauses among av, pv1, pv2, ob1..ob5,
    quantifying over all propositions of the finite domain.  On an
    interpretation built from a valid model this is empty.
    """
    n = h.n
    full = full_mask(n)
    av = [prop_mask(h.interp["av"].apply(VWorld(s))) for s in range(n)]
    pv = [prop_mask(h.interp["pv"].apply(VWorld(s))) for s in range(n)]
    member: dict[tuple[int, int], bool] = {}
    for x, row in h.interp["ob"].table:
        for y, out in row.table:
            member[(prop_mask(x), prop_mask(y))] = out == TRUE
    failures: list[str] = []
    if any(av[s] == 0 for s in range(n)):
        failures.append("av")
    if any(av[s] & ~pv[s] for s in range(n)):
        failures.append("pv1")
    if any(not pv[s] >> s & 1 for s in range(n)):
        failures.append("pv2")
    if any(member[(x, 0)] for x in range(full + 1)):
        failures.append("ob1")
    if any(y & x == z & x and member[(x, y)] != member[(x, z)]
           for x in range(full + 1)
           for y in range(full + 1)
           for z in range(full + 1)):
        failures.append("ob2")
    for x in range(full + 1):
        members = [y for y in range(full + 1) if member[(x, y)]]
        bad = False
        for pick in range(1, 1 << len(members)):
            chosen = [members[i] for i in range(len(members)) if pick >> i & 1]
            meet = full
            for y in chosen:
                meet &= y
            if meet & x and not member[(x, meet)]:
                bad = True
        if bad:
            failures.append("ob3")
            break
    ob4_bad = False
    ob5_bad = False
    for x in range(full + 1):
        for y in range(full + 1):
            for z in range(full + 1):
                if not y & ~x and member[(x, y)] and not x & ~z:
                    if not member[(z, (z & ~x) | y)]:
                        ob4_bad = True
                if not y & ~x and member[(x, z)] and y & z:
                    if not member[(y, z)]:
                        ob5_bad = True
    if ob4_bad:
        failures.append("ob4")
    if ob5_bad:
        failures.append("ob5")
    return failures


@dataclass(frozen=True)
class Mismatch:
    model: CJModel
    world: int | None
    formula: Formula
    kind: str  # "world" or "validity"

    def render(self) -> str:
        where = "all" if self.world is None else str(self.world)
        return (f"MISMATCH model={model_json(self.model)} world={where} "
                f"formula={pretty(self.formula)}")


@dataclass(frozen=True)
class FaithfulnessReport:
    samples: int
    mismatches: tuple[Mismatch, ...]

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def render(self) -> str:
        lines = [mm.render() for mm in self.mismatches]
        if self.ok:
            lines.append(f"OK samples={self.samples}")
        else:
            lines.append(f"FAIL samples={self.samples} "
                         f"mismatches={len(self.mismatches)}")
        return "\n".join(lines)


def check_faithfulness(n_max: int = 2, samples: int = 1000,
                       seed: int = 0) -> FaithfulnessReport:
    """Sample (model, formula, world) triples and compare both semantics.

    For each triple, direct evaluation at the world must agree with
    evaluating the embedded predicate applied to that world, and
    model-wide validity must agree with the quantified sentence.
    Deterministic for a fixed seed.
    """
    if not 1 <= n_max <= 4:
        raise ValueError(f"n_max must be in 1..4, got {n_max}")
    rng = random.Random(seed)
    atom_pool = ("p", "q", "r")
    mismatches: list[Mismatch] = []
    for _ in range(samples):
        n = rng.randint(1, n_max)
        density = rng.choice((0.0, 0.15, 0.3, 0.5))
        m = random_model(n, atom_pool, rng.getrandbits(63), density)
        f = random_formula(rng, 6, atom_pool)
        s = rng.randrange(n)
        h = build_henkin(m)
        t = embed(f)
        direct = eval_formula(m, s, f)
        embedded = _eval_at_world(h, t, s)
        if direct != embedded:
            mismatches.append(Mismatch(m, s, f, "world"))
        direct_valid = valid_in_model(m, f)
        embedded_valid = eval_term(h, vld(t)) == TRUE
        if direct_valid != embedded_valid:
            mismatches.append(Mismatch(m, None, f, "validity"))
    return FaithfulnessReport(samples, tuple(mismatches))


def _eval_at_world(h: HenkinModel, t: HolTerm, s: int) -> bool:
    """Truth of a world predicate at one world of the interpretation."""
    term = App(t, Free("S", I))
    return eval_term(h, term, {"S": VWorld(s)}) == TRUE
