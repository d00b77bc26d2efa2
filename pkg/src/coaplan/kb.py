"""Knowledge-base DSL: activity templates, primitives, and reaction rules.

Grammar (".kb" files, UTF-8, "#" comments):

    kb        = { template | primitive | reaction } ;
    template  = "activity" VERB [ "fn" FUNC ]
                "{" [ "when" cond ] "subtasks" "{" { subtask } "}" "}" ;
    subtask   = VERB "(" actor_role "," objective_role ")"
                [ "after" NAME | "with" NAME ] [ "dur" INT "min" ]
                [ "fn" FUNC ] "as" NAME ";" ;
    actor_role     = "self" | "passed_unit" | "nearest" SIDE KIND ;
    objective_role = "inherit" | "anchor" | "measure" NAME ;
    primitive = "primitive" VERB "dur" INT "min" "fn" FUNC [ "needs" KIND ]
                [ "moves" ] [ "engages" ] [ "fuel" NUM ] [ "ammo" NUM ] ";" ;
    reaction  = "reaction" "on" VERB "by" SIDE KIND "within" NUM "km"
                "do" VERB [ "counter" VERB { "," VERB } ] ";" ;
    cond      = atom { "and" atom } ;
    atom      = "exists" SIDE KIND "within" NUM "km"
              | "supply" RESOURCE "min" NUM
              | "terrain" TERRAIN ;

VERB/NAME = [a-z_][a-z0-9_]*. "fuel"/"ammo" on a primitive are consumption
rates per minute; "needs" names the unit kind that performs the verb;
"moves" marks locomotion verbs whose duration comes from routing.
Conditions are conjunctions only, evaluated against a world snapshot
anchored at a cell.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, TYPE_CHECKING, Union

from .combat import ConsumptionRate, RateTable
from .errors import (CyclicOrder, DuplicateDefinition, KbSyntaxError, LexError,
                     UnresolvedVerb)
from .scenario import Cell, Side, TerrainKind, UnitKind

if TYPE_CHECKING:
    from .worldstate import WorldState


class BattlefieldFunction(str, Enum):
    SECURITY = "security"
    INTELLIGENCE = "intelligence"
    MANEUVER = "maneuver"
    FIRES = "fires"
    MOBILITY = "mobility"
    LOGISTICS = "logistics"
    COMMAND = "command"


# Row order of the synchronization matrix.
FUNCTION_ORDER = (
    BattlefieldFunction.SECURITY,
    BattlefieldFunction.INTELLIGENCE,
    BattlefieldFunction.MANEUVER,
    BattlefieldFunction.FIRES,
    BattlefieldFunction.MOBILITY,
    BattlefieldFunction.LOGISTICS,
    BattlefieldFunction.COMMAND,
)


# -- condition expressions ----------------------------------------------------

@dataclass(frozen=True)
class ExistsUnit:
    side: Side
    kind: UnitKind
    within_km: float


@dataclass(frozen=True)
class ActorHasSupply:
    resource: str  # "fuel_l" | "ammo_u"
    minimum: float


@dataclass(frozen=True)
class TerrainAt:
    kind: TerrainKind


ConditionAtom = Union[ExistsUnit, ActorHasSupply, TerrainAt]


@dataclass(frozen=True)
class ConditionExpr:
    atoms: tuple[ConditionAtom, ...]


# -- actor / objective roles --------------------------------------------------

@dataclass(frozen=True)
class SelfActor:
    pass


@dataclass(frozen=True)
class PassedUnit:
    pass


@dataclass(frozen=True)
class NearestOf:
    side: Side
    kind: UnitKind


ActorRole = Union[SelfActor, PassedUnit, NearestOf]


@dataclass(frozen=True)
class InheritObjective:
    pass


@dataclass(frozen=True)
class AnchorObjective:
    pass


@dataclass(frozen=True)
class NamedMeasure:
    measure_id: str


ObjectiveRole = Union[InheritObjective, AnchorObjective, NamedMeasure]


@dataclass(frozen=True)
class OrderAfter:
    ref: str


@dataclass(frozen=True)
class OrderWith:
    ref: str


@dataclass(frozen=True)
class OrderFree:
    pass


SubtaskOrder = Union[OrderAfter, OrderWith, OrderFree]


# -- definitions --------------------------------------------------------------

@dataclass(frozen=True)
class SubtaskSpec:
    verb: str
    actor_role: ActorRole
    objective_role: ObjectiveRole
    order: SubtaskOrder
    name: str
    duration_min: Optional[int] = None
    function: Optional[BattlefieldFunction] = None
    pos: tuple[int, int] = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class ActivityTemplate:
    verb: str
    subtasks: tuple[SubtaskSpec, ...]
    when: Optional[ConditionExpr] = None
    function: BattlefieldFunction = BattlefieldFunction.MANEUVER
    pos: tuple[int, int] = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Primitive:
    verb: str
    duration_min: int
    function: BattlefieldFunction
    needs_kind: Optional[UnitKind] = None
    moves: bool = False
    engages: bool = False
    fuel_l_per_min: float = 0.0
    ammo_u_per_min: float = 0.0
    pos: tuple[int, int] = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class ArcRule:
    rule_id: str  # "<trigger>[<n>]", n = position among the trigger's rules
    trigger_verb: str
    reactor_side: Side
    reactor_kind: UnitKind
    within_km: float
    reaction_verb: str
    counter_verbs: tuple[str, ...] = ()
    pos: tuple[int, int] = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class KnowledgeBase:
    templates: dict[str, ActivityTemplate]
    primitives: dict[str, Primitive]
    arc_rules: dict[str, tuple[ArcRule, ...]]  # trigger verb -> rules, file order

    def lookup_template(self, verb: str) -> Optional[ActivityTemplate]:
        return self.templates.get(verb)

    def primitive(self, verb: str) -> Optional[Primitive]:
        return self.primitives.get(verb)

    def defines(self, verb: str) -> bool:
        return verb in self.templates or verb in self.primitives

    def rules_for(self, trigger_verb: str) -> tuple[ArcRule, ...]:
        return self.arc_rules.get(trigger_verb, ())

    def rate_table(self) -> RateTable:
        return {
            p.verb: ConsumptionRate(p.fuel_l_per_min, p.ammo_u_per_min)
            for p in self.primitives.values()
            if p.fuel_l_per_min or p.ammo_u_per_min
        }


# -- lexer --------------------------------------------------------------------

# hyphens are legal only in measure references; expect_name() polices that
_WORD_RE = re.compile(r"[a-z_][a-z0-9_-]*")
_NUM_RE = re.compile(r"[0-9]+(\.[0-9]+)?")
_PUNCT = "{}();,"


@dataclass(frozen=True)
class _Token:
    kind: str  # "word" | "int" | "num" | "punct" | "eof"
    text: str
    line: int
    col: int


def _lex(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    for lineno, line in enumerate(text.split("\n"), start=1):
        i = 0
        while i < len(line):
            ch = line[i]
            if ch in " \t\r":
                i += 1
                continue
            if ch == "#":
                break
            col = i + 1
            if ch in _PUNCT:
                tokens.append(_Token("punct", ch, lineno, col))
                i += 1
                continue
            m = _WORD_RE.match(line, i)
            if m:
                tokens.append(_Token("word", m.group(0), lineno, col))
                i = m.end()
                continue
            m = _NUM_RE.match(line, i)
            if m:
                kind = "num" if "." in m.group(0) else "int"
                tokens.append(_Token(kind, m.group(0), lineno, col))
                i = m.end()
                continue
            raise LexError(f"unexpected character {ch!r}", lineno, col)
    last_line = text.count("\n") + 1
    tokens.append(_Token("eof", "", last_line, 1))
    return tokens


# -- parser -------------------------------------------------------------------

class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.i = 0

    @property
    def cur(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.cur
        self.i += 1
        return tok

    def fail(self, message: str) -> KbSyntaxError:
        return KbSyntaxError(message, self.cur.line, self.cur.col)

    def at_word(self, text: str) -> bool:
        return self.cur.kind == "word" and self.cur.text == text

    def eat_word(self, text: str) -> bool:
        if self.at_word(text):
            self.advance()
            return True
        return False

    def expect_keyword(self, text: str) -> _Token:
        if not self.at_word(text):
            raise self.fail(f"expected {text!r}, got {self.cur.text!r}")
        return self.advance()

    def expect_name(self, what: str = "name", allow_hyphen: bool = False) -> _Token:
        if self.cur.kind != "word":
            raise self.fail(f"expected {what}, got {self.cur.text!r}")
        if not allow_hyphen and "-" in self.cur.text:
            raise self.fail(f"{what} {self.cur.text!r} may not contain '-'")
        return self.advance()

    def expect_punct(self, ch: str) -> _Token:
        if not (self.cur.kind == "punct" and self.cur.text == ch):
            raise self.fail(f"expected {ch!r}, got {self.cur.text!r}")
        return self.advance()

    def expect_int(self) -> int:
        if self.cur.kind != "int":
            raise self.fail(f"expected integer, got {self.cur.text!r}")
        return int(self.advance().text)

    def expect_num(self) -> float:
        if self.cur.kind not in ("int", "num"):
            raise self.fail(f"expected number, got {self.cur.text!r}")
        return float(self.advance().text)

    def expect_enum(self, cls: type, what: str):
        tok = self.expect_name(what)
        try:
            return cls(tok.text)
        except ValueError:
            allowed = ", ".join(e.value for e in cls)  # type: ignore[attr-defined]
            raise KbSyntaxError(f"{tok.text!r} is not a {what} ({allowed})",
                                tok.line, tok.col) from None

    # grammar productions ------------------------------------------------

    def parse_kb(self) -> KnowledgeBase:
        templates: dict[str, ActivityTemplate] = {}
        primitives: dict[str, Primitive] = {}
        rules: dict[str, list[ArcRule]] = {}
        while self.cur.kind != "eof":
            if self.at_word("activity"):
                t = self.template()
                if t.verb in templates or t.verb in primitives:
                    raise DuplicateDefinition(f"verb {t.verb!r} defined twice",
                                              t.pos[0], t.pos[1])
                templates[t.verb] = t
            elif self.at_word("primitive"):
                p = self.primitive()
                if p.verb in templates or p.verb in primitives:
                    raise DuplicateDefinition(f"verb {p.verb!r} defined twice",
                                              p.pos[0], p.pos[1])
                primitives[p.verb] = p
            elif self.at_word("reaction"):
                r = self.reaction(rules)
                rules.setdefault(r.trigger_verb, []).append(r)
            else:
                raise self.fail(
                    f"expected 'activity', 'primitive' or 'reaction', got {self.cur.text!r}")
        kb = KnowledgeBase(
            templates=templates,
            primitives=primitives,
            arc_rules={k: tuple(v) for k, v in rules.items()},
        )
        _resolve(kb)
        return kb

    def template(self) -> ActivityTemplate:
        head = self.expect_keyword("activity")
        verb = self.expect_name("verb")
        function = BattlefieldFunction.MANEUVER
        if self.eat_word("fn"):
            function = self.expect_enum(BattlefieldFunction, "battlefield function")
        self.expect_punct("{")
        when = None
        if self.eat_word("when"):
            when = self.condition()
        self.expect_keyword("subtasks")
        self.expect_punct("{")
        subtasks: list[SubtaskSpec] = []
        while not (self.cur.kind == "punct" and self.cur.text == "}"):
            subtasks.append(self.subtask())
        self.expect_punct("}")
        self.expect_punct("}")
        if not subtasks:
            raise KbSyntaxError(f"activity {verb.text!r} has no subtasks",
                                head.line, head.col)
        return ActivityTemplate(verb=verb.text, subtasks=tuple(subtasks), when=when,
                                function=function, pos=(head.line, head.col))

    def subtask(self) -> SubtaskSpec:
        verb = self.expect_name("verb")
        self.expect_punct("(")
        actor_role = self.actor_role()
        self.expect_punct(",")
        objective_role = self.objective_role()
        self.expect_punct(")")
        order: SubtaskOrder = OrderFree()
        if self.eat_word("after"):
            order = OrderAfter(self.expect_name().text)
        elif self.eat_word("with"):
            order = OrderWith(self.expect_name().text)
        duration = None
        if self.eat_word("dur"):
            duration = self.expect_int()
            self.expect_keyword("min")
            if duration <= 0:
                raise self.fail("duration must be positive")
        function = None
        if self.eat_word("fn"):
            function = self.expect_enum(BattlefieldFunction, "battlefield function")
        self.expect_keyword("as")
        name = self.expect_name()
        self.expect_punct(";")
        return SubtaskSpec(verb=verb.text, actor_role=actor_role,
                           objective_role=objective_role, order=order,
                           name=name.text, duration_min=duration, function=function,
                           pos=(verb.line, verb.col))

    def actor_role(self) -> ActorRole:
        if self.eat_word("self"):
            return SelfActor()
        if self.eat_word("passed_unit"):
            return PassedUnit()
        if self.eat_word("nearest"):
            side = self.expect_enum(Side, "side")
            kind = self.expect_enum(UnitKind, "unit kind")
            return NearestOf(side, kind)
        raise self.fail(f"expected actor role, got {self.cur.text!r}")

    def objective_role(self) -> ObjectiveRole:
        if self.eat_word("inherit"):
            return InheritObjective()
        if self.eat_word("anchor"):
            return AnchorObjective()
        if self.eat_word("measure"):
            return NamedMeasure(self.expect_name("measure id", allow_hyphen=True).text)
        raise self.fail(f"expected objective role, got {self.cur.text!r}")

    def primitive(self) -> Primitive:
        head = self.expect_keyword("primitive")
        verb = self.expect_name("verb")
        self.expect_keyword("dur")
        duration = self.expect_int()
        self.expect_keyword("min")
        if duration <= 0:
            raise self.fail("duration must be positive")
        self.expect_keyword("fn")
        function = self.expect_enum(BattlefieldFunction, "battlefield function")
        needs = None
        if self.eat_word("needs"):
            needs = self.expect_enum(UnitKind, "unit kind")
        moves = self.eat_word("moves")
        engages = self.eat_word("engages")
        fuel = 0.0
        if self.eat_word("fuel"):
            fuel = self.expect_num()
        ammo = 0.0
        if self.eat_word("ammo"):
            ammo = self.expect_num()
        self.expect_punct(";")
        return Primitive(verb=verb.text, duration_min=duration, function=function,
                         needs_kind=needs, moves=moves, engages=engages,
                         fuel_l_per_min=fuel, ammo_u_per_min=ammo,
                         pos=(head.line, head.col))

    def reaction(self, existing: dict[str, list[ArcRule]]) -> ArcRule:
        head = self.expect_keyword("reaction")
        self.expect_keyword("on")
        trigger = self.expect_name("verb").text
        self.expect_keyword("by")
        side = self.expect_enum(Side, "side")
        kind = self.expect_enum(UnitKind, "unit kind")
        self.expect_keyword("within")
        radius = self.expect_num()
        if radius <= 0:
            raise self.fail("reaction radius must be positive")
        self.expect_keyword("km")
        self.expect_keyword("do")
        reaction_verb = self.expect_name("verb").text
        counters: list[str] = []
        if self.eat_word("counter"):
            counters.append(self.expect_name("verb").text)
            while self.cur.kind == "punct" and self.cur.text == ",":
                self.advance()
                counters.append(self.expect_name("verb").text)
        self.expect_punct(";")
        ordinal = len(existing.get(trigger, []))
        return ArcRule(rule_id=f"{trigger}[{ordinal}]", trigger_verb=trigger,
                       reactor_side=side, reactor_kind=kind, within_km=radius,
                       reaction_verb=reaction_verb, counter_verbs=tuple(counters),
                       pos=(head.line, head.col))

    def condition(self) -> ConditionExpr:
        atoms = [self.atom()]
        while self.eat_word("and"):
            atoms.append(self.atom())
        return ConditionExpr(tuple(atoms))

    def atom(self) -> ConditionAtom:
        if self.eat_word("exists"):
            side = self.expect_enum(Side, "side")
            kind = self.expect_enum(UnitKind, "unit kind")
            self.expect_keyword("within")
            radius = self.expect_num()
            if radius < 0:
                raise self.fail("radius must be >= 0")
            self.expect_keyword("km")
            return ExistsUnit(side, kind, radius)
        if self.eat_word("supply"):
            tok = self.expect_name("resource")
            if tok.text not in ("fuel_l", "ammo_u"):
                raise KbSyntaxError(f"{tok.text!r} is not a resource (fuel_l, ammo_u)",
                                    tok.line, tok.col)
            self.expect_keyword("min")
            return ActorHasSupply(tok.text, self.expect_num())
        if self.eat_word("terrain"):
            return TerrainAt(self.expect_enum(TerrainKind, "terrain kind"))
        raise self.fail(f"expected condition atom, got {self.cur.text!r}")


def _resolve(kb: KnowledgeBase) -> None:
    """Whole-KB checks: verb resolution and subtask order sanity."""
    for t in kb.templates.values():
        names: dict[str, SubtaskSpec] = {}
        for st in t.subtasks:
            if st.name in names:
                raise DuplicateDefinition(
                    f"subtask name {st.name!r} reused in activity {t.verb!r}",
                    st.pos[0], st.pos[1])
            names[st.name] = st
        for st in t.subtasks:
            if not kb.defines(st.verb):
                raise UnresolvedVerb(
                    f"subtask verb {st.verb!r} in activity {t.verb!r} is not defined",
                    st.pos[0], st.pos[1])
            if isinstance(st.order, (OrderAfter, OrderWith)):
                if st.order.ref not in names:
                    raise UnresolvedVerb(
                        f"order reference {st.order.ref!r} names no sibling of "
                        f"{st.name!r} in activity {t.verb!r}", st.pos[0], st.pos[1])
                if st.order.ref == st.name:
                    raise CyclicOrder(
                        f"subtask {st.name!r} ordered against itself",
                        st.pos[0], st.pos[1])
        _check_order_acyclic(t)

    for rules in kb.arc_rules.values():
        for r in rules:
            for verb in (r.trigger_verb, r.reaction_verb, *r.counter_verbs):
                if not kb.defines(verb):
                    raise UnresolvedVerb(f"reaction rule {r.rule_id} references "
                                         f"undefined verb {verb!r}", r.pos[0], r.pos[1])


def _check_order_acyclic(t: ActivityTemplate) -> None:
    edges = {
        st.name: ([st.order.ref] if isinstance(st.order, (OrderAfter, OrderWith)) else [])
        for st in t.subtasks
    }
    state: dict[str, int] = {}

    def visit(name: str) -> bool:
        if state.get(name) == 1:
            return True
        if state.get(name) == 2:
            return False
        state[name] = 1
        for ref in edges[name]:
            if visit(ref):
                return True
        state[name] = 2
        return False

    for st in t.subtasks:
        if visit(st.name):
            raise CyclicOrder(f"subtask order cycle through {st.name!r} "
                              f"in activity {t.verb!r}", st.pos[0], st.pos[1])


def parse_kb(text: str) -> KnowledgeBase:
    """Parse KB source text. Raises LexError / KbSyntaxError / DuplicateDefinition
    / UnresolvedVerb / CyclicOrder, each carrying a line:col position."""
    return _Parser(_lex(text)).parse_kb()


def lookup_template(kb: KnowledgeBase, verb: str) -> Optional[ActivityTemplate]:
    return kb.lookup_template(verb)


# -- canonical renderer -------------------------------------------------------

def _fmt_num(x: float) -> str:
    return str(int(x)) if x == int(x) else repr(x)


def _render_atom(a: ConditionAtom) -> str:
    if isinstance(a, ExistsUnit):
        return f"exists {a.side.value} {a.kind.value} within {_fmt_num(a.within_km)} km"
    if isinstance(a, ActorHasSupply):
        return f"supply {a.resource} min {_fmt_num(a.minimum)}"
    return f"terrain {a.kind.value}"


def _render_actor(role: ActorRole) -> str:
    if isinstance(role, SelfActor):
        return "self"
    if isinstance(role, PassedUnit):
        return "passed_unit"
    return f"nearest {role.side.value} {role.kind.value}"


def _render_objective(role: ObjectiveRole) -> str:
    if isinstance(role, InheritObjective):
        return "inherit"
    if isinstance(role, AnchorObjective):
        return "anchor"
    return f"measure {role.measure_id}"


def render_kb(kb: KnowledgeBase) -> str:
    """Canonical text form; parse_kb(render_kb(kb)) == kb."""
    out: list[str] = []
    for p in kb.primitives.values():
        parts = [f"primitive {p.verb} dur {p.duration_min} min fn {p.function.value}"]
        if p.needs_kind is not None:
            parts.append(f"needs {p.needs_kind.value}")
        if p.moves:
            parts.append("moves")
        if p.engages:
            parts.append("engages")
        if p.fuel_l_per_min:
            parts.append(f"fuel {_fmt_num(p.fuel_l_per_min)}")
        if p.ammo_u_per_min:
            parts.append(f"ammo {_fmt_num(p.ammo_u_per_min)}")
        out.append(" ".join(parts) + ";")
    for t in kb.templates.values():
        out.append(f"activity {t.verb} fn {t.function.value} {{")
        if t.when is not None:
            out.append("  when " + " and ".join(_render_atom(a) for a in t.when.atoms))
        out.append("  subtasks {")
        for st in t.subtasks:
            parts = [f"{st.verb}({_render_actor(st.actor_role)}, "
                     f"{_render_objective(st.objective_role)})"]
            if isinstance(st.order, OrderAfter):
                parts.append(f"after {st.order.ref}")
            elif isinstance(st.order, OrderWith):
                parts.append(f"with {st.order.ref}")
            if st.duration_min is not None:
                parts.append(f"dur {st.duration_min} min")
            if st.function is not None:
                parts.append(f"fn {st.function.value}")
            parts.append(f"as {st.name}")
            out.append("    " + " ".join(parts) + ";")
        out.append("  }")
        out.append("}")
    for rules in kb.arc_rules.values():
        for r in rules:
            line = (f"reaction on {r.trigger_verb} by {r.reactor_side.value} "
                    f"{r.reactor_kind.value} within {_fmt_num(r.within_km)} km "
                    f"do {r.reaction_verb}")
            if r.counter_verbs:
                line += " counter " + ", ".join(r.counter_verbs)
            out.append(line + ";")
    return "\n".join(out) + ("\n" if out else "")


# -- condition evaluation -----------------------------------------------------

def eval_condition(c: ConditionExpr, w: "WorldState", anchor: Cell,
                   actor_unit_ids: tuple[str, ...] = ()) -> bool:
    """True iff every atom holds in `w` anchored at `anchor`.

    exists-atoms measure Euclidean km between cell centers; supply atoms
    aggregate over the acting units (a force group pools its stocks).
    """
    grid = w.scenario.terrain
    if not grid.in_bounds(anchor):
        raise ValueError(f"anchor {anchor} outside the grid")
    for atom in c.atoms:
        if isinstance(atom, ExistsUnit):
            found = any(
                grid.distance_km(st.position, anchor) <= atom.within_km
                for st in w.find(side=atom.side, kind=atom.kind)
            )
            if not found:
                return False
        elif isinstance(atom, ActorHasSupply):
            total = 0.0
            for uid in actor_unit_ids:
                st = w.unit_state(uid)
                total += st.fuel_l if atom.resource == "fuel_l" else st.ammo_u
            if total < atom.minimum:
                return False
        else:  # TerrainAt
            if grid.at(anchor).kind is not atom.kind:
                return False
    return True
