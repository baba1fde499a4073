"""Derivation scripts: named lattice terms checked step by step.

A script binds generators and then derives new elements one line at a time::

    kind equ
    n=6
    gen alpha = eq(12;3;45;6)
    gen beta = eq(1;2;34;5;6)
    s1 := alpha + beta  expect eq(12;345;6)

``*`` is meet, ``+`` is join (``*`` binds tighter).  ``inv(e)`` inverts a
quasiorder.  ``at(x,y)`` and ``qu(x,y)`` denote atoms; inside a step they are
only accepted once the same element (or, for inverse-closed generators, its
inverse) has been derived, so a passing script never leaves the generated
sublattice.
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Sequence, Union

from . import partition as pt
from . import quasiorder as qo
from .partition import Partition
from .quasiorder import Quasiorder


class ScriptError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


# AST -------------------------------------------------------------------------

@dataclass(frozen=True)
class Name:
    id: str


@dataclass(frozen=True)
class Meet:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Join:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Inv:
    arg: "Expr"


@dataclass(frozen=True)
class At:
    x: int
    y: int


@dataclass(frozen=True)
class Qu:
    x: int
    y: int


@dataclass(frozen=True)
class Literal:
    value: Union[Partition, Quasiorder]


Expr = Union[Name, Meet, Join, Inv, At, Qu, Literal]


@dataclass(frozen=True)
class Step:
    name: str
    expr: Expr
    expect: Expr | None = None


@dataclass(frozen=True)
class Script:
    kind: str
    n: int
    bindings: tuple[tuple[str, Expr], ...]
    steps: tuple[Step, ...]
    base: int = 0
    elements: tuple[str, ...] | None = None
    cycle: tuple[int, ...] | None = None

    @property
    def generator_names(self) -> list[str]:
        return [name for name, _ in self.bindings]


def names_in(expr: Expr) -> set[str]:
    if isinstance(expr, Name):
        return {expr.id}
    if isinstance(expr, (Meet, Join)):
        return names_in(expr.left) | names_in(expr.right)
    if isinstance(expr, Inv):
        return names_in(expr.arg)
    return set()


# tokenizer and parser --------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<raw>eq\s*\(|rel\s*\(|\[)|(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_.']*)|(?P<op>[-+*(),>]))")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_.']*$")
_RESERVED = {"eq", "rel", "at", "qu", "inv", "expect", "gen", "kind", "base", "elements", "cycle"}


class _Parser:
    def __init__(self, text: str, script: "_Header", line: int | None):
        self.text = text
        self.pos = 0
        self.hdr = script
        self.line = line
        self.tokens: list[tuple[str, str, int]] = []
        self._lex()
        self.i = 0

    def _err(self, msg: str, col: int | None = None) -> ScriptError:
        where = f" (column {col + 1})" if col is not None else ""
        return ScriptError(msg + where, self.line)

    def _lex(self) -> None:
        text = self.text
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN.match(text, pos)
            if not m:
                raise self._err(f"unexpected character {text[pos:].strip()[0]!r}", pos)
            start = m.start(m.lastgroup)
            if m.group("raw"):
                close = "]" if m.group("raw") == "[" else ")"
                end = text.find(close, m.end())
                if end < 0:
                    raise self._err(f"missing {close!r}", start)
                self.tokens.append(("raw", text[start:end + 1], start))
                pos = end + 1
                continue
            kind = m.lastgroup
            self.tokens.append((kind, m.group(kind), start))
            pos = m.end()
        self.tokens.append(("end", "", len(text)))

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def take(self, value: str | None = None) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        if value is not None and tok[1] != value:
            raise self._err(f"expected {value!r}, found {tok[1] or 'end of line'!r}", tok[2])
        self.i += 1
        return tok

    def parse(self) -> Expr:
        e = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise self._err(f"unexpected {tok[1]!r}", tok[2])
        return e

    def expr(self) -> Expr:
        e = self.term()
        while self.peek()[1] == "+":
            self.take()
            e = Join(e, self.term())
        return e

    def term(self) -> Expr:
        e = self.factor()
        while self.peek()[1] == "*":
            self.take()
            e = Meet(e, self.factor())
        return e

    def factor(self) -> Expr:
        kind, val, col = self.take()
        if kind == "raw":
            return Literal(self.hdr.literal(val, self.line))
        if val == "(":
            e = self.expr()
            self.take(")")
            return e
        if kind == "name":
            if val in ("at", "qu"):
                self.take("(")
                x = self.element()
                self.take(",")
                y = self.element()
                self.take(")")
                if val == "at":
                    if x == y:
                        raise self._err("at(x,y) needs distinct elements", col)
                    return At(x, y)
                return Qu(x, y)
            if val == "inv":
                self.take("(")
                e = self.expr()
                self.take(")")
                return Inv(e)
            if val in _RESERVED:
                raise self._err(f"reserved word {val!r}", col)
            return Name(val)
        raise self._err(f"unexpected {val or 'end of line'!r}", col)

    def element(self) -> int:
        kind, val, col = self.take()
        try:
            return self.hdr.element(val, kind)
        except ScriptError as exc:
            raise self._err(str(exc), col) from None


@dataclass
class _Header:
    kind: str = "equ"
    n: int | None = None
    base: int = 0
    elements: tuple[str, ...] | None = None

    def element(self, token: str, kind: str = "name") -> int:
        if self.n is None:
            raise ScriptError("n is not set")
        if kind == "num" or token.isdigit():
            x = int(token) - self.base
        elif self.elements and token in self.elements:
            x = self.elements.index(token)
        else:
            raise ScriptError(f"unknown element {token!r}")
        if not 0 <= x < self.n:
            raise ScriptError(f"element {token} out of range")
        return x

    def literal(self, raw: str, line: int | None):
        if self.n is None:
            raise ScriptError("n must be set before literals", line)
        try:
            if raw.startswith("eq"):
                p = pt.parse_partition(raw, self.n)
                return p if self.kind == "equ" else qo.equ_to_quo(p)
            if raw.startswith("["):
                p = pt.parse_partition(raw[1:-1], self.n)
                return p if self.kind == "equ" else qo.equ_to_quo(p)
            body = raw[raw.index("(") + 1:-1].strip()
            pairs = []
            if body:
                for item in body.split(","):
                    x, sep, y = item.partition(">")
                    if not sep:
                        raise ScriptError(f"malformed pair {item.strip()!r}")
                    pairs.append((self.element(x.strip()), self.element(y.strip())))
            if self.kind != "quo":
                raise ScriptError("rel(...) literals need kind quo")
            return qo.Quasiorder.from_pairs(self.n, pairs)
        except (pt.PartitionError, qo.QuasiorderError) as exc:
            raise ScriptError(str(exc), line) from None


def parse_expr(text: str, kind: str, n: int, base: int = 0,
               elements: Sequence[str] | None = None) -> Expr:
    hdr = _Header(kind, n, base, tuple(elements) if elements else None)
    return _Parser(text, hdr, None).parse()


def _split_expect(body: str) -> tuple[str, str | None]:
    m = re.search(r"\bexpect\b", body)
    if not m:
        return body, None
    return body[:m.start()], body[m.end():]


def parse_script(text: str) -> Script:
    hdr = _Header()
    bindings: list[tuple[str, Expr]] = []
    steps: list[Step] = []
    cycle_tokens: tuple[list[str], int] | None = None
    pending: list[tuple[int, str, str]] = []
    kind_seen = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":=" in line:
            name, body = (s.strip() for s in line.split(":=", 1))
            pending.append((lineno, name, body))
            continue
        word, _, rest = line.partition(" ")
        rest = rest.strip()
        if line.startswith("n="):
            hdr.n = _int(line[2:], lineno)
        elif word == "kind":
            if rest not in ("equ", "quo"):
                raise ScriptError(f"unknown kind {rest!r}", lineno)
            hdr.kind = rest
            kind_seen = True
        elif word == "base":
            if rest not in ("0", "1"):
                raise ScriptError("base must be 0 or 1", lineno)
            hdr.base = int(rest)
        elif word == "elements":
            hdr.elements = tuple(rest.split())
        elif word == "cycle":
            cycle_tokens = (rest.split(), lineno)
        elif word == "gen":
            name, eq, body = rest.partition("=")
            name = name.strip()
            if not eq:
                raise ScriptError("expected 'gen <name> = <literal>'", lineno)
            _check_ident(name, lineno)
            if name in {b for b, _ in bindings}:
                raise ScriptError(f"duplicate name {name!r}", lineno)
            if steps or pending:
                raise ScriptError("generators must precede steps", lineno)
            expr = _Parser(body, hdr, lineno).parse()
            if names_in(expr):
                raise ScriptError("generator values must be constants", lineno)
            bindings.append((name, expr))
        else:
            raise ScriptError(f"cannot parse {line!r}", lineno)
    if not kind_seen:
        raise ScriptError("missing 'kind equ|quo' header")
    if hdr.n is None:
        raise ScriptError("missing 'n=<N>' header")
    if hdr.elements is not None and len(hdr.elements) != hdr.n:
        raise ScriptError("elements line must name all n elements")
    later = {name for _, name, _ in pending}
    known = {name for name, _ in bindings}
    for lineno, name, body in pending:
        _check_ident(name, lineno)
        if name in known:
            raise ScriptError(f"duplicate name {name!r}", lineno)
        expr_text, expect_text = _split_expect(body)
        expr = _Parser(expr_text, hdr, lineno).parse()
        for ref in sorted(names_in(expr)):
            if ref == name:
                raise ScriptError(f"step {name!r} refers to itself", lineno)
            if ref not in known:
                if ref in later:
                    raise ScriptError(f"forward reference to {ref!r}", lineno)
                raise ScriptError(f"undefined identifier {ref!r}", lineno)
        expect = None
        if expect_text is not None:
            expect = _Parser(expect_text, hdr, lineno).parse()
            if names_in(expect):
                raise ScriptError("expected values must be constants", lineno)
        steps.append(Step(name, expr, expect))
        known.add(name)
    cycle = None
    if cycle_tokens is not None:
        toks, lineno = cycle_tokens
        try:
            cycle = tuple(hdr.element(t) for t in toks)
        except ScriptError as exc:
            raise ScriptError(str(exc), lineno) from None
        if len(set(cycle)) != len(cycle) or len(cycle) < 3:
            raise ScriptError("cycle needs at least three distinct elements", lineno)
    return Script(hdr.kind, hdr.n, tuple(bindings), tuple(steps), hdr.base, hdr.elements, cycle)


def _int(text: str, lineno: int) -> int:
    try:
        val = int(text)
    except ValueError:
        raise ScriptError(f"not an integer: {text!r}", lineno) from None
    if val < 1:
        raise ScriptError("n must be positive", lineno)
    return val


def _check_ident(name: str, lineno: int) -> None:
    if not _IDENT.match(name) or name in _RESERVED:
        raise ScriptError(f"bad identifier {name!r}", lineno)


# formatting ------------------------------------------------------------------

def _fmt_element(script: Script, x: int) -> str:
    if script.elements:
        return script.elements[x]
    return str(x + script.base)


def format_expr(expr: Expr, script: Script, prec: int = 0) -> str:
    if isinstance(expr, Name):
        return expr.id
    if isinstance(expr, Join):
        s = f"{format_expr(expr.left, script, 1)} + {format_expr(expr.right, script, 2)}"
        return f"({s})" if prec > 1 else s
    if isinstance(expr, Meet):
        s = f"{format_expr(expr.left, script, 2)} * {format_expr(expr.right, script, 3)}"
        return f"({s})" if prec > 2 else s
    if isinstance(expr, Inv):
        return f"inv({format_expr(expr.arg, script)})"
    if isinstance(expr, (At, Qu)):
        fn = "at" if isinstance(expr, At) else "qu"
        return f"{fn}({_fmt_element(script, expr.x)},{_fmt_element(script, expr.y)})"
    if isinstance(expr, Literal):
        return format_value(expr.value, script)
    raise TypeError(expr)


def format_value(value, script: Script) -> str:
    if isinstance(value, Partition):
        if script.kind == "equ" and script.base == 1 and value.n <= 9:
            return value.format_eq()
        return f"[{value.format()}]"
    pairs = ", ".join(f"{_fmt_element(script, x)}>{_fmt_element(script, y)}"
                      for x, y in value.reduction())
    return f"rel({pairs})"


def format_script(script: Script) -> str:
    out = [f"kind {script.kind}", f"n={script.n}"]
    if script.base:
        out.append(f"base {script.base}")
    if script.elements:
        out.append("elements " + " ".join(script.elements))
    if script.cycle:
        out.append("cycle " + " ".join(_fmt_element(script, x) for x in script.cycle))
    for name, expr in script.bindings:
        out.append(f"gen {name} = {format_expr(expr, script)}")
    for st in script.steps:
        line = f"{st.name} := {format_expr(st.expr, script)}"
        if st.expect is not None:
            line += f"  expect {format_expr(st.expect, script)}"
        out.append(line)
    return "\n".join(out) + "\n"


# evaluation ------------------------------------------------------------------

class _Ops:
    def __init__(self, kind: str, n: int):
        self.kind = kind
        self.n = n

    def meet(self, a, b):
        return pt.meet(a, b) if self.kind == "equ" else qo.meet(a, b)

    def join(self, a, b):
        return pt.join(a, b) if self.kind == "equ" else qo.join(a, b)

    def inv(self, a):
        return a if self.kind == "equ" else qo.inverse(a)

    def at(self, x, y):
        a = pt.atom(self.n, x, y)
        return a if self.kind == "equ" else qo.equ_to_quo(a)

    def qu(self, x, y):
        if self.kind == "equ":
            raise ScriptError("qu(x,y) needs kind quo")
        return qo.qu(self.n, x, y)

    def check(self, value):
        if value.n != self.n:
            raise ScriptError(f"size mismatch: literal of size {value.n} in a script of size {self.n}")
        if (self.kind == "equ") != isinstance(value, Partition):
            raise ScriptError("literal kind does not match the script kind")
        return value


def evaluate(expr: Expr, env: dict, ops: _Ops, derived=None, inverse_ok: bool = False):
    """Evaluate ``expr``; with ``derived`` given, constants must already be derived."""
    if isinstance(expr, Name):
        return env[expr.id]
    if isinstance(expr, Meet):
        return ops.meet(evaluate(expr.left, env, ops, derived, inverse_ok),
                        evaluate(expr.right, env, ops, derived, inverse_ok))
    if isinstance(expr, Join):
        return ops.join(evaluate(expr.left, env, ops, derived, inverse_ok),
                        evaluate(expr.right, env, ops, derived, inverse_ok))
    if isinstance(expr, Inv):
        if derived is not None and not inverse_ok and ops.kind == "quo":
            raise _Underived("inv(...) needs an inverse-closed generator set")
        return ops.inv(evaluate(expr.arg, env, ops, derived, inverse_ok))
    if isinstance(expr, At):
        value = ops.at(expr.x, expr.y)
    elif isinstance(expr, Qu):
        value = ops.qu(expr.x, expr.y)
    else:
        value = ops.check(expr.value)
    if derived is not None and value not in derived:
        if not (inverse_ok and ops.inv(value) in derived):
            raise _Underived(f"constant {value} has not been derived")
    return value


class _Underived(Exception):
    pass


@dataclass
class StepResult:
    name: str
    computed: object
    expected: object | None
    passed: bool
    note: str = ""


@dataclass
class Report:
    kind: str
    n: int
    steps: list[StepResult] = field(default_factory=list)
    inverse_closed: bool = True
    cycle_ok: bool | None = None

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.steps) and self.cycle_ok is not False

    @property
    def failures(self) -> list[StepResult]:
        return [s for s in self.steps if not s.passed]

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "n": self.n,
            "passed": self.passed,
            "inverse_closed": self.inverse_closed,
            "cycle_ok": self.cycle_ok,
            "steps": [
                {"name": s.name, "computed": str(s.computed),
                 "expected": None if s.expected is None else str(s.expected),
                 "passed": s.passed, "note": s.note}
                for s in self.steps
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def generator_values(script: Script) -> dict:
    ops = _Ops(script.kind, script.n)
    return {name: evaluate(expr, {}, ops) for name, expr in script.bindings}


def replay(script: Script) -> Report:
    """Evaluate every step in order and compare with its expected value."""
    ops = _Ops(script.kind, script.n)
    env = generator_values(script)
    derived = set(env.values())
    inverse_closed = all(ops.inv(v) in derived for v in env.values())
    report = Report(script.kind, script.n, inverse_closed=inverse_closed)
    for st in script.steps:
        note = ""
        try:
            value = evaluate(st.expr, env, ops, derived, inverse_closed)
        except _Underived as exc:
            value = evaluate(st.expr, env, ops)
            note = str(exc)
        expected = evaluate(st.expect, {}, ops) if st.expect is not None else None
        ok = not note and (expected is None or expected == value)
        if expected is not None and expected != value:
            note = "computed value differs from the expected one"
        report.steps.append(StepResult(st.name, value, expected, ok, note))
        env[st.name] = value
        derived.add(value)
    if script.cycle:
        report.cycle_ok = all(a in derived or (inverse_closed and ops.inv(a) in derived)
                              for a in cycle_elements(script.kind, script.n, script.cycle))
    return report


def cycle_elements(kind: str, n: int, cycle: Sequence[int]) -> list:
    out = []
    for i in range(len(cycle)):
        x, y = cycle[i], cycle[(i + 1) % len(cycle)]
        if kind == "equ":
            out.append(pt.atom(n, x, y))
        else:
            out += [qo.qu(n, x, y), qo.qu(n, y, x)]
    return out


# lowering to flat steps for the closure engine -------------------------------

FlatStep = tuple  # (name, "meet" | "join", left, right)


class Lowering:
    """Turns a script into ``(name, op, left, right)`` steps over generator names.

    Constants are resolved to the step that derived them, and ``inv`` is
    replaced by the same term over the inverse generators, so the result is a
    plain lattice term program.
    """

    def __init__(self, script: Script):
        report = replay(script)
        if not report.passed:
            bad = report.failures[0].name if report.failures else "cycle"
            raise ScriptError(f"script does not replay (first failure: {bad})")
        self.script = script
        self.ops = _Ops(script.kind, script.n)
        self.values = generator_values(script)
        gens = dict(self.values)
        self.partner = {}
        for name, v in gens.items():
            inv = self.ops.inv(v)
            self.partner[name] = next((m for m, w in gens.items() if w == inv), None)
        self.defs = {st.name: st.expr for st in script.steps}
        for st in script.steps:
            self.values[st.name] = evaluate(st.expr, self.values, self.ops)
        self.by_value: dict = {}
        for name, v in self.values.items():
            self.by_value.setdefault(v, name)
        self.steps: list[FlatStep] = []
        self._memo: dict = {}
        self._fresh = 0

    def _emit(self, op: str, a: str, b: str, name: str | None = None) -> str:
        key = (op, a, b)
        if key in self._memo and name is None:
            return self._memo[key]
        if name is None:
            self._fresh += 1
            name = f"_t{self._fresh}"
        self.steps.append((name, op, a, b))
        self._memo.setdefault(key, name)
        return name

    def name_of(self, name: str, mirrored: bool = False) -> str:
        if name in self.partner:
            if not mirrored:
                return name
            if self.partner[name] is None:
                raise ScriptError(f"generator {name!r} has no inverse among the generators")
            return self.partner[name]
        key = ("name", name, mirrored)
        if key not in self._memo:
            self._memo[key] = self.lower(self.defs[name], mirrored)
        return self._memo[key]

    def lower(self, expr: Expr, mirrored: bool = False) -> str:
        if isinstance(expr, Name):
            return self.name_of(expr.id, mirrored)
        if isinstance(expr, (Meet, Join)):
            op = "meet" if isinstance(expr, Meet) else "join"
            return self._emit(op, self.lower(expr.left, mirrored), self.lower(expr.right, mirrored))
        if isinstance(expr, Inv):
            if self.script.kind == "equ":
                return self.lower(expr.arg, mirrored)
            return self.lower(expr.arg, not mirrored)
        value = evaluate(expr, {}, self.ops)
        if value in self.by_value:
            return self.name_of(self.by_value[value], mirrored)
        inv = self.ops.inv(value)
        if inv in self.by_value:
            return self.name_of(self.by_value[inv], not mirrored)
        raise ScriptError(f"constant {value} is not derived in the script")

    def element(self, value) -> str:
        """Operand name for an element derived somewhere in the script."""
        return self.lower(Literal(value))


def lower_script(script: Script, extra: Sequence[Expr] = ()) -> tuple[list[FlatStep], Lowering]:
    """Flat steps for every step of ``script`` and for the expressions in ``extra``."""
    low = Lowering(script)
    for st in script.steps:
        low.name_of(st.name)
    for expr in extra:
        low.lower(expr)
    return low.steps, low


def cycle_hint_steps(script: Script, cycle: Sequence[int], target: Sequence[int]) -> list[FlatStep]:
    """Flat steps deriving the atoms around ``target`` from a script reaching ``cycle``."""
    b = extend_builder(script)
    refs = b.derive_cycle(list(cycle), list(target), "idx")
    steps, _ = lower_script(b.build(tuple(cycle)), refs)
    return steps


# building scripts programmatically -------------------------------------------

class ScriptBuilder:
    """Accumulates checked steps; used by the constructions to record derivations."""

    def __init__(self, kind: str, n: int, generators: Sequence[tuple[str, object]],
                 elements: Sequence[str] | None = None):
        self.kind = kind
        self.n = n
        self.ops = _Ops(kind, n)
        self.elements = tuple(elements) if elements else None
        self.bindings = tuple((name, Literal(v)) for name, v in generators)
        self.env: dict = dict(generators)
        self.index: dict = {}
        for name, v in generators:
            self.index.setdefault(v, name)
        self.inverse_closed = all(self.ops.inv(v) in self.index for _, v in generators)
        self.steps: list[Step] = []
        self._fresh = 0

    def add(self, name: str, expr: Expr, expect: bool = False) -> Name:
        if name in self.env:
            raise ScriptError(f"duplicate name {name!r}")
        value = evaluate(expr, self.env, self.ops)
        self.env[name] = value
        self.index.setdefault(value, name)
        self.steps.append(Step(name, expr, Literal(value) if expect else None))
        return Name(name)

    def fresh(self, prefix: str) -> str:
        self._fresh += 1
        return f"{prefix}{self._fresh}"

    def value(self, ref: Expr):
        return evaluate(ref, self.env, self.ops)

    def atom(self, x: int, y: int):
        return self.ops.at(x, y) if self.kind == "equ" else self.ops.qu(x, y)

    def ref(self, value) -> Expr | None:
        """A reference to an already derived element, if there is one."""
        if value in self.index:
            return Name(self.index[value])
        if self.inverse_closed and self.kind == "quo":
            inv = self.ops.inv(value)
            if inv in self.index:
                return Inv(Name(self.index[inv]))
        return None

    def need(self, value) -> Expr:
        ref = self.ref(value)
        if ref is None:
            raise ScriptError(f"{value} has not been derived")
        return ref

    def combine(self, op, a: Expr, b: Expr, prefix: str = "r", expect: bool = False) -> Expr:
        """``a op b``, reusing an existing step with the same value."""
        expr = op(a, b)
        value = self.value(expr)
        ref = self.ref(value)
        if ref is not None:
            return ref
        return self.add(self.fresh(prefix), expr, expect)

    def route(self, cycle: Sequence[int], x: int, y: int, prefix: str = "r") -> Expr:
        """Derive the atom (x, y) from the atoms along ``cycle``.

        The two arcs of the cycle between x and y each join to a chain through
        x and y; the chains share only x and y, so their meet is the atom.
        """
        target = self.atom(x, y)
        ref = self.ref(target)
        if ref is not None:
            return ref
        m = len(cycle)
        p, q = cycle.index(x), cycle.index(y)
        arcs = []
        for step in (1, -1):
            acc = None
            i = p
            while cycle[i] != y:
                j = (i + step) % m
                edge = self.need(self.atom(cycle[i], cycle[j]))
                acc = edge if acc is None else self.combine(Join, acc, edge, prefix)
                i = j
            arcs.append(acc)
        return self.combine(Meet, arcs[0], arcs[1], prefix, expect=True)

    def derive_cycle(self, cycle: Sequence[int], target: Sequence[int], prefix: str = "c") -> list[Expr]:
        """References to every atom of ``target``'s cycle (both directions for quasiorders)."""
        refs = []
        m = len(target)
        for i in range(m):
            x, y = target[i], target[(i + 1) % m]
            refs.append(self.route(cycle, x, y, prefix))
            if self.kind == "quo":
                refs.append(self.route(cycle, y, x, prefix))
        return refs

    def build(self, cycle: Sequence[int] | None = None) -> Script:
        return Script(self.kind, self.n, self.bindings, tuple(self.steps),
                      0, self.elements, tuple(cycle) if cycle is not None else None)


def extend_builder(script: Script) -> ScriptBuilder:
    """A builder that starts from all bindings and steps of ``script``."""
    gens = list(generator_values(script).items())
    b = ScriptBuilder(script.kind, script.n, gens, script.elements)
    b.bindings = script.bindings
    for st in script.steps:
        expect = st.expect is not None
        b.add(st.name, st.expr, False)
        if expect:
            b.steps[-1] = st
    return b


# witnesses -------------------------------------------------------------------

def emit_witness_script(cert) -> Script:
    """A replayable script for the witnesses of a closure certificate."""
    if not cert.witnesses:
        return Script(cert.kind, cert.n, (), ())
    bindings = tuple((name, Literal(g)) for name, g in zip(cert.generator_names, cert.generators))
    steps = []
    ops = _Ops(cert.kind, cert.n)
    env = {name: g for name, g in zip(cert.generator_names, cert.generators)}
    hdr = _Header(cert.kind, cert.n)
    wanted = {elem for elem, _ in cert.witnesses}
    for name, text in cert.derivation:
        expr = _Parser(text, hdr, None).parse()
        value = evaluate(expr, env, ops)
        env[name] = value
        steps.append(Step(name, expr, Literal(value) if value in wanted else None))
    for i, (elem, text) in enumerate(cert.witnesses):
        if text in cert.generator_names:
            steps.append(Step(f"w{i}", Name(text), Literal(elem)))
    return Script(cert.kind, cert.n, bindings, tuple(steps))


# fixtures --------------------------------------------------------------------

FIXTURE_ENV = "EQUGEN_FIXTURES"


def fixture_root() -> Path:
    override = os.environ.get(FIXTURE_ENV)
    if override:
        return Path(override)
    return Path(str(resources.files("equgen") / "fixtures"))


def resolve_fixture(path: str | os.PathLike) -> Path:
    p = Path(path)
    if p.exists():
        return p
    for name in (p.name, p.name + ".script"):
        candidate = fixture_root() / name
        if candidate.exists():
            return candidate
    raise FileNotFoundError(f"script not found: {path}")


def load_fixture(name: str) -> Script:
    return parse_script(resolve_fixture(name).read_text())
