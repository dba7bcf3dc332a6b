"""Text format for profiles, and DOT export.

A document is a sequence of ``;``-terminated statements::

    # s_box2: both agents keep passing the turn
    n0: A choose 2 -> a, n1;
    n1: B choose 2 -> b, n0;
    a: leaf(A:1, B:0);
    b: leaf(A:0, B:1);
    root = n0;

Names may be used before they are declared, which is how cycles are
written.  Utilities are integers, decimals or fractions and are read
exactly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .core import Internal, InvalidProfile, Leaf, Profile, UtilityAssignment


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.message = message
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<num>-?\d+(?:\.\d+)?(?:/\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<arrow>->)
  | (?P<punct>[:;,()=])
""", re.VERBOSE)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int


def _tokens(text: str) -> list[_Tok]:
    out = []
    line = 1
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
        elif kind not in ("ws", "comment"):
            out.append(_Tok(kind, m.group(), line))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokens(text)
        self.i = 0
        self.last_line = text.count("\n") + 1

    def peek(self, ahead: int = 0) -> _Tok | None:
        j = self.i + ahead
        return self.toks[j] if j < len(self.toks) else None

    def take(self, kind: str, text: str | None = None) -> _Tok:
        t = self.peek()
        if t is None:
            want = text or kind
            raise ParseError(f"expected {want!r}, got end of input", self.last_line)
        if t.kind != kind or (text is not None and t.text != text):
            want = text or kind
            raise ParseError(f"expected {want!r}, got {t.text!r}", t.line)
        self.i += 1
        return t

    def number(self) -> Fraction:
        t = self.take("num")
        try:
            return Fraction(t.text)
        except ZeroDivisionError:
            raise ParseError(f"zero denominator in {t.text!r}", t.line) from None

    def parse(self) -> Profile:
        decls: dict[str, tuple[int, object]] = {}
        order: list[str] = []
        root: tuple[str, int] | None = None
        while self.peek() is not None:
            head = self.take("name")
            nxt = self.peek()
            if head.text == "root" and nxt is not None and nxt.text == "=":
                self.take("punct", "=")
                target = self.take("name")
                self.take("punct", ";")
                if root is not None:
                    raise ParseError("root declared twice", head.line)
                root = (target.text, target.line)
                continue
            self.take("punct", ":")
            if head.text in decls:
                raise ParseError(f"duplicate node name {head.text!r}", head.line)
            body = self.peek()
            if body is not None and body.text == "leaf" and self.peek(1) is not None and self.peek(1).text == "(":
                decls[head.text] = (head.line, self.leaf_body())
            else:
                decls[head.text] = (head.line, self.internal_body())
            order.append(head.text)
            self.take("punct", ";")
        if root is None:
            raise ParseError("missing 'root = NAME;'", self.last_line)
        index = {name: k for k, name in enumerate(order)}

        def resolve(name: str, line: int) -> int:
            if name not in index:
                raise ParseError(f"undeclared node {name!r}", line)
            return index[name]

        nodes = []
        for name in order:
            line, body = decls[name]
            if isinstance(body, UtilityAssignment):
                nodes.append(Leaf(body))
            else:
                owner, choice, (r1, l1), (r2, l2) = body
                nodes.append(Internal(owner, choice, resolve(r1, l1), resolve(r2, l2)))
        return Profile(tuple(nodes), resolve(*root))

    def leaf_body(self) -> UtilityAssignment:
        start = self.take("name", "leaf")
        self.take("punct", "(")
        pairs = []
        if self.peek() is not None and self.peek().text != ")":
            while True:
                agent = self.take("name")
                self.take("punct", ":")
                pairs.append((agent.text, self.number()))
                if self.peek() is not None and self.peek().text == ",":
                    self.take("punct", ",")
                    continue
                break
        self.take("punct", ")")
        if not pairs:
            raise ParseError("a leaf needs at least one utility", start.line)
        try:
            return UtilityAssignment(pairs)
        except InvalidProfile as exc:
            raise ParseError(str(exc), start.line) from None

    def internal_body(self):
        owner = self.take("name")
        self.take("name", "choose")
        c = self.take("num")
        if c.text not in ("1", "2"):
            raise ParseError(f"choice must be 1 or 2, got {c.text}", c.line)
        self.take("arrow")
        r1 = self.take("name")
        self.take("punct", ",")
        r2 = self.take("name")
        return owner.text, int(c.text), (r1.text, r1.line), (r2.text, r2.line)


def parse_profile(text: str) -> Profile:
    return _Parser(text).parse()


def _names(s: Profile) -> dict[int, str]:
    names = {}
    for k, i in enumerate(s.reachable):
        names[i] = ("n" if isinstance(s.nodes[i], Internal) else "l") + str(k)
    return names


def _utilities(u: UtilityAssignment) -> str:
    return ", ".join(f"{a}:{v}" for a, v in u.items())


def to_text(s: Profile) -> str:
    names = _names(s)
    lines = []
    for i in s.reachable:
        n = s.nodes[i]
        if isinstance(n, Leaf):
            lines.append(f"{names[i]}: leaf({_utilities(n.utility)});")
        else:
            lines.append(f"{names[i]}: {n.owner} choose {n.choice} -> {names[n.child1]}, {names[n.child2]};")
    lines.append(f"root = {names[s.root]};")
    return "\n".join(lines) + "\n"


def to_dot(s: Profile, title: str = "profile") -> str:
    """Graphviz rendering; the chosen edge is drawn as a blue double line."""
    names = _names(s)
    lines = [f"digraph {json_quote(title)} {{", "  rankdir=LR;",
             '  start [shape=point, style=invis];']
    for i in s.reachable:
        n = s.nodes[i]
        if isinstance(n, Leaf):
            label = ",".join(str(v) for v in n.utility.values())
            lines.append(f'  {names[i]} [shape=box, label="{label}"];')
        else:
            lines.append(f'  {names[i]} [shape=circle, label="{n.owner}"];')
    lines.append(f"  start -> {names[s.root]} [style=dotted];")
    for i in s.reachable:
        n = s.nodes[i]
        if isinstance(n, Internal):
            for c in (1, 2):
                style = ', color="blue:blue", chosen=true' if c == n.choice else ""
                lines.append(f'  {names[i]} -> {names[n.child(c)]} [label="{c}"{style}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def json_quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def serialize_profile(s: Profile, format: str = "text") -> str:
    if format == "text":
        return to_text(s)
    if format == "dot":
        return to_dot(s)
    raise ValueError(f"unknown format {format!r}")
