"""Problem definition files and report serialization.

The format is line oriented; ``#`` starts a comment::

    ring A = ao(2)                 # also: cyclic, cyclic(N), amalgam(D1)
    ring G = group {
      e: e*e=e, e*s=s
      s: s*e=s, s*s=e
    }
    subcat even in A = { v0, v2, v4, v6, v8 } bound 9
    amalgam X {
      group1 = G                   # or: group1 { rows }
      group2 { ... }
      embed { e=e, s=s }           # pairs (h in G1)=(h in G2)
      transversal1 { e, ... }      # optional
    }
    job quotient even bound=9

Label syntax: ``v3`` (A_o), ``a^-2`` / ``a`` / ``1`` (cyclic), element
names (groups), ``a^K.vL`` (amalgam, e.g. ``a^-1.v1``). Words for
``freefuse`` are ``[1:v1, 2:v3]``.

Parsing is total: any input either yields a :class:`ProblemSpec` or
raises :class:`SpecError` carrying located diagnostics.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Any

from .freeprod import AmalgamRing, FreeProductRing
from .fusion import AoRing, CyclicRing, FusionError, FusionRing, GroupDualRing, Label
from .groups import FiniteGroup, MalformedTableError
from .tree import AmalgamGroupSpec, AmalgamSpecError, amalgam_spec

PUNCT = set("{}:*=,;[]")
OPEN, CLOSE = "{[", "}]"


@dataclass(frozen=True)
class Diagnostic:
    line: int
    column: int
    message: str

    def __str__(self):
        return f"{self.line}:{self.column}: {self.message}"


class SpecError(ValueError):
    def __init__(self, errors: list[Diagnostic]):
        self.errors = list(errors)
        super().__init__("\n".join(str(e) for e in self.errors))


# --------------------------------------------------------------------------
# definitions


@dataclass(frozen=True)
class RingDef:
    name: str
    kind: str  # ao | cyclic | group | amalgam
    param: int | float | None = None
    rows: tuple | None = None
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class SubcatDef:
    name: str
    ring: str
    labels: tuple[str, ...]
    bound: int | None = None
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class AmalgamDef:
    name: str
    group1: tuple  # ("ref", ring name) | ("rows", rows)
    group2: tuple
    embed: tuple[tuple[str, str], ...]
    transversal1: tuple[str, ...] | None = None
    transversal2: tuple[str, ...] | None = None
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class JobDef:
    kind: str
    args: tuple
    options: tuple[tuple[str, Any], ...] = ()
    line: int = field(default=0, compare=False)

    def option(self, key, default=None):
        return dict(self.options).get(key, default)


@dataclass(frozen=True)
class ProblemSpec:
    rings: tuple[RingDef, ...] = ()
    subcats: tuple[SubcatDef, ...] = ()
    amalgams: tuple[AmalgamDef, ...] = ()
    jobs: tuple[JobDef, ...] = ()


JOB_KINDS = {
    "axioms": ({"bound", "samples"}),
    "quotient": ({"bound"}),
    "fuse": set(),
    "freefuse": set(),
    "amalgam-check": ({"d1", "length", "index", "kmax", "lmax"}),
    "tree": ({"depth", "bound"}),
    "jv-index": ({"depth", "bound"}),
    "commutators": ({"depth", "margin"}),
    "homotopy": ({"depth", "margin", "samples"}),
}

OPTION_MIN = {"bound": 1, "samples": 1, "length": 1, "index": 1, "kmax": 0, "lmax": 0, "depth": 0, "margin": 1}


# --------------------------------------------------------------------------
# lexing


@dataclass(frozen=True)
class Token:
    kind: str  # NAME, PUNCT, NL
    text: str
    line: int
    col: int


_NAME_RE = re.compile(r"[^\s{}:*=,;\[\]#]+")


def tokenize(text: str) -> list[Token]:
    out = []
    for ln, raw in enumerate(text.split("\n"), start=1):
        line = raw.split("#", 1)[0]
        pos = 0
        while pos < len(line):
            ch = line[pos]
            if ch.isspace():
                pos += 1
            elif ch in PUNCT:
                out.append(Token("PUNCT", ch, ln, pos + 1))
                pos += 1
            else:
                m = _NAME_RE.match(line, pos)
                out.append(Token("NAME", m.group(), ln, pos + 1))
                pos = m.end()
        out.append(Token("NL", "\n", ln, len(line) + 1))
    return out


def split_statements(tokens: list[Token]) -> list[list[Token]]:
    stmts, cur, depth = [], [], 0
    for tok in tokens:
        if tok.kind == "PUNCT" and tok.text in OPEN:
            depth += 1
        elif tok.kind == "PUNCT" and tok.text in CLOSE:
            depth = max(depth - 1, 0)
        if tok.kind == "NL" and depth == 0:
            if cur:
                stmts.append(cur)
            cur = []
        else:
            cur.append(tok)
    if cur:
        stmts.append(cur)
    return stmts


class _Err(Exception):
    def __init__(self, tok: Token | None, msg: str, line: int = 0):
        self.line = tok.line if tok else line
        self.col = tok.col if tok else 1
        self.msg = msg


class _Cursor:
    def __init__(self, toks: list[Token]):
        self.toks = toks
        self.pos = 0
        self.last_line = toks[-1].line if toks else 0

    def peek(self, skip_nl=False) -> Token | None:
        p = self.pos
        while skip_nl and p < len(self.toks) and self.toks[p].kind == "NL":
            p += 1
        return self.toks[p] if p < len(self.toks) else None

    def next(self, skip_nl=False) -> Token:
        if skip_nl:
            self.skip_nl()
        tok = self.peek()
        if tok is None:
            raise _Err(None, "unexpected end of statement", self.last_line)
        self.pos += 1
        return tok

    def skip_nl(self):
        while self.peek() is not None and self.peek().kind == "NL":
            self.pos += 1

    def at(self, text, skip_nl=False) -> bool:
        tok = self.peek(skip_nl)
        return tok is not None and tok.kind == "PUNCT" and tok.text == text

    def expect(self, text, skip_nl=False) -> Token:
        tok = self.next(skip_nl)
        if tok.kind != "PUNCT" or tok.text != text:
            raise _Err(tok, f"expected {text!r}, found {tok.text!r}")
        return tok

    def name(self, what="name", skip_nl=False) -> Token:
        tok = self.next(skip_nl)
        if tok.kind != "NAME":
            raise _Err(tok, f"expected {what}, found {tok.text!r}")
        return tok

    def keyword(self, word) -> Token:
        tok = self.name(word)
        if tok.text != word:
            raise _Err(tok, f"expected {word!r}, found {tok.text!r}")
        return tok

    def done(self):
        tok = self.peek(skip_nl=True)
        if tok is not None:
            raise _Err(tok, f"unexpected {tok.text!r}")


_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_\-]*$")


def _ident(tok: Token) -> str:
    if not _IDENT.match(tok.text):
        raise _Err(tok, f"invalid name {tok.text!r}")
    return tok.text


def _int(tok: Token, what="integer") -> int:
    if not re.fullmatch(r"[+-]?\d{1,18}", tok.text):
        raise _Err(tok, f"expected {what}, found {tok.text!r}")
    return int(tok.text)


def _number(tok: Token) -> int | float:
    t = tok.text
    if re.fullmatch(r"[+-]?\d{1,18}", t):
        return int(t)
    if re.fullmatch(r"[+-]?(\d{1,18}\.\d{0,18}|\.\d{1,18})([eE][+-]?\d{1,3})?|[+-]?\d{1,18}[eE][+-]?\d{1,3}", t):
        v = float(t)
        return int(v) if v.is_integer() and abs(v) < 1e15 else v
    raise _Err(tok, f"expected a number, found {t!r}")


# --------------------------------------------------------------------------
# labels


_CYC = re.compile(r"a(?:\^([+-]?\d{1,18}))?$")
_AO = re.compile(r"v(\d{1,9})$")
_AM = re.compile(r"(?:a(?:\^([+-]?\d{1,9}))?)?(?:\.?v(\d{1,9}))?$")


def parse_label(ring: FusionRing, text: str) -> Label:
    """Read a label in file syntax; raises ValueError."""
    if isinstance(ring, AoRing):
        m = _AO.match(text)
        if not m:
            raise ValueError(f"{text!r} is not an A_o label (v<k>)")
        return ring.label(int(m.group(1)))
    if isinstance(ring, CyclicRing):
        if text in ("1", "e"):
            return ring.unit
        m = _CYC.match(text)
        if not m:
            raise ValueError(f"{text!r} is not a cyclic label (a^<k>)")
        return ring.label(int(m.group(1)) if m.group(1) is not None else 1)
    if isinstance(ring, GroupDualRing):
        if text not in ring.group:
            raise ValueError(f"{text!r} is not an element of {ring.group.name}")
        return ring.label(text)
    if isinstance(ring, AmalgamRing):
        if text in ("1", "e"):
            return ring.unit
        m = _AM.match(text)
        if not m or not text or text.startswith(".") or text.endswith("."):
            raise ValueError(f"{text!r} is not an amalgam label (a^<k>.v<l>)")
        k = 0 if text[0] != "a" else int(m.group(1) if m.group(1) is not None else 1)
        l = int(m.group(2)) if m.group(2) is not None else 0
        return ring.label(k, l)
    raise ValueError(f"labels of {ring.name} have no file syntax")


def format_label(ring: FusionRing, r: Label) -> str:
    if isinstance(ring, AoRing):
        return f"v{r.payload}"
    if isinstance(ring, CyclicRing):
        return "1" if r.payload == 0 else f"a^{r.payload}"
    if isinstance(ring, AmalgamRing):
        k, l = r.payload
        if k == 0:
            return "1" if l == 0 else f"v{l}"
        return f"a^{k}" if l == 0 else f"a^{k}.v{l}"
    return str(r.payload)


# --------------------------------------------------------------------------
# parsing


def _rows(cur: _Cursor, locs: dict | None = None) -> tuple:
    """``{ g: g*a=b, ... ; ... }`` -> ((g, ((a, b), ...)), ...).

    ``locs`` collects the token of each row head for error locations."""
    cur.expect("{", skip_nl=True)
    rows = []
    while True:
        tok = cur.peek(skip_nl=True)
        if tok is None:
            raise _Err(None, "unclosed '{'", cur.last_line)
        if tok.kind == "PUNCT" and tok.text == "}":
            cur.next(skip_nl=True)
            return tuple(rows)
        if tok.kind == "PUNCT" and tok.text == ";":
            cur.next(skip_nl=True)
            continue
        head = cur.name("element name", skip_nl=True)
        if locs is not None:
            locs.setdefault(head.text, head)
        cur.expect(":")
        prods = []
        while True:
            nxt = cur.peek()
            if nxt is None or nxt.kind == "NL" or (nxt.kind == "PUNCT" and nxt.text in ";}"):
                break
            if nxt.kind == "PUNCT" and nxt.text == ",":
                cur.next()
                continue
            a = cur.name("element name")
            if a.text != head.text:
                raise _Err(a, f"row {head.text!r} contains product of {a.text!r}")
            cur.expect("*")
            b = cur.name("element name")
            cur.expect("=")
            c = cur.name("element name")
            prods.append((b.text, c.text))
        rows.append((head.text, tuple(prods)))


def _name_list(cur: _Cursor) -> tuple[Token, ...]:
    cur.expect("{", skip_nl=True)
    out = []
    while True:
        tok = cur.next(skip_nl=True)
        if tok.kind == "PUNCT" and tok.text == "}":
            return tuple(out)
        if tok.kind == "PUNCT" and tok.text in ",;":
            continue
        if tok.kind != "NAME":
            raise _Err(tok, f"unexpected {tok.text!r} in list")
        out.append(tok)


def _pair_list(cur: _Cursor) -> tuple[tuple[Token, Token], ...]:
    cur.expect("{", skip_nl=True)
    out = []
    while True:
        tok = cur.next(skip_nl=True)
        if tok.kind == "PUNCT" and tok.text == "}":
            return tuple(out)
        if tok.kind == "PUNCT" and tok.text in ",;":
            continue
        if tok.kind != "NAME":
            raise _Err(tok, f"unexpected {tok.text!r} in pair list")
        cur.expect("=")
        out.append((tok, cur.name("element name")))


def group_from_rows(rows: tuple, name: str) -> FiniteGroup:
    table = {}
    for head, prods in rows:
        if head in table:
            raise MalformedTableError(f"duplicate row {head!r}", (head,))
        row = {}
        for b, c in prods:
            if b in row:
                raise MalformedTableError(f"row {head!r} defines {head}*{b} twice", (head, b))
            row[b] = c
        table[head] = row
    return FiniteGroup.from_rows(table, name)


def build_ring(d: RingDef, groups: dict | None = None) -> FusionRing:
    if d.kind == "ao":
        return AoRing(d.param)
    if d.kind == "cyclic":
        return CyclicRing(d.param)
    if d.kind == "amalgam":
        return AmalgamRing(d.param)
    if d.kind == "group":
        return GroupDualRing(group_from_rows(d.rows, d.name), name=f"dual({d.name})")
    raise FusionError(f"unknown ring kind {d.kind!r}")


_RING_RE = re.compile(r"(ao|cyclic|amalgam)(?:\((.*)\))?$")


class _Parser:
    def __init__(self):
        self.errors: list[Diagnostic] = []
        self.rings: dict[str, tuple[RingDef, FusionRing]] = {}
        self.subcats: dict[str, SubcatDef] = {}
        self.amalgams: dict[str, tuple[AmalgamDef, AmalgamGroupSpec]] = {}
        self.jobs: list[JobDef] = []

    def names_taken(self, tok: Token):
        n = _ident(tok)
        if n in self.rings or n in self.subcats or n in self.amalgams:
            raise _Err(tok, f"duplicate name {n!r}")
        return n

    def statement(self, toks: list[Token]):
        cur = _Cursor(toks)
        head = cur.peek()
        if head.kind != "NAME":
            raise _Err(head, f"expected a declaration, found {head.text!r}")
        handler = {"ring": self.ring, "subcat": self.subcat, "amalgam": self.amalgam, "job": self.job}.get(head.text)
        if handler is None:
            raise _Err(head, f"unknown declaration {head.text!r}")
        cur.next()
        handler(cur, head.line)
        cur.done()

    def ring(self, cur: _Cursor, line: int):
        name = self.names_taken(cur.name("ring name"))
        cur.expect("=")
        tok = cur.name("ring kind")
        locs: dict = {}
        if tok.text == "group":
            rows = _rows(cur, locs)
            d = RingDef(name, "group", None, rows, line)
        else:
            m = _RING_RE.match(tok.text)
            if not m:
                raise _Err(tok, f"unknown builtin {tok.text!r}")
            kind, arg = m.group(1), m.group(2)
            param = None
            if arg is not None:
                param = _number(Token("NAME", arg, tok.line, tok.col))
            elif kind in ("ao", "amalgam"):
                raise _Err(tok, f"{kind} needs a parameter d1, e.g. {kind}(2)")
            if kind == "cyclic" and param is not None and (not isinstance(param, int) or param < 1):
                raise _Err(tok, f"parameter out of range: cyclic order must be a positive integer, got {arg}")
            if kind in ("ao", "amalgam") and not param >= 2:
                raise _Err(tok, f"parameter out of range: d1 >= 2 required, got {arg}")
            if isinstance(param, float) and not (param < 1e6):
                raise _Err(tok, f"parameter out of range: {arg}")
            d = RingDef(name, kind, param, None, line)
        try:
            ring = build_ring(d)
        except (MalformedTableError, FusionError) as e:
            where = locs.get(next(iter(getattr(e, "witness", ()) or ()), None), tok)
            raise _Err(where, f"malformed table: {e}") from None
        self.rings[name] = (d, ring)

    def ring_ref(self, tok: Token) -> FusionRing:
        if tok.text not in self.rings:
            raise _Err(tok, f"unknown ring {tok.text!r}")
        return self.rings[tok.text][1]

    def label(self, ring: FusionRing, tok: Token) -> str:
        try:
            return format_label(ring, parse_label(ring, tok.text))
        except (ValueError, FusionError) as e:
            raise _Err(tok, str(e)) from None

    def subcat(self, cur: _Cursor, line: int):
        name = self.names_taken(cur.name("subcategory name"))
        cur.keyword("in")
        rtok = cur.name("ring name")
        ring = self.ring_ref(rtok)
        cur.expect("=")
        labels = tuple(self.label(ring, t) for t in _name_list(cur))
        bound = None
        if cur.peek() is not None:
            cur.keyword("bound")
            btok = cur.name("bound")
            bound = _int(btok, "bound")
            if bound < 1:
                raise _Err(btok, "bound must be positive")
        if bound is None and not ring.finite:
            raise _Err(rtok, f"ring {rtok.text} is infinite; the subcategory needs a bound")
        if bound is not None:
            for t, text in zip(labels, labels):
                if ring.degree(parse_label(ring, text)) > bound:
                    raise _Err(rtok, f"label {text} has degree above bound {bound}")
        self.subcats[name] = SubcatDef(name, rtok.text, labels, bound, line)

    def group_source(self, cur: _Cursor) -> tuple:
        if cur.at("="):
            cur.next()
            tok = cur.name("ring name")
            ring = self.ring_ref(tok)
            if not isinstance(ring, GroupDualRing):
                raise _Err(tok, f"ring {tok.text!r} is not a group")
            return ("ref", tok.text)
        return ("rows", _rows(cur))

    def amalgam(self, cur: _Cursor, line: int):
        ntok = cur.name("amalgam name")
        name = self.names_taken(ntok)
        cur.expect("{")
        parts: dict[str, Any] = {}
        while True:
            tok = cur.next(skip_nl=True)
            if tok.kind == "PUNCT" and tok.text == "}":
                break
            if tok.kind == "PUNCT" and tok.text == ";":
                continue
            key = tok.text
            if key in parts:
                raise _Err(tok, f"duplicate section {key!r}")
            if key in ("group1", "group2"):
                parts[key] = self.group_source(cur)
            elif key == "embed":
                parts[key] = tuple((a.text, b.text) for a, b in _pair_list(cur))
            elif key in ("transversal1", "transversal2"):
                parts[key] = tuple(t.text for t in _name_list(cur))
            else:
                raise _Err(tok, f"unknown amalgam section {key!r}")
        for key in ("group1", "group2", "embed"):
            if key not in parts:
                raise _Err(ntok, f"amalgam {name} lacks section {key!r}")
        d = AmalgamDef(name, parts["group1"], parts["group2"], parts["embed"], parts.get("transversal1"), parts.get("transversal2"), line)
        try:
            spec = self.build_amalgam(d)
        except (MalformedTableError, AmalgamSpecError) as e:
            raise _Err(ntok, f"amalgam {name}: {e}") from None
        self.amalgams[name] = (d, spec)

    def build_amalgam(self, d: AmalgamDef) -> AmalgamGroupSpec:
        groups = []
        for i, src in ((1, d.group1), (2, d.group2)):
            if src[0] == "ref":
                groups.append(self.rings[src[1]][1].group)
            else:
                groups.append(group_from_rows(src[1], f"{d.name}.G{i}"))
        return amalgam_spec(groups[0], groups[1], d.embed, d.transversal1, d.transversal2, name=d.name)

    def word(self, cur: _Cursor, fp: FreeProductRing) -> tuple:
        cur.expect("[")
        letters = []
        while True:
            tok = cur.next(skip_nl=True)
            if tok.kind == "PUNCT" and tok.text == "]":
                break
            if tok.kind == "PUNCT" and tok.text == ",":
                continue
            i = _int(tok, "factor index")
            if i not in (1, 2):
                raise _Err(tok, "factor index must be 1 or 2")
            cur.expect(":")
            ltok = cur.name("label")
            letters.append((i, self.label(fp.factor(i), ltok)))
        try:
            fp.word((i, parse_label(fp.factor(i), t)) for i, t in letters)
        except FusionError as e:
            raise _Err(tok, f"invalid word: {e}") from None
        return ("word",) + tuple(letters)

    def job(self, cur: _Cursor, line: int):
        ktok = cur.name("job kind")
        kind = ktok.text
        if kind not in JOB_KINDS:
            raise _Err(ktok, f"unknown job kind {kind!r}")
        args: list = []
        opts: dict[str, Any] = {}
        while cur.peek() is not None:
            tok = cur.peek()
            if tok.kind == "PUNCT" and tok.text == "[":
                if kind != "freefuse" or len(args) < 2:
                    raise _Err(tok, "words are only allowed as freefuse arguments")
                fp = FreeProductRing(self.ring_ref_tok(args[0]), self.ring_ref_tok(args[1]))
                args.append(self.word(cur, fp))
                continue
            tok = cur.name("job argument")
            if cur.at("="):
                cur.next()
                vtok = cur.name("option value")
                if tok.text not in JOB_KINDS[kind]:
                    raise _Err(tok, f"job {kind} has no option {tok.text!r}")
                if tok.text in opts:
                    raise _Err(tok, f"duplicate option {tok.text!r}")
                if tok.text == "d1":
                    v = _number(vtok)
                    if not v >= 2 or (isinstance(v, float) and not v < 1e6):
                        raise _Err(vtok, "parameter out of range: d1 >= 2 required")
                else:
                    v = _int(vtok, tok.text)
                    if v < OPTION_MIN[tok.text]:
                        raise _Err(vtok, f"{tok.text} must be >= {OPTION_MIN[tok.text]}")
                opts[tok.text] = v
            else:
                args.append(tok)
        args_out = self.job_args(kind, ktok, args)
        self.jobs.append(JobDef(kind, args_out, tuple(sorted(opts.items())), line))

    def ring_ref_tok(self, tok) -> FusionRing:
        if not isinstance(tok, Token):
            raise _Err(None, "ring name expected before words")
        return self.ring_ref(tok)

    def job_args(self, kind: str, ktok: Token, args: list) -> tuple:
        def need(n):
            if len(args) != n:
                raise _Err(ktok, f"job {kind} takes {n} argument(s), got {len(args)}")

        def names(check):
            for a in args:
                if not isinstance(a, Token):
                    raise _Err(ktok, f"job {kind}: unexpected word argument")
                check(a)
            return tuple(a.text for a in args)

        def amalgam(t):
            if t.text not in self.amalgams:
                raise _Err(t, f"unknown amalgam {t.text!r}")

        def subcat(t):
            if t.text not in self.subcats:
                raise _Err(t, f"unknown subcategory {t.text!r}")

        if kind == "axioms":
            need(1)
            return names(self.ring_ref)
        if kind == "quotient":
            need(1)
            return names(subcat)
        if kind == "fuse":
            need(3)
            if not all(isinstance(a, Token) for a in args):
                raise _Err(ktok, "fuse takes a ring and two labels")
            ring = self.ring_ref(args[0])
            return (args[0].text, self.label(ring, args[1]), self.label(ring, args[2]))
        if kind == "freefuse":
            need(4)
            if not (isinstance(args[0], Token) and isinstance(args[1], Token)):
                raise _Err(ktok, "freefuse takes two rings and two words")
            if isinstance(args[2], Token) or isinstance(args[3], Token):
                raise _Err(ktok, "freefuse words are written [i:label, ...]")
            return (args[0].text, args[1].text, args[2], args[3])
        if kind == "amalgam-check":
            need(0)
            return ()
        if kind in ("tree", "jv-index"):
            if len(args) == 1:
                return names(amalgam)
            if len(args) == 2:
                out = names(subcat)
                return out
            raise _Err(ktok, f"job {kind} takes an amalgam or two subcategories")
        if kind in ("commutators", "homotopy"):
            need(1)
            return names(amalgam)
        raise _Err(ktok, f"unknown job kind {kind!r}")

    def result(self) -> ProblemSpec:
        return ProblemSpec(
            tuple(d for d, _ in self.rings.values()),
            tuple(self.subcats.values()),
            tuple(d for d, _ in self.amalgams.values()),
            tuple(self.jobs),
        )


def parse_spec(text: str | bytes) -> ProblemSpec:
    """Parse a problem definition; raises :class:`SpecError` on any problem."""
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("utf-8")
        except UnicodeDecodeError as e:
            raise SpecError([Diagnostic(1 + bytes(text)[: e.start].count(b"\n"), 1, "input is not valid UTF-8")]) from None
    if not isinstance(text, str):
        raise SpecError([Diagnostic(0, 0, f"expected text, got {type(text).__name__}")])
    p = _Parser()
    for stmt in split_statements(tokenize(text)):
        depth = 0
        for tok in stmt:
            if tok.kind == "PUNCT" and tok.text in OPEN:
                depth += 1
            elif tok.kind == "PUNCT" and tok.text in CLOSE:
                depth -= 1
        if depth > 0:
            p.errors.append(Diagnostic(stmt[0].line, stmt[0].col, "unclosed brace or bracket"))
            continue
        try:
            p.statement(stmt)
        except _Err as e:
            p.errors.append(Diagnostic(e.line, e.col, e.msg))
    if p.errors:
        raise SpecError(p.errors)
    return p.result()


# --------------------------------------------------------------------------
# resolution and normal form


@dataclass
class Workspace:
    spec: ProblemSpec
    rings: dict[str, FusionRing]
    subcats: dict[str, tuple[FusionRing, tuple[Label, ...], int | None]]
    amalgams: dict[str, AmalgamGroupSpec]


def resolve(spec: ProblemSpec) -> Workspace:
    """Build the ring, subcategory and amalgam objects of a parsed spec."""
    p = _Parser()
    rings = {}
    for d in spec.rings:
        rings[d.name] = build_ring(d)
        p.rings[d.name] = (d, rings[d.name])
    subcats = {}
    for d in spec.subcats:
        ring = rings[d.ring]
        subcats[d.name] = (ring, tuple(parse_label(ring, t) for t in d.labels), d.bound)
    amalgams = {d.name: p.build_amalgam(d) for d in spec.amalgams}
    return Workspace(spec, rings, subcats, amalgams)


def _fmt_num(x) -> str:
    return repr(x) if isinstance(x, float) else str(x)


def _fmt_rows(rows, indent) -> list[str]:
    pad = " " * indent
    return [f"{pad}{h}: " + ", ".join(f"{h}*{b}={c}" for b, c in prods) for h, prods in rows]


def format_spec(spec: ProblemSpec) -> str:
    """Canonical text for a spec; ``parse_spec(format_spec(s)) == s``."""
    out = []
    for d in spec.rings:
        if d.kind == "group":
            out.append(f"ring {d.name} = group {{")
            out += _fmt_rows(d.rows, 2)
            out.append("}")
        elif d.param is None:
            out.append(f"ring {d.name} = {d.kind}")
        else:
            out.append(f"ring {d.name} = {d.kind}({_fmt_num(d.param)})")
    for d in spec.subcats:
        tail = "" if d.bound is None else f" bound {d.bound}"
        out.append(f"subcat {d.name} in {d.ring} = {{ {', '.join(d.labels)} }}{tail}")
    for d in spec.amalgams:
        out.append(f"amalgam {d.name} {{")
        for key, src in (("group1", d.group1), ("group2", d.group2)):
            if src[0] == "ref":
                out.append(f"  {key} = {src[1]}")
            else:
                out.append(f"  {key} {{")
                out += _fmt_rows(src[1], 4)
                out.append("  }")
        out.append("  embed { " + ", ".join(f"{a}={b}" for a, b in d.embed) + " }")
        for key, tr in (("transversal1", d.transversal1), ("transversal2", d.transversal2)):
            if tr is not None:
                out.append(f"  {key} {{ {', '.join(tr)} }}")
        out.append("}")
    for j in spec.jobs:
        parts = ["job", j.kind]
        for a in j.args:
            if isinstance(a, tuple):
                parts.append("[" + ", ".join(f"{i}:{t}" for i, t in a[1:]) + "]")
            else:
                parts.append(a)
        parts += [f"{k}={_fmt_num(v)}" for k, v in j.options]
        out.append(" ".join(parts))
    return "\n".join(out) + "\n"


# --------------------------------------------------------------------------
# reports


def report_dict(report) -> Any:
    if hasattr(report, "to_dict"):
        return report.to_dict()
    return report


def _text_lines(value, indent=0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(value, dict):
        for k in sorted(value):
            v = value[k]
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines += _text_lines(v, indent + 1)
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(value, list):
        for v in value:
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}-")
                lines += _text_lines(v, indent + 1)
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    else:
        lines.append(f"{pad}{_scalar(value)}")
    return lines


def _scalar(v) -> str:
    if isinstance(v, bool) or v is None:
        return json.dumps(v)
    if isinstance(v, (dict, list)):
        return json.dumps(v)
    return str(v)


def serialize_report(report, fmt: str = "json") -> str:
    """Deterministic text or JSON rendering of any report object."""
    data = report_dict(report)
    if fmt == "json":
        return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    if fmt == "text":
        return "\n".join(_text_lines(data)) + "\n"
    raise ValueError(f"unknown report format {fmt!r}")


def read_report(text: str) -> Any:
    return json.loads(text)
