"""TriG-star parsing.

``parse`` reads TriG-star text, a superset of Turtle-star, Turtle and
N-Triples: prefix/base directives in both ``@`` and SPARQL style, literals
with language tags and datatypes, blank node labels and ``[ ... ]`` property
lists, predicate/object lists, graph blocks (``NAME { }``, ``GRAPH NAME { }``
and the anonymous default-graph block), quoted triples ``<< s p o >>`` with
nesting, and annotation blocks ``s p o {| q v |}``.

``parse_nquads_star`` reads the line-oriented N-Quads-star form, one
statement per line with an optional graph label as the fourth term.  As a
convenience extension it accepts prefixed names, resolved against the
well-known namespace table plus any ``@prefix``/``PREFIX`` lines in the
input; the serializer never emits prefixed names in this format, so strict
N-Quads-star round-trips unchanged.

Both parsers are pure and reentrant.  The first error aborts the parse.
Blank node labels from the document are renamed to fresh dataset-unique
labels (``b0``, ``b1``, ...); the original spelling only survives in error
messages.  ``max_quote_depth`` bounds the syntactic nesting of quoting
constructs (``<< >>`` and ``{| |}``), which also bounds parser recursion.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Optional

from . import _chars
from .model import (
    DEFAULT_GRAPH,
    BlankNode,
    GraphName,
    Iri,
    Literal,
    ModelError,
    PrefixMap,
    Quad,
    Term,
    Triple,
    UnknownPrefix,
)
from .store import Dataset
from .vocab import (
    NAMESPACES,
    RDF_TYPE,
    XSD_BOOLEAN,
    XSD_DECIMAL,
    XSD_DOUBLE,
    XSD_INTEGER,
)


class ParseErrorKind(enum.Enum):
    LEXICAL = "lexical"
    UNKNOWN_PREFIX = "unknown-prefix"
    BAD_POSITION = "bad-position"
    DEPTH_EXCEEDED = "depth-exceeded"
    UNTERMINATED_CONSTRUCT = "unterminated-construct"


class ParseError(Exception):
    """A syntax or structural error; line and column (1-based) point at the
    first offending character."""

    def __init__(self, line: int, column: int, kind: ParseErrorKind, message: str):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column
        self.kind = kind
        self.message = message


@dataclass
class ParseOptions:
    base: Optional[Iri] = None
    max_quote_depth: int = 32
    allow_annotation_syntax: bool = True

    def __post_init__(self) -> None:
        if self.max_quote_depth < 1:
            raise ValueError("max_quote_depth must be >= 1")


# ---------------------------------------------------------------------------
# Tokenizer

_TOKEN_RE = re.compile(
    "|".join(
        f"(?P<{name}>{pattern})"
        for name, pattern in [
            ("WS", r"[\x20\x09\x0D\x0A]+"),
            ("COMMENT", r"#[^\n]*"),
            ("ANN_OPEN", r"\{\|"),
            ("ANN_CLOSE", r"\|\}"),
            ("QT_OPEN", r"<<"),
            ("QT_CLOSE", r">>"),
            ("IRIREF", f"<{_chars.IRI_BODY}>"),
            ("STRING_LONG2", r'"""(?:(?:"|"")?(?:[^"\\]|\\[\s\S]))*"""'),
            ("STRING_LONG1", r"'''(?:(?:'|'')?(?:[^'\\]|\\[\s\S]))*'''"),
            ("STRING2", r'"(?:[^"\\\n\r]|\\[\s\S])*"'),
            ("STRING1", r"'(?:[^'\\\n\r]|\\[\s\S])*'"),
            ("TYPE_MARK", r"\^\^"),
            ("AT_PREFIX", r"@prefix(?![A-Za-z0-9\-])"),
            ("AT_BASE", r"@base(?![A-Za-z0-9\-])"),
            ("LANGTAG", "@" + _chars.LANGTAG_BODY),
            ("DOUBLE", r"[+-]?(?:[0-9]+\.[0-9]*[eE][+-]?[0-9]+|\.[0-9]+[eE][+-]?[0-9]+|[0-9]+[eE][+-]?[0-9]+)"),
            ("DECIMAL", r"[+-]?[0-9]*\.[0-9]+"),
            ("INTEGER", r"[+-]?[0-9]+"),
            ("BLANK", _chars.BLANK_NODE_LABEL),
            ("PNAME_LN", f"(?:{_chars.PN_PREFIX})?:{_chars.PN_LOCAL}"),
            ("PNAME_NS", f"(?:{_chars.PN_PREFIX})?:"),
            ("BAREWORD", _chars.PN_PREFIX),
            ("DOT", r"\."),
            ("SEMI", r";"),
            ("COMMA", r","),
            ("LBRACKET", r"\["),
            ("RBRACKET", r"\]"),
            ("LBRACE", r"\{"),
            ("RBRACE", r"\}"),
            ("LPAREN", r"\("),
            ("RPAREN", r"\)"),
        ]
    )
)

_EOF = "EOF"
_ECHAR = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f", '"': '"', "'": "'", "\\": "\\"}
_LITERAL_TOKENS = frozenset(
    ["STRING2", "STRING1", "STRING_LONG2", "STRING_LONG1", "INTEGER", "DECIMAL", "DOUBLE"]
)
_IRI_TOKENS = frozenset(["IRIREF", "PNAME_LN", "PNAME_NS"])


def _line_col(text: str, offset: int) -> tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


def _error(text: str, offset: int, kind: ParseErrorKind, message: str) -> ParseError:
    line, col = _line_col(text, offset)
    return ParseError(line, col, kind, message)


def _lex_failure(text: str, pos: int) -> ParseError:
    ch = text[pos]
    if ch in "\"'":
        quote = text[pos : pos + 3] if text[pos : pos + 3] in ('"""', "'''") else ch
        end = text.find(quote, pos + len(quote))
        if end == -1 or (len(quote) == 1 and "\n" in text[pos:end]):
            return _error(text, pos, ParseErrorKind.UNTERMINATED_CONSTRUCT, "unterminated string literal")
        return _error(text, pos, ParseErrorKind.LEXICAL, "malformed string literal")
    if ch == "<":
        end = text.find(">", pos)
        if end == -1 or "\n" in text[pos:end]:
            return _error(text, pos, ParseErrorKind.UNTERMINATED_CONSTRUCT, "unterminated IRI reference")
        return _error(text, pos, ParseErrorKind.LEXICAL, "invalid character in IRI reference")
    if ch == "_":
        return _error(text, pos, ParseErrorKind.LEXICAL, "malformed blank node label")
    return _error(text, pos, ParseErrorKind.LEXICAL, f"unexpected character {ch!r}")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise _lex_failure(text, pos)
        kind = m.lastgroup
        if kind != "WS" and kind != "COMMENT":
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append((_EOF, "", n))
    return tokens


# ---------------------------------------------------------------------------
# Term construction shared by both parsers


class _TermBuilder:
    """State shared by the TriG and N-Quads parsers: prefix handling, escape
    processing, blank node renaming, literal construction."""

    def __init__(self, text: str, options: ParseOptions, pm: PrefixMap):
        self.text = text
        self.options = options
        self.pm = pm
        self.ds = Dataset()
        self._bnode_map: dict[str, BlankNode] = {}
        self._bnode_count = 0
        self._iri_cache: dict[str, Iri] = {}
        self._quote_depth = 0

    def fail(self, offset: int, kind: ParseErrorKind, message: str):
        raise _error(self.text, offset, kind, message)

    def enter_quote(self, offset: int) -> None:
        self._quote_depth += 1
        if self._quote_depth > self.options.max_quote_depth:
            self.fail(
                offset,
                ParseErrorKind.DEPTH_EXCEEDED,
                f"quoted triple nesting exceeds the limit of {self.options.max_quote_depth}",
            )

    def leave_quote(self) -> None:
        self._quote_depth -= 1

    def anon_bnode(self) -> BlankNode:
        node = BlankNode(f"b{self._bnode_count}")
        self._bnode_count += 1
        return node

    def doc_bnode(self, raw: str) -> BlankNode:
        node = self._bnode_map.get(raw)
        if node is None:
            node = self.anon_bnode()
            self._bnode_map[raw] = node
        return node

    def iri_from_ref(self, raw: str, offset: int) -> Iri:
        cached = self._iri_cache.get(raw)
        if cached is not None:
            return cached
        body = raw[1:-1]
        if "\\" in body:
            body = self._unescape_uchar(body, offset + 1)
        try:
            iri = self.pm.resolve(body)
        except ModelError as exc:
            self.fail(offset, ParseErrorKind.LEXICAL, str(exc))
        self._iri_cache[raw] = iri
        return iri

    def iri_from_pname(self, raw: str, offset: int) -> Iri:
        cached = self._iri_cache.get(raw)
        if cached is not None:
            return cached
        prefix, _, local = raw.partition(":")
        if "\\" in local:
            local = re.sub(r"\\(.)", r"\1", local)
        if prefix not in self.pm:
            self.fail(offset, ParseErrorKind.UNKNOWN_PREFIX, f"unknown prefix {prefix + ':'!r}")
        try:
            iri = self.pm.expand(prefix + ":" + local)
        except ModelError as exc:
            self.fail(offset, ParseErrorKind.LEXICAL, str(exc))
        self._iri_cache[raw] = iri
        return iri

    def forget_cached_iris(self) -> None:
        # prefixed-name and relative-IRI caches key on raw token text, which
        # goes stale when a prefix or the base changes
        self._iri_cache.clear()

    def _unescape_uchar(self, body: str, base_offset: int) -> str:
        out = []
        i = 0
        n = len(body)
        while i < n:
            c = body[i]
            if c != "\\":
                out.append(c)
                i += 1
                continue
            kind = body[i + 1] if i + 1 < n else ""
            if kind == "u":
                width = 6
            elif kind == "U":
                width = 10
            else:
                self.fail(base_offset + i, ParseErrorKind.LEXICAL, f"invalid escape \\{kind} in IRI")
            out.append(self._hex_escape(body, i + 2, width - 2, base_offset + i))
            i += width
        return "".join(out)

    def unescape_string(self, raw: str, offset: int, long: bool) -> str:
        quote = 3 if long else 1
        body = raw[quote:-quote]
        if "\\" not in body:
            return body
        out = []
        i = 0
        n = len(body)
        while i < n:
            c = body[i]
            if c != "\\":
                out.append(c)
                i += 1
                continue
            kind = body[i + 1] if i + 1 < n else ""
            if kind in _ECHAR:
                out.append(_ECHAR[kind])
                i += 2
            elif kind == "u":
                out.append(self._hex_escape(body, i + 2, 4, offset + quote + i))
                i += 6
            elif kind == "U":
                out.append(self._hex_escape(body, i + 2, 8, offset + quote + i))
                i += 10
            else:
                self.fail(offset + quote + i, ParseErrorKind.LEXICAL, f"invalid string escape \\{kind}")
        return "".join(out)

    def _hex_escape(self, body: str, start: int, width: int, err_offset: int) -> str:
        part = body[start : start + width]
        if len(part) != width:
            self.fail(err_offset, ParseErrorKind.LEXICAL, "truncated numeric escape")
        try:
            return chr(int(part, 16))
        except (ValueError, OverflowError):
            self.fail(err_offset, ParseErrorKind.LEXICAL, "invalid numeric escape")

    @staticmethod
    def number_literal(kind: str, value: str) -> Literal:
        if kind == "INTEGER":
            return Literal(value, XSD_INTEGER)
        if kind == "DECIMAL":
            return Literal(value, XSD_DECIMAL)
        return Literal(value, XSD_DOUBLE)


# ---------------------------------------------------------------------------
# TriG-star parser


class _TrigParser(_TermBuilder):
    def __init__(self, text: str, options: ParseOptions):
        super().__init__(text, options, PrefixMap(base=options.base))
        self.tokens = _tokenize(text)
        self.i = 0

    # token plumbing

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def advance(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str, what: str) -> tuple[str, str, int]:
        tok = self.peek()
        if tok[0] != kind:
            if tok[0] == _EOF:
                self.fail(tok[2], ParseErrorKind.UNTERMINATED_CONSTRUCT, f"unexpected end of input, expected {what}")
            self.fail(tok[2], ParseErrorKind.LEXICAL, f"expected {what}, found {tok[1]!r}")
        return self.advance()

    # document structure

    def run(self) -> tuple[Dataset, PrefixMap]:
        while True:
            kind, value, offset = self.peek()
            if kind == _EOF:
                break
            if kind == "AT_PREFIX":
                self._prefix_directive(trailing_dot=True)
            elif kind == "AT_BASE":
                self._base_directive(trailing_dot=True)
            elif kind == "BAREWORD" and value.lower() == "prefix":
                self._prefix_directive(trailing_dot=False)
            elif kind == "BAREWORD" and value.lower() == "base":
                self._base_directive(trailing_dot=False)
            elif kind == "BAREWORD" and value.lower() == "graph":
                self.advance()
                label = self._graph_label()
                self._graph_block(label)
            elif kind == "LBRACE":
                self._graph_block(DEFAULT_GRAPH)
            else:
                self._triples_or_graph()
        return self.ds, self.pm

    def _prefix_directive(self, trailing_dot: bool) -> None:
        self.advance()
        _, ns_raw, _ = self.expect("PNAME_NS", "a prefix label ending in ':'")
        _, iri_raw, iri_off = self.expect("IRIREF", "a namespace IRI")
        self.pm.bind(ns_raw[:-1], self.iri_from_ref(iri_raw, iri_off))
        self.forget_cached_iris()
        if trailing_dot:
            self.expect("DOT", "'.' after @prefix directive")

    def _base_directive(self, trailing_dot: bool) -> None:
        self.advance()
        _, iri_raw, iri_off = self.expect("IRIREF", "a base IRI")
        self.pm.base = self.iri_from_ref(iri_raw, iri_off)
        self.forget_cached_iris()
        if trailing_dot:
            self.expect("DOT", "'.' after @base directive")

    def _graph_label(self) -> GraphName:
        kind, value, offset = self.peek()
        if kind in _IRI_TOKENS:
            return self._iri_term()
        if kind == "BLANK":
            self.advance()
            return self.doc_bnode(value)
        if kind == "LBRACKET" and self.tokens[self.i + 1][0] == "RBRACKET":
            self.advance()
            self.advance()
            return self.anon_bnode()
        if kind == "QT_OPEN":
            self.fail(offset, ParseErrorKind.BAD_POSITION, "a quoted triple cannot name a graph")
        if kind in _LITERAL_TOKENS:
            self.fail(offset, ParseErrorKind.BAD_POSITION, "a literal cannot name a graph")
        self.fail(offset, ParseErrorKind.LEXICAL, f"expected a graph name, found {value!r}")

    def _graph_block(self, graph: GraphName) -> None:
        _, _, open_off = self.expect("LBRACE", "'{'")
        while True:
            kind, value, offset = self.peek()
            if kind == "RBRACE":
                self.advance()
                return
            if kind == _EOF:
                self.fail(open_off, ParseErrorKind.UNTERMINATED_CONSTRUCT, "unclosed graph block")
            if kind in ("AT_PREFIX", "AT_BASE"):
                self.fail(offset, ParseErrorKind.LEXICAL, "directives are not allowed inside graph blocks")
            if kind == "LBRACE":
                self.fail(offset, ParseErrorKind.LEXICAL, "graph blocks cannot be nested")
            self._triples(graph)
            kind, value, offset = self.peek()
            if kind == "DOT":
                self.advance()
            elif kind != "RBRACE":
                if kind == _EOF:
                    self.fail(open_off, ParseErrorKind.UNTERMINATED_CONSTRUCT, "unclosed graph block")
                self.fail(offset, ParseErrorKind.LEXICAL, f"expected '.' or '}}', found {value!r}")

    def _triples_or_graph(self) -> None:
        kind, value, offset = self.peek()
        if kind in _IRI_TOKENS or kind == "BLANK":
            if kind == "BLANK":
                self.advance()
                subject: Term = self.doc_bnode(value)
            else:
                subject = self._iri_term()
            if self.peek()[0] == "LBRACE":
                self._graph_block(subject)  # type: ignore[arg-type]
                return
            self._pred_obj_list(subject, DEFAULT_GRAPH)
            self.expect("DOT", "'.' at end of statement")
            return
        if kind == "LBRACKET" and self.tokens[self.i + 1][0] == "RBRACKET":
            self.advance()
            self.advance()
            node = self.anon_bnode()
            if self.peek()[0] == "LBRACE":
                self._graph_block(node)
                return
            self._pred_obj_list(node, DEFAULT_GRAPH)
            self.expect("DOT", "'.' at end of statement")
            return
        if kind == "QT_OPEN":
            subject = self._quoted_triple()
            if self.peek()[0] == "LBRACE":
                self.fail(offset, ParseErrorKind.BAD_POSITION, "a quoted triple cannot name a graph")
            self._pred_obj_list(subject, DEFAULT_GRAPH)
            self.expect("DOT", "'.' at end of statement")
            return
        self._triples(DEFAULT_GRAPH)
        self.expect("DOT", "'.' at end of statement")

    def _triples(self, graph: GraphName) -> None:
        kind, value, offset = self.peek()
        if kind == "LBRACKET":
            node, had_props = self._bracketed(graph)
            nxt = self.peek()[0]
            if had_props and nxt in ("DOT", "RBRACE"):
                return  # [ p o ] . is a complete statement
            self._pred_obj_list(node, graph)
            return
        subject = self._subject()
        self._pred_obj_list(subject, graph)

    def _subject(self) -> Term:
        kind, value, offset = self.peek()
        if kind in _IRI_TOKENS:
            return self._iri_term()
        if kind == "BLANK":
            self.advance()
            return self.doc_bnode(value)
        if kind == "QT_OPEN":
            return self._quoted_triple()
        if kind in _LITERAL_TOKENS or (kind == "BAREWORD" and value in ("true", "false")):
            self.fail(offset, ParseErrorKind.BAD_POSITION, "a literal cannot be used as subject")
        if kind == "LPAREN":
            self.fail(offset, ParseErrorKind.LEXICAL, "RDF collections '( ... )' are not supported")
        if kind == _EOF:
            self.fail(offset, ParseErrorKind.UNTERMINATED_CONSTRUCT, "unexpected end of input, expected a subject")
        self.fail(offset, ParseErrorKind.LEXICAL, f"expected a subject, found {value!r}")

    def _verb(self) -> Iri:
        kind, value, offset = self.peek()
        if kind == "BAREWORD" and value == "a":
            self.advance()
            return RDF_TYPE
        if kind in _IRI_TOKENS:
            return self._iri_term()
        if kind == "QT_OPEN":
            self.fail(offset, ParseErrorKind.BAD_POSITION, "a quoted triple cannot be used as predicate")
        if kind in _LITERAL_TOKENS or (kind == "BAREWORD" and value in ("true", "false")):
            self.fail(offset, ParseErrorKind.BAD_POSITION, "a literal cannot be used as predicate")
        if kind == "BLANK":
            self.fail(offset, ParseErrorKind.BAD_POSITION, "a blank node cannot be used as predicate")
        if kind == _EOF:
            self.fail(offset, ParseErrorKind.UNTERMINATED_CONSTRUCT, "unexpected end of input, expected a predicate")
        self.fail(offset, ParseErrorKind.LEXICAL, f"expected a predicate, found {value!r}")

    def _pred_obj_list(self, subject: Term, graph: GraphName) -> None:
        while True:
            predicate = self._verb()
            self._object_list(subject, predicate, graph)
            if self.peek()[0] != "SEMI":
                return
            while self.peek()[0] == "SEMI":
                self.advance()
            kind, value, _ = self.peek()
            if not (kind in _IRI_TOKENS or (kind == "BAREWORD" and value == "a")):
                return  # trailing ';'

    def _object_list(self, subject: Term, predicate: Iri, graph: GraphName) -> None:
        while True:
            obj = self._object(graph)
            self.ds.add(Quad(Triple(subject, predicate, obj), graph))
            if self.peek()[0] == "ANN_OPEN":
                self._annotation(Triple(subject, predicate, obj), graph)
            if self.peek()[0] != "COMMA":
                return
            self.advance()

    def _annotation(self, target: Triple, graph: GraphName) -> None:
        _, _, offset = self.advance()  # ANN_OPEN
        if not self.options.allow_annotation_syntax:
            self.fail(offset, ParseErrorKind.LEXICAL, "annotation syntax '{| ... |}' is disabled")
        self.enter_quote(offset)
        self._pred_obj_list(target, graph)
        tok = self.peek()
        if tok[0] == _EOF:
            self.fail(offset, ParseErrorKind.UNTERMINATED_CONSTRUCT, "unclosed annotation block")
        self.expect("ANN_CLOSE", "'|}'")
        self.leave_quote()

    def _object(self, graph: GraphName) -> Term:
        kind, value, offset = self.peek()
        if kind in _IRI_TOKENS:
            return self._iri_term()
        if kind == "BLANK":
            self.advance()
            return self.doc_bnode(value)
        if kind == "LBRACKET":
            node, _ = self._bracketed(graph)
            return node
        if kind == "QT_OPEN":
            return self._quoted_triple()
        if kind in _LITERAL_TOKENS or (kind == "BAREWORD" and value in ("true", "false")):
            return self._literal()
        if kind == "LPAREN":
            self.fail(offset, ParseErrorKind.LEXICAL, "RDF collections '( ... )' are not supported")
        if kind == _EOF:
            self.fail(offset, ParseErrorKind.UNTERMINATED_CONSTRUCT, "unexpected end of input, expected an object")
        self.fail(offset, ParseErrorKind.LEXICAL, f"expected an object, found {value!r}")

    def _bracketed(self, graph: GraphName) -> tuple[BlankNode, bool]:
        _, _, open_off = self.advance()  # LBRACKET
        if self.peek()[0] == "RBRACKET":
            self.advance()
            return self.anon_bnode(), False
        node = self.anon_bnode()
        self._pred_obj_list(node, graph)
        tok = self.peek()
        if tok[0] == _EOF:
            self.fail(open_off, ParseErrorKind.UNTERMINATED_CONSTRUCT, "unclosed blank node property list")
        self.expect("RBRACKET", "']'")
        return node, True

    def _quoted_triple(self) -> Triple:
        _, _, open_off = self.advance()  # QT_OPEN
        self.enter_quote(open_off)
        subject = self._quoted_term(is_subject=True)
        predicate = self._verb()
        obj = self._quoted_term(is_subject=False)
        tok = self.peek()
        if tok[0] == _EOF:
            self.fail(open_off, ParseErrorKind.UNTERMINATED_CONSTRUCT, "unclosed quoted triple")
        self.expect("QT_CLOSE", "'>>'")
        self.leave_quote()
        return Triple(subject, predicate, obj)

    def _quoted_term(self, is_subject: bool) -> Term:
        kind, value, offset = self.peek()
        if kind in _IRI_TOKENS:
            return self._iri_term()
        if kind == "BLANK":
            self.advance()
            return self.doc_bnode(value)
        if kind == "QT_OPEN":
            return self._quoted_triple()
        if kind in _LITERAL_TOKENS or (kind == "BAREWORD" and value in ("true", "false")):
            if is_subject:
                self.fail(offset, ParseErrorKind.BAD_POSITION, "a literal cannot be used as subject")
            return self._literal()
        if kind == "LBRACKET":
            if self.tokens[self.i + 1][0] == "RBRACKET":
                self.advance()
                self.advance()
                return self.anon_bnode()
            self.fail(offset, ParseErrorKind.LEXICAL, "blank node property lists are not allowed inside quoted triples")
        if kind == _EOF:
            self.fail(offset, ParseErrorKind.UNTERMINATED_CONSTRUCT, "unclosed quoted triple")
        self.fail(offset, ParseErrorKind.LEXICAL, f"unexpected {value!r} inside quoted triple")

    def _literal(self) -> Literal:
        kind, value, offset = self.advance()
        if kind in ("INTEGER", "DECIMAL", "DOUBLE"):
            return self.number_literal(kind, value)
        if kind == "BAREWORD":
            return Literal(value, XSD_BOOLEAN)
        lexical = self.unescape_string(value, offset, long=kind.startswith("STRING_LONG"))
        nxt_kind, nxt_value, nxt_off = self.peek()
        if nxt_kind == "LANGTAG":
            self.advance()
            return Literal(lexical, language=nxt_value[1:])
        if nxt_kind == "TYPE_MARK":
            self.advance()
            dtype = self._iri_term()
            try:
                return Literal(lexical, dtype)
            except ModelError as exc:
                self.fail(nxt_off, ParseErrorKind.LEXICAL, str(exc))
        return Literal(lexical)

    def _iri_term(self) -> Iri:
        kind, value, offset = self.advance()
        if kind == "IRIREF":
            return self.iri_from_ref(value, offset)
        return self.iri_from_pname(value, offset)


def parse(text: str, options: Optional[ParseOptions] = None) -> tuple[Dataset, PrefixMap]:
    """Parse TriG-star text into a dataset and the prefix map it declared.

    Raises :class:`ParseError` on the first error; no recovery is attempted.
    """
    return _TrigParser(text, options or ParseOptions()).run()


# ---------------------------------------------------------------------------
# N-Quads-star parser

_NQ_IRI = r'[^\x00-\x20<>"{}|^`\\]*'
_NQ_FAST = re.compile(
    rf"[ \t]*"
    rf"(?:<(?P<si>{_NQ_IRI})>|_:(?P<sb>[A-Za-z_][A-Za-z0-9_]*))"
    rf"[ \t]+<(?P<p>{_NQ_IRI})>"
    rf"[ \t]+(?:<(?P<oi>{_NQ_IRI})>|_:(?P<ob>[A-Za-z_][A-Za-z0-9_]*)|"
    rf'"(?P<ol>[^"\\]*)"(?:@(?P<lang>{_chars.LANGTAG_BODY})|\^\^<(?P<dt>{_NQ_IRI})>)?)'
    rf"[ \t]*(?:<(?P<gi>{_NQ_IRI})>|_:(?P<gb>[A-Za-z_][A-Za-z0-9_]*))?"
    rf"[ \t]*\.[ \t]*(?:#.*)?$"
)


class _NQuadsParser(_TermBuilder):
    def __init__(self, text: str, options: ParseOptions):
        pm = PrefixMap(NAMESPACES, base=options.base)
        super().__init__(text, options, pm)
        self._line_start = 0
        self._dt_cache: dict[str, Iri] = {}
        self._line_tokens: list = []
        self._ti = 0

    def run(self) -> Dataset:
        pos = 0
        for line in self.text.split("\n"):
            self._line_start = pos
            stripped = line.strip()
            if stripped and not stripped.startswith("#"):
                m = _NQ_FAST.match(line)
                if m is not None and "\\" not in line:
                    self._fast_quad(m)
                else:
                    self._slow_line(line)
            pos += len(line) + 1
        return self.ds

    def _fast_quad(self, m: re.Match) -> None:
        start = self._line_start
        if m.group("si") is not None:
            subject: Term = self.iri_from_ref("<%s>" % m.group("si"), start + m.start("si") - 1)
        else:
            subject = self.doc_bnode("_:" + m.group("sb"))
        predicate = self.iri_from_ref("<%s>" % m.group("p"), start + m.start("p") - 1)
        if m.group("oi") is not None:
            obj: Term = self.iri_from_ref("<%s>" % m.group("oi"), start + m.start("oi") - 1)
        elif m.group("ob") is not None:
            obj = self.doc_bnode("_:" + m.group("ob"))
        elif m.group("lang") is not None:
            obj = Literal(m.group("ol"), language=m.group("lang"))
        elif m.group("dt") is not None:
            raw = m.group("dt")
            dtype = self._dt_cache.get(raw)
            if dtype is None:
                dtype = self.iri_from_ref("<%s>" % raw, start + m.start("dt") - 1)
                self._dt_cache[raw] = dtype
            try:
                obj = Literal(m.group("ol"), dtype)
            except ModelError as exc:
                self.fail(start + m.start("ol"), ParseErrorKind.LEXICAL, str(exc))
        else:
            obj = Literal(m.group("ol"))
        graph: GraphName = DEFAULT_GRAPH
        if m.group("gi") is not None:
            graph = self.iri_from_ref("<%s>" % m.group("gi"), start + m.start("gi") - 1)
        elif m.group("gb") is not None:
            graph = self.doc_bnode("_:" + m.group("gb"))
        self.ds.add(Quad(Triple(subject, predicate, obj), graph))

    def _slow_line(self, line: str) -> None:
        base = self._line_start
        try:
            tokens = _tokenize(line)
        except ParseError as exc:
            raise _error(self.text, base + exc.column - 1, exc.kind, exc.message) from None
        self._line_tokens = [(k, v, base + off) for k, v, off in tokens]
        self._ti = 0
        kind, value, offset = self._peek()
        if kind == "AT_PREFIX" or (kind == "BAREWORD" and value.lower() == "prefix"):
            self._prefix_line(trailing_dot=kind == "AT_PREFIX")
            return
        subject = self._term(position="subject")
        predicate = self._term(position="predicate")
        obj = self._term(position="object")
        graph: GraphName = DEFAULT_GRAPH
        kind, value, offset = self._peek()
        if kind in _IRI_TOKENS or kind == "BLANK" or kind == "QT_OPEN":
            g = self._term(position="graph")
            if isinstance(g, Triple):
                self.fail(offset, ParseErrorKind.BAD_POSITION, "a quoted triple cannot name a graph")
            graph = g  # type: ignore[assignment]
            kind, value, offset = self._peek()
        if kind != "DOT":
            if kind == _EOF:
                self.fail(offset, ParseErrorKind.UNTERMINATED_CONSTRUCT, "statement is missing its final '.'")
            self.fail(offset, ParseErrorKind.LEXICAL, f"expected '.', found {value!r}")
        self._advance()
        self._expect_eol()
        self.ds.add(Quad(Triple(subject, predicate, obj), graph))

    def _prefix_line(self, trailing_dot: bool) -> None:
        self._advance()
        k, v, o = self._advance()
        if k != "PNAME_NS":
            self.fail(o, ParseErrorKind.LEXICAL, "expected a prefix label ending in ':'")
        k2, v2, o2 = self._advance()
        if k2 != "IRIREF":
            self.fail(o2, ParseErrorKind.LEXICAL, "expected a namespace IRI")
        self.pm.bind(v[:-1], self.iri_from_ref(v2, o2))
        self.forget_cached_iris()
        if trailing_dot:
            k3, _, o3 = self._advance()
            if k3 != "DOT":
                self.fail(o3, ParseErrorKind.LEXICAL, "expected '.' after @prefix directive")
        self._expect_eol()

    def _peek(self):
        return self._line_tokens[self._ti]

    def _advance(self):
        tok = self._line_tokens[self._ti]
        self._ti += 1
        return tok

    def _expect_eol(self) -> None:
        kind, value, offset = self._peek()
        if kind != _EOF:
            self.fail(offset, ParseErrorKind.LEXICAL, f"unexpected {value!r} after statement")

    def _term(self, position: str) -> Term:
        kind, value, offset = self._advance()
        if kind == "IRIREF":
            return self.iri_from_ref(value, offset)
        if kind in ("PNAME_LN", "PNAME_NS"):
            return self.iri_from_pname(value, offset)
        if kind == "BLANK":
            if position == "predicate":
                self.fail(offset, ParseErrorKind.BAD_POSITION, "a blank node cannot be used as predicate")
            return self.doc_bnode(value)
        if kind == "QT_OPEN":
            if position == "predicate":
                self.fail(offset, ParseErrorKind.BAD_POSITION, "a quoted triple cannot be used as predicate")
            return self._quoted(offset)
        if kind in _LITERAL_TOKENS or (kind == "BAREWORD" and value in ("true", "false")):
            if position in ("subject", "predicate", "graph"):
                self.fail(offset, ParseErrorKind.BAD_POSITION, f"a literal cannot be used as {position}")
            self._ti -= 1
            return self._literal()
        if kind == _EOF:
            self.fail(offset, ParseErrorKind.UNTERMINATED_CONSTRUCT, f"unexpected end of line, expected {position}")
        self.fail(offset, ParseErrorKind.LEXICAL, f"unexpected {value!r}, expected {position}")

    def _quoted(self, open_off: int) -> Triple:
        self.enter_quote(open_off)
        subject = self._term(position="subject")
        kind, value, _ = self._peek()
        if kind == "BAREWORD" and value == "a":
            self._advance()
            predicate: Iri = RDF_TYPE
        else:
            predicate = self._term(position="predicate")  # type: ignore[assignment]
        obj = self._term(position="object")
        kind, value, offset = self._peek()
        if kind == _EOF:
            self.fail(open_off, ParseErrorKind.UNTERMINATED_CONSTRUCT, "unclosed quoted triple")
        if kind != "QT_CLOSE":
            self.fail(offset, ParseErrorKind.LEXICAL, f"expected '>>', found {value!r}")
        self._advance()
        self.leave_quote()
        return Triple(subject, predicate, obj)

    def _literal(self) -> Literal:
        kind, value, offset = self._advance()
        if kind in ("INTEGER", "DECIMAL", "DOUBLE"):
            return self.number_literal(kind, value)
        if kind == "BAREWORD":
            return Literal(value, XSD_BOOLEAN)
        lexical = self.unescape_string(value, offset, long=kind.startswith("STRING_LONG"))
        nxt_kind, nxt_value, nxt_off = self._peek()
        if nxt_kind == "LANGTAG":
            self._advance()
            return Literal(lexical, language=nxt_value[1:])
        if nxt_kind == "TYPE_MARK":
            self._advance()
            k, v, o = self._advance()
            if k == "IRIREF":
                dtype = self.iri_from_ref(v, o)
            elif k in ("PNAME_LN", "PNAME_NS"):
                dtype = self.iri_from_pname(v, o)
            else:
                self.fail(o, ParseErrorKind.LEXICAL, "expected a datatype IRI after '^^'")
            try:
                return Literal(lexical, dtype)
            except ModelError as exc:
                self.fail(nxt_off, ParseErrorKind.LEXICAL, str(exc))
        return Literal(lexical)


def parse_nquads_star(text: str, options: Optional[ParseOptions] = None) -> Dataset:
    """Parse N-Quads-star text, one statement per line.

    Same dataset semantics as :func:`parse`; errors carry the offending line
    number.
    """
    return _NQuadsParser(text, options or ParseOptions()).run()
