"""Parser for ``{...}`` template strings used in mapping files.

Grammar::

    template := (text | "{" expr "}")*
    expr     := call | path
    call     := ident "(" [expr ("," expr)*] ")"
    path     := ident ("." ident)*

``{{`` and ``}}`` stand for literal braces.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .errors import TemplateSyntax

__all__ = ["Path", "Call", "Expr", "LiteralText", "Placeholder", "TemplateExpr", "parse_template"]


@dataclass(frozen=True)
class Path:
    parts: tuple[str, ...]

    def __str__(self) -> str:
        return ".".join(self.parts)


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple["Expr", ...]

    def __str__(self) -> str:
        return f"{self.name}({', '.join(map(str, self.args))})"


Expr = Union[Path, Call]


@dataclass(frozen=True)
class LiteralText:
    text: str


@dataclass(frozen=True)
class Placeholder:
    expr: Expr


@dataclass(frozen=True)
class TemplateExpr:
    segments: tuple[Union[LiteralText, Placeholder], ...]
    source: str = ""

    @property
    def placeholders(self) -> list[Placeholder]:
        return [s for s in self.segments if isinstance(s, Placeholder)]

    def __str__(self) -> str:
        return self.source


def _is_ident_start(ch: str) -> bool:
    return ch.isascii() and (ch.isalpha() or ch == "_")


def _is_ident_char(ch: str) -> bool:
    return ch.isascii() and (ch.isalnum() or ch == "_")


class _ExprParser:
    def __init__(self, src: str, start: int, template: str):
        self.src = src
        self.pos = start
        self.template = template

    def fail(self, reason: str) -> TemplateSyntax:
        return TemplateSyntax(self.pos, reason, self.template)

    def peek(self) -> str:
        return self.src[self.pos] if self.pos < len(self.src) else ""

    def skip_ws(self) -> None:
        while self.peek() in (" ", "\t"):
            self.pos += 1

    def ident(self) -> str:
        self.skip_ws()
        start = self.pos
        if not _is_ident_start(self.peek()):
            if self.peek() == "":
                raise self.fail("unterminated placeholder, expected identifier")
            raise self.fail(f"expected identifier, found {self.peek()!r}")
        while _is_ident_char(self.peek()):
            self.pos += 1
        return self.src[start:self.pos]

    def expr(self) -> Expr:
        first = self.ident()
        self.skip_ws()
        if self.peek() == "(":
            self.pos += 1
            args: list[Expr] = []
            self.skip_ws()
            if self.peek() == ")":
                self.pos += 1
                return Call(first, ())
            while True:
                args.append(self.expr())
                self.skip_ws()
                ch = self.peek()
                if ch == ",":
                    self.pos += 1
                elif ch == ")":
                    self.pos += 1
                    return Call(first, tuple(args))
                elif ch == "":
                    raise self.fail(f"unterminated call to {first}()")
                else:
                    raise self.fail(f"expected ',' or ')' in call to {first}(), found {ch!r}")
        parts = [first]
        while self.peek() == ".":
            self.pos += 1
            if not _is_ident_start(self.peek()):
                raise self.fail("unterminated path" if self.peek() == "" else "expected identifier after '.'")
            parts.append(self.ident())
        return Path(tuple(parts))


def parse_template(source: str) -> TemplateExpr:
    """Parse a template string into literal and placeholder segments.

    >>> parse_template("x/{ckanField.id}").segments[1]
    Placeholder(expr=Path(parts=('ckanField', 'id')))
    """
    segments: list[Union[LiteralText, Placeholder]] = []
    buf: list[str] = []
    i = 0
    n = len(source)
    while i < n:
        ch = source[i]
        if ch == "{":
            if source.startswith("{{", i):
                buf.append("{")
                i += 2
                continue
            if buf:
                segments.append(LiteralText("".join(buf)))
                buf = []
            parser = _ExprParser(source, i + 1, source)
            expr = parser.expr()
            parser.skip_ws()
            if parser.peek() != "}":
                if parser.peek() == "":
                    raise parser.fail("unterminated placeholder, missing '}'")
                raise parser.fail(f"expected '}}', found {parser.peek()!r}")
            segments.append(Placeholder(expr))
            i = parser.pos + 1
        elif ch == "}":
            if source.startswith("}}", i):
                buf.append("}")
                i += 2
                continue
            raise TemplateSyntax(i, "unmatched '}' (write '}}' for a literal brace)", source)
        else:
            buf.append(ch)
            i += 1
    if buf:
        segments.append(LiteralText("".join(buf)))
    return TemplateExpr(tuple(segments), source)
