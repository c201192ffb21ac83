"""The .dop text format: parser and printers.

    vars t;  params g l1 l2;  unknowns x th1 th2;
    system p {
      eq: d[t,t]x + l1*d[t,t]th1 + g*th1;
      eq: d[t,t]x + l2*d[t,t]th2 + g*th2;
    }

A term is an optional coefficient (a rational function of vars and params,
built with + - * / ^ and parentheses), an optional derivative d[v1,v2,...]
with repetition for higher orders, and exactly one unknown.  ``#`` starts a
comment.  Numbers are integers; write rationals as 3/2.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

from .catalog import SystemDef
from .ops import DiffOp, OpMatrix
from .scalars import ONE, DivisionByZero, VarContext, format_coeff, is_const, mpq

__all__ = ["DslError", "parse", "parse_coeff", "parse_one", "print_system", "to_dsl", "to_json", "to_text", "matrix_to_json"]

MAX_EXPONENT = 50
KEYWORDS = {"vars", "params", "unknowns", "system", "eq", "d"}


class DslError(ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0, length: int = 1):
        self.message = message
        self.line = line
        self.col = col
        self.length = length
        super().__init__(f"{line}:{col}: {message}" if line else message)

    def as_dict(self) -> dict:
        return {"message": self.message, "line": self.line, "column": self.col, "length": self.length}


@dataclass
class Token:
    kind: str  # ident, int, sym, eof
    text: str
    line: int
    col: int


_TOKEN = re.compile(r"\s+|#[^\n]*|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<int>[0-9]+)|(?P<sym>[-+*/^()\[\],;{}:])")


def tokenize(text: str) -> list[Token]:
    out = []
    pos, line, lstart = 0, 1, 0
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if m is None:
            raise DslError(f"unexpected character {text[pos]!r}", line, pos - lstart + 1)
        kind = m.lastgroup
        if kind is not None:
            out.append(Token(kind, m.group(kind), line, pos - lstart + 1))
        chunk = m.group(0)
        nl = chunk.count("\n")
        if nl:
            line += nl
            lstart = pos + chunk.rindex("\n") + 1
        pos = m.end()
    out.append(Token("eof", "", line, pos - lstart + 1))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0
        self.vars: list[str] = []
        self.params: list[str] = []
        self.unknowns: list[str] = []
        self.ctx: VarContext | None = None

    # -- token helpers ------------------------------------------------
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def err(self, msg: str, tok: Token | None = None) -> DslError:
        t = tok or self.tok
        return DslError(msg, t.line, t.col, max(len(t.text), 1))

    def advance(self) -> Token:
        t = self.tok
        if t.kind != "eof":
            self.i += 1
        return t

    def is_sym(self, s: str) -> bool:
        return self.tok.kind == "sym" and self.tok.text == s

    def expect_sym(self, s: str) -> Token:
        if not self.is_sym(s):
            found = self.tok.text or "end of input"
            raise self.err(f"expected {s!r}, found {found!r}")
        return self.advance()

    def expect_ident(self, what: str = "identifier") -> Token:
        if self.tok.kind != "ident":
            found = self.tok.text or "end of input"
            raise self.err(f"expected {what}, found {found!r}")
        return self.advance()

    # -- file ---------------------------------------------------------
    def parse_file(self) -> list[SystemDef]:
        seen: dict[str, Token] = {}
        while self.tok.kind == "ident" and self.tok.text in ("vars", "params", "unknowns"):
            kw = self.advance().text
            names = []
            while self.tok.kind == "ident":
                t = self.advance()
                if t.text in KEYWORDS:
                    raise self.err(f"{t.text!r} is reserved", t)
                if t.text in seen:
                    raise self.err(f"{t.text!r} is declared twice", t)
                seen[t.text] = t
                names.append(t.text)
            if not names:
                raise self.err(f"{kw} needs at least one name")
            self.expect_sym(";")
            {"vars": self.vars, "params": self.params, "unknowns": self.unknowns}[kw].extend(names)
        if not self.vars:
            raise self.err("declare the differentiation variables with 'vars' first")
        if not self.unknowns:
            raise self.err("declare the unknowns with 'unknowns' first")
        self.ctx = VarContext(tuple(self.vars), tuple(self.params))
        systems = []
        names = set()
        while self.tok.kind != "eof":
            t = self.tok
            if t.kind != "ident" or t.text != "system":
                raise self.err(f"expected 'system', found {t.text!r}")
            sd = self.parse_system()
            if sd.name in names:
                raise self.err(f"system {sd.name!r} defined twice", t)
            names.add(sd.name)
            systems.append(sd)
        if not systems:
            raise self.err("no system defined")
        return systems

    def parse_system(self) -> SystemDef:
        self.advance()
        name = self.expect_ident("system name").text
        self.expect_sym("{")
        rows = []
        while not self.is_sym("}"):
            t = self.tok
            if t.kind != "ident" or t.text != "eq":
                raise self.err(f"expected 'eq:' or '}}', found {t.text or 'end of input'!r}")
            self.advance()
            self.expect_sym(":")
            rows.append(self.parse_equation())
            self.expect_sym(";")
        self.expect_sym("}")
        if not rows:
            raise self.err(f"system {name!r} has no equations")
        M = OpMatrix(self.ctx, rows, len(self.unknowns))
        return SystemDef(name, self.ctx, list(self.unknowns), M, "parsed")

    # -- equations ----------------------------------------------------
    def parse_equation(self) -> list[DiffOp]:
        ctx = self.ctx
        row = [DiffOp.zero(ctx) for _ in self.unknowns]
        sign = ONE
        if self.is_sym("+") or self.is_sym("-"):
            sign = -ONE if self.advance().text == "-" else ONE
        while True:
            k, op = self.parse_term()
            row[k] = row[k] + op.scale(sign)
            if self.is_sym("+") or self.is_sym("-"):
                sign = -ONE if self.advance().text == "-" else ONE
                continue
            if self.is_sym(";"):
                return row
            raise self.err(f"expected '+', '-' or ';', found {self.tok.text or 'end of input'!r}")

    def _starts_coeff(self) -> bool:
        t = self.tok
        if t.kind == "int":
            return True
        if t.kind == "sym" and t.text in ("(", "-"):
            return True
        return t.kind == "ident" and (t.text in self.vars or t.text in self.params)

    def parse_term(self):
        ctx = self.ctx
        coeff = ONE
        mu = None
        unknown = None
        first = self.tok
        while True:
            t = self.tok
            if t.kind == "ident" and t.text == "d" and self.peek().kind == "sym" and self.peek().text == "[":
                if mu is not None:
                    raise self.err("only one derivative d[...] per term", t)
                if unknown is not None:
                    raise self.err("the derivative must come before the unknown", t)
                mu = self.parse_deriv()
            elif t.kind == "ident" and t.text in self.unknowns:
                if unknown is not None:
                    raise self.err("a term may contain only one unknown", t)
                unknown = self.unknowns.index(self.advance().text)
            elif self._starts_coeff():
                if mu is not None or unknown is not None:
                    raise self.err("coefficients must come before d[...] and the unknown", t)
                coeff = coeff * self.parse_cpow()
            elif t.kind == "ident":
                raise self.err(f"undeclared symbol {t.text!r}", t)
            else:
                raise self.err(f"unexpected {t.text or 'end of input'!r} in a term", t)
            if self.is_sym("*"):
                self.advance()
                continue
            if self.is_sym("/"):
                slash = self.advance()
                if mu is not None or unknown is not None:
                    raise self.err("division is only allowed inside the coefficient", slash)
                d = self.parse_cpow()
                if is_const(d) and d == 0:
                    raise self.err("division by zero", slash)
                coeff = coeff / d
                if self.is_sym("*"):
                    self.advance()
                    continue
                if self.tok.kind == "ident" and (self.tok.text in self.unknowns or self.tok.text == "d"):
                    continue
                break
            if mu is not None and unknown is None and self.tok.kind == "ident":
                continue
            break
        if unknown is None:
            raise DslError("term has no unknown", first.line, first.col, 1)
        if mu is None:
            mu = (0,) * ctx.n
        return unknown, DiffOp(ctx, {mu: coeff})

    def parse_deriv(self) -> tuple[int, ...]:
        self.advance()
        self.expect_sym("[")
        mu = [0] * len(self.vars)
        while True:
            t = self.expect_ident("variable name")
            if t.text not in self.vars:
                kind = "parameter" if t.text in self.params else "undeclared symbol"
                raise self.err(f"cannot differentiate by {kind} {t.text!r}", t)
            mu[self.vars.index(t.text)] += 1
            if self.is_sym(","):
                self.advance()
                continue
            self.expect_sym("]")
            return tuple(mu)

    # -- coefficients ---------------------------------------------------
    def parse_cexpr(self):
        val = self.parse_cterm()
        while self.is_sym("+") or self.is_sym("-"):
            op = self.advance().text
            rhs = self.parse_cterm()
            val = val + rhs if op == "+" else val - rhs
        return val

    def parse_cterm(self):
        val = self.parse_cunary()
        while self.is_sym("*") or self.is_sym("/"):
            op = self.advance()
            rhs = self.parse_cunary()
            if op.text == "*":
                val = val * rhs
            else:
                if is_const(rhs) and rhs == 0:
                    raise self.err("division by zero", op)
                val = val / rhs
        return val

    def parse_cunary(self):
        if self.is_sym("-"):
            self.advance()
            return -self.parse_cunary()
        return self.parse_cpow()

    def parse_cpow(self):
        base = self.parse_catom()
        if self.is_sym("^"):
            caret = self.advance()
            neg = False
            if self.is_sym("-"):
                self.advance()
                neg = True
            t = self.tok
            if t.kind != "int":
                raise self.err("exponent must be an integer", t)
            self.advance()
            e = int(t.text)
            if e > MAX_EXPONENT:
                raise self.err("exponent too large", t)
            val = ONE
            for _ in range(e):
                val = val * base
            if neg:
                if is_const(val) and val == 0:
                    raise self.err("division by zero", caret)
                val = ONE / val
            return val
        return base

    def parse_catom(self):
        t = self.tok
        if t.kind == "int":
            self.advance()
            return mpq(int(t.text))
        if t.kind == "ident":
            if t.text in self.vars or t.text in self.params:
                self.advance()
                return self.ctx.var(t.text)
            if t.text in self.unknowns:
                raise self.err(f"unknown {t.text!r} cannot appear inside a coefficient", t)
            raise self.err(f"undeclared symbol {t.text!r}", t)
        if self.is_sym("("):
            self.advance()
            val = self.parse_cexpr()
            self.expect_sym(")")
            return val
        if self.is_sym("-"):
            self.advance()
            return -self.parse_catom()
        raise self.err(f"expected a coefficient, found {t.text or 'end of input'!r}")


def parse(text: str) -> list[SystemDef]:
    """Parse a .dop source; errors are :class:`DslError` with a position."""
    p = _Parser(text)
    try:
        return p.parse_file()
    except (DivisionByZero, ZeroDivisionError) as exc:
        raise p.err(f"division by zero ({exc})") from None
    except RecursionError:
        raise p.err("expression nested too deeply") from None


def parse_coeff(text: str, ctx: VarContext):
    """A coefficient expression over the symbols of ctx, e.g. ``g/(l1*l2)``."""
    p = _Parser(text)
    p.vars = list(ctx.base_vars)
    p.params = list(ctx.params)
    p.ctx = ctx
    try:
        val = p.parse_cexpr()
    except (DivisionByZero, ZeroDivisionError) as exc:
        raise p.err(f"division by zero ({exc})") from None
    except RecursionError:
        raise p.err("expression nested too deeply") from None
    if p.tok.kind != "eof":
        raise p.err(f"unexpected {p.tok.text!r} after the expression")
    return val


def parse_one(text: str, name: str | None = None) -> SystemDef:
    systems = parse(text)
    if name is None:
        return systems[0]
    for s in systems:
        if s.name == name:
            return s
    raise DslError(f"no system named {name!r}; have {', '.join(s.name for s in systems)}")


# -- printers -------------------------------------------------------------


def _coeff_dsl(c) -> str:
    s = format_coeff(c)
    if not is_const(c) and len(c.num) > 1 and c.den == c.ctx.ring.one:
        return f"({s})"
    return s


def _term_dsl(ctx: VarContext, mu, c, unknown: str) -> tuple[bool, str]:
    names = [v for i, m in enumerate(mu) for v in [ctx.base_vars[i]] * m]
    dpart = f"d[{','.join(names)}]" if names else ""
    cs = _coeff_dsl(c)
    neg = cs.startswith("-") and (is_const(c) or len(c.num) == 1)
    if neg:
        cs = cs[1:]
    if cs == "1":
        body = f"{dpart}{unknown}"
    elif dpart:
        body = f"{cs}*{dpart}{unknown}"
    else:
        body = f"{cs}*{unknown}"
    return neg, body


def _row_dsl(ctx: VarContext, row, unknowns) -> str:
    parts = []
    for op, u in zip(row, unknowns):
        for mu, c in op.sorted_terms():
            neg, body = _term_dsl(ctx, mu, c, u)
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
    if not parts:
        return f"0*{unknowns[0]}"
    return "".join(parts)


def to_dsl(systems) -> str:
    if isinstance(systems, SystemDef):
        systems = [systems]
    if not systems:
        raise ValueError("nothing to print")
    ctx = systems[0].context
    unknowns = systems[0].unknowns
    for s in systems:
        if s.context != ctx or s.unknowns != unknowns:
            raise ValueError("systems in one file must share declarations")
    if not unknowns:
        raise ValueError("a system needs at least one unknown")
    lines = [f"vars {' '.join(ctx.base_vars)};"]
    if ctx.params:
        lines.append(f"params {' '.join(ctx.params)};")
    lines.append(f"unknowns {' '.join(unknowns)};")
    for s in systems:
        if s.matrix.nrows == 0:
            raise ValueError(f"system {s.name!r} has no equations and cannot be written as .dop")
        lines.append(f"system {s.name} {{")
        for row in s.matrix.rows:
            lines.append(f"  eq: {_row_dsl(ctx, row, unknowns)};")
        lines.append("}")
    return "\n".join(lines) + "\n"


def matrix_to_json(M: OpMatrix) -> dict:
    return {
        "rows": M.nrows,
        "cols": M.ncols,
        "entries": [
            [[{"d": list(mu), "coeff": format_coeff(c)} for mu, c in e.sorted_terms()] for e in r]
            for r in M.rows
        ],
    }


def system_to_dict(s: SystemDef) -> dict:
    return {
        "name": s.name,
        "vars": list(s.context.base_vars),
        "params": list(s.context.params),
        "unknowns": list(s.unknowns),
        "equations": list(s.equations),
        "matrix": matrix_to_json(s.matrix),
    }


def to_json(s: SystemDef) -> str:
    return json.dumps(system_to_dict(s), indent=2, sort_keys=True)


def _op_text(ctx: VarContext, op: DiffOp, unknown: str) -> str:
    """d-index notation, e.g. -d12 lam."""
    parts = []
    for mu, c in op.sorted_terms():
        idx = "".join(str(i + 1) * m for i, m in enumerate(mu))
        cs = format_coeff(c)
        neg = cs.startswith("-") and (is_const(c) or len(c.num) == 1)
        if neg:
            cs = cs[1:]
        if not is_const(c) and len(c.num) > 1 and c.den == c.ctx.ring.one:
            cs = f"({cs})"
        body = " ".join(p for p in ("" if cs == "1" else cs, f"d{idx}" if idx else "", unknown) if p)
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)


def to_text(s: SystemDef) -> str:
    lines = []
    for name, row in zip(s.equations, s.matrix.rows):
        terms = [_op_text(s.context, op, u) for op, u in zip(row, s.unknowns) if op.terms]
        rhs = " + ".join(terms).replace("+ -", "- ") if terms else "0"
        lines.append(f"{name} = {rhs}")
    return "\n".join(lines) + "\n"


def print_system(s: SystemDef, fmt: str = "dsl") -> str:
    if fmt == "dsl":
        return to_dsl(s)
    if fmt == "json":
        return to_json(s)
    if fmt == "text":
        return to_text(s)
    raise ValueError(f"unknown format {fmt!r}")
