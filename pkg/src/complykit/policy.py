"""The `.law` policy language: lexer, parser, checker, and formatter.

A policy file is the machine-readable companion of a corporate code: it
names the protected attribute, the favorable outcome, the fairness
metrics with their legitimate intervals, the approved data sources and
models, and the decision block an autonomous system must follow.

Grammar (normative):

    document  := "policy" STRING "{" item* "}"
    item      := protected | favorable | metric | sources | model
               | decision | violation
    protected := "protected_attribute" name "{"
                     "privileged" "=" STRING "unprivileged" "=" STRING "}"
    favorable := "favorable_outcome" name "{" "value" "=" STRING "}"
    metric    := "metric" IDENT "{" ("range" "=" interval
               | "bins" "=" NUMBER | "tolerance" "=" NUMBER)* "}"
    sources   := "approved_sources" "{" STRING* "}"
    model     := "approved_model" STRING "{" ("description" "=" STRING
               | "acceptable_uses" "=" string_list
               | "synthetic_data_capability" "=" BOOL)* "}"
    decision  := "decision" "{" ("actions" "=" string_list
               | "states" "=" string_list | "payoffs" "=" matrix
               | "criterion" "=" IDENT | "lambda" "=" NUMBER)* "}"
    violation := "on_violation" "=" ("explain" | "halt")
    interval  := "[" NUMBER "," NUMBER "]"
    name      := IDENT | STRING

`#` starts a line comment. Strings are double-quoted with `\\"` and
`\\\\` escapes. Numbers are decimal with optional sign and fraction.
Identifiers match `[a-z_][a-z0-9_]*`. Semicolons between items are
optional. Intervals are closed at both endpoints.

Parsing is total: any byte input produces either a checked document or a
list of diagnostics with line:column positions, never an unhandled crash.
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from typing import Optional

from .decisions import CRITERIA, DecisionError, PayoffMatrix
from .fairness import resolve_metric_id
from .intervals import Interval

LEX = "LexError"
SYNTAX = "SyntaxError"
SEMANTIC = "SemanticError"

DEFAULT_BINS = 10
DEFAULT_TOLERANCE = 0.0
DEFAULT_LAMBDA = 0.5
DEFAULT_ON_VIOLATION = "explain"


@dataclass(frozen=True)
class Diagnostic:
    kind: str  # LexError | SyntaxError | SemanticError
    line: int  # 1-based
    col: int  # 1-based
    message: str

    def __str__(self) -> str:
        return f"{self.line}:{self.col}: {self.kind}: {self.message}"


class PolicyError(Exception):
    """Raised by parse_policy when the input has diagnostics."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(str(d) for d in self.diagnostics))


# ---------------------------------------------------------------------------
# Document model

@dataclass(frozen=True)
class ProtectedSpec:
    attribute: str
    privileged_value: str
    unprivileged_value: str


@dataclass(frozen=True)
class FavorableSpec:
    attribute: str
    value: str


@dataclass(frozen=True)
class MetricConstraint:
    metric_id: str
    range: Interval
    bins: int = DEFAULT_BINS
    tolerance: float = DEFAULT_TOLERANCE


@dataclass(frozen=True)
class ModelSpec:
    model_id: str
    description: Optional[str] = None
    acceptable_uses: frozenset = frozenset()
    synthetic_data_capability: bool = False


@dataclass(frozen=True)
class DecisionSpec:
    payoffs: PayoffMatrix
    criterion: str
    hurwicz_lambda: float = DEFAULT_LAMBDA

    @property
    def actions(self):
        return self.payoffs.actions

    @property
    def states(self):
        return self.payoffs.states


@dataclass(frozen=True)
class PolicyDocument:
    name: str
    protected: Optional[ProtectedSpec] = None
    favorable: Optional[FavorableSpec] = None
    metrics: tuple = ()
    approved_sources: frozenset = frozenset()
    approved_models: tuple = ()  # ModelSpecs, document order
    decision: Optional[DecisionSpec] = None
    on_violation: str = DEFAULT_ON_VIOLATION

    def model(self, model_id: str) -> Optional[ModelSpec]:
        for m in self.approved_models:
            if m.model_id == model_id:
                return m
        return None


# ---------------------------------------------------------------------------
# Lexer

IDENT_START = set(string.ascii_lowercase + "_")
IDENT_CHARS = IDENT_START | set(string.digits)
DIGITS = set(string.digits)


@dataclass(frozen=True)
class Token:
    type: str  # IDENT STRING NUMBER { } [ ] , = ; EOF
    value: object
    line: int
    col: int


def _lex(text: str):
    tokens = []
    diags = []
    i = 0
    line = 1
    col = 1
    n = len(text)

    def advance(k=1):
        nonlocal i, line, col
        for _ in range(k):
            if i < n and text[i] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1

    while i < n:
        c = text[i]
        if c in " \t\r\n":
            advance()
            continue
        if c == "#":
            while i < n and text[i] != "\n":
                advance()
            continue
        start_line, start_col = line, col
        if c in "{}[],=;":
            tokens.append(Token(c, c, start_line, start_col))
            advance()
            continue
        if c == '"':
            advance()
            buf = []
            closed = False
            while i < n:
                ch = text[i]
                if ch == '"':
                    advance()
                    closed = True
                    break
                if ch == "\n":
                    break
                if ch == "\\":
                    if i + 1 < n and text[i + 1] in ('"', "\\"):
                        buf.append(text[i + 1])
                        advance(2)
                        continue
                    diags.append(Diagnostic(LEX, line, col,
                                            "invalid escape sequence"))
                    advance()
                    continue
                buf.append(ch)
                advance()
            if not closed:
                diags.append(Diagnostic(LEX, start_line, start_col,
                                        "unterminated string"))
            tokens.append(Token("STRING", "".join(buf), start_line, start_col))
            continue
        if c in DIGITS or (c in "+-" and i + 1 < n and text[i + 1] in DIGITS):
            j = i
            if c in "+-":
                j += 1
            while j < n and text[j] in DIGITS:
                j += 1
            if j < n and text[j] == "." and j + 1 < n and text[j + 1] in DIGITS:
                j += 1
                while j < n and text[j] in DIGITS:
                    j += 1
            lexeme = text[i:j]
            tokens.append(Token("NUMBER", float(lexeme), start_line, start_col))
            advance(j - i)
            continue
        if c in IDENT_START:
            j = i
            while j < n and text[j] in IDENT_CHARS:
                j += 1
            tokens.append(Token("IDENT", text[i:j], start_line, start_col))
            advance(j - i)
            continue
        diags.append(Diagnostic(LEX, start_line, start_col,
                                f"unexpected character {c!r}"))
        advance()

    tokens.append(Token("EOF", None, line, col))
    return tokens, diags


# ---------------------------------------------------------------------------
# Parser

ITEM_KEYWORDS = {
    "protected_attribute", "favorable_outcome", "metric", "approved_sources",
    "approved_model", "decision", "on_violation",
}


class _Parser:
    def __init__(self, tokens, diags):
        self.tokens = tokens
        self.pos = 0
        self.diags = diags

    # -- token helpers ------------------------------------------------

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.type != "EOF":
            self.pos += 1
        return tok

    def at(self, ttype: str) -> bool:
        return self.peek().type == ttype

    def error(self, tok: Token, message: str, kind: str = SYNTAX):
        self.diags.append(Diagnostic(kind, tok.line, tok.col, message))

    def expect(self, ttype: str, what: str) -> Optional[Token]:
        tok = self.peek()
        if tok.type == ttype:
            return self.next()
        self.error(tok, f"expected {what}, found {self._describe(tok)}")
        return None

    @staticmethod
    def _describe(tok: Token) -> str:
        if tok.type == "EOF":
            return "end of input"
        if tok.type in ("IDENT", "STRING", "NUMBER"):
            return f"{tok.type} {tok.value!r}"
        return repr(tok.type)

    def skip_separators(self):
        while self.peek().type == ";":
            self.next()

    def sync_to_item(self):
        """Skip tokens until a plausible item start or block end."""
        while True:
            tok = self.peek()
            if tok.type == "EOF" or tok.type == "}":
                return
            if tok.type == "IDENT" and tok.value in ITEM_KEYWORDS:
                return
            self.next()

    def open_brace(self) -> Optional[Token]:
        return self.expect("{", "'{'")

    def close_brace(self, open_tok: Optional[Token]) -> bool:
        tok = self.peek()
        if tok.type == "}":
            self.next()
            return True
        if tok.type == "EOF" and open_tok is not None:
            self.error(tok, f"unclosed '{{' opened at "
                            f"{open_tok.line}:{open_tok.col}")
        else:
            self.error(tok, f"expected '}}', found {self._describe(tok)}")
        return False

    # -- value parsers ------------------------------------------------

    def parse_name(self) -> Optional[str]:
        tok = self.peek()
        if tok.type in ("IDENT", "STRING"):
            return self.next().value
        self.error(tok, f"expected a name, found {self._describe(tok)}")
        return None

    def parse_number(self) -> Optional[Token]:
        tok = self.peek()
        if tok.type == "NUMBER":
            return self.next()
        self.error(tok, f"expected a number, found {self._describe(tok)}")
        return None

    def parse_string(self) -> Optional[Token]:
        tok = self.peek()
        if tok.type == "STRING":
            return self.next()
        self.error(tok, f"expected a string, found {self._describe(tok)}")
        return None

    def parse_bool(self) -> Optional[bool]:
        tok = self.peek()
        if tok.type == "IDENT" and tok.value in ("true", "false"):
            return self.next().value == "true"
        self.error(tok, f"expected true or false, found {self._describe(tok)}")
        return None

    def parse_interval(self) -> Optional[Interval]:
        open_tok = self.expect("[", "'['")
        if open_tok is None:
            return None
        lo = self.parse_number()
        self.expect(",", "','")
        hi = self.parse_number()
        self.expect("]", "']'")
        if lo is None or hi is None:
            return None
        if lo.value > hi.value:
            self.error(lo, f"inverted interval: [{lo.value}, {hi.value}]",
                       SEMANTIC)
            return None
        return Interval(lo.value, hi.value)

    def parse_string_list(self):
        if self.expect("[", "'['") is None:
            return None
        items = []
        while not self.at("]") and not self.at("EOF"):
            tok = self.parse_string()
            if tok is None:
                self.sync_to_item()
                return None
            items.append(tok.value)
            if self.at(","):
                self.next()
        self.expect("]", "']'")
        return items

    def parse_number_row(self):
        if self.expect("[", "'['") is None:
            return None
        row = []
        while not self.at("]") and not self.at("EOF"):
            tok = self.parse_number()
            if tok is None:
                self.sync_to_item()
                return None
            row.append(tok.value)
            if self.at(","):
                self.next()
        self.expect("]", "']'")
        return row

    def parse_matrix(self):
        if self.expect("[", "'['") is None:
            return None
        rows = []
        while not self.at("]") and not self.at("EOF"):
            row = self.parse_number_row()
            if row is None:
                return None
            rows.append(row)
            if self.at(","):
                self.next()
        self.expect("]", "']'")
        return rows

    # -- assignment blocks ---------------------------------------------

    def parse_block(self, handlers: dict, context: str) -> bool:
        """Parse `{ key = value ... }` dispatching on `handlers`.

        Returns True when the closing brace was consumed.
        """
        open_tok = self.open_brace()
        if open_tok is None:
            self.sync_to_item()
            return False
        seen = set()
        while True:
            self.skip_separators()
            tok = self.peek()
            if tok.type == "}" or tok.type == "EOF":
                break
            if tok.type != "IDENT" or tok.value not in handlers:
                self.error(tok, f"unexpected {self._describe(tok)} in "
                                f"{context} block")
                self.next()
                continue
            key = self.next()
            if key.value in seen:
                self.error(key, f"duplicate {key.value!r} in {context} block",
                           SEMANTIC)
            seen.add(key.value)
            self.expect("=", "'='")
            handlers[key.value](key)
        return self.close_brace(open_tok)

    # -- items ----------------------------------------------------------

    def parse_document(self) -> Optional[PolicyDocument]:
        kw = self.peek()
        if kw.type == "IDENT" and kw.value == "policy":
            self.next()
        else:
            self.error(kw, f"expected 'policy', found {self._describe(kw)}")
            return None
        name_tok = self.parse_string()
        name = name_tok.value if name_tok else ""
        open_tok = self.open_brace()
        if open_tok is None:
            return None

        doc = {"name": name, "protected": None, "favorable": None,
               "metrics": [], "sources": set(), "models": [],
               "decision": None, "on_violation": DEFAULT_ON_VIOLATION}
        seen_sections = set()

        while True:
            self.skip_separators()
            tok = self.peek()
            if tok.type == "}" or tok.type == "EOF":
                break
            if tok.type != "IDENT" or tok.value not in ITEM_KEYWORDS:
                self.error(tok, f"expected a policy item, found "
                                f"{self._describe(tok)}")
                self.next()
                self.sync_to_item()
                continue
            keyword = self.next()
            if keyword.value in ("protected_attribute", "favorable_outcome",
                                 "decision", "on_violation",
                                 "approved_sources"):
                if keyword.value in seen_sections:
                    self.error(keyword, f"duplicate {keyword.value} section",
                               SEMANTIC)
                seen_sections.add(keyword.value)
            getattr(self, "item_" + keyword.value)(keyword, doc)

        self.close_brace(open_tok)
        self.skip_separators()
        trailing = self.peek()
        if trailing.type != "EOF":
            self.error(trailing, f"unexpected {self._describe(trailing)} "
                                 "after policy document")
        if self.diags:
            return None
        return PolicyDocument(
            name=doc["name"],
            protected=doc["protected"],
            favorable=doc["favorable"],
            metrics=tuple(doc["metrics"]),
            approved_sources=frozenset(doc["sources"]),
            approved_models=tuple(doc["models"]),
            decision=doc["decision"],
            on_violation=doc["on_violation"],
        )

    def item_protected_attribute(self, kw: Token, doc: dict):
        attribute = self.parse_name()
        values = {}

        def set_value(which):
            def handler(key):
                tok = self.parse_string()
                if tok is not None:
                    values[which] = tok
            return handler

        self.parse_block({"privileged": set_value("privileged"),
                          "unprivileged": set_value("unprivileged")},
                         "protected_attribute")
        if attribute is None or "privileged" not in values \
                or "unprivileged" not in values:
            if attribute is not None:
                self.error(kw, "protected_attribute needs privileged and "
                               "unprivileged values", SEMANTIC)
            return
        if values["privileged"].value == values["unprivileged"].value:
            self.error(values["unprivileged"],
                       "privileged and unprivileged values must differ",
                       SEMANTIC)
            return
        doc["protected"] = ProtectedSpec(attribute,
                                         values["privileged"].value,
                                         values["unprivileged"].value)

    def item_favorable_outcome(self, kw: Token, doc: dict):
        attribute = self.parse_name()
        out = {}

        def set_value(key):
            tok = self.parse_string()
            if tok is not None:
                out["value"] = tok.value

        self.parse_block({"value": set_value}, "favorable_outcome")
        if attribute is None or "value" not in out:
            if attribute is not None:
                self.error(kw, "favorable_outcome needs a value", SEMANTIC)
            return
        doc["favorable"] = FavorableSpec(attribute, out["value"])

    def item_metric(self, kw: Token, doc: dict):
        name_tok = self.peek()
        raw_id = None
        if name_tok.type == "IDENT":
            raw_id = self.next().value
        else:
            self.error(name_tok, f"expected a metric id, found "
                                 f"{self._describe(name_tok)}")
        out = {"range": None, "bins": DEFAULT_BINS,
               "tolerance": DEFAULT_TOLERANCE}

        def set_range(key):
            out["range"] = self.parse_interval()

        def set_bins(key):
            tok = self.parse_number()
            if tok is None:
                return
            if tok.value != int(tok.value) or tok.value < 2:
                self.error(tok, "bins must be an integer >= 2", SEMANTIC)
                return
            out["bins"] = int(tok.value)

        def set_tolerance(key):
            tok = self.parse_number()
            if tok is None:
                return
            if tok.value < 0:
                self.error(tok, "tolerance must be nonnegative", SEMANTIC)
                return
            out["tolerance"] = tok.value

        self.parse_block({"range": set_range, "bins": set_bins,
                          "tolerance": set_tolerance}, "metric")
        if raw_id is None:
            return
        metric_id = resolve_metric_id(raw_id)
        if metric_id is None:
            self.error(name_tok, f"unknown metric id {raw_id!r}", SEMANTIC)
            return
        if any(m.metric_id == metric_id for m in doc["metrics"]):
            self.error(name_tok, f"duplicate metric {metric_id!r}", SEMANTIC)
            return
        if out["range"] is None:
            self.error(name_tok, f"metric {metric_id!r} needs a range",
                       SEMANTIC)
            return
        doc["metrics"].append(MetricConstraint(metric_id, out["range"],
                                               out["bins"], out["tolerance"]))

    def item_approved_sources(self, kw: Token, doc: dict):
        open_tok = self.open_brace()
        if open_tok is None:
            self.sync_to_item()
            return
        while True:
            self.skip_separators()
            tok = self.peek()
            if tok.type in ("}", "EOF"):
                break
            if tok.type == "STRING":
                doc["sources"].add(self.next().value)
                if self.at(","):
                    self.next()
            else:
                self.error(tok, f"expected a source URL string, found "
                                f"{self._describe(tok)}")
                self.next()
        self.close_brace(open_tok)

    def item_approved_model(self, kw: Token, doc: dict):
        id_tok = self.parse_string()
        out = {"description": None, "uses": [], "synthetic": False}

        def set_description(key):
            tok = self.parse_string()
            if tok is not None:
                out["description"] = tok.value

        def set_uses(key):
            uses = self.parse_string_list()
            if uses is not None:
                out["uses"] = uses

        def set_synthetic(key):
            val = self.parse_bool()
            if val is not None:
                out["synthetic"] = val

        self.parse_block({"description": set_description,
                          "acceptable_uses": set_uses,
                          "synthetic_data_capability": set_synthetic},
                         "approved_model")
        if id_tok is None:
            return
        if any(m.model_id == id_tok.value for m in doc["models"]):
            self.error(id_tok, f"duplicate model {id_tok.value!r}", SEMANTIC)
            return
        doc["models"].append(ModelSpec(id_tok.value, out["description"],
                                       frozenset(out["uses"]),
                                       out["synthetic"]))

    def item_decision(self, kw: Token, doc: dict):
        out = {"actions": None, "states": None, "payoffs": None,
               "criterion": None, "lambda": DEFAULT_LAMBDA}
        positions = {}

        def set_list(which):
            def handler(key):
                positions[which] = key
                out[which] = self.parse_string_list()
            return handler

        def set_payoffs(key):
            positions["payoffs"] = key
            out["payoffs"] = self.parse_matrix()

        def set_criterion(key):
            tok = self.peek()
            if tok.type == "IDENT" and tok.value in CRITERIA:
                out["criterion"] = self.next().value
            elif tok.type == "IDENT":
                self.next()
                self.error(tok, f"unknown criterion {tok.value!r}; expected "
                                "wald, hurwicz, or savage", SEMANTIC)
            else:
                self.error(tok, f"expected a criterion name, found "
                                f"{self._describe(tok)}")

        def set_lambda(key):
            tok = self.parse_number()
            if tok is None:
                return
            if not 0.0 <= tok.value <= 1.0:
                self.error(tok, "lambda must lie in [0, 1]", SEMANTIC)
                return
            out["lambda"] = tok.value

        self.parse_block({"actions": set_list("actions"),
                          "states": set_list("states"),
                          "payoffs": set_payoffs,
                          "criterion": set_criterion,
                          "lambda": set_lambda}, "decision")
        missing = [k for k in ("actions", "states", "payoffs", "criterion")
                   if out[k] is None]
        if missing:
            self.error(kw, "decision block is missing: " + ", ".join(missing),
                       SEMANTIC)
            return
        try:
            matrix = PayoffMatrix(out["actions"], out["states"],
                                  out["payoffs"])
        except DecisionError as exc:
            self.error(positions.get("payoffs", kw), str(exc), SEMANTIC)
            return
        doc["decision"] = DecisionSpec(matrix, out["criterion"], out["lambda"])

    def item_on_violation(self, kw: Token, doc: dict):
        self.expect("=", "'='")
        tok = self.peek()
        if tok.type == "IDENT" and tok.value in ("explain", "halt"):
            doc["on_violation"] = self.next().value
        else:
            self.error(tok, f"expected explain or halt, found "
                            f"{self._describe(tok)}", SEMANTIC
                       if tok.type == "IDENT" else SYNTAX)
            if tok.type == "IDENT":
                self.next()


def parse_policy_with_diagnostics(text: str):
    """Total parse: returns (document or None, diagnostics)."""
    tokens, diags = _lex(text)
    parser = _Parser(tokens, diags)
    doc = parser.parse_document()
    if parser.diags:
        return None, list(parser.diags)
    return doc, []


def parse_policy(text: str) -> PolicyDocument:
    """Parse and check a policy; raises PolicyError with diagnostics."""
    doc, diags = parse_policy_with_diagnostics(text)
    if doc is None:
        raise PolicyError(diags or [Diagnostic(SYNTAX, 1, 1, "empty input")])
    return doc


# ---------------------------------------------------------------------------
# Canonical serializer

def _fmt_number(x: float) -> str:
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    r = repr(x)
    if "e" in r or "E" in r:
        # The grammar has no exponent form; fall back to positional digits.
        r = format(x, ".17f").rstrip("0")
        if r.endswith("."):
            r += "0"
    return r


def _fmt_string(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _fmt_name(s: str) -> str:
    if s and s[0] in IDENT_START and all(c in IDENT_CHARS for c in s):
        return s
    return _fmt_string(s)


def _fmt_string_list(items) -> str:
    return "[" + ", ".join(_fmt_string(s) for s in items) + "]"


def serialize_policy(doc: PolicyDocument) -> str:
    """Canonical text form: fixed section order, one item per line,
    normalized numbers, defaults elided. parse(serialize(doc)) == doc."""
    out = [f"policy {_fmt_string(doc.name)} {{"]

    if doc.protected is not None:
        p = doc.protected
        out.append(f"  protected_attribute {_fmt_name(p.attribute)} {{")
        out.append(f"    privileged = {_fmt_string(p.privileged_value)}")
        out.append(f"    unprivileged = {_fmt_string(p.unprivileged_value)}")
        out.append("  }")
    if doc.favorable is not None:
        f = doc.favorable
        out.append(f"  favorable_outcome {_fmt_name(f.attribute)} {{")
        out.append(f"    value = {_fmt_string(f.value)}")
        out.append("  }")
    for m in doc.metrics:
        out.append(f"  metric {m.metric_id} {{")
        out.append(f"    range = [{_fmt_number(m.range.lo)}, "
                   f"{_fmt_number(m.range.hi)}]")
        if m.bins != DEFAULT_BINS:
            out.append(f"    bins = {m.bins}")
        if m.tolerance != DEFAULT_TOLERANCE:
            out.append(f"    tolerance = {_fmt_number(m.tolerance)}")
        out.append("  }")
    if doc.approved_sources:
        out.append("  approved_sources {")
        for src in sorted(doc.approved_sources):
            out.append(f"    {_fmt_string(src)}")
        out.append("  }")
    for model in sorted(doc.approved_models, key=lambda m: m.model_id):
        out.append(f"  approved_model {_fmt_string(model.model_id)} {{")
        if model.description is not None:
            out.append(f"    description = {_fmt_string(model.description)}")
        if model.acceptable_uses:
            out.append("    acceptable_uses = "
                       + _fmt_string_list(sorted(model.acceptable_uses)))
        if model.synthetic_data_capability:
            out.append("    synthetic_data_capability = true")
        out.append("  }")
    if doc.decision is not None:
        d = doc.decision
        out.append("  decision {")
        out.append(f"    actions = {_fmt_string_list(d.actions)}")
        out.append(f"    states = {_fmt_string_list(d.states)}")
        rows = ", ".join(
            "[" + ", ".join(_fmt_number(v) for v in row) + "]"
            for row in d.payoffs.values)
        out.append(f"    payoffs = [{rows}]")
        out.append(f"    criterion = {d.criterion}")
        if d.hurwicz_lambda != DEFAULT_LAMBDA:
            out.append(f"    lambda = {_fmt_number(d.hurwicz_lambda)}")
        out.append("  }")
    if doc.on_violation != DEFAULT_ON_VIOLATION:
        out.append(f"  on_violation = {doc.on_violation}")
    out.append("}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# Operational-context manifest check

APPROVED = "approved"
VIOLATION = "violation"


@dataclass(frozen=True)
class ContextFinding:
    subject: str  # e.g. "source <url>", "model <id>"
    status: str  # approved | violation
    reason: str

    @property
    def is_approved(self) -> bool:
        return self.status == APPROVED


def check_manifest(doc: PolicyDocument, manifest) -> list:
    """Check a run manifest against the policy's approved sources/models.

    `manifest` carries `dataset_source`, `model_id`, `declared_use`, and
    `synthetic`. Returns one ContextFinding per manifest item; violations
    are findings, never exceptions.
    """
    findings = []

    if manifest.dataset_source:
        subject = f"source {manifest.dataset_source}"
        if not doc.approved_sources:
            findings.append(ContextFinding(
                subject, APPROVED, "policy declares no source restrictions"))
        elif manifest.dataset_source in doc.approved_sources:
            findings.append(ContextFinding(
                subject, APPROVED, "listed in approved_sources"))
        else:
            findings.append(ContextFinding(
                subject, VIOLATION, "unknown source"))

    if manifest.model_id:
        subject = f"model {manifest.model_id}"
        model = doc.model(manifest.model_id)
        if model is None:
            findings.append(ContextFinding(subject, VIOLATION,
                                           "unknown model"))
            return findings
        findings.append(ContextFinding(subject, APPROVED,
                                       "listed in approved models"))
        if manifest.declared_use is not None:
            use_subject = f"use {manifest.declared_use}"
            if manifest.declared_use in model.acceptable_uses:
                findings.append(ContextFinding(
                    use_subject, APPROVED, "listed in acceptable_uses"))
            else:
                findings.append(ContextFinding(
                    use_subject, VIOLATION, "use not acceptable"))
        if manifest.synthetic:
            syn_subject = "synthetic data generation"
            if model.synthetic_data_capability:
                findings.append(ContextFinding(
                    syn_subject, APPROVED, "model declares the capability"))
            else:
                findings.append(ContextFinding(
                    syn_subject, VIOLATION,
                    "synthetic data requested but capability is false"))
    return findings
