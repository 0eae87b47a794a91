"""Parser for the architecture DSL.

Grammar (informally):

    system      = "system" IDENT "{" decl* "}"
    decl        = space | mapping | transformation | module | component
    space       = "space" IDENT ":" IDENT "(" INT ")" [ "@" IDENT ] [ STRING ]
    mapping     = "mapping" IDENT ":" IDENT "from" IDENT "to" IDENT
    transform   = "transformation" IDENT ":" IDENT "from" IDENT "to" IDENT
    module      = "adaptive" "module" IDENT "{" mstmt* "}"
    component   = "adaptive" "component" IDENT ":" subtype "{" cstmt* "}"

Error recovery happens at top-level keyword boundaries only: a broken
declaration is skipped up to the next ``space``/``mapping``/``transformation``/
``adaptive`` keyword (or the closing brace), so one run reports every
independent error.
"""

from __future__ import annotations

from .diagnostics import Diagnostic, SourceSpan, error, has_errors
from . import ir
from .ir import (
    AdaptiveComponentDecl,
    AdaptiveModuleDecl,
    CriterionDecl,
    Custom,
    LearningMode,
    LoopMode,
    MappingDecl,
    ShapingParam,
    SpaceDecl,
    SpaceType,
    SystemModel,
    TransformationDecl,
)
from .lexer import Token, TokenType, tokenize

_TOP_KEYWORDS = ("space", "mapping", "transformation", "adaptive")

_MAPPING_KINDS = {k.name: k for k in ir.MappingKind}
_TRANSFORM_KINDS = {k.name: k for k in ir.TransformKind}
_DS_KINDS = {k.name: k for k in ir.DynamicalSystemKind}
_LEARNER_KINDS = {k.name: k for k in ir.LearnerKind}
_CRITERION_KINDS = {k.name: k for k in ir.CriterionKind}


class _ParseError(Exception):
    """Internal signal; the diagnostic is already recorded."""


class _Parser:
    def __init__(self, tokens: list[Token], diags: list[Diagnostic]):
        self.tokens = tokens
        self.diags = diags
        self.pos = 0

    # -- token plumbing ----------------------------------------------------

    @property
    def cur(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.cur
        if tok.type is not TokenType.EOF:
            self.pos += 1
        return tok

    def fail(self, code: str, message: str, span: SourceSpan | None = None) -> None:
        self.diags.append(error(code, message, span or self.cur.span))
        raise _ParseError()

    def expect_ident(self, what: str = "identifier") -> Token:
        if self.cur.type is not TokenType.IDENT:
            self.fail("E101", f"expected {what}, found {self._describe(self.cur)}")
        return self.advance()

    def expect(self, ttype: TokenType, text: str) -> Token:
        if self.cur.type is not ttype:
            self.fail("E102", f"expected '{text}', found {self._describe(self.cur)}")
        return self.advance()

    def expect_int(self) -> int:
        if self.cur.type is not TokenType.INT:
            self.fail("E103", f"expected integer, found {self._describe(self.cur)}")
        return int(self.advance().text)

    @staticmethod
    def _describe(tok: Token) -> str:
        if tok.type is TokenType.EOF:
            return "end of file"
        return f"'{tok.text}'"

    def _opt_string(self) -> str | None:
        if self.cur.type is TokenType.STRING:
            return self.advance().text
        return None

    def _span_from(self, start: Token) -> SourceSpan:
        end = self.tokens[max(self.pos - 1, 0)].span
        s = start.span
        return SourceSpan(s.file, s.start_line, s.start_col, end.end_line, end.end_col)

    # -- error recovery ----------------------------------------------------

    def sync(self, depth: int) -> None:
        """Skip to the next top-level declaration keyword.

        ``depth`` is the current brace nesting relative to the system body, so
        a failure inside a module or component body first consumes that
        body's closing brace.
        """
        while self.cur.type is not TokenType.EOF:
            tok = self.cur
            if tok.type is TokenType.LBRACE:
                depth += 1
            elif tok.type is TokenType.RBRACE:
                if depth == 0:
                    return
                depth -= 1
            elif depth == 0 and tok.type is TokenType.KW and tok.text in _TOP_KEYWORDS:
                return
            self.advance()

    # -- grammar -----------------------------------------------------------

    def parse_system(self) -> SystemModel | None:
        start = self.cur
        try:
            if not self.cur.is_kw("system"):
                self.fail("E104", f"expected 'system', found {self._describe(self.cur)}")
            self.advance()
            name = self.expect_ident("system name").text
            self.expect(TokenType.LBRACE, "{")
        except _ParseError:
            return None

        spaces: list[SpaceDecl] = []
        mappings: list[MappingDecl] = []
        transformations: list[TransformationDecl] = []
        modules: list[AdaptiveModuleDecl] = []
        components: list[AdaptiveComponentDecl] = []

        while not (self.cur.type in (TokenType.RBRACE, TokenType.EOF)):
            tok = self.cur
            self._decl_start = self.pos
            try:
                if tok.is_kw("space"):
                    spaces.append(self.parse_space())
                elif tok.is_kw("mapping"):
                    mappings.append(self.parse_mapping())
                elif tok.is_kw("transformation"):
                    transformations.append(self.parse_transformation())
                elif tok.is_kw("adaptive"):
                    decl = self.parse_adaptive()
                    if isinstance(decl, AdaptiveModuleDecl):
                        modules.append(decl)
                    else:
                        components.append(decl)
                else:
                    self.fail(
                        "E104",
                        "expected declaration ('space', 'mapping', 'transformation' "
                        f"or 'adaptive'), found {self._describe(tok)}",
                    )
            except _ParseError:
                if self.cur is tok:
                    self.advance()
                self.sync(self._depth_after_failure())
        try:
            self.expect(TokenType.RBRACE, "}")
        except _ParseError:
            return None

        return SystemModel(
            name=name,
            spaces=tuple(spaces),
            mappings=tuple(mappings),
            transformations=tuple(transformations),
            modules=tuple(modules),
            components=tuple(components),
            span=self._span_from(start),
        )

    def _depth_after_failure(self) -> int:
        # A failing declaration may have consumed its opening brace already;
        # count unclosed braces the failed declaration left behind.
        depth = 0
        for t in self.tokens[self._decl_start : self.pos]:
            if t.type is TokenType.LBRACE:
                depth += 1
            elif t.type is TokenType.RBRACE:
                depth -= 1
        return max(depth, 0)

    _decl_start = 0

    def parse_space(self) -> SpaceDecl:
        start = self.advance()  # 'space'
        name = self.expect_ident().text
        self.expect(TokenType.COLON, ":")
        kind_tok = self.expect_ident("space type kind")
        kind = ir.SPACE_KIND_BY_NAME.get(kind_tok.text)
        if kind is None:
            self.fail("E105", f"unknown space type kind '{kind_tok.text}'", kind_tok.span)
        self.expect(TokenType.LPAREN, "(")
        dim_tok = self.cur
        dimension = self.expect_int()
        self.expect(TokenType.RPAREN, ")")
        frame = None
        if self.cur.type is TokenType.AT:
            self.advance()
            frame = self.expect_ident("frame tag").text
        description = self._opt_string()
        try:
            stype = SpaceType(kind, dimension, frame)
        except ir.InvalidDimension as exc:
            self.fail("E103", str(exc), dim_tok.span)
        return SpaceDecl(name, stype, description, span=self._span_from(start))

    def _parse_maplike(self):
        start = self.advance()  # 'mapping' or 'transformation'
        name = self.expect_ident().text
        self.expect(TokenType.COLON, ":")
        kind = self.expect_ident("kind").text
        self._soft_kw("from")
        from_space = self.expect_ident("source space").text
        self._soft_kw("to")
        to_space = self.expect_ident("target space").text
        return start, name, kind, from_space, to_space

    def _soft_kw(self, word: str) -> None:
        if self.cur.type is TokenType.IDENT and self.cur.text == word:
            self.advance()
            return
        self.fail("E102", f"expected '{word}', found {self._describe(self.cur)}")

    def parse_mapping(self) -> MappingDecl:
        start, name, kind, from_space, to_space = self._parse_maplike()
        mkind = _MAPPING_KINDS.get(kind) or Custom(kind)
        return MappingDecl(name, mkind, from_space, to_space, span=self._span_from(start))

    def parse_transformation(self) -> TransformationDecl:
        start, name, kind, from_space, to_space = self._parse_maplike()
        tkind = _TRANSFORM_KINDS.get(kind) or Custom(kind)
        return TransformationDecl(name, tkind, from_space, to_space, span=self._span_from(start))

    def parse_adaptive(self):
        start = self.advance()  # 'adaptive'
        if self.cur.is_kw("module"):
            self.advance()
            return self._parse_module_body(start)
        if self.cur.is_kw("component"):
            self.advance()
            return self._parse_component_body(start)
        self.fail(
            "E102", f"expected 'module' or 'component' after 'adaptive', found {self._describe(self.cur)}"
        )

    def _dup(self, what: str, tok: Token) -> None:
        self.diags.append(error("E111", f"duplicate '{what}' statement", tok.span))

    def _parse_module_body(self, start: Token) -> AdaptiveModuleDecl:
        name = self.expect_ident("module name").text
        self.expect(TokenType.LBRACE, "{")

        dynamical_system = None
        learner = None
        loop_mode: LoopMode | None = None
        learning_mode: LearningMode | None = None
        execution_inputs: list[str] = []
        learning_inputs: list[str] = []
        shaping: dict[ShapingParam, str] = {}
        output: str | None = None

        while self.cur.type not in (TokenType.RBRACE, TokenType.EOF):
            tok = self.cur
            if tok.is_kw("dynamical_system"):
                self.advance()
                kind = self.expect_ident("dynamical system kind").text
                if dynamical_system is not None:
                    self._dup("dynamical_system", tok)
                else:
                    dynamical_system = _DS_KINDS.get(kind) or Custom(kind)
            elif tok.is_kw("learner"):
                self.advance()
                kind = self.expect_ident("learner kind").text
                if learner is not None:
                    self._dup("learner", tok)
                else:
                    learner = _LEARNER_KINDS.get(kind) or Custom(kind)
            elif tok.is_kw("mode"):
                self.advance()
                mode_tok = self.expect_ident("loop mode")
                try:
                    parsed_loop = LoopMode(mode_tok.text)
                except ValueError:
                    self.fail(
                        "E107",
                        f"expected 'closed_loop' or 'open_loop', found '{mode_tok.text}'",
                        mode_tok.span,
                    )
                parsed_learning = None
                if self.cur.type is TokenType.COMMA:
                    self.advance()
                    lm_tok = self.expect_ident("learning mode")
                    try:
                        parsed_learning = LearningMode(lm_tok.text)
                    except ValueError:
                        self.fail(
                            "E108",
                            f"expected 'online', 'offline' or 'both', found '{lm_tok.text}'",
                            lm_tok.span,
                        )
                if loop_mode is not None:
                    self._dup("mode", tok)
                else:
                    loop_mode = parsed_loop
                    learning_mode = parsed_learning
            elif tok.is_kw("in"):
                self.advance()
                if self.cur.is_kw("learning"):
                    self.advance()
                    learning_inputs.extend(self._ident_list())
                elif self.cur.type is TokenType.IDENT and self.cur.text == "execution":
                    self.advance()
                    execution_inputs.extend(self._ident_list())
                else:
                    self.fail(
                        "E110",
                        f"expected 'execution' or 'learning' after 'in', found {self._describe(self.cur)}",
                    )
            elif tok.is_kw("param"):
                self.advance()
                p_tok = self.expect_ident("shaping parameter")
                try:
                    param = ShapingParam(p_tok.text)
                except ValueError:
                    self.fail(
                        "E109",
                        f"expected 'shape', 'speed' or 'goal', found '{p_tok.text}'",
                        p_tok.span,
                    )
                space = self.expect_ident("space reference").text
                if param in shaping:
                    self._dup(f"param {param.value}", tok)
                else:
                    shaping[param] = space
            elif tok.is_kw("out"):
                self.advance()
                space = self.expect_ident("space reference").text
                if output is not None:
                    self._dup("out", tok)
                else:
                    output = space
            else:
                self.fail(
                    "E106",
                    "expected module statement ('dynamical_system', 'learner', 'mode', "
                    f"'in', 'param' or 'out'), found {self._describe(tok)}",
                )
        self.expect(TokenType.RBRACE, "}")

        # A declared learner without an explicit learning mode trains offline.
        if learner is not None and learning_mode is None:
            learning_mode = LearningMode.Offline

        return AdaptiveModuleDecl(
            name=name,
            dynamical_system=dynamical_system,
            learner=learner,
            loop_mode=loop_mode or LoopMode.OpenLoop,
            learning_mode=learning_mode,
            execution_inputs=tuple(execution_inputs),
            learning_inputs=tuple(learning_inputs),
            shaping_params=shaping,
            output=output,
            span=self._span_from(start),
        )

    def _ident_list(self) -> list[str]:
        names = [self.expect_ident("space reference").text]
        while self.cur.type is TokenType.IDENT:
            names.append(self.advance().text)
        return names

    def _parse_component_body(self, start: Token) -> AdaptiveComponentDecl:
        name = self.expect_ident("component name").text
        self.expect(TokenType.COLON, ":")
        sub_tok = self.expect_ident("component subtype")
        subtype = ir.SUBTYPE_BY_NAME.get(sub_tok.text)
        if subtype is None:
            self.fail(
                "E112",
                "expected 'Generic', 'TrackingController', 'Sequencer' or "
                f"'PatternGenerator', found '{sub_tok.text}'",
                sub_tok.span,
            )
        self.expect(TokenType.LBRACE, "{")

        module: str | None = None
        input_mappings: list[str] = []
        output_mapping: str | None = None
        criterion: CriterionDecl | None = None
        children: list[str] = []

        while self.cur.type not in (TokenType.RBRACE, TokenType.EOF):
            tok = self.cur
            if tok.is_kw("module"):
                self.advance()
                ref = self.expect_ident("module reference").text
                if module is not None:
                    self._dup("module", tok)
                else:
                    module = ref
            elif tok.is_kw("in"):
                self.advance()
                if not self.cur.is_kw("via"):
                    self.fail("E110", f"expected 'via' after 'in', found {self._describe(self.cur)}")
                self.advance()
                input_mappings.append(self.expect_ident("mapping reference").text)
            elif tok.is_kw("out"):
                self.advance()
                if not self.cur.is_kw("via"):
                    self.fail("E110", f"expected 'via' after 'out', found {self._describe(self.cur)}")
                self.advance()
                ref = self.expect_ident("mapping reference").text
                if output_mapping is not None:
                    self._dup("out via", tok)
                else:
                    output_mapping = ref
            elif tok.is_kw("criterion"):
                self.advance()
                kind_tok = self.expect_ident("criterion kind")
                description = self._opt_string()
                if criterion is not None:
                    self._dup("criterion", tok)
                else:
                    ckind = _CRITERION_KINDS.get(kind_tok.text) or Custom(kind_tok.text)
                    criterion = CriterionDecl(ckind, description, span=kind_tok.span)
            elif tok.is_kw("children"):
                self.advance()
                children.append(self.expect_ident("component reference").text)
                while self.cur.type is TokenType.COMMA:
                    self.advance()
                    children.append(self.expect_ident("component reference").text)
            else:
                self.fail(
                    "E106",
                    "expected component statement ('module', 'in', 'out', "
                    f"'criterion' or 'children'), found {self._describe(tok)}",
                )
        self.expect(TokenType.RBRACE, "}")

        return AdaptiveComponentDecl(
            name=name,
            subtype=subtype,
            module=module,
            input_mappings=tuple(input_mappings),
            output_mapping=output_mapping,
            criterion=criterion,
            children=tuple(children),
            span=self._span_from(start),
        )


def parse_system(text: str, file: str = "<input>") -> tuple[SystemModel | None, list[Diagnostic]]:
    """Parse one system; returns ``(model, diagnostics)``.

    Any lexical or syntactic error withholds the model (``None``) while the
    parser keeps recovering so a single run reports every top-level error.
    """
    tokens, diags = tokenize(text, file)
    parser = _Parser(tokens, diags)
    model = parser.parse_system()
    if parser.cur.type is not TokenType.EOF and model is not None:
        diags.append(
            error("E104", f"unexpected trailing input '{parser.cur.text}'", parser.cur.span)
        )
    if has_errors(diags):
        return None, diags
    return model, diags
