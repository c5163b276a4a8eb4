use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::lexer::{tokenize, Tok, Token};
use super::{DiagnosticCode, ParseDiagnostic};
use crate::model::validate::{output_type, udf_param_types};
use crate::model::{
    validate, BinOp, Builtin, Dataset, DatasetId, Expr, Lambda, Literal, Operation, Param, ProgramGraph,
    ProgramOutput, SourceSpan, Transformation, TransformationKind, Udf, UnOp, ValueType,
};

const KEYWORDS: [&str; 10] = ["program", "input", "output", "if", "then", "else", "true", "false", "asc", "desc"];

type PResult<T> = Result<T, ParseDiagnostic>;

/// Parses a `.dflow` source that may contain several `program` blocks.
pub fn parse_source(file: Option<&str>, source: &str) -> Result<Vec<ProgramGraph>, Vec<ParseDiagnostic>> {
    let (tokens, lex_diags) = tokenize(file, source);
    let bad_lines: BTreeSet<usize> = lex_diags.iter().map(|d| d.span.line).collect();
    let mut parser = Parser { tokens, pos: 0, diags: Vec::new() };
    let programs = parser.source();
    let mut diags = lex_diags;
    diags.extend(parser.diags.into_iter().filter(|d| !bad_lines.contains(&d.span.line)));
    if diags.is_empty() {
        Ok(programs)
    } else {
        diags.sort_by_key(|d| (d.span.line, d.span.column));
        Err(diags)
    }
}

/// Parses a source holding exactly one program.
pub fn parse_program(source: &str) -> Result<ProgramGraph, Vec<ParseDiagnostic>> {
    let mut programs = parse_source(None, source)?;
    match programs.len() {
        1 => Ok(programs.remove(0)),
        n => Err(alloc::vec![ParseDiagnostic::error(
            DiagnosticCode::Syntax,
            format!("expected exactly one program, found {n}"),
            SourceSpan { file: None, line: 1, column: 1, length: 0 },
        )]),
    }
}

/// Parses a lambda against the given parameter types.
pub fn parse_lambda(source: &str, param_types: &[ValueType]) -> Result<Lambda, Vec<ParseDiagnostic>> {
    let (tokens, lex_diags) = tokenize(None, source);
    if !lex_diags.is_empty() {
        return Err(lex_diags);
    }
    let mut p = Parser { tokens, pos: 0, diags: Vec::new() };
    let result = p.lambda_syntax().and_then(|(names, body, span)| {
        p.expect_end()?;
        build_lambda(&names, param_types, &body, span, "lambda")
    });
    result.map_err(|d| alloc::vec![d])
}

/// Parses a type such as `(string, list<int>)`.
pub fn parse_type(source: &str) -> Result<ValueType, Vec<ParseDiagnostic>> {
    let (tokens, lex_diags) = tokenize(None, source);
    if !lex_diags.is_empty() {
        return Err(lex_diags);
    }
    let mut p = Parser { tokens, pos: 0, diags: Vec::new() };
    let result = p.value_type().and_then(|t| p.expect_end().map(|_| t));
    result.map_err(|d| alloc::vec![d])
}

#[derive(Debug, Clone)]
enum Ast {
    Lit(Literal),
    Ident(String, SourceSpan),
    Pair(Box<Ast>, Box<Ast>),
    Proj { target: Box<Ast>, key: bool, span: SourceSpan },
    Unary { op: UnOp, operand: Box<Ast>, span: SourceSpan },
    Binary { op: BinOp, lhs: Box<Ast>, rhs: Box<Ast>, span: SourceSpan },
    Call { name: String, span: SourceSpan, args: Vec<Ast> },
    EmptyList(ValueType),
    If { cond: Box<Ast>, then: Box<Ast>, other: Box<Ast>, span: SourceSpan },
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    diags: Vec<ParseDiagnostic>,
}

fn syntax(message: String, span: &SourceSpan) -> ParseDiagnostic {
    ParseDiagnostic::error(DiagnosticCode::Syntax, message, span.clone())
}

fn type_diag(message: String, span: &SourceSpan) -> ParseDiagnostic {
    ParseDiagnostic::error(DiagnosticCode::Type, message, span.clone())
}

fn unknown(message: String, span: &SourceSpan) -> ParseDiagnostic {
    ParseDiagnostic::error(DiagnosticCode::UnknownIdentifier, message, span.clone())
}

struct ProgramBuilder {
    name: String,
    span: SourceSpan,
    datasets: Vec<Dataset>,
    inputs: Vec<DatasetId>,
    transformations: Vec<Transformation>,
    outputs: Vec<ProgramOutput>,
    // Names whose definition failed; references to them are not reported again.
    poisoned: BTreeSet<String>,
    failed: bool,
}

impl ProgramBuilder {
    fn lookup(&self, name: &str) -> Option<&Dataset> {
        self.datasets.iter().find(|d| d.name == name)
    }

    fn define(&mut self, name: String, elem: ValueType) -> DatasetId {
        let id = DatasetId(self.datasets.len());
        self.datasets.push(Dataset { id, name, elem });
        id
    }
}

type LambdaSyntax = (Vec<(String, SourceSpan)>, Ast, SourceSpan);

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn peek_at(&self, ahead: usize) -> &Tok {
        let i = (self.pos + ahead).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    fn span(&self) -> SourceSpan {
        self.tokens[self.pos].span.clone()
    }

    fn advance(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.advance();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> PResult<Token> {
        if *self.peek() == tok {
            Ok(self.advance())
        } else {
            Err(syntax(format!("expected {what}, found {}", self.peek().describe()), &self.span()))
        }
    }

    fn expect_end(&mut self) -> PResult<()> {
        match self.peek() {
            Tok::Eof => Ok(()),
            other => Err(syntax(format!("unexpected {}", other.describe()), &self.span())),
        }
    }

    fn expect_line_end(&mut self) -> PResult<()> {
        match self.peek() {
            Tok::Newline | Tok::Eof => Ok(()),
            other => Err(syntax(format!("expected end of line, found {}", other.describe()), &self.span())),
        }
    }

    fn is_keyword(&self, word: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == word)
    }

    fn ident(&mut self, what: &str) -> PResult<(String, SourceSpan)> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                let t = self.advance();
                Ok((s, t.span))
            }
            Tok::Ident(s) => Err(syntax(format!("'{s}' is a keyword and cannot be used as {what}"), &self.span())),
            other => Err(syntax(format!("expected {what}, found {}", other.describe()), &self.span())),
        }
    }

    fn skip_line(&mut self) {
        while !matches!(self.peek(), Tok::Newline | Tok::Eof) {
            self.advance();
        }
    }

    fn source(&mut self) -> Vec<ProgramGraph> {
        let mut programs = Vec::new();
        let mut current: Option<ProgramBuilder> = None;
        loop {
            while self.eat(&Tok::Newline) {}
            if *self.peek() == Tok::Eof {
                break;
            }
            if self.is_keyword("program") {
                if let Some(b) = current.take() {
                    if let Some(g) = self.finish(b) {
                        programs.push(g);
                    }
                }
                match self.program_header() {
                    Ok(b) => current = Some(b),
                    Err(d) => {
                        self.diags.push(d);
                        self.skip_line();
                    }
                }
                continue;
            }
            let Some(builder) = current.as_mut() else {
                let span = self.span();
                self.diags.push(syntax(String::from("expected 'program' header"), &span));
                self.skip_line();
                continue;
            };
            let result = if self.is_keyword("input") {
                self.input_decl(builder)
            } else if self.is_keyword("output") {
                self.output_decl(builder)
            } else {
                self.step(builder)
            };
            if let Err(d) = result {
                builder.failed = true;
                self.diags.push(d);
                self.skip_line();
            }
        }
        if let Some(b) = current.take() {
            if let Some(g) = self.finish(b) {
                programs.push(g);
            }
        }
        programs
    }

    fn program_header(&mut self) -> PResult<ProgramBuilder> {
        self.advance();
        let (name, span) = self.ident("a program name")?;
        self.expect_line_end()?;
        Ok(ProgramBuilder {
            name,
            span,
            datasets: Vec::new(),
            inputs: Vec::new(),
            transformations: Vec::new(),
            outputs: Vec::new(),
            poisoned: BTreeSet::new(),
            failed: false,
        })
    }

    fn input_decl(&mut self, b: &mut ProgramBuilder) -> PResult<()> {
        self.advance();
        let (name, name_span) = self.ident("an input name")?;
        if b.lookup(&name).is_some() {
            b.poisoned.insert(name.clone());
            return Err(syntax(format!("dataset '{name}' is already defined"), &name_span));
        }
        self.expect(Tok::Colon, "':'")?;
        let ty_span = self.span();
        let ty = self.value_type().inspect_err(|_| {
            b.poisoned.insert(name.clone());
        })?;
        let Some(elem) = ty.as_list().cloned() else {
            b.poisoned.insert(name.clone());
            return Err(type_diag(format!("input '{name}' must be declared as list<...>, found {ty}"), &ty_span));
        };
        self.expect_line_end()?;
        let id = b.define(name, elem);
        b.inputs.push(id);
        Ok(())
    }

    fn output_decl(&mut self, b: &mut ProgramBuilder) -> PResult<()> {
        self.advance();
        loop {
            let (name, span) = self.ident("an output dataset")?;
            match b.lookup(&name) {
                Some(d) => {
                    if b.outputs.iter().any(|o| o.name == name) {
                        return Err(syntax(format!("output '{name}' is declared twice"), &span));
                    }
                    let dataset = d.id;
                    b.outputs.push(ProgramOutput { name, dataset });
                }
                None if b.poisoned.contains(&name) => {}
                None => return Err(unknown(format!("unknown dataset '{name}'"), &span)),
            }
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.expect_line_end()
    }

    fn step(&mut self, b: &mut ProgramBuilder) -> PResult<()> {
        let (target, target_span) = self.ident("a dataset name")?;
        let poison = |b: &mut ProgramBuilder| {
            b.poisoned.insert(target.clone());
        };
        if b.lookup(&target).is_some() {
            return Err(syntax(format!("dataset '{target}' is already defined"), &target_span));
        }
        let declared = if self.eat(&Tok::Colon) {
            let span = self.span();
            let ty = self.value_type().inspect_err(|_| poison(b))?;
            match ty.as_list() {
                Some(e) => Some((e.clone(), span)),
                None => {
                    poison(b);
                    return Err(type_diag(format!("dataset '{target}' must be declared as list<...>, found {ty}"), &span));
                }
            }
        } else {
            None
        };
        self.expect(Tok::Assign, "'='").inspect_err(|_| poison(b))?;
        let (source, source_span) = self.ident("a dataset name").inspect_err(|_| poison(b))?;
        let Some(src) = b.lookup(&source).map(|d| (d.id, d.elem.clone())) else {
            poison(b);
            if b.poisoned.contains(&source) {
                self.skip_line();
                b.failed = true;
                return Ok(());
            }
            return Err(unknown(format!("unknown dataset '{source}'"), &source_span));
        };
        self.expect(Tok::Dot, "'.'").inspect_err(|_| poison(b))?;
        let (kind_name, kind_span) = match self.peek().clone() {
            Tok::Ident(s) => (s, self.advance().span),
            other => {
                poison(b);
                return Err(syntax(format!("expected a transformation name, found {}", other.describe()), &self.span()));
            }
        };
        let Some(kind) = TransformationKind::from_dsl_name(&kind_name) else {
            poison(b);
            return Err(unknown(format!("unknown transformation '{kind_name}'"), &kind_span));
        };
        self.expect(Tok::LParen, "'('").inspect_err(|_| poison(b))?;
        let result = self.step_args(b, kind, &kind_span, src);
        let (op, inputs, input_types) = match result {
            Ok(r) => r,
            Err(d) => {
                poison(b);
                return Err(d);
            }
        };
        let close = self.expect(Tok::RParen, "')'").inspect_err(|_| poison(b))?;
        self.expect_line_end().inspect_err(|_| poison(b))?;

        let udf_results: Vec<ValueType> = op.udfs.iter().map(|u| u.result_type().clone()).collect();
        let out = match output_type(kind, &input_types, &udf_results) {
            Ok(t) => t,
            Err(msg) => {
                poison(b);
                return Err(type_diag(msg, &kind_span));
            }
        };
        if let Some((declared, span)) = declared {
            if declared != out {
                poison(b);
                return Err(type_diag(
                    format!("dataset '{target}' declared as list<{declared}> but {kind} produces list<{out}>"),
                    &span,
                ));
            }
        }
        let output = b.define(target, out);
        let length = if close.span.line == target_span.line {
            close.span.column + close.span.length - target_span.column
        } else {
            target_span.length
        };
        let span = SourceSpan { length, ..target_span };
        let id = b.transformations.len();
        b.transformations.push(Transformation { id, op, inputs, output, span: Some(span) });
        Ok(())
    }

    #[allow(clippy::type_complexity)]
    fn step_args(
        &mut self,
        b: &ProgramBuilder,
        kind: TransformationKind,
        kind_span: &SourceSpan,
        src: (DatasetId, ValueType),
    ) -> PResult<(Operation, Vec<DatasetId>, Vec<ValueType>)> {
        use TransformationKind::*;
        let mut inputs = alloc::vec![src.0];
        let mut input_types = alloc::vec![src.1];
        let mut op = Operation::new(kind);
        match kind {
            Union | Intersection | Subtract | Join | LeftOuterJoin | RightOuterJoin | FullOuterJoin => {
                let (other, span) = self.ident("a dataset name")?;
                let d = b.lookup(&other).ok_or_else(|| unknown(format!("unknown dataset '{other}'"), &span))?;
                inputs.push(d.id);
                input_types.push(d.elem.clone());
            }
            Distinct | GroupByKey => {}
            SortByKey => {
                if let Tok::Ident(_) = self.peek() {
                    op.ascending = self.direction()?;
                }
            }
            Map | FlatMap | Filter | SortBy | ReduceByKey => {
                let params = udf_param_types(kind, &input_types).map_err(|m| type_diag(m, kind_span))?;
                let (names, body, span) = self.lambda_syntax()?;
                let lambda = build_lambda(&names, &params[0], &body, span, kind.dsl_name())?;
                op.udfs.push(Udf::new(lambda));
                if kind == SortBy && self.eat(&Tok::Comma) {
                    op.ascending = self.direction()?;
                }
            }
        }
        Ok((op, inputs, input_types))
    }

    fn direction(&mut self) -> PResult<bool> {
        match self.peek().clone() {
            Tok::Ident(s) if s == "asc" => {
                self.advance();
                Ok(true)
            }
            Tok::Ident(s) if s == "desc" => {
                self.advance();
                Ok(false)
            }
            other => Err(syntax(format!("expected asc or desc, found {}", other.describe()), &self.span())),
        }
    }

    fn value_type(&mut self) -> PResult<ValueType> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.advance();
                match s.as_str() {
                    "int" => Ok(ValueType::Int),
                    "float" => Ok(ValueType::Float),
                    "bool" => Ok(ValueType::Bool),
                    "string" => Ok(ValueType::Str),
                    "list" => {
                        self.expect(Tok::Lt, "'<'")?;
                        let elem = self.value_type()?;
                        self.expect(Tok::Gt, "'>'")?;
                        Ok(ValueType::list(elem))
                    }
                    _ => Err(unknown(format!("unknown type '{s}'"), &span)),
                }
            }
            Tok::LParen => {
                self.advance();
                let k = self.value_type()?;
                self.expect(Tok::Comma, "','")?;
                let v = self.value_type()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(ValueType::pair(k, v))
            }
            other => Err(syntax(format!("expected a type, found {}", other.describe()), &span)),
        }
    }

    /// `x -> e`, `(x) -> e` or `(a, b) -> e`.
    fn lambda_syntax(&mut self) -> PResult<LambdaSyntax> {
        let start = self.span();
        let mut names = Vec::new();
        match self.peek() {
            Tok::Ident(_) if *self.peek_at(1) == Tok::Arrow => {
                names.push(self.ident("a parameter name")?);
            }
            Tok::LParen => {
                let mut i = 1;
                let mut shape_ok = false;
                loop {
                    if !matches!(self.peek_at(i), Tok::Ident(_)) {
                        break;
                    }
                    match self.peek_at(i + 1) {
                        Tok::Comma => i += 2,
                        Tok::RParen => {
                            shape_ok = *self.peek_at(i + 2) == Tok::Arrow;
                            break;
                        }
                        _ => break,
                    }
                }
                if !shape_ok {
                    return Err(syntax(String::from("expected a lambda such as `x -> ...`"), &start));
                }
                self.advance();
                loop {
                    names.push(self.ident("a parameter name")?);
                    if !self.eat(&Tok::Comma) {
                        break;
                    }
                }
                self.expect(Tok::RParen, "')'")?;
            }
            _ => return Err(syntax(String::from("expected a lambda such as `x -> ...`"), &start)),
        }
        self.expect(Tok::Arrow, "'->'")?;
        let body = self.expr()?;
        Ok((names, body, start))
    }

    fn expr(&mut self) -> PResult<Ast> {
        if self.is_keyword("if") {
            let span = self.advance().span;
            let cond = self.expr()?;
            if !self.is_keyword("then") {
                return Err(syntax(format!("expected 'then', found {}", self.peek().describe()), &self.span()));
            }
            self.advance();
            let then = self.expr()?;
            if !self.is_keyword("else") {
                return Err(syntax(format!("expected 'else', found {}", self.peek().describe()), &self.span()));
            }
            self.advance();
            let other = self.expr()?;
            return Ok(Ast::If { cond: Box::new(cond), then: Box::new(then), other: Box::new(other), span });
        }
        self.binary(1)
    }

    fn binop(&self) -> Option<BinOp> {
        Some(match self.peek() {
            Tok::Plus => BinOp::Add,
            Tok::Minus => BinOp::Sub,
            Tok::Star => BinOp::Mul,
            Tok::Slash => BinOp::Div,
            Tok::Percent => BinOp::Rem,
            Tok::EqEq => BinOp::Eq,
            Tok::NotEq => BinOp::Ne,
            Tok::Lt => BinOp::Lt,
            Tok::Le => BinOp::Le,
            Tok::Gt => BinOp::Gt,
            Tok::Ge => BinOp::Ge,
            Tok::AndAnd => BinOp::And,
            Tok::OrOr => BinOp::Or,
            _ => return None,
        })
    }

    fn binary(&mut self, min_prec: u8) -> PResult<Ast> {
        let mut lhs = self.unary()?;
        while let Some(op) = self.binop().filter(|op| op.precedence() >= min_prec) {
            let span = self.advance().span;
            let rhs = self.binary(op.precedence() + 1)?;
            lhs = Ast::Binary { op, lhs: Box::new(lhs), rhs: Box::new(rhs), span };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Ast> {
        let op = match self.peek() {
            Tok::Minus => UnOp::Neg,
            Tok::Bang => UnOp::Not,
            _ => return self.postfix(),
        };
        let span = self.advance().span;
        let operand = self.unary()?;
        Ok(Ast::Unary { op, operand: Box::new(operand), span })
    }

    fn postfix(&mut self) -> PResult<Ast> {
        let mut e = self.primary()?;
        while *self.peek() == Tok::Dot {
            self.advance();
            let span = self.span();
            let key = match self.peek() {
                Tok::Ident(s) if s == "key" => true,
                Tok::Ident(s) if s == "value" => false,
                other => return Err(syntax(format!("expected 'key' or 'value' after '.', found {}", other.describe()), &span)),
            };
            self.advance();
            e = Ast::Proj { target: Box::new(e), key, span };
        }
        Ok(e)
    }

    fn primary(&mut self) -> PResult<Ast> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Int(i) => {
                self.advance();
                Ok(Ast::Lit(Literal::Int(i)))
            }
            Tok::Float(x) => {
                self.advance();
                Ok(Ast::Lit(Literal::Float(x)))
            }
            Tok::Str(s) => {
                self.advance();
                Ok(Ast::Lit(Literal::Str(s)))
            }
            Tok::Ident(s) if s == "true" || s == "false" => {
                self.advance();
                Ok(Ast::Lit(Literal::Bool(s == "true")))
            }
            Tok::Ident(s) if s == "if" => self.expr(),
            Tok::Ident(s) if s == "emptyList" => {
                self.advance();
                self.expect(Tok::Lt, "'<'")?;
                let t = self.value_type()?;
                self.expect(Tok::Gt, "'>'")?;
                self.expect(Tok::LParen, "'('")?;
                self.expect(Tok::RParen, "')'")?;
                Ok(Ast::EmptyList(t))
            }
            Tok::Ident(s) if *self.peek_at(1) == Tok::LParen => {
                self.advance();
                self.advance();
                let mut args = Vec::new();
                if *self.peek() != Tok::RParen {
                    loop {
                        args.push(self.expr()?);
                        if !self.eat(&Tok::Comma) {
                            break;
                        }
                    }
                }
                self.expect(Tok::RParen, "')'")?;
                Ok(Ast::Call { name: s, span, args })
            }
            Tok::Ident(_) => {
                let (name, span) = self.ident("an expression")?;
                Ok(Ast::Ident(name, span))
            }
            Tok::LParen => {
                self.advance();
                let first = self.expr()?;
                if self.eat(&Tok::Comma) {
                    let second = self.expr()?;
                    self.expect(Tok::RParen, "')'")?;
                    Ok(Ast::Pair(Box::new(first), Box::new(second)))
                } else {
                    self.expect(Tok::RParen, "')'")?;
                    Ok(first)
                }
            }
            other => Err(syntax(format!("expected an expression, found {}", other.describe()), &span)),
        }
    }

    fn finish(&mut self, b: ProgramBuilder) -> Option<ProgramGraph> {
        if b.failed {
            return None;
        }
        if b.outputs.is_empty() {
            self.diags.push(syntax(format!("program '{}' declares no outputs", b.name), &b.span));
            return None;
        }
        let graph = ProgramGraph {
            name: b.name,
            inputs: b.inputs,
            datasets: b.datasets,
            transformations: b.transformations,
            outputs: b.outputs,
        };
        match validate(&graph) {
            Ok(()) => Some(graph),
            Err(errors) => {
                for e in errors {
                    let span = e
                        .site
                        .and_then(|s| graph.transformations.get(s))
                        .and_then(|t| t.span.clone())
                        .unwrap_or_else(|| b.span.clone());
                    self.diags.push(type_diag(e.to_string(), &span));
                }
                None
            }
        }
    }
}

fn build_lambda(
    names: &[(String, SourceSpan)],
    param_types: &[ValueType],
    body: &Ast,
    span: SourceSpan,
    what: &str,
) -> PResult<Lambda> {
    if names.len() != param_types.len() {
        return Err(type_diag(
            format!("{what} function takes {} parameter(s), got {}", param_types.len(), names.len()),
            &span,
        ));
    }
    for (i, (name, span)) in names.iter().enumerate() {
        if names[..i].iter().any(|(n, _)| n == name) {
            return Err(syntax(format!("parameter '{name}' is declared twice"), span));
        }
    }
    let params: Vec<Param> = names
        .iter()
        .zip(param_types)
        .map(|((name, _), ty)| Param { name: name.clone(), ty: ty.clone() })
        .collect();
    let body = typecheck(body, &params)?;
    Ok(Lambda { params, body })
}

fn typecheck(ast: &Ast, params: &[Param]) -> PResult<Expr> {
    Ok(match ast {
        Ast::Lit(l) => Expr::lit(l.clone()),
        Ast::Ident(name, span) => match params.iter().position(|p| p.name == *name) {
            Some(i) => Expr::param(i, name.clone(), params[i].ty.clone()),
            None => return Err(unknown(format!("unknown identifier '{name}'"), span)),
        },
        Ast::Pair(a, b) => Expr::pair(typecheck(a, params)?, typecheck(b, params)?),
        Ast::Proj { target, key, span } => {
            let t = typecheck(target, params)?;
            let r = if *key { Expr::key(t) } else { Expr::value(t) };
            r.map_err(|e| type_diag(e.0, span))?
        }
        Ast::Unary { op, operand, span } => {
            Expr::unary(*op, typecheck(operand, params)?).map_err(|e| type_diag(e.0, span))?
        }
        Ast::Binary { op, lhs, rhs, span } => {
            let l = typecheck(lhs, params)?;
            let r = typecheck(rhs, params)?;
            Expr::binary(*op, l, r).map_err(|e| type_diag(e.0, span))?
        }
        Ast::Call { name, span, args } => {
            let builtin = Builtin::from_name(name).ok_or_else(|| unknown(format!("unknown function '{name}'"), span))?;
            let args = args.iter().map(|a| typecheck(a, params)).collect::<PResult<Vec<_>>>()?;
            Expr::call(builtin, args).map_err(|e| type_diag(e.0, span))?
        }
        Ast::EmptyList(t) => Expr::empty_list(t.clone()),
        Ast::If { cond, then, other, span } => {
            let c = typecheck(cond, params)?;
            let a = typecheck(then, params)?;
            let b = typecheck(other, params)?;
            Expr::if_(c, a, b).map_err(|e| type_diag(e.0, span))?
        }
    })
}
