//! Recursive-descent parser for the Java-like subset.
//!
//! Declarations (classes, members, parameter lists) are parsed strictly and a
//! malformed one is a [`SyntaxError`]. Method bodies are scanned, not parsed:
//! the scanner picks out local declarations and call sites and steps over
//! anything else one token at a time, so body-level noise never aborts a file.

use std::collections::{BTreeMap, HashSet};

use super::lexer::{Token, TokenKind};
use crate::error::SyntaxError;
use crate::model::{ClassDecl, MethodDecl, MethodRef, Receiver};

const PRIMITIVES: &[&str] = &[
    "boolean", "byte", "char", "double", "float", "int", "long", "short", "void",
];

const MODIFIERS: &[&str] = &[
    "abstract",
    "default",
    "final",
    "native",
    "private",
    "protected",
    "public",
    "static",
    "strictfp",
    "synchronized",
    "transient",
    "volatile",
];

const DECISION_KEYWORDS: &[&str] = &["if", "for", "while", "case", "catch"];
const DECISION_OPERATORS: &[&str] = &["&&", "||"];

/// Receiver used for `super.m()` in a class without an `extends` clause.
pub const IMPLICIT_ROOT: &str = "Object";

/// One parsed file. Receivers in `declared_classes` are still textual; they are
/// resolved against the whole project by [`super::build_model`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceUnit {
    pub path: String,
    pub declared_classes: Vec<ClassDecl>,
    /// Per method scope (`Class.method/arity`): variable, field or parameter → declared type.
    pub local_type_bindings: BTreeMap<String, BTreeMap<String, String>>,
}

struct PendingMethod {
    name: String,
    params: Vec<(String, String)>,
    /// Token range strictly inside the body braces.
    body: Option<(usize, usize)>,
}

struct PendingClass {
    name: String,
    superclass: Option<String>,
    fields: BTreeMap<String, String>,
    methods: Vec<PendingMethod>,
}

struct Parser<'t> {
    toks: &'t [Token],
    pos: usize,
    /// Index of the matching closer for every `(`, `[` and `{`.
    closers: Vec<Option<usize>>,
}

pub fn parse_unit(tokens: &[Token], path: &str) -> Result<SourceUnit, SyntaxError> {
    let mut p = Parser::new(tokens)?;
    let mut pending = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();

    loop {
        let t = p.peek();
        match t.kind {
            TokenKind::EndOfInput => break,
            TokenKind::Keyword if t.text == "package" || t.text == "import" => {
                p.skip_past(";")?;
            }
            TokenKind::Punct if t.text == ";" => p.pos += 1,
            TokenKind::Punct if t.text == "@" => p.skip_annotation(),
            TokenKind::Keyword if MODIFIERS.contains(&t.text.as_str()) => p.pos += 1,
            TokenKind::Keyword if t.text == "class" => {
                let at = p.peek().clone();
                let class = p.class_decl()?;
                if !seen.insert(class.name.clone()) {
                    return Err(SyntaxError::DuplicateInUnit {
                        name: class.name,
                        line: at.line,
                        column: at.column,
                    });
                }
                pending.push(class);
            }
            TokenKind::Keyword if t.text == "interface" || t.text == "enum" => {
                p.skip_type_body()?
            }
            TokenKind::Identifier if t.text == "record" => p.skip_type_body()?,
            _ => return Err(p.unexpected("class declaration")),
        }
    }

    let mut unit = SourceUnit {
        path: path.to_string(),
        declared_classes: Vec::with_capacity(pending.len()),
        local_type_bindings: BTreeMap::new(),
    };
    for class in pending {
        let mut decl = ClassDecl {
            name: class.name.clone(),
            superclass: class.superclass.clone(),
            methods: Vec::new(),
        };
        for method in &class.methods {
            let mut bindings = class.fields.clone();
            bindings.extend(method.params.iter().cloned());
            let mut out = MethodDecl::new(method.name.clone(), method.params.len() as u32);
            if let Some((start, end)) = method.body {
                p.scan_body(start, end, &class, &mut bindings, &mut out);
            }
            unit.local_type_bindings.insert(
                format!("{}.{}/{}", class.name, out.name, out.arity),
                bindings,
            );
            merge_method(&mut decl.methods, out);
        }
        unit.declared_classes.push(decl);
    }
    Ok(unit)
}

/// Overloads sharing (name, arity) collapse into one method.
fn merge_method(methods: &mut Vec<MethodDecl>, method: MethodDecl) {
    match methods
        .iter_mut()
        .find(|m| m.name == method.name && m.arity == method.arity)
    {
        Some(existing) => {
            existing.decision_points += method.decision_points;
            existing.invocations.extend(method.invocations);
        }
        None => methods.push(method),
    }
}

impl<'t> Parser<'t> {
    fn new(toks: &'t [Token]) -> Result<Self, SyntaxError> {
        match toks.last() {
            Some(t) if t.kind == TokenKind::EndOfInput => {}
            _ => {
                return Err(SyntaxError::Unexpected {
                    expected: "end of input".into(),
                    found: toks.last().map(|t| t.text.clone()).unwrap_or_default(),
                    line: toks.last().map_or(1, |t| t.line),
                    column: toks.last().map_or(1, |t| t.column),
                })
            }
        }
        Ok(Self {
            toks,
            pos: 0,
            closers: match_brackets(toks),
        })
    }

    fn peek(&self) -> &'t Token {
        self.at(self.pos)
    }

    fn at(&self, i: usize) -> &'t Token {
        self.toks
            .get(i)
            .unwrap_or_else(|| &self.toks[self.toks.len() - 1])
    }

    fn unexpected(&self, expected: &str) -> SyntaxError {
        let t = self.peek();
        SyntaxError::Unexpected {
            expected: expected.to_string(),
            found: if t.kind == TokenKind::EndOfInput {
                "end of input".into()
            } else {
                t.text.clone()
            },
            line: t.line,
            column: t.column,
        }
    }

    fn expect_punct(&mut self, text: &str) -> Result<(), SyntaxError> {
        if self.peek().is_punct(text) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{text}`")))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, SyntaxError> {
        let t = self.peek();
        if t.kind == TokenKind::Identifier {
            self.pos += 1;
            Ok(t.text.clone())
        } else {
            Err(self.unexpected(what))
        }
    }

    fn skip_past(&mut self, text: &str) -> Result<(), SyntaxError> {
        while !self.peek().is_punct(text) {
            if self.peek().kind == TokenKind::EndOfInput {
                return Err(self.unexpected(&format!("`{text}`")));
            }
            self.pos += 1;
        }
        self.pos += 1;
        Ok(())
    }

    fn skip_annotation(&mut self) {
        self.pos += 1; // @
        if self.peek().is_keyword("interface") {
            return;
        }
        while self.peek().kind == TokenKind::Identifier {
            self.pos += 1;
            if self.peek().is_punct(".") {
                self.pos += 1;
            } else {
                break;
            }
        }
        if self.peek().is_punct("(") {
            if let Some(close) = self.closers[self.pos] {
                self.pos = close + 1;
            }
        }
    }

    /// Steps over an `interface`, `enum`, `record` or nested class declaration.
    fn skip_type_body(&mut self) -> Result<(), SyntaxError> {
        while !self.peek().is_punct("{") {
            if self.peek().kind == TokenKind::EndOfInput {
                return Err(self.unexpected("`{`"));
            }
            self.pos += 1;
        }
        match self.closers[self.pos] {
            Some(close) => {
                self.pos = close + 1;
                Ok(())
            }
            None => Err(self.unexpected("matching `}`")),
        }
    }

    /// `< ... >` with nested angle brackets; the caller has checked for `<`.
    fn skip_type_args(&mut self) {
        let mut depth = 0usize;
        loop {
            let t = self.peek();
            match t.text.as_str() {
                "<" if t.kind == TokenKind::Punct => depth += 1,
                ">" if t.kind == TokenKind::Punct => depth -= 1,
                ">>" | ">>>" if t.kind == TokenKind::Punct => {
                    depth = depth.saturating_sub(t.text.len())
                }
                _ if t.kind == TokenKind::EndOfInput => return,
                _ => {}
            }
            self.pos += 1;
            if depth == 0 {
                return;
            }
        }
    }

    /// A type reference; returns its last simple name.
    fn type_ref(&mut self, what: &str) -> Result<String, SyntaxError> {
        let t = self.peek();
        let mut name = match t.kind {
            TokenKind::Identifier => t.text.clone(),
            TokenKind::Keyword if PRIMITIVES.contains(&t.text.as_str()) => t.text.clone(),
            _ => return Err(self.unexpected(what)),
        };
        self.pos += 1;
        loop {
            if self.peek().is_punct("<") {
                self.skip_type_args();
            } else if self.peek().is_punct(".")
                && self.at(self.pos + 1).kind == TokenKind::Identifier
            {
                name = self.at(self.pos + 1).text.clone();
                self.pos += 2;
            } else {
                break;
            }
        }
        while self.peek().is_punct("[") && self.at(self.pos + 1).is_punct("]") {
            self.pos += 2;
        }
        Ok(name)
    }

    fn class_decl(&mut self) -> Result<PendingClass, SyntaxError> {
        self.pos += 1; // class
        let name = self.ident("class name")?;
        if self.peek().is_punct("<") {
            self.skip_type_args();
        }
        let mut superclass = None;
        if self.peek().is_keyword("extends") {
            self.pos += 1;
            superclass = Some(self.type_ref("superclass name")?);
        }
        if self.peek().is_keyword("implements") {
            self.pos += 1;
            loop {
                self.type_ref("interface name")?;
                if self.peek().is_punct(",") {
                    self.pos += 1;
                } else {
                    break;
                }
            }
        }
        self.expect_punct("{")?;

        let mut class = PendingClass {
            name,
            superclass,
            fields: BTreeMap::new(),
            methods: Vec::new(),
        };
        loop {
            let t = self.peek();
            match t.kind {
                TokenKind::EndOfInput => return Err(self.unexpected("`}`")),
                TokenKind::Punct if t.text == "}" => {
                    self.pos += 1;
                    return Ok(class);
                }
                TokenKind::Punct if t.text == ";" => self.pos += 1,
                TokenKind::Punct if t.text == "@" => self.skip_annotation(),
                TokenKind::Punct if t.text == "{" => {
                    // instance initializer
                    self.skip_type_body()?;
                }
                TokenKind::Punct if t.text == "<" => self.skip_type_args(),
                TokenKind::Keyword if MODIFIERS.contains(&t.text.as_str()) => self.pos += 1,
                TokenKind::Keyword if matches!(t.text.as_str(), "class" | "interface" | "enum") => {
                    self.skip_type_body()?
                }
                _ => self.member(&mut class)?,
            }
        }
    }

    fn member(&mut self, class: &mut PendingClass) -> Result<(), SyntaxError> {
        let t = self.peek();
        if t.kind == TokenKind::Identifier
            && t.text == class.name
            && self.at(self.pos + 1).is_punct("(")
        {
            self.pos += 1;
            let method = self.method_rest(class.name.clone())?;
            class.methods.push(method);
            return Ok(());
        }
        let ty = self.type_ref("member declaration")?;
        let name = self.ident("member name")?;
        if self.peek().is_punct("(") {
            let method = self.method_rest(name)?;
            class.methods.push(method);
            return Ok(());
        }
        class.fields.insert(name, ty.clone());
        self.field_rest(class, &ty)
    }

    /// Remaining declarators of a field declaration, through the `;`.
    fn field_rest(&mut self, class: &mut PendingClass, ty: &str) -> Result<(), SyntaxError> {
        loop {
            let t = self.peek();
            match t.text.as_str() {
                _ if t.kind == TokenKind::EndOfInput => return Err(self.unexpected("`;`")),
                ";" if t.kind == TokenKind::Punct => {
                    self.pos += 1;
                    return Ok(());
                }
                "," if t.kind == TokenKind::Punct => {
                    self.pos += 1;
                    let name = self.ident("field name")?;
                    class.fields.insert(name, ty.to_string());
                }
                "(" | "[" | "{" if t.kind == TokenKind::Punct => match self.closers[self.pos] {
                    Some(close) => self.pos = close + 1,
                    None => return Err(self.unexpected("matching bracket")),
                },
                _ => self.pos += 1,
            }
        }
    }

    /// Parameter list, optional `throws` clause and body of a method or constructor.
    fn method_rest(&mut self, name: String) -> Result<PendingMethod, SyntaxError> {
        self.expect_punct("(")?;
        let mut params = Vec::new();
        if self.peek().is_punct(")") {
            self.pos += 1;
        } else {
            loop {
                while self.peek().is_punct("@") || self.peek().is_keyword("final") {
                    if self.peek().is_keyword("final") {
                        self.pos += 1;
                    } else {
                        self.skip_annotation();
                    }
                }
                let ty = self.type_ref("parameter type")?;
                if self.peek().is_punct("...") {
                    self.pos += 1;
                }
                let pname = self.ident("parameter name")?;
                while self.peek().is_punct("[") && self.at(self.pos + 1).is_punct("]") {
                    self.pos += 2;
                }
                params.push((pname, ty));
                if self.peek().is_punct(",") {
                    self.pos += 1;
                } else {
                    self.expect_punct(")")?;
                    break;
                }
            }
        }
        while self.peek().is_punct("[") && self.at(self.pos + 1).is_punct("]") {
            self.pos += 2;
        }
        if self.peek().is_keyword("throws") {
            self.pos += 1;
            loop {
                self.type_ref("exception type")?;
                if self.peek().is_punct(",") {
                    self.pos += 1;
                } else {
                    break;
                }
            }
        }
        if self.peek().is_punct(";") {
            self.pos += 1;
            return Ok(PendingMethod {
                name,
                params,
                body: None,
            });
        }
        if !self.peek().is_punct("{") {
            return Err(self.unexpected("method body"));
        }
        let open = self.pos;
        let close = self.closers[open].ok_or_else(|| self.unexpected("matching `}`"))?;
        self.pos = close + 1;
        Ok(PendingMethod {
            name,
            params,
            body: Some((open + 1, close)),
        })
    }

    /// Scans a body for decision points, local declarations and invocations.
    fn scan_body(
        &self,
        start: usize,
        end: usize,
        class: &PendingClass,
        bindings: &mut BTreeMap<String, String>,
        out: &mut MethodDecl,
    ) {
        let mut anonymous_bodies: HashSet<usize> = HashSet::new();
        let mut i = start;
        while i < end {
            let t = self.at(i);
            let prev = (i > start).then(|| self.at(i - 1));

            if anonymous_bodies.contains(&i) {
                i = self.closers[i].map_or(end, |c| c + 1);
                continue;
            }
            if t.is_keyword("class") && !prev.is_some_and(|p| p.is_punct(".")) {
                // local class: noise
                let mut j = i;
                while j < end && !self.at(j).is_punct("{") {
                    j += 1;
                }
                i = if j < end {
                    self.closers[j].map_or(end, |c| c + 1)
                } else {
                    end
                };
                continue;
            }

            if (t.kind == TokenKind::Keyword && DECISION_KEYWORDS.contains(&t.text.as_str()))
                || (t.kind == TokenKind::Punct && DECISION_OPERATORS.contains(&t.text.as_str()))
            {
                out.decision_points += 1;
            }

            if t.is_keyword("new") {
                if let Some(anon) = self.anonymous_body_after_new(i + 1, end) {
                    anonymous_bodies.insert(anon);
                }
            }

            if !prev.is_some_and(|p| p.is_punct(".") || p.is_keyword("new")) {
                if let Some((var, ty)) = self.local_declaration(i, end) {
                    bindings.insert(var, ty);
                }
            }

            if t.kind == TokenKind::Identifier && i + 1 < end && self.at(i + 1).is_punct("(") {
                if let Some(call) = self.call_site(i, start, class, bindings) {
                    out.invocations.insert(call);
                }
            }
            i += 1;
        }
    }

    /// `Type [<..>] [[]..] name (= | ; | , | : | ))` starting at `i`.
    fn local_declaration(&self, i: usize, end: usize) -> Option<(String, String)> {
        let t = self.at(i);
        let is_type_start = t.kind == TokenKind::Identifier
            || (t.kind == TokenKind::Keyword
                && PRIMITIVES.contains(&t.text.as_str())
                && t.text != "void");
        if !is_type_start {
            return None;
        }
        let mut ty = t.text.clone();
        let mut j = i + 1;
        while j + 1 < end
            && self.at(j).is_punct(".")
            && self.at(j + 1).kind == TokenKind::Identifier
        {
            ty = self.at(j + 1).text.clone();
            j += 2;
        }
        if j < end && self.at(j).is_punct("<") {
            j = self.type_args_end(j, end)?;
        }
        while j + 1 < end && self.at(j).is_punct("[") && self.at(j + 1).is_punct("]") {
            j += 2;
        }
        let name = self.at(j);
        if j + 1 > end || name.kind != TokenKind::Identifier {
            return None;
        }
        let next = self.at(j + 1);
        let terminates = next.kind == TokenKind::Punct
            && matches!(next.text.as_str(), "=" | ";" | "," | ":" | ")");
        terminates.then(|| (name.text.clone(), ty))
    }

    /// End of a type-argument list made only of type-ish tokens, or `None`.
    fn type_args_end(&self, open: usize, end: usize) -> Option<usize> {
        let mut depth = 0usize;
        let mut j = open;
        while j < end {
            let t = self.at(j);
            match (t.kind, t.text.as_str()) {
                (TokenKind::Punct, "<") => depth += 1,
                (TokenKind::Punct, ">") => {
                    depth -= 1;
                    if depth == 0 {
                        return Some(j + 1);
                    }
                }
                (TokenKind::Punct, "," | "." | "?" | "[" | "]" | "&") => {}
                (TokenKind::Identifier, _) => {}
                (TokenKind::Keyword, "extends" | "super") => {}
                (TokenKind::Keyword, k) if PRIMITIVES.contains(&k) => {}
                _ => return None,
            }
            j += 1;
        }
        None
    }

    /// For `new T(...) { ... }`, the index of the anonymous class body's `{`.
    fn anonymous_body_after_new(&self, mut j: usize, end: usize) -> Option<usize> {
        while j < end && (self.at(j).kind == TokenKind::Identifier || self.at(j).is_punct(".")) {
            j += 1;
        }
        if j < end && self.at(j).is_punct("<") {
            j = self.type_args_end(j, end)?;
        }
        if j < end && self.at(j).is_punct("(") {
            let close = self.closers[j]?;
            if close + 1 < end && self.at(close + 1).is_punct("{") {
                return Some(close + 1);
            }
        }
        None
    }

    /// Interprets an identifier followed by `(` at index `i`.
    fn call_site(
        &self,
        i: usize,
        start: usize,
        class: &PendingClass,
        bindings: &BTreeMap<String, String>,
    ) -> Option<MethodRef> {
        let name = self.at(i).text.clone();
        let arity = self.arity_at(i + 1);
        let tok = |k: isize| -> Option<&Token> {
            let idx = i as isize - k;
            (idx >= start as isize).then(|| self.at(idx as usize))
        };

        match tok(1) {
            Some(p) if p.is_punct(".") => {}
            Some(p) if p.is_keyword("new") => return None,
            // `Type name(` is a declaration, e.g. in a lambda-local class.
            Some(p)
                if p.kind == TokenKind::Identifier
                    || (p.kind == TokenKind::Keyword && PRIMITIVES.contains(&p.text.as_str()))
                    || p.is_punct("]") =>
            {
                return None
            }
            _ => {
                return Some(MethodRef {
                    receiver: Receiver::SelfRef,
                    method: name,
                    arity,
                })
            }
        }

        if self.preceded_by_new(i, start) {
            return None;
        }

        let recv = tok(2)?;
        let qualified = tok(3).is_some_and(|t| t.is_punct("."));
        let receiver = if recv.is_keyword("this") && !qualified {
            Receiver::SelfRef
        } else if recv.is_keyword("super") && !qualified {
            Receiver::Type(
                class
                    .superclass
                    .clone()
                    .unwrap_or_else(|| IMPLICIT_ROOT.to_string()),
            )
        } else if recv.kind == TokenKind::Identifier && !qualified {
            Receiver::Type(
                bindings
                    .get(&recv.text)
                    .cloned()
                    .unwrap_or_else(|| recv.text.clone()),
            )
        } else if recv.kind == TokenKind::Identifier
            && tok(4).is_some_and(|t| t.is_keyword("this"))
            && !tok(5).is_some_and(|t| t.is_punct("."))
        {
            // this.field.m(): only fields resolve
            Receiver::Type(class.fields.get(&recv.text)?.clone())
        } else {
            // chained or qualified receiver; not resolvable without type inference
            return None;
        };
        Some(MethodRef {
            receiver,
            method: name,
            arity,
        })
    }

    /// True for the type name in `new a.b.C(`.
    fn preceded_by_new(&self, i: usize, start: usize) -> bool {
        let mut j = i;
        while j >= start + 2
            && self.at(j - 1).is_punct(".")
            && self.at(j - 2).kind == TokenKind::Identifier
        {
            j -= 2;
        }
        j > start && self.at(j - 1).is_keyword("new")
    }

    /// Number of top-level arguments in the parenthesized list opening at `open`.
    fn arity_at(&self, open: usize) -> u32 {
        let Some(close) = self.closers[open] else {
            return 0;
        };
        if close == open + 1 {
            return 0;
        }
        let mut commas = 0;
        let mut j = open + 1;
        while j < close {
            let t = self.at(j);
            if t.kind == TokenKind::Punct && matches!(t.text.as_str(), "(" | "[" | "{") {
                match self.closers[j] {
                    Some(c) => {
                        j = c + 1;
                        continue;
                    }
                    None => break,
                }
            }
            if t.is_punct(",") {
                commas += 1;
            }
            j += 1;
        }
        commas + 1
    }
}

/// Pairs every opening bracket with its closer, one stack per bracket kind.
fn match_brackets(toks: &[Token]) -> Vec<Option<usize>> {
    let mut closers = vec![None; toks.len()];
    let mut stacks: [Vec<usize>; 3] = Default::default();
    for (i, t) in toks.iter().enumerate() {
        if t.kind != TokenKind::Punct {
            continue;
        }
        let (kind, open) = match t.text.as_str() {
            "(" => (0, true),
            ")" => (0, false),
            "[" => (1, true),
            "]" => (1, false),
            "{" => (2, true),
            "}" => (2, false),
            _ => continue,
        };
        if open {
            stacks[kind].push(i);
        } else if let Some(o) = stacks[kind].pop() {
            closers[o] = Some(i);
        }
    }
    closers
}
