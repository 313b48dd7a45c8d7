//! Recursive-descent parser: full script or the first syntax error with
//! line/column and the expected-token set.

use crate::ast::*;
use crate::lexer::{Lexer, Tok};

/// A parse failure: where, what was found, what was expected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub span: Span,
    pub found: String,
    pub expected: Vec<String>,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "syntax error at {}: found `{}`, expected {}",
            self.span,
            self.found,
            self.expected.join(" or ")
        )
    }
}

impl std::error::Error for ParseError {}

pub type PResult<T> = std::result::Result<T, ParseError>;

struct Parser {
    lx: Lexer,
    peeked: Option<(Tok, Span)>,
    /// lexer state from just before the peeked token, for rewinding into
    /// verbatim expression capture
    checkpoint: Option<Lexer>,
}

impl Parser {
    fn new(text: &str) -> Parser {
        Parser {
            lx: Lexer::new(text),
            peeked: None,
            checkpoint: None,
        }
    }

    fn peek(&mut self) -> (Tok, Span) {
        if self.peeked.is_none() {
            self.checkpoint = Some(self.lx.clone());
            self.peeked = Some(self.lx.next_token());
        }
        self.peeked.clone().unwrap()
    }

    fn bump(&mut self) -> (Tok, Span) {
        self.checkpoint = None;
        match self.peeked.take() {
            Some(t) => t,
            None => self.lx.next_token(),
        }
    }

    fn err<T>(&mut self, expected: &[&str]) -> PResult<T> {
        let (tok, span) = self.peek();
        Err(ParseError {
            span,
            found: tok.to_string(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        })
    }

    fn expect(&mut self, tok: Tok, name: &str) -> PResult<Span> {
        let (t, span) = self.peek();
        if t == tok {
            self.bump();
            Ok(span)
        } else {
            self.err(&[name])
        }
    }

    fn ident(&mut self, what: &str) -> PResult<String> {
        let (t, _) = self.peek();
        match t {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.err(&[what]),
        }
    }

    fn keyword(&mut self, kw: &str) -> PResult<()> {
        let (t, _) = self.peek();
        match t {
            Tok::Ident(s) if s == kw => {
                self.bump();
                Ok(())
            }
            _ => self.err(&[kw]),
        }
    }

    fn int(&mut self) -> PResult<i64> {
        let (t, _) = self.peek();
        match t {
            Tok::Int(n) => {
                self.bump();
                Ok(n)
            }
            _ => self.err(&["integer"]),
        }
    }

    /// A raw polynomial expression, captured verbatim up to the enclosing
    /// delimiter. Rewinds any pending peeked token first.
    fn raw_expr(&mut self, what: &str) -> PResult<String> {
        if self.peeked.take().is_some() {
            self.lx = self.checkpoint.take().expect("checkpoint exists for peeked token");
        }
        let (s, span) = self.lx.capture_expr();
        if s.is_empty() {
            return Err(ParseError {
                span,
                found: "<empty>".into(),
                expected: vec![what.to_string()],
            });
        }
        Ok(s)
    }

    fn ring_ref(&mut self) -> PResult<RingRef> {
        let name = self.ident("ring name")?;
        if self.peek().0 == Tok::Dot {
            self.bump();
            let comp = self.ident("square component (B, C or K)")?;
            if comp.len() == 1 && "BCK".contains(&comp) {
                Ok(RingRef::SquareComponent(
                    name,
                    comp.chars().next().unwrap(),
                ))
            } else {
                self.err(&["B", "C", "K"])
            }
        } else {
            Ok(RingRef::Named(name))
        }
    }

    fn fiber_lit(&mut self) -> PResult<FiberLit> {
        let (t, _) = self.peek();
        match t {
            Tok::Ident(s) if s == "one" => {
                self.bump();
                Ok(FiberLit::One)
            }
            Tok::Ident(s) if s == "fiber" => {
                self.bump();
                self.expect(Tok::LParen, "(")?;
                let b = self.raw_expr("B component")?;
                self.expect(Tok::Comma, ",")?;
                let c = self.raw_expr("C component")?;
                self.expect(Tok::RParen, ")")?;
                Ok(FiberLit::Pair(b, c))
            }
            _ => self.err(&["one", "fiber(b, c)"]),
        }
    }

    fn vector(&mut self) -> PResult<Vec<i64>> {
        self.expect(Tok::LParen, "(")?;
        let mut out = Vec::new();
        loop {
            out.push(self.int()?);
            match self.peek().0 {
                Tok::Comma => {
                    self.bump();
                }
                Tok::RParen => {
                    self.bump();
                    return Ok(out);
                }
                _ => return self.err(&[",", ")"]),
            }
        }
    }

    /// a parenthesized list of raw expressions
    fn expr_tuple(&mut self) -> PResult<Vec<String>> {
        self.expect(Tok::LParen, "(")?;
        let mut out = Vec::new();
        if self.peek().0 == Tok::RParen {
            self.bump();
            return Ok(out);
        }
        loop {
            out.push(self.raw_expr("entry")?);
            match self.peek().0 {
                Tok::Comma => {
                    self.bump();
                }
                Tok::RParen => {
                    self.bump();
                    return Ok(out);
                }
                _ => return self.err(&[",", ")"]),
            }
        }
    }

    fn maplist(&mut self) -> PResult<Vec<(String, String)>> {
        self.expect(Tok::LBrace, "{")?;
        let mut out = Vec::new();
        if self.peek().0 == Tok::RBrace {
            self.bump();
            return Ok(out);
        }
        loop {
            let v = self.ident("generator name")?;
            self.expect(Tok::Arrow, "->")?;
            let e = self.raw_expr("image expression")?;
            out.push((v, e));
            match self.peek().0 {
                Tok::Comma => {
                    self.bump();
                }
                Tok::RBrace => {
                    self.bump();
                    return Ok(out);
                }
                _ => return self.err(&[",", "}"]),
            }
        }
    }

    fn optional_bind(&mut self) -> PResult<Option<String>> {
        if let (Tok::Ident(s), _) = self.peek() {
            if s == "as" {
                self.bump();
                return Ok(Some(self.ident("binding name")?));
            }
        }
        Ok(None)
    }

    fn statement(&mut self) -> PResult<(Stmt, Span)> {
        let (tok, span) = self.peek();
        let kw = match tok {
            Tok::Ident(s) => s,
            Tok::Eof => return self.err(&["statement"]),
            _ => return self.err(&["statement keyword"]),
        };
        let stmt = match kw.as_str() {
            "ring" => {
                self.bump();
                let name = self.ident("ring name")?;
                self.expect(Tok::Eq, "=")?;
                let field = {
                    let f = self.ident("field (QQ, Fp(p) or k)")?;
                    match f.as_str() {
                        "QQ" => FieldRef::Rational,
                        "k" => FieldRef::Default,
                        "Fp" => {
                            self.expect(Tok::LParen, "(")?;
                            let p = self.int()?;
                            self.expect(Tok::RParen, ")")?;
                            if p < 2 || p >= (1 << 31) {
                                return self.err(&["prime modulus below 2^31"]);
                            }
                            FieldRef::Prime(p as u32)
                        }
                        _ => return self.err(&["QQ", "Fp(p)", "k"]),
                    }
                };
                self.expect(Tok::LBracket, "[")?;
                let mut vars = Vec::new();
                if self.peek().0 != Tok::RBracket {
                    loop {
                        vars.push(self.ident("variable name")?);
                        match self.peek().0 {
                            Tok::Comma => {
                                self.bump();
                            }
                            Tok::RBracket => break,
                            _ => return self.err(&[",", "]"]),
                        }
                    }
                }
                self.expect(Tok::RBracket, "]")?;
                let mut relations = Vec::new();
                if let (Tok::Ident(s), _) = self.peek() {
                    if s == "/" {
                        self.bump();
                        relations = self.expr_tuple()?;
                    }
                }
                Stmt::Ring {
                    name,
                    field,
                    vars,
                    relations,
                }
            }
            "hom" => {
                self.bump();
                let name = self.ident("hom name")?;
                self.expect(Tok::Colon, ":")?;
                let source = self.ring_ref()?;
                self.expect(Tok::Arrow, "->")?;
                let target = self.ring_ref()?;
                let images = self.maplist()?;
                Stmt::Hom {
                    name,
                    source,
                    target,
                    images,
                }
            }
            "square" => {
                self.bump();
                let name = self.ident("square name")?;
                self.expect(Tok::Eq, "=")?;
                self.keyword("pushout")?;
                self.expect(Tok::LParen, "(")?;
                let beta = self.ident("beta hom name")?;
                self.expect(Tok::Comma, ",")?;
                let pi = self.ident("pi hom name")?;
                self.expect(Tok::RParen, ")")?;
                Stmt::Square { name, beta, pi }
            }
            "module" => {
                self.bump();
                let name = self.ident("module name")?;
                self.keyword("over")?;
                let over = self.ident("ring or square name")?;
                self.expect(Tok::Eq, "=")?;
                let kind = self.ident("free, coker or patch")?;
                let body = match kind.as_str() {
                    "free" => ModuleBody::Free(self.int()? as usize),
                    "coker" => {
                        let mut cols = vec![self.expr_tuple()?];
                        while self.peek().0 == Tok::Comma {
                            self.bump();
                            cols.push(self.expr_tuple()?);
                        }
                        ModuleBody::Coker(cols)
                    }
                    "patch" => {
                        self.expect(Tok::LParen, "(")?;
                        let my = self.ident("M_Y module name")?;
                        self.expect(Tok::Comma, ",")?;
                        let mz = self.ident("M_Z module name")?;
                        self.expect(Tok::Comma, ",")?;
                        let mt = self.ident("M_T module name")?;
                        self.expect(Tok::Semi, ";")?;
                        let al = self.ident("alpha matrix name")?;
                        self.expect(Tok::Comma, ",")?;
                        let be = self.ident("beta matrix name")?;
                        self.expect(Tok::RParen, ")")?;
                        ModuleBody::Patch(my, mz, mt, al, be)
                    }
                    _ => return self.err(&["free", "coker", "patch"]),
                };
                Stmt::Module { name, over, body }
            }
            "matrix" => {
                self.bump();
                let name = self.ident("matrix name")?;
                self.keyword("over")?;
                let over = self.ring_ref()?;
                self.expect(Tok::Eq, "=")?;
                let mut rows = vec![self.expr_tuple()?];
                while self.peek().0 == Tok::Comma {
                    self.bump();
                    rows.push(self.expr_tuple()?);
                }
                Stmt::Matrix { name, over, rows }
            }
            "valring" => {
                self.bump();
                let name = self.ident("valuation ring name")?;
                self.expect(Tok::Eq, "=")?;
                let expr = self.val_expr()?;
                Stmt::ValRing { name, expr }
            }
            "poset" => {
                self.bump();
                let name = self.ident("poset name")?;
                self.expect(Tok::Eq, "=")?;
                self.expect(Tok::LBrace, "{")?;
                let mut arrows = Vec::new();
                let mut isolated = Vec::new();
                if self.peek().0 != Tok::RBrace {
                    loop {
                        let a = self.ident("point name")?;
                        if self.peek().0 == Tok::Gt {
                            self.bump();
                            let b = self.ident("point name")?;
                            arrows.push((a, b));
                        } else {
                            isolated.push(a);
                        }
                        match self.peek().0 {
                            Tok::Comma => {
                                self.bump();
                            }
                            Tok::RBrace => break,
                            _ => return self.err(&[",", "}"]),
                        }
                    }
                }
                self.expect(Tok::RBrace, "}")?;
                Stmt::Poset {
                    name,
                    arrows,
                    isolated,
                }
            }
            "posetmap" => {
                self.bump();
                let name = self.ident("map name")?;
                self.expect(Tok::Colon, ":")?;
                let source = self.ident("source poset")?;
                self.expect(Tok::Arrow, "->")?;
                let target = self.ident("target poset")?;
                let images = self.maplist()?;
                Stmt::PosetMap {
                    name,
                    source,
                    target,
                    images,
                }
            }
            "toppush" => {
                self.bump();
                let name = self.ident("space name")?;
                self.expect(Tok::Eq, "=")?;
                self.keyword("push")?;
                self.expect(Tok::LParen, "(")?;
                let y = self.ident("Y poset")?;
                self.expect(Tok::Comma, ",")?;
                let z = self.ident("Z poset")?;
                self.expect(Tok::Comma, ",")?;
                let t = self.ident("T poset")?;
                self.expect(Tok::Semi, ";")?;
                let f = self.ident("f map")?;
                self.expect(Tok::Comma, ",")?;
                let g = self.ident("g map")?;
                self.expect(Tok::RParen, ")")?;
                Stmt::TopPush {
                    name,
                    y,
                    z,
                    t,
                    f,
                    g,
                }
            }
            "etale" => {
                self.bump();
                let name = self.ident("algebra name")?;
                self.keyword("over")?;
                let over = self.ring_ref()?;
                self.expect(Tok::Eq, "=")?;
                self.keyword("std")?;
                self.expect(Tok::LParen, "(")?;
                let var = self.ident("adjoined variable")?;
                self.expect(Tok::Semi, ";")?;
                let monic = self.raw_expr("monic polynomial")?;
                self.expect(Tok::Semi, ";")?;
                let invert = self.raw_expr("inverted element")?;
                self.expect(Tok::RParen, ")")?;
                Stmt::Etale {
                    name,
                    over,
                    var,
                    monic,
                    invert,
                }
            }
            "charts" => {
                self.bump();
                let name = self.ident("chart family name")?;
                self.expect(Tok::Eq, "=")?;
                self.expect(Tok::LBracket, "[")?;
                let mut squares = Vec::new();
                if self.peek().0 != Tok::RBracket {
                    loop {
                        squares.push(self.ident("square name")?);
                        match self.peek().0 {
                            Tok::Comma => {
                                self.bump();
                            }
                            Tok::RBracket => break,
                            _ => return self.err(&[",", "]"]),
                        }
                    }
                }
                self.expect(Tok::RBracket, "]")?;
                Stmt::Charts { name, squares }
            }
            "overlap" => {
                self.bump();
                let charts = self.ident("chart family name")?;
                self.expect(Tok::LParen, "(")?;
                let i = self.int()? as usize;
                self.expect(Tok::Comma, ",")?;
                let j = self.int()? as usize;
                self.expect(Tok::RParen, ")")?;
                self.expect(Tok::Eq, "=")?;
                self.keyword("loc")?;
                self.expect(Tok::LParen, "(")?;
                let left_square = self.ident("square name")?;
                self.keyword("at")?;
                let left_at = self.fiber_lit()?;
                self.expect(Tok::RParen, ")")?;
                self.expect(Tok::Tilde, "~")?;
                self.keyword("loc")?;
                self.expect(Tok::LParen, "(")?;
                let right_square = self.ident("square name")?;
                self.keyword("at")?;
                let right_at = self.fiber_lit()?;
                self.expect(Tok::RParen, ")")?;
                self.keyword("via")?;
                self.expect(Tok::LParen, "(")?;
                let hb = self.ident("B-level hom")?;
                self.expect(Tok::Comma, ",")?;
                let hc = self.ident("C-level hom")?;
                self.expect(Tok::Comma, ",")?;
                let hk = self.ident("K-level hom")?;
                self.expect(Tok::RParen, ")")?;
                Stmt::Overlap {
                    charts,
                    i,
                    j,
                    left_square,
                    left_at,
                    right_square,
                    right_at,
                    via: (hb, hc, hk),
                }
            }
            "conductor" => {
                self.bump();
                let square = self.ident("square name")?;
                Stmt::Conductor { square }
            }
            "present" => {
                self.bump();
                let square = self.ident("square name")?;
                self.keyword("bound")?;
                let bound = self.int()? as u32;
                let bind = self.optional_bind()?;
                Stmt::Present {
                    square,
                    bound,
                    bind,
                }
            }
            "localize" => {
                self.bump();
                let square = self.ident("square name")?;
                self.keyword("at")?;
                let at = self.fiber_lit()?;
                let bind = self.optional_bind()?;
                Stmt::Localize { square, at, bind }
            }
            "glue" => {
                self.bump();
                let charts = self.ident("chart family name")?;
                Stmt::Glue { charts }
            }
            "lift" => {
                self.bump();
                self.keyword("etale")?;
                let etale = self.ident("étale algebra name")?;
                self.keyword("along")?;
                let along = self.ident("surjection name")?;
                let bind = self.optional_bind()?;
                Stmt::LiftEtale {
                    etale,
                    along,
                    bind,
                }
            }
            "pushforward" => {
                self.bump();
                let module = self.ident("module name")?;
                Stmt::Pushforward { module }
            }
            "suite" => {
                self.bump();
                self.keyword("example337")?;
                self.keyword("n")?;
                self.expect(Tok::Eq, "=")?;
                let n = self.int()? as u32;
                Stmt::SuiteExample337 { n }
            }
            "check" => {
                self.bump();
                let kind_kw = self.ident("check kind")?;
                let kind = match kind_kw.as_str() {
                    "fiber" => {
                        let s = self.ident("square name")?;
                        self.expect(Tok::Colon, ":")?;
                        let p = self.raw_expr("C element")?;
                        CheckKind::Fiber(s, p)
                    }
                    "bicartesian" => {
                        let s = self.ident("square name")?;
                        self.keyword("candidate")?;
                        self.expect(Tok::LParen, "(")?;
                        let a = self.ring_ref()?;
                        self.expect(Tok::Comma, ",")?;
                        let p = self.ident("hom to B")?;
                        self.expect(Tok::Comma, ",")?;
                        let q = self.ident("hom to C")?;
                        self.expect(Tok::RParen, ")")?;
                        CheckKind::Bicartesian(s, a, p, q)
                    }
                    "adjunction" => {
                        let dir = self.ident("unit or counit")?;
                        let unit = match dir.as_str() {
                            "unit" => true,
                            "counit" => false,
                            _ => return self.err(&["unit", "counit"]),
                        };
                        let m = self.ident("module name")?;
                        CheckKind::Adjunction(unit, m)
                    }
                    "flatfp" => CheckKind::FlatFp(self.ident("module name")?),
                    "morphism" => {
                        let s = self.ident("source square")?;
                        self.expect(Tok::Arrow, "->")?;
                        let d = self.ident("target square")?;
                        self.keyword("via")?;
                        self.expect(Tok::LParen, "(")?;
                        let hb = self.ident("B hom")?;
                        self.expect(Tok::Comma, ",")?;
                        let hc = self.ident("C hom")?;
                        self.expect(Tok::Comma, ",")?;
                        let hk = self.ident("K hom")?;
                        self.expect(Tok::RParen, ")")?;
                        CheckKind::Morphism(s, d, hb, hc, hk)
                    }
                    "semival" => {
                        let v = self.ident("valuation ring name")?;
                        self.expect(Tok::LBrace, "{")?;
                        self.keyword("x")?;
                        self.expect(Tok::Arrow, "->")?;
                        let a = self.vector()?;
                        self.expect(Tok::Comma, ",")?;
                        self.keyword("y")?;
                        self.expect(Tok::Arrow, "->")?;
                        let b = self.vector()?;
                        self.expect(Tok::RBrace, "}")?;
                        CheckKind::Semival(v, a, b)
                    }
                    "valfg" => {
                        let v = self.ident("valuation ring name")?;
                        self.expect(Tok::Colon, ":")?;
                        let mut cones = vec![self.cone_lit()?];
                        while self.peek().0 == Tok::Pipe {
                            self.bump();
                            cones.push(self.cone_lit()?);
                        }
                        CheckKind::ValFg(v, cones)
                    }
                    "universal" => CheckKind::Universal(self.ident("pushout name")?),
                    "roundtrip" => CheckKind::Roundtrip(self.ident("module name")?),
                    _ => {
                        return self.err(&[
                            "fiber",
                            "bicartesian",
                            "adjunction",
                            "flatfp",
                            "morphism",
                            "semival",
                            "valfg",
                            "universal",
                            "roundtrip",
                        ])
                    }
                };
                Stmt::Check { kind }
            }
            _ => {
                return self.err(&[
                    "ring", "hom", "square", "module", "matrix", "valring", "poset",
                    "posetmap", "toppush", "etale", "charts", "overlap", "conductor",
                    "present", "localize", "glue", "lift", "pushforward", "suite", "check",
                ])
            }
        };
        self.expect(Tok::Semi, ";")?;
        Ok((stmt, span))
    }

    fn cone_lit(&mut self) -> PResult<Vec<ConeCoordLit>> {
        self.keyword("cone")?;
        self.expect(Tok::LParen, "(")?;
        let mut out = Vec::new();
        loop {
            let kw = self.ident("eq, ge or free")?;
            let c = match kw.as_str() {
                "eq" => ConeCoordLit::Eq(self.int()?),
                "ge" => ConeCoordLit::Ge(self.int()?),
                "free" => ConeCoordLit::Free,
                _ => return self.err(&["eq", "ge", "free"]),
            };
            out.push(c);
            match self.peek().0 {
                Tok::Comma => {
                    self.bump();
                }
                Tok::RParen => {
                    self.bump();
                    return Ok(out);
                }
                _ => return self.err(&[",", ")"]),
            }
        }
    }

    fn val_expr(&mut self) -> PResult<ValExpr> {
        let kw = self.ident("dvr or compose")?;
        match kw.as_str() {
            "dvr" => Ok(ValExpr::Dvr(self.ident("generator name")?)),
            "compose" => {
                self.expect(Tok::LParen, "(")?;
                let a = self.val_expr()?;
                self.expect(Tok::Comma, ",")?;
                let b = self.val_expr()?;
                self.expect(Tok::RParen, ")")?;
                Ok(ValExpr::Compose(Box::new(a), Box::new(b)))
            }
            _ => self.err(&["dvr", "compose"]),
        }
    }
}

/// Parses a full script or reports the first syntax error.
pub fn parse(text: &str) -> PResult<Script> {
    let mut p = Parser::new(text);
    let mut statements = Vec::new();
    loop {
        if p.peeked.is_none() && p.lx.at_eof() {
            break;
        }
        if p.peek().0 == Tok::Eof {
            break;
        }
        statements.push(p.statement()?);
    }
    Ok(Script { statements })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_input_is_an_empty_script() {
        let s = parse("").unwrap();
        assert!(s.is_empty());
        let s = parse("  # just a comment\n").unwrap();
        assert!(s.is_empty());
    }

    #[test]
    fn ring_and_hom_roundtrip() {
        let text = "ring R = QQ[x, y] / (y^2 - x^3 - x^2);\nhom h: R -> S { x -> t^2 - 1, y -> t^3 - t };\n";
        let s = parse(text).unwrap();
        assert_eq!(s.len(), 2);
        let printed = s.to_string();
        let s2 = parse(&printed).unwrap();
        assert_eq!(s, s2);
    }

    #[test]
    fn truncated_hom_reports_position() {
        let err = parse("hom h: R -> ").unwrap_err();
        assert_eq!(err.span.line, 1);
        assert!(err.expected.iter().any(|e| e.contains("ring name")));
    }

    #[test]
    fn square_module_statements() {
        let text = "square S = pushout(beta, pi);\nmodule M over S = patch(MY, MZ, MT; AL, BE);\nmodule N over A = coker (x, y), (y, 0);\nmodule F over A = free 2;\n";
        let s = parse(text).unwrap();
        assert_eq!(s.len(), 4);
        let printed = s.to_string();
        assert_eq!(parse(&printed).unwrap(), s);
    }

    #[test]
    fn poset_and_push_statements() {
        let text = "poset P = { eta > p1, eta > p2, q };\nposetmap f: T -> Y { p1 -> y, p2 -> y };\ntoppush X = push(Y, Z, T; f, g);\ncheck universal X;\n";
        let s = parse(text).unwrap();
        assert_eq!(s.len(), 4);
        assert_eq!(parse(&s.to_string()).unwrap(), s);
    }

    #[test]
    fn valuation_statements() {
        let text = "valring V = compose(dvr x, dvr y);\nsuite example337 n = 3;\ncheck semival V { x -> (0, 1), y -> (1, 0) };\ncheck valfg V : cone(ge 1, free) | cone(eq 0, ge 2);\n";
        let s = parse(text).unwrap();
        assert_eq!(s.len(), 4);
        assert_eq!(parse(&s.to_string()).unwrap(), s);
    }

    #[test]
    fn chart_statements() {
        let text = "charts D = [S1, S2];\noverlap D(0, 1) = loc(S1 at fiber(0, t^2 - 1)) ~ loc(S2 at one) via (hb, hc, hk);\nglue D;\nlift etale Kp along pi as Cp;\n";
        let s = parse(text).unwrap();
        assert_eq!(s.len(), 4);
        assert_eq!(parse(&s.to_string()).unwrap(), s);
    }

    #[test]
    fn etale_and_checks() {
        let text = "etale Kp over K = std(u; u^2 - u; 1);\ncheck bicartesian S candidate (A, p, q);\ncheck adjunction unit M;\ncheck flatfp M;\ncheck morphism S -> S2 via (hb, hc, hk);\ncheck fiber S : xb*y + x^2;\n";
        let s = parse(text).unwrap();
        assert_eq!(s.len(), 6);
        assert_eq!(parse(&s.to_string()).unwrap(), s);
    }

    #[test]
    fn nine_declaration_nodal_script() {
        let text = "\
ring B = QQ[];
ring C = QQ[t];
ring K = QQ[t] / (t^2 - 1);
hom beta: B -> K { };
hom pi: C -> K { t -> t };
square S = pushout(beta, pi);
conductor S;
present S bound 4 as A;
localize S at fiber(0, t^2 - 1);
";
        let s = parse(text).unwrap();
        assert_eq!(s.len(), 9);
        assert_eq!(parse(&s.to_string()).unwrap(), s);
    }
}
