//! The script AST with source spans and a canonical printer.
//!
//! `parse ∘ print` is the identity on canonical-form scripts; the printer is
//! the normative formatter.

use std::fmt;

/// Line/column position (1-based) of a token.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// Field selector in a ring declaration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldRef {
    /// the configured default field (`k`)
    Default,
    Rational,
    Prime(u32),
}

impl fmt::Display for FieldRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldRef::Default => write!(f, "k"),
            FieldRef::Rational => write!(f, "QQ"),
            FieldRef::Prime(p) => write!(f, "Fp({p})"),
        }
    }
}

/// Reference to a ring: a named ring, a component of a square, or the ring
/// of a named étale algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RingRef {
    Named(String),
    /// `S.B`, `S.C`, `S.K` for a square name `S`
    SquareComponent(String, char),
}

impl fmt::Display for RingRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingRef::Named(n) => write!(f, "{n}"),
            RingRef::SquareComponent(n, c) => write!(f, "{n}.{c}"),
        }
    }
}

/// A fiber element literal `fiber(b, c)` or the unit `one`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FiberLit {
    One,
    Pair(String, String),
}

impl fmt::Display for FiberLit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiberLit::One => write!(f, "one"),
            FiberLit::Pair(b, c) => write!(f, "fiber({b}, {c})"),
        }
    }
}

/// Module right-hand sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModuleBody {
    Free(usize),
    /// relation columns; each column lists one entry per generator
    Coker(Vec<Vec<String>>),
    /// `patch(MY, MZ, MT; AL, BE)` over a square
    Patch(String, String, String, String, String),
}

/// Valuation ring expressions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValExpr {
    Dvr(String),
    Compose(Box<ValExpr>, Box<ValExpr>),
}

impl fmt::Display for ValExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValExpr::Dvr(n) => write!(f, "dvr {n}"),
            ValExpr::Compose(a, b) => write!(f, "compose({a}, {b})"),
        }
    }
}

/// A cone literal for value-ideal tests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConeCoordLit {
    Eq(i64),
    Ge(i64),
    Free,
}

impl fmt::Display for ConeCoordLit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConeCoordLit::Eq(n) => write!(f, "eq {n}"),
            ConeCoordLit::Ge(n) => write!(f, "ge {n}"),
            ConeCoordLit::Free => write!(f, "free"),
        }
    }
}

/// Check kinds under the `check` keyword.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckKind {
    /// `check fiber S : <poly>`
    Fiber(String, String),
    /// `check bicartesian S candidate (A, p, q)`
    Bicartesian(String, RingRef, String, String),
    /// `check adjunction unit|counit M`
    Adjunction(bool, String),
    /// `check flatfp M`
    FlatFp(String),
    /// `check morphism S -> S2 via (hb, hc, hk)`
    Morphism(String, String, String, String, String),
    /// `check semival V { x -> (..), y -> (..) }`
    Semival(String, Vec<i64>, Vec<i64>),
    /// `check valfg V : cone(..) | cone(..)`
    ValFg(String, Vec<Vec<ConeCoordLit>>),
    /// `check universal X` on a toppush result
    Universal(String),
    /// `check roundtrip M` (pushforward ∘ pullback ≅ id and back)
    Roundtrip(String),
}

/// One statement of a script.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stmt {
    Ring {
        name: String,
        field: FieldRef,
        vars: Vec<String>,
        relations: Vec<String>,
    },
    Hom {
        name: String,
        source: RingRef,
        target: RingRef,
        images: Vec<(String, String)>,
    },
    Square {
        name: String,
        beta: String,
        pi: String,
    },
    Module {
        name: String,
        over: String,
        body: ModuleBody,
    },
    Matrix {
        name: String,
        over: RingRef,
        rows: Vec<Vec<String>>,
    },
    ValRing {
        name: String,
        expr: ValExpr,
    },
    Poset {
        name: String,
        arrows: Vec<(String, String)>,
        isolated: Vec<String>,
    },
    PosetMap {
        name: String,
        source: String,
        target: String,
        images: Vec<(String, String)>,
    },
    TopPush {
        name: String,
        y: String,
        z: String,
        t: String,
        f: String,
        g: String,
    },
    Etale {
        name: String,
        over: RingRef,
        var: String,
        monic: String,
        invert: String,
    },
    Charts {
        name: String,
        squares: Vec<String>,
    },
    Overlap {
        charts: String,
        i: usize,
        j: usize,
        left_square: String,
        left_at: FiberLit,
        right_square: String,
        right_at: FiberLit,
        via: (String, String, String),
    },
    Conductor {
        square: String,
    },
    Present {
        square: String,
        bound: u32,
        bind: Option<String>,
    },
    Localize {
        square: String,
        at: FiberLit,
        bind: Option<String>,
    },
    Glue {
        charts: String,
    },
    LiftEtale {
        etale: String,
        along: String,
        bind: Option<String>,
    },
    Pushforward {
        module: String,
    },
    SuiteExample337 {
        n: u32,
    },
    Check {
        kind: CheckKind,
    },
}

/// A parsed script: statements with the span of their first token.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Script {
    pub statements: Vec<(Stmt, Span)>,
}

impl Script {
    pub fn len(&self) -> usize {
        self.statements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.statements.is_empty()
    }
}

fn join(items: &[String]) -> String {
    items.join(", ")
}

impl fmt::Display for Stmt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stmt::Ring {
                name,
                field,
                vars,
                relations,
            } => {
                write!(f, "ring {name} = {field}[{}]", join(vars))?;
                if !relations.is_empty() {
                    write!(f, " / ({})", join(relations))?;
                }
                write!(f, ";")
            }
            Stmt::Hom {
                name,
                source,
                target,
                images,
            } => {
                let body: Vec<String> =
                    images.iter().map(|(v, e)| format!("{v} -> {e}")).collect();
                write!(f, "hom {name}: {source} -> {target} {{ {} }};", body.join(", "))
            }
            Stmt::Square { name, beta, pi } => {
                write!(f, "square {name} = pushout({beta}, {pi});")
            }
            Stmt::Module { name, over, body } => match body {
                ModuleBody::Free(r) => write!(f, "module {name} over {over} = free {r};"),
                ModuleBody::Coker(cols) => {
                    let cs: Vec<String> =
                        cols.iter().map(|c| format!("({})", join(c))).collect();
                    write!(f, "module {name} over {over} = coker {};", cs.join(", "))
                }
                ModuleBody::Patch(my, mz, mt, al, be) => write!(
                    f,
                    "module {name} over {over} = patch({my}, {mz}, {mt}; {al}, {be});"
                ),
            },
            Stmt::Matrix { name, over, rows } => {
                let rs: Vec<String> = rows.iter().map(|r| format!("({})", join(r))).collect();
                write!(f, "matrix {name} over {over} = {};", rs.join(", "))
            }
            Stmt::ValRing { name, expr } => write!(f, "valring {name} = {expr};"),
            Stmt::Poset {
                name,
                arrows,
                isolated,
            } => {
                let mut items: Vec<String> =
                    arrows.iter().map(|(a, b)| format!("{a} > {b}")).collect();
                items.extend(isolated.iter().cloned());
                write!(f, "poset {name} = {{ {} }};", items.join(", "))
            }
            Stmt::PosetMap {
                name,
                source,
                target,
                images,
            } => {
                let body: Vec<String> =
                    images.iter().map(|(v, e)| format!("{v} -> {e}")).collect();
                write!(
                    f,
                    "posetmap {name}: {source} -> {target} {{ {} }};",
                    body.join(", ")
                )
            }
            Stmt::TopPush { name, y, z, t, f: ff, g } => {
                write!(f, "toppush {name} = push({y}, {z}, {t}; {ff}, {g});")
            }
            Stmt::Etale {
                name,
                over,
                var,
                monic,
                invert,
            } => write!(f, "etale {name} over {over} = std({var}; {monic}; {invert});"),
            Stmt::Charts { name, squares } => {
                write!(f, "charts {name} = [{}];", join(squares))
            }
            Stmt::Overlap {
                charts,
                i,
                j,
                left_square,
                left_at,
                right_square,
                right_at,
                via,
            } => write!(
                f,
                "overlap {charts}({i}, {j}) = loc({left_square} at {left_at}) ~ loc({right_square} at {right_at}) via ({}, {}, {});",
                via.0, via.1, via.2
            ),
            Stmt::Conductor { square } => write!(f, "conductor {square};"),
            Stmt::Present {
                square,
                bound,
                bind,
            } => {
                write!(f, "present {square} bound {bound}")?;
                if let Some(b) = bind {
                    write!(f, " as {b}")?;
                }
                write!(f, ";")
            }
            Stmt::Localize { square, at, bind } => {
                write!(f, "localize {square} at {at}")?;
                if let Some(b) = bind {
                    write!(f, " as {b}")?;
                }
                write!(f, ";")
            }
            Stmt::Glue { charts } => write!(f, "glue {charts};"),
            Stmt::LiftEtale {
                etale,
                along,
                bind,
            } => {
                write!(f, "lift etale {etale} along {along}")?;
                if let Some(b) = bind {
                    write!(f, " as {b}")?;
                }
                write!(f, ";")
            }
            Stmt::Pushforward { module } => write!(f, "pushforward {module};"),
            Stmt::SuiteExample337 { n } => write!(f, "suite example337 n = {n};"),
            Stmt::Check { kind } => match kind {
                CheckKind::Fiber(s, p) => write!(f, "check fiber {s} : {p};"),
                CheckKind::Bicartesian(s, a, p, q) => {
                    write!(f, "check bicartesian {s} candidate ({a}, {p}, {q});")
                }
                CheckKind::Adjunction(unit, m) => write!(
                    f,
                    "check adjunction {} {m};",
                    if *unit { "unit" } else { "counit" }
                ),
                CheckKind::FlatFp(m) => write!(f, "check flatfp {m};"),
                CheckKind::Morphism(s, d, hb, hc, hk) => {
                    write!(f, "check morphism {s} -> {d} via ({hb}, {hc}, {hk});")
                }
                CheckKind::Semival(v, a, b) => {
                    let fmt_vec = |v: &[i64]| {
                        v.iter()
                            .map(|x| x.to_string())
                            .collect::<Vec<_>>()
                            .join(", ")
                    };
                    write!(
                        f,
                        "check semival {v} {{ x -> ({}), y -> ({}) }};",
                        fmt_vec(a),
                        fmt_vec(b)
                    )
                }
                CheckKind::ValFg(v, cones) => {
                    let cs: Vec<String> = cones
                        .iter()
                        .map(|c| {
                            format!(
                                "cone({})",
                                c.iter()
                                    .map(|x| x.to_string())
                                    .collect::<Vec<_>>()
                                    .join(", ")
                            )
                        })
                        .collect();
                    write!(f, "check valfg {v} : {};", cs.join(" | "))
                }
                CheckKind::Universal(x) => write!(f, "check universal {x};"),
                CheckKind::Roundtrip(m) => write!(f, "check roundtrip {m};"),
            },
        }
    }
}

impl fmt::Display for Script {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (stmt, _) in &self.statements {
            writeln!(f, "{stmt}")?;
        }
        Ok(())
    }
}
