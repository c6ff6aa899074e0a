//! Group literals: an LL(1) grammar over a small token stream.
//!
//! ```text
//! literal  := "perm" ":" perms | "abelian" ":" ints | name [ "(" args ")" ]
//! perms    := cycles { ";" cycles }
//! cycles   := { "(" { int } ")" }
//! ints     := int { "," int }
//! ```

use std::fmt;
use std::sync::Arc;

use towergroup::arith::is_prime;
use towergroup::catalog::{abelian, alternating, cyclic, dihedral, quaternion, symmetric};
use towergroup::extensions::fc_group;
use towergroup::fqlin::{gl, pgl, psl, sl, unitriangular};
use towergroup::group::sylow_subgroup;
use towergroup::products::wreath_regular;
use towergroup::abelian::AbelianGroup;
use towergroup::{close_group, GroupError, GroupRef, Limits, Permutation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupLiteral {
    Perm(Vec<Vec<Vec<u32>>>),
    Abelian(Vec<u64>),
    Q8,
    D8,
    Cyclic(u64),
    Dihedral(u64),
    Symmetric(u64),
    Alternating(u64),
    Heisenberg(u64),
    Fc(Vec<u64>),
    Gl(u64, u64),
    Sl(u64, u64),
    Pgl(u64, u64),
    Psl(u64, u64),
    Unitriangular(u64, u64),
    Wreath(Box<GroupLiteral>, Box<GroupLiteral>),
    Sylow(Box<GroupLiteral>, u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub position: usize,
    pub expected: Vec<String>,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "parse error at position {}: expected one of [{}], found {}",
            self.position,
            self.expected.join(", "),
            self.found
        )
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(u64),
    Sym(char),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier '{s}'"),
            Tok::Int(n) => write!(f, "integer {n}"),
            Tok::Sym(c) => write!(f, "'{c}'"),
            Tok::End => write!(f, "end of input"),
        }
    }
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = src.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c.is_ascii_digit() {
            let mut value: u64 = 0;
            while let Some(&(_, d)) = chars.peek() {
                let Some(digit) = d.to_digit(10) else { break };
                value = value
                    .checked_mul(10)
                    .and_then(|v| v.checked_add(digit as u64))
                    .ok_or_else(|| ParseError {
                        position: pos,
                        expected: vec!["integer below 2^64".into()],
                        found: "overflowing integer".into(),
                    })?;
                chars.next();
            }
            out.push((pos, Tok::Int(value)));
        } else if c.is_ascii_alphabetic() {
            let mut s = String::new();
            while let Some(&(_, d)) = chars.peek() {
                if !d.is_ascii_alphanumeric() && d != '_' {
                    break;
                }
                s.push(d.to_ascii_lowercase());
                chars.next();
            }
            out.push((pos, Tok::Ident(s)));
        } else if "(),;:".contains(c) {
            out.push((pos, Tok::Sym(c)));
            chars.next();
        } else {
            return Err(ParseError {
                position: pos,
                expected: vec!["identifier".into(), "integer".into(), "'(' ')' ',' ';' ':'".into()],
                found: format!("'{c}'"),
            });
        }
    }
    out.push((src.len(), Tok::End));
    Ok(out)
}

const NAMES: [&str; 17] = [
    "perm", "abelian", "q8", "d8", "cyc", "dihedral", "sym", "alt", "heis", "fc", "gl", "sl", "pgl",
    "psl", "u", "wreath", "sylow",
];

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        ParseError {
            position: self.toks[self.pos].0,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().to_string(),
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<(), ParseError> {
        if *self.peek() == Tok::Sym(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&[&format!("'{c}'")]))
        }
    }

    fn int(&mut self) -> Result<u64, ParseError> {
        match *self.peek() {
            Tok::Int(n) => {
                self.pos += 1;
                Ok(n)
            }
            _ => Err(self.error(&["integer"])),
        }
    }

    fn int_list(&mut self) -> Result<Vec<u64>, ParseError> {
        let mut out = vec![self.int()?];
        while *self.peek() == Tok::Sym(',') {
            self.pos += 1;
            out.push(self.int()?);
        }
        Ok(out)
    }

    fn cycles(&mut self) -> Result<Vec<Vec<u32>>, ParseError> {
        let mut out = Vec::new();
        while *self.peek() == Tok::Sym('(') {
            self.pos += 1;
            let mut cycle = Vec::new();
            while let Tok::Int(n) = *self.peek() {
                let point = u32::try_from(n).map_err(|_| self.error(&["point below 2^32"]))?;
                cycle.push(point);
                self.pos += 1;
            }
            if *self.peek() != Tok::Sym(')') {
                return Err(self.error(&["integer", "')'"]));
            }
            self.pos += 1;
            out.push(cycle);
        }
        Ok(out)
    }

    fn args<const K: usize>(&mut self) -> Result<[u64; K], ParseError> {
        self.expect_sym('(')?;
        let mut out = [0; K];
        for (k, slot) in out.iter_mut().enumerate() {
            if k > 0 {
                self.expect_sym(',')?;
            }
            *slot = self.int()?;
        }
        self.expect_sym(')')?;
        Ok(out)
    }

    fn literal(&mut self) -> Result<GroupLiteral, ParseError> {
        let name = match self.peek() {
            Tok::Ident(s) if NAMES.contains(&s.as_str()) => s.clone(),
            _ => return Err(self.error(&NAMES)),
        };
        self.pos += 1;
        Ok(match name.as_str() {
            "perm" => {
                self.expect_sym(':')?;
                let mut gens = vec![self.cycles()?];
                while *self.peek() == Tok::Sym(';') {
                    self.pos += 1;
                    gens.push(self.cycles()?);
                }
                GroupLiteral::Perm(gens)
            }
            "abelian" => {
                self.expect_sym(':')?;
                GroupLiteral::Abelian(self.int_list()?)
            }
            "q8" => GroupLiteral::Q8,
            "d8" => GroupLiteral::D8,
            "cyc" => GroupLiteral::Cyclic(self.args::<1>()?[0]),
            "dihedral" => GroupLiteral::Dihedral(self.args::<1>()?[0]),
            "sym" => GroupLiteral::Symmetric(self.args::<1>()?[0]),
            "alt" => GroupLiteral::Alternating(self.args::<1>()?[0]),
            "heis" => GroupLiteral::Heisenberg(self.args::<1>()?[0]),
            "fc" => {
                self.expect_sym('(')?;
                let v = self.int_list()?;
                self.expect_sym(')')?;
                GroupLiteral::Fc(v)
            }
            "gl" | "sl" | "pgl" | "psl" | "u" => {
                let [n, q] = self.args::<2>()?;
                match name.as_str() {
                    "gl" => GroupLiteral::Gl(n, q),
                    "sl" => GroupLiteral::Sl(n, q),
                    "pgl" => GroupLiteral::Pgl(n, q),
                    "psl" => GroupLiteral::Psl(n, q),
                    _ => GroupLiteral::Unitriangular(n, q),
                }
            }
            "wreath" => {
                self.expect_sym('(')?;
                let a = self.literal()?;
                self.expect_sym(',')?;
                let b = self.literal()?;
                self.expect_sym(')')?;
                GroupLiteral::Wreath(Box::new(a), Box::new(b))
            }
            _ => {
                self.expect_sym('(')?;
                let a = self.literal()?;
                self.expect_sym(',')?;
                let l = self.int()?;
                self.expect_sym(')')?;
                GroupLiteral::Sylow(Box::new(a), l)
            }
        })
    }
}

pub fn parse(src: &str) -> Result<GroupLiteral, ParseError> {
    let mut p = Parser {
        toks: tokenize(src)?,
        pos: 0,
    };
    let lit = p.literal()?;
    if *p.peek() != Tok::End {
        return Err(p.error(&["end of input"]));
    }
    Ok(lit)
}

/// Comma-separated cyclic orders, e.g. `"2,2,4"`.
pub fn parse_invariants(src: &str) -> Result<Vec<u64>, ParseError> {
    let mut p = Parser {
        toks: tokenize(src)?,
        pos: 0,
    };
    let v = p.int_list()?;
    if *p.peek() != Tok::End {
        return Err(p.error(&["','", "end of input"]));
    }
    Ok(v)
}

fn join(v: &[u64]) -> String {
    v.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for GroupLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use GroupLiteral::*;
        match self {
            Perm(gens) => {
                let parts: Vec<String> = gens
                    .iter()
                    .map(|cycles| {
                        cycles
                            .iter()
                            .map(|c| {
                                let pts: Vec<String> = c.iter().map(u32::to_string).collect();
                                format!("({})", pts.join(" "))
                            })
                            .collect::<String>()
                    })
                    .collect();
                write!(f, "perm: {}", parts.join("; "))
            }
            Abelian(v) => write!(f, "abelian: {}", join(v)),
            Q8 => write!(f, "q8"),
            D8 => write!(f, "d8"),
            Cyclic(n) => write!(f, "cyc({n})"),
            Dihedral(n) => write!(f, "dihedral({n})"),
            Symmetric(n) => write!(f, "sym({n})"),
            Alternating(n) => write!(f, "alt({n})"),
            Heisenberg(l) => write!(f, "heis({l})"),
            Fc(v) => write!(f, "fc({})", join(v)),
            Gl(n, q) => write!(f, "gl({n},{q})"),
            Sl(n, q) => write!(f, "sl({n},{q})"),
            Pgl(n, q) => write!(f, "pgl({n},{q})"),
            Psl(n, q) => write!(f, "psl({n},{q})"),
            Unitriangular(n, q) => write!(f, "u({n},{q})"),
            Wreath(a, b) => write!(f, "wreath({a},{b})"),
            Sylow(a, l) => write!(f, "sylow({a},{l})"),
        }
    }
}

fn check_order(what: &str, order: Option<u128>, limits: &Limits) -> Result<(), GroupError> {
    match order {
        Some(o) if o <= limits.max_order as u128 => Ok(()),
        _ => Err(GroupError::limit(format!("order of {what}"), limits.max_order as u128)),
    }
}

fn factorial(n: u64) -> Option<u128> {
    (1..=n as u128).try_fold(1u128, |acc, k| acc.checked_mul(k))
}

fn positive(what: &str, n: u64) -> Result<usize, GroupError> {
    if n == 0 {
        Err(GroupError::InvalidInput(format!("{what} must be positive")))
    } else {
        Ok(n as usize)
    }
}

/// Builds the permutation group a literal denotes.
pub fn build(lit: &GroupLiteral, limits: &Limits) -> Result<GroupRef, GroupError> {
    use GroupLiteral::*;
    let text = lit.to_string();
    Ok(match lit {
        Perm(gens) => {
            let degree = gens.iter().flatten().flatten().map(|&p| p as usize + 1).max().unwrap_or(1);
            let perms = gens
                .iter()
                .map(|cycles| Permutation::from_cycles(degree, cycles))
                .collect::<Result<Vec<_>, _>>()?;
            Arc::new(close_group(&perms, limits.max_order)?)
        }
        Abelian(v) => {
            if v.contains(&0) {
                return Err(GroupError::InvalidInput("cyclic orders must be positive".into()));
            }
            let order = v.iter().try_fold(1u128, |acc, &d| acc.checked_mul(d as u128));
            check_order(&text, order, limits)?;
            Arc::new(abelian(v))
        }
        Q8 => Arc::new(quaternion()),
        D8 => Arc::new(dihedral(4)),
        Cyclic(n) => {
            let n = positive("cyclic order", *n)?;
            check_order(&text, Some(n as u128), limits)?;
            Arc::new(cyclic(n))
        }
        Dihedral(n) => {
            let n = positive("dihedral parameter", *n)?;
            check_order(&text, Some(2 * n as u128), limits)?;
            Arc::new(dihedral(n))
        }
        Symmetric(n) => {
            let n = positive("degree", *n)?;
            check_order(&text, factorial(n as u64), limits)?;
            Arc::new(symmetric(n))
        }
        Alternating(n) => {
            let n = positive("degree", *n)?;
            check_order(&text, factorial(n as u64).map(|f| (f / 2).max(1)), limits)?;
            Arc::new(alternating(n))
        }
        Heisenberg(l) => {
            if !is_prime(*l) {
                return Err(GroupError::InvalidInput(format!("heis needs a prime, got {l}")));
            }
            unitriangular(3, *l, limits)?.top().group.clone()
        }
        Fc(v) => {
            if v.is_empty() || v.contains(&0) {
                return Err(GroupError::InvalidInput("fc needs positive cyclic orders".into()));
            }
            fc_group(&AbelianGroup::from_cyclic_orders(v), limits)?
        }
        Gl(n, q) => gl(positive("n", *n)?, *q, limits)?.group,
        Sl(n, q) => sl(positive("n", *n)?, *q, limits)?.group,
        Pgl(n, q) => pgl(positive("n", *n)?, *q, limits)?.group,
        Psl(n, q) => psl(positive("n", *n)?, *q, limits)?.group,
        Unitriangular(n, q) => unitriangular(positive("n", *n)?, *q, limits)?.top().group.clone(),
        Wreath(a, b) => {
            let (a, b) = (build(a, limits)?, build(b, limits)?);
            let order = (a.order() as u128)
                .checked_pow(b.order() as u32)
                .and_then(|x| x.checked_mul(b.order() as u128));
            check_order(&text, order, limits)?;
            wreath_regular(&a, &b, limits)?.product
        }
        Sylow(a, l) => {
            if !is_prime(*l) {
                return Err(GroupError::InvalidInput(format!("sylow needs a prime, got {l}")));
            }
            let g = build(a, limits)?;
            Arc::new(sylow_subgroup(&g, *l as usize, limits)?.to_group(&g))
        }
    })
}
