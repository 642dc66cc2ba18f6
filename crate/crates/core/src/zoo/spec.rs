//! Symbolic group descriptions with a fixed element labelling.
//!
//! Labels are mixed-radix:
//! - `cyclic(n)`, `z4`, `z8`: residues.
//! - `elementary_abelian_2(e)`: bit vectors, multiplication is xor.
//! - `dihedral(m)`, `zn_semidirect_y`, `frobenius`, odd `dicyclic(m)`: pairs
//!   `(x, i) ↦ x·o + i` with `(x, i)(x', i') = (x + αⁱ x', i + i')`.
//! - even `dicyclic(m)` and `q8 = dicyclic(2)`: `aᵏ xʲ ↦ 2k + j` with
//!   `x a x⁻¹ = a⁻¹`, `x² = aᵐ`.
//! - `direct_product`: tuples, first factor most significant.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::numtheory::{gcd, is_prime, pow_mod, smallest_root_of_unity};
use super::table::CayleyTable;
use crate::error::{Error, Result};

/// Largest order accepted by [`GroupSpec::validate`].
pub const MAX_SPEC_ORDER: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupSpec {
    Cyclic { n: usize },
    ElementaryAbelian2 { e: u32 },
    Z4,
    Z8,
    Q8,
    Dihedral { m: usize },
    Dicyclic { m: usize },
    DirectProduct { factors: Vec<GroupSpec> },
    ZnSemidirectY { n: usize, order_of_y: usize, action: i64 },
    Frobenius { p: usize, n: usize },
}

#[derive(Debug, Clone)]
enum Law {
    Cyclic(usize),
    Xor(usize),
    /// `(x, i)(x', i') = (x + mult[i]·x' mod n, i + i' mod o)`.
    Semidirect { n: usize, mult: Vec<usize> },
    /// `aᵏ xʲ` with `x² = aᵐ`.
    DicyclicEven { m: usize },
    Product { factors: Vec<Law>, orders: Vec<usize> },
}

impl Law {
    fn order(&self) -> usize {
        match self {
            Law::Cyclic(n) => *n,
            Law::Xor(size) => *size,
            Law::Semidirect { n, mult } => n * mult.len(),
            Law::DicyclicEven { m } => 4 * m,
            Law::Product { orders, .. } => orders.iter().product(),
        }
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        match self {
            Law::Cyclic(n) => (a + b) % n,
            Law::Xor(_) => a ^ b,
            Law::Semidirect { n, mult } => {
                let o = mult.len();
                let (x, i) = (a / o, a % o);
                let (y, j) = (b / o, b % o);
                ((x + mult[i] * y) % n) * o + (i + j) % o
            }
            Law::DicyclicEven { m } => {
                let r = 2 * m;
                let (k, j) = (a / 2, a % 2);
                let (l, d) = (b / 2, b % 2);
                let mut exp = if j == 1 { k + r - l } else { k + l };
                let mut t = j + d;
                if t == 2 {
                    t = 0;
                    exp += m;
                }
                (exp % r) * 2 + t
            }
            Law::Product { factors, orders } => {
                let mut out = 0;
                let mut ra = a;
                let mut rb = b;
                let mut parts = vec![0; factors.len()];
                for (idx, (f, &o)) in factors.iter().zip(orders).enumerate().rev() {
                    parts[idx] = f.mul(ra % o, rb % o);
                    ra /= o;
                    rb /= o;
                }
                for (part, &o) in parts.iter().zip(orders) {
                    out = out * o + part;
                }
                out
            }
        }
    }
}

fn semidirect(n: usize, o: usize, a: usize) -> Law {
    let mult = (0..o).map(|i| pow_mod(a as u64, i as u64, n as u64) as usize).collect();
    Law::Semidirect { n, mult }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidSpec(msg.into())
}

impl GroupSpec {
    fn law(&self) -> Result<Law> {
        let law = match self {
            GroupSpec::Cyclic { n } => {
                if *n == 0 {
                    return Err(invalid("cyclic order must be positive"));
                }
                Law::Cyclic(*n)
            }
            GroupSpec::ElementaryAbelian2 { e } => {
                if *e > 20 {
                    return Err(invalid("elementary abelian rank too large"));
                }
                Law::Xor(1 << e)
            }
            GroupSpec::Z4 => Law::Cyclic(4),
            GroupSpec::Z8 => Law::Cyclic(8),
            GroupSpec::Q8 => Law::DicyclicEven { m: 2 },
            GroupSpec::Dihedral { m } => {
                if *m == 0 {
                    return Err(invalid("dihedral parameter must be positive"));
                }
                semidirect(*m, 2, m - 1)
            }
            GroupSpec::Dicyclic { m } => {
                if *m == 0 {
                    return Err(invalid("dicyclic parameter must be positive"));
                }
                if m % 2 == 1 {
                    semidirect(*m, 4, m - 1)
                } else {
                    Law::DicyclicEven { m: *m }
                }
            }
            GroupSpec::DirectProduct { factors } => {
                if factors.is_empty() {
                    return Err(invalid("direct product needs at least one factor"));
                }
                let laws = factors.iter().map(GroupSpec::law).collect::<Result<Vec<_>>>()?;
                let orders: Vec<usize> = laws.iter().map(Law::order).collect();
                let mut total: usize = 1;
                for &o in &orders {
                    total = total
                        .checked_mul(o)
                        .filter(|&t| t <= MAX_SPEC_ORDER)
                        .ok_or_else(|| invalid("order too large"))?;
                }
                Law::Product { factors: laws, orders }
            }
            GroupSpec::ZnSemidirectY { n, order_of_y, action } => {
                if n % 2 == 0 || *n < 3 {
                    return Err(invalid("zn_semidirect_y needs odd n >= 3"));
                }
                if ![2, 4, 8].contains(order_of_y) {
                    return Err(invalid("order_of_y must be 2, 4 or 8"));
                }
                let a = action.rem_euclid(*n as i64) as usize;
                if gcd(a as u128, *n as u128) != 1 || a * a % n != 1 {
                    return Err(invalid("action must be a unit squaring to 1"));
                }
                if a == 1 {
                    return Err(invalid("trivial action: use direct_product"));
                }
                semidirect(*n, *order_of_y, a)
            }
            GroupSpec::Frobenius { p, n } => {
                if !is_prime(*p as u64) {
                    return Err(invalid(format!("{p} is not prime")));
                }
                if *n < 2 || (p - 1) % n != 0 {
                    return Err(invalid(format!("{n} must be >= 2 and divide {}", p - 1)));
                }
                let w = smallest_root_of_unity(*p as u64, *n as u64).expect("root exists for n | p-1");
                semidirect(*p, *n, w as usize)
            }
        };
        if law.order() > MAX_SPEC_ORDER {
            return Err(invalid("order too large"));
        }
        Ok(law)
    }

    pub fn validate(&self) -> Result<()> {
        self.law().map(|_| ())
    }

    pub fn order(&self) -> Result<usize> {
        Ok(self.law()?.order())
    }

    /// The multiplication `a·b` on labels.
    pub fn multiplier(&self) -> Result<impl Fn(usize, usize) -> usize> {
        let law = self.law()?;
        Ok(move |a, b| law.mul(a, b))
    }

    pub fn table(&self) -> Result<CayleyTable> {
        let law = self.law()?;
        CayleyTable::from_fn(law.order(), |a, b| law.mul(a, b))
    }

    /// `ω` for `frobenius(p, n)`.
    pub fn frobenius_root(&self) -> Option<usize> {
        match self {
            GroupSpec::Frobenius { p, n } => smallest_root_of_unity(*p as u64, *n as u64).map(|w| w as usize),
            _ => None,
        }
    }

    /// Parses a spec given either as JSON or as a name like `frobenius(5,4)`.
    pub fn parse(s: &str) -> Result<GroupSpec> {
        let t = s.trim();
        let spec: GroupSpec = if t.starts_with('{') {
            serde_json::from_str(t).map_err(|e| invalid(e.to_string()))?
        } else {
            t.parse()?
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic { n } => write!(f, "cyclic({n})"),
            GroupSpec::ElementaryAbelian2 { e } => write!(f, "elementary_abelian_2({e})"),
            GroupSpec::Z4 => write!(f, "z4"),
            GroupSpec::Z8 => write!(f, "z8"),
            GroupSpec::Q8 => write!(f, "q8"),
            GroupSpec::Dihedral { m } => write!(f, "dihedral({m})"),
            GroupSpec::Dicyclic { m } => write!(f, "dicyclic({m})"),
            GroupSpec::DirectProduct { factors } => {
                write!(f, "direct_product(")?;
                for (i, x) in factors.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
            GroupSpec::ZnSemidirectY { n, order_of_y, action } => {
                write!(f, "zn_semidirect_y({n},{order_of_y},{action})")
            }
            GroupSpec::Frobenius { p, n } => write!(f, "frobenius({p},{n})"),
        }
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.s.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(invalid(format!("expected '{}' at offset {}", c as char, self.pos)))
        }
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_') {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.s[start..self.pos]).to_lowercase()
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if self.s.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .ok()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| invalid(format!("expected an integer at offset {start}")))
    }

    fn uint(&mut self) -> Result<usize> {
        let v = self.int()?;
        usize::try_from(v).map_err(|_| invalid("expected a nonnegative integer"))
    }

    fn args(&mut self, count: usize) -> Result<Vec<i64>> {
        self.expect(b'(')?;
        let mut out = Vec::new();
        for i in 0..count {
            if i > 0 {
                self.expect(b',')?;
            }
            out.push(self.int()?);
        }
        self.expect(b')')?;
        Ok(out)
    }

    fn spec(&mut self) -> Result<GroupSpec> {
        let name = self.ident();
        let nonneg = |v: i64| usize::try_from(v).map_err(|_| invalid("expected a nonnegative integer"));
        Ok(match name.as_str() {
            "cyclic" | "z" => GroupSpec::Cyclic { n: nonneg(self.args(1)?[0])? },
            "elementary_abelian_2" => GroupSpec::ElementaryAbelian2 {
                e: u32::try_from(self.args(1)?[0]).map_err(|_| invalid("bad rank"))?,
            },
            "z4" => GroupSpec::Z4,
            "z8" => GroupSpec::Z8,
            "q8" => GroupSpec::Q8,
            "dihedral" => GroupSpec::Dihedral { m: nonneg(self.args(1)?[0])? },
            "dicyclic" => GroupSpec::Dicyclic { m: nonneg(self.args(1)?[0])? },
            "frobenius" => {
                let a = self.args(2)?;
                GroupSpec::Frobenius {
                    p: nonneg(a[0])?,
                    n: nonneg(a[1])?,
                }
            }
            "zn_semidirect_y" => {
                self.expect(b'(')?;
                let n = self.uint()?;
                self.expect(b',')?;
                let order_of_y = self.uint()?;
                self.expect(b',')?;
                let action = self.int()?;
                self.expect(b')')?;
                GroupSpec::ZnSemidirectY { n, order_of_y, action }
            }
            "direct_product" => {
                self.expect(b'(')?;
                let mut factors = vec![self.spec()?];
                while self.eat(b',') {
                    factors.push(self.spec()?);
                }
                self.expect(b')')?;
                GroupSpec::DirectProduct { factors }
            }
            other => return Err(invalid(format!("unknown group kind '{other}'"))),
        })
    }
}

impl FromStr for GroupSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<GroupSpec> {
        let mut p = Parser { s: s.as_bytes(), pos: 0 };
        let spec = p.spec()?;
        p.skip_ws();
        if p.pos != s.len() {
            return Err(invalid(format!("trailing input at offset {}", p.pos)));
        }
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assoc(t: &CayleyTable) -> bool {
        let n = t.order();
        (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| t.mul(t.mul(a, b), c) == t.mul(a, t.mul(b, c)))))
    }

    fn corpus() -> Vec<GroupSpec> {
        [
            "cyclic(6)",
            "elementary_abelian_2(3)",
            "z4",
            "z8",
            "q8",
            "dihedral(5)",
            "dicyclic(3)",
            "dicyclic(4)",
            "direct_product(cyclic(3),q8)",
            "zn_semidirect_y(3,8,-1)",
            "zn_semidirect_y(15,4,4)",
            "frobenius(5,4)",
            "frobenius(7,3)",
        ]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect()
    }

    #[test]
    fn laws_are_groups() {
        for spec in corpus() {
            let t = spec.table().unwrap();
            assert!(assoc(&t), "{spec}");
            assert_eq!(t.identity(), 0, "{spec}");
        }
    }

    #[test]
    fn orders_and_involutions() {
        let count = |s: &str, k: usize| {
            let t = s.parse::<GroupSpec>().unwrap().table().unwrap();
            (t.order(), t.element_orders().iter().filter(|&&o| o == k).count())
        };
        assert_eq!(count("dicyclic(5)", 2), (20, 1));
        assert_eq!(count("dicyclic(3)", 2), (12, 1));
        assert_eq!(count("dicyclic(4)", 2), (16, 1));
        assert_eq!(count("q8", 4), (8, 6));
        assert_eq!(count("dihedral(4)", 2), (8, 5));
        assert_eq!(count("frobenius(7,3)", 3), (21, 14));
        assert_eq!(count("elementary_abelian_2(3)", 2), (8, 7));
    }

    #[test]
    fn q8_matches_dicyclic_2() {
        let q = GroupSpec::Q8.table().unwrap();
        assert!(q.is_isomorphic(&GroupSpec::Dicyclic { m: 2 }.table().unwrap()));
        assert!(!q.is_isomorphic(&GroupSpec::Dihedral { m: 4 }.table().unwrap()));
    }

    #[test]
    fn validation() {
        assert!(GroupSpec::parse("frobenius(6,2)").is_err());
        assert!(GroupSpec::parse("frobenius(7,4)").is_err());
        assert!(GroupSpec::parse("zn_semidirect_y(5,4,1)").is_err());
        assert!(GroupSpec::parse("zn_semidirect_y(5,4,2)").is_err());
        assert!(GroupSpec::parse("zn_semidirect_y(6,4,-1)").is_err());
        assert!(GroupSpec::parse("zn_semidirect_y(5,3,-1)").is_err());
        assert!(GroupSpec::parse("cyclic(0)").is_err());
        assert!(GroupSpec::parse("cyclic(5) x").is_err());
        assert!(GroupSpec::parse("mystery(3)").is_err());
    }

    #[test]
    fn names_and_json() {
        for spec in corpus() {
            assert_eq!(spec.to_string().parse::<GroupSpec>().unwrap(), spec);
            let json = serde_json::to_string(&spec).unwrap();
            assert_eq!(GroupSpec::parse(&json).unwrap(), spec);
        }
        assert_eq!(
            serde_json::to_string(&GroupSpec::Cyclic { n: 5 }).unwrap(),
            r#"{"kind":"cyclic","n":5}"#
        );
        assert_eq!(GroupSpec::parse(r#"{"kind":"q8"}"#).unwrap(), GroupSpec::Q8);
    }

    #[test]
    fn frobenius_root_is_smallest() {
        assert_eq!(GroupSpec::Frobenius { p: 5, n: 4 }.frobenius_root(), Some(2));
        assert_eq!(GroupSpec::Frobenius { p: 13, n: 4 }.frobenius_root(), Some(5));
    }
}
