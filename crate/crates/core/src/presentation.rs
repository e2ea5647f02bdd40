//! Generator matrices, presentation relators and kernel recipes for the five Euclidean
//! Bianchi groups.

use std::fmt;

use crate::error::{Error, Result};
use crate::quad::{check_field, QuadInt};
use crate::weight::GMatrix;

pub const SUPPORTED: [u32; 5] = [1, 2, 3, 7, 11];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    S,
    T,
    Tw,
    U,
    L,
    E,
    A,
    G,
}

impl Gen {
    pub fn name(self) -> &'static str {
        match self {
            Gen::S => "S",
            Gen::T => "T",
            Gen::Tw => "Tw",
            Gen::U => "U",
            Gen::L => "L",
            Gen::E => "E",
            Gen::A => "A",
            Gen::G => "g",
        }
    }

    fn parse(s: &str) -> Result<Gen> {
        Ok(match s {
            "S" => Gen::S,
            "T" => Gen::T,
            "Tw" => Gen::Tw,
            "U" => Gen::U,
            "L" => Gen::L,
            "E" => Gen::E,
            "A" => Gen::A,
            "g" => Gen::G,
            _ => return Err(Error::Parse(format!("unknown generator {s}"))),
        })
    }
}

/// A word in the generators: a list of (generator, exponent).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<(Gen, i32)>);

impl Word {
    /// Parses space-separated tokens such as `Tw^-1 S Tw S T`.
    pub fn parse(s: &str) -> Result<Word> {
        let mut out = Vec::new();
        for tok in s.split_whitespace() {
            let (name, exp) = match tok.split_once('^') {
                Some((n, e)) => (
                    n,
                    e.parse::<i32>()
                        .map_err(|_| Error::Parse(format!("bad exponent in {tok}")))?,
                ),
                None => (tok, 1),
            };
            out.push((Gen::parse(name)?, exp));
        }
        Ok(Word(out))
    }

    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn eval(&self, table: &GeneratorTable) -> Result<GMatrix> {
        let mut m = GMatrix::identity(table.d);
        for &(g, e) in &self.0 {
            m = m.mul(&table.get(g)?.pow(e)?);
        }
        Ok(m)
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|&(g, e)| (g, -e)).collect())
    }

    pub fn concat(&self, o: &Word) -> Word {
        Word(self.0.iter().chain(o.0.iter()).copied().collect())
    }

    pub fn pow(&self, n: u32) -> Word {
        Word((0..n).flat_map(|_| self.0.iter().copied()).collect())
    }

    /// [a, b] = a b a^-1 b^-1.
    pub fn commutator(a: &Word, b: &Word) -> Word {
        a.concat(b).concat(&a.inverse()).concat(&b.inverse())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|&(g, e)| {
                if e == 1 {
                    g.name().to_string()
                } else {
                    format!("{}^{}", g.name(), e)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Formal integer combination of words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAlgebra(pub Vec<(i64, Word)>);

impl GroupAlgebra {
    pub fn parse(terms: &[(i64, &str)]) -> Result<Self> {
        terms
            .iter()
            .map(|&(c, w)| Ok((c, Word::parse(w)?)))
            .collect::<Result<Vec<_>>>()
            .map(GroupAlgebra)
    }

    pub fn eval(&self, table: &GeneratorTable) -> Result<Vec<(i64, GMatrix)>> {
        self.0
            .iter()
            .map(|(c, w)| Ok((*c, w.eval(table)?)))
            .collect()
    }
}

impl fmt::Display for GroupAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        for (i, (c, w)) in self.0.iter().enumerate() {
            let sign = if *c < 0 { "-" } else if i > 0 { "+" } else { "" };
            if i > 0 {
                s.push(' ');
            }
            s.push_str(sign);
            if i > 0 {
                s.push(' ');
            }
            let a = c.abs();
            if a != 1 {
                s.push_str(&format!("{a}*"));
            }
            s.push_str(&w.to_string());
        }
        write!(f, "{s}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorTable {
    pub d: u32,
    pub s: GMatrix,
    pub t: GMatrix,
    pub tw: GMatrix,
    pub u: GMatrix,
    pub l: Option<GMatrix>,
    pub e: Option<GMatrix>,
    pub a: Option<GMatrix>,
    pub g: Option<GMatrix>,
    pub epsilon: QuadInt,
    pub omega: QuadInt,
}

impl GeneratorTable {
    pub fn get(&self, g: Gen) -> Result<GMatrix> {
        let missing = || Error::Parse(format!("generator {} not defined for d={}", g.name(), self.d));
        Ok(match g {
            Gen::S => self.s.clone(),
            Gen::T => self.t.clone(),
            Gen::Tw => self.tw.clone(),
            Gen::U => self.u.clone(),
            Gen::L => self.l.clone().ok_or_else(missing)?,
            Gen::E => self.e.clone().ok_or_else(missing)?,
            Gen::A => self.a.clone().ok_or_else(missing)?,
            Gen::G => self.g.clone().ok_or_else(missing)?,
        })
    }

    /// Named generators present for this field, in a fixed order.
    pub fn named(&self) -> Vec<(Gen, GMatrix)> {
        [Gen::S, Gen::T, Gen::Tw, Gen::U, Gen::L, Gen::E, Gen::A, Gen::G]
            .into_iter()
            .filter_map(|g| self.get(g).ok().map(|m| (g, m)))
            .collect()
    }
}

fn w(src: &str) -> Word {
    Word::parse(src).expect("static word")
}

pub fn table(d: u32) -> Result<GeneratorTable> {
    check_field(d).map_err(|_| Error::UnsupportedField(d))?;
    let q = |x: i64, y: i64| QuadInt::new(d, x, y);
    let omega = QuadInt::omega(d);
    let s = GMatrix::from_ints(d, [0, -1, 1, 0]);
    let t = GMatrix::from_ints(d, [1, 1, 0, 1]);
    let tw = GMatrix::new(q(1, 0), omega.clone(), q(0, 0), q(1, 0));
    let u = t.mul(&s);
    let mut tab = GeneratorTable {
        d,
        s,
        t,
        tw,
        u,
        l: None,
        e: None,
        a: None,
        g: None,
        epsilon: QuadInt::epsilon(d),
        omega: omega.clone(),
    };
    match d {
        1 | 3 => {
            // ω is a unit here; L = diag(ω, ω^-1)
            let inv = omega.conj();
            tab.l = Some(GMatrix::new(omega.clone(), q(0, 0), q(0, 0), inv));
            let e = if d == 1 { w("Tw S L") } else { w("T^-1 Tw S L") };
            tab.e = Some(e.eval(&tab)?);
        }
        2 => {
            tab.a = Some(w("Tw^-1 S Tw S").eval(&tab)?);
        }
        _ => {
            tab.a = Some(w("S Tw^-1 S Tw T^-1").eval(&tab)?);
            tab.g = Some(w("S Tw^-1").eval(&tab)?);
        }
    }
    Ok(tab)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relator {
    pub word: Word,
}

pub fn relators(d: u32) -> Result<Vec<Relator>> {
    check_field(d).map_err(|_| Error::UnsupportedField(d))?;
    let comm_t_tw = Word::commutator(&w("T"), &w("Tw"));
    let words: Vec<Word> = match d {
        1 => vec![
            w("S^2"),
            w("L^2"),
            w("S L").pow(2),
            w("T L").pow(2),
            w("Tw L").pow(2),
            w("T S").pow(3),
            w("Tw S L").pow(3),
            comm_t_tw,
        ],
        2 => vec![
            w("S^2"),
            w("T S").pow(3),
            comm_t_tw,
            Word::commutator(&w("S"), &w("Tw")).pow(2),
        ],
        3 => vec![
            w("S^2"),
            w("T S").pow(3),
            w("S L").pow(2),
            w("T^-1 Tw S L").pow(3),
            w("L^3"),
            w("L^-1 T^-1 Tw L T^-1"),
            w("L^-1 T L Tw"),
            comm_t_tw,
        ],
        7 => vec![
            w("S^2"),
            w("T S").pow(3),
            comm_t_tw,
            w("Tw^-1 S Tw S T").pow(2),
        ],
        _ => vec![
            w("S^2"),
            w("T S").pow(3),
            comm_t_tw,
            w("Tw^-1 S Tw S T").pow(3),
        ],
    };
    Ok(words.into_iter().map(|word| Relator { word }).collect())
}

/// A fixed space V^g, optionally pushed forward by a group-algebra element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summand {
    pub fixed: Word,
    pub post: Option<GroupAlgebra>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceRecipe {
    pub d: u32,
    /// W is the intersection of the left kernels of these elements.
    pub wkk_conditions: Vec<GroupAlgebra>,
    /// ker(Φ) is the sum of these fixed spaces.
    pub kernel_summands: Vec<Summand>,
    /// Summands of the H² denominator; they coincide with the kernel summands.
    pub h2_summands: Vec<Summand>,
}

fn ga(terms: &[(i64, &str)]) -> GroupAlgebra {
    GroupAlgebra::parse(terms).expect("static recipe")
}

fn fixed(word: &str) -> Summand {
    Summand {
        fixed: w(word),
        post: None,
    }
}

pub fn recipe(d: u32) -> Result<SpaceRecipe> {
    check_field(d).map_err(|_| Error::UnsupportedField(d))?;
    let one_plus_s = ga(&[(1, ""), (1, "S")]);
    let norm_u = ga(&[(1, ""), (1, "U"), (1, "U^2")]);
    let (wkk_conditions, kernel_summands) = match d {
        1 | 3 => (
            vec![
                one_plus_s,
                ga(&[(1, ""), (-1, "L")]),
                norm_u,
                ga(&[(1, ""), (1, "E"), (1, "E^2")]),
            ],
            if d == 1 {
                vec![fixed("S"), fixed("S L"), fixed("U"), fixed("E")]
            } else {
                vec![fixed("L S"), fixed("U"), fixed("S L")]
            },
        ),
        2 => (
            vec![
                one_plus_s,
                norm_u,
                ga(&[(1, ""), (1, "S Tw"), (1, "Tw S"), (1, "Tw^-1 S Tw S")]),
            ],
            vec![
                fixed("S"),
                fixed("U"),
                Summand {
                    fixed: w("A"),
                    post: Some(ga(&[(1, ""), (-1, "Tw^-1")])),
                },
            ],
        ),
        7 => (
            vec![
                one_plus_s,
                norm_u,
                ga(&[(1, "T"), (1, "Tw S T"), (1, "S Tw^-1 S Tw"), (1, "S Tw")]),
            ],
            a_kernel(),
        ),
        _ => (
            vec![
                one_plus_s,
                norm_u,
                ga(&[
                    (1, "T"),
                    (1, "Tw S T"),
                    (1, "S Tw^-1 S Tw"),
                    (1, "S Tw"),
                    (1, "T Tw^-1 S Tw S T"),
                    (1, "S Tw T^-1 S Tw^-1 S Tw"),
                ]),
            ],
            a_kernel(),
        ),
    };
    Ok(SpaceRecipe {
        d,
        wkk_conditions,
        h2_summands: kernel_summands.clone(),
        kernel_summands,
    })
}

fn a_kernel() -> Vec<Summand> {
    vec![
        fixed("S"),
        fixed("U"),
        Summand {
            fixed: w("A"),
            post: Some(ga(&[(1, ""), (1, "S Tw^-1")])),
        },
    ]
}

/// A matrix identity lhs = rhs (up to sign) used by the kernel lemmas.
#[derive(Clone, Debug)]
pub struct ConjugationIdentity {
    pub name: &'static str,
    pub lhs: GMatrix,
    pub rhs: GMatrix,
}

impl ConjugationIdentity {
    pub fn holds(&self) -> bool {
        self.lhs.eq_projective(&self.rhs)
    }
}

pub fn conjugation_identities(d: u32) -> Result<Vec<ConjugationIdentity>> {
    let tab = table(d)?;
    Ok(match d {
        2 => {
            let a = tab.get(Gen::A)?;
            vec![ConjugationIdentity {
                name: "A = Tw^-1 conj(A) Tw",
                lhs: a.clone(),
                rhs: tab.tw.inverse()?.mul(&a.conj()).mul(&tab.tw),
            }]
        }
        7 | 11 => {
            let a = tab.get(Gen::A)?;
            let g = tab.get(Gen::G)?;
            vec![ConjugationIdentity {
                name: "g^-1 A g = conj(A)",
                lhs: g.inverse()?.mul(&a).mul(&g),
                rhs: a.conj(),
            }]
        }
        _ => Vec::new(),
    })
}

/// The d=2 variant with the inverse on the other side, A = Tw conj(A) Tw^-1.
/// It does not hold for A = Tw^-1 S Tw S; it is kept so reports can show that.
pub fn swapped_d2_identity() -> Result<ConjugationIdentity> {
    let tab = table(2)?;
    let a = tab.get(Gen::A)?;
    Ok(ConjugationIdentity {
        name: "A = Tw conj(A) Tw^-1",
        lhs: a.clone(),
        rhs: tab.tw.mul(&a.conj()).mul(&tab.tw.inverse()?),
    })
}

/// Triples (A, B, g) with A = g^-1 B g, so that V^A = V^B g.
pub fn fixed_space_triples(d: u32) -> Result<Vec<(GMatrix, GMatrix, GMatrix)>> {
    let tab = table(d)?;
    Ok(match d {
        2 => {
            let a = tab.get(Gen::A)?;
            vec![(a.clone(), a.conj(), tab.tw.clone())]
        }
        7 | 11 => {
            let a = tab.get(Gen::A)?;
            vec![(a.conj(), a, tab.get(Gen::G)?)]
        }
        _ => Vec::new(),
    })
}

/// Smallest n ≤ bound with m^n = ±1.
pub fn projective_order(m: &GMatrix, bound: u32) -> Option<u32> {
    let mut p = m.clone();
    for n in 1..=bound {
        if p.is_identity_projective() {
            return Some(n);
        }
        p = p.mul(m);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relators_are_projective_identities() {
        for d in SUPPORTED {
            let tab = table(d).unwrap();
            for r in relators(d).unwrap() {
                assert!(r.word.eval(&tab).unwrap().is_identity_projective(), "d={d} {}", r.word);
            }
        }
    }

    #[test]
    fn named_matrices() {
        let t1 = table(1).unwrap();
        let e1 = GMatrix::new(QuadInt::from_int(1, -1), QuadInt::omega(1), QuadInt::omega(1), QuadInt::zero(1));
        assert_eq!(t1.e.clone().unwrap(), e1);
        let t3 = table(3).unwrap();
        let e3 = GMatrix::new(
            QuadInt::from_int(3, -1),
            QuadInt::new(3, -1, 1),
            QuadInt::omega(3),
            QuadInt::zero(3),
        );
        assert_eq!(t3.e.clone().unwrap(), e3);
        let a2 = table(2).unwrap().a.unwrap();
        assert_eq!(a2, GMatrix::new(QuadInt::one(2), QuadInt::omega(2), QuadInt::omega(2), QuadInt::from_int(2, -1)));
    }

    #[test]
    fn generator_orders() {
        for d in SUPPORTED {
            let tab = table(d).unwrap();
            assert_eq!(projective_order(&tab.s, 6), Some(2));
            assert_eq!(projective_order(&tab.u, 6), Some(3));
        }
        assert_eq!(projective_order(&table(1).unwrap().l.unwrap(), 6), Some(2));
        assert_eq!(projective_order(&table(3).unwrap().l.unwrap(), 6), Some(3));
        assert_eq!(projective_order(&table(1).unwrap().e.unwrap(), 6), Some(3));
        assert_eq!(projective_order(&table(3).unwrap().e.unwrap(), 6), Some(3));
        assert_eq!(projective_order(&table(2).unwrap().a.unwrap(), 6), Some(2));
        assert_eq!(projective_order(&table(7).unwrap().a.unwrap(), 6), Some(2));
        assert_eq!(projective_order(&table(11).unwrap().a.unwrap(), 6), Some(3));
    }

    #[test]
    fn conjugation_identities_hold() {
        for d in SUPPORTED {
            for c in conjugation_identities(d).unwrap() {
                assert!(c.holds(), "d={d} {}", c.name);
            }
            for (a, b, g) in fixed_space_triples(d).unwrap() {
                assert!(g.inverse().unwrap().mul(&b).mul(&g).eq_projective(&a));
            }
        }
        assert!(table(5).is_err());
        assert!(!swapped_d2_identity().unwrap().holds());
    }

    #[test]
    fn words_round_trip() {
        let word = Word::parse("Tw^-1 S Tw S T").unwrap();
        assert_eq!(word.to_string(), "Tw^-1 S Tw S T");
        assert_eq!(Word::parse(&word.to_string()).unwrap(), word);
    }
}
