//! Sparse integer-coefficient polynomials in a fixed set of chart variables.

use std::collections::BTreeMap;
use std::fmt::Write as _;

/// Exponent vectors are dense (one entry per chart variable); coefficients
/// are integers, so the same system is valid over every field.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Poly {
    pub nvars: usize,
    terms: BTreeMap<Vec<u16>, i64>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: i64) -> Self {
        let mut p = Poly::zero(nvars);
        if c != 0 {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn var(nvars: usize, idx: usize) -> Self {
        assert!(idx < nvars);
        let mut exps = vec![0u16; nvars];
        exps[idx] = 1;
        let mut p = Poly::zero(nvars);
        p.terms.insert(exps, 1);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u16], i64)> {
        self.terms.iter().map(|(e, &c)| (e.as_slice(), c))
    }

    pub fn add_term(&mut self, exps: Vec<u16>, coeff: i64) {
        assert_eq!(exps.len(), self.nvars);
        if coeff == 0 {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(c) => {
                *c += coeff;
                if *c == 0 {
                    self.terms.remove(&exps);
                }
            }
            None => {
                self.terms.insert(exps, coeff);
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e.to_vec(), c);
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, k: i64) -> Poly {
        let mut out = Poly::zero(self.nvars);
        if k == 0 {
            return out;
        }
        for (e, c) in self.terms() {
            out.terms.insert(e.to_vec(), c * k);
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Poly::zero(self.nvars);
        for (ea, ca) in self.terms() {
            for (eb, cb) in other.terms() {
                let exps: Vec<u16> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(exps, ca * cb);
            }
        }
        out
    }

    pub fn total_degree(&self) -> u32 {
        self.terms()
            .map(|(e, _)| e.iter().map(|&x| x as u32).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn max_var_degree(&self) -> u16 {
        self.terms()
            .flat_map(|(e, _)| e.iter().copied())
            .max()
            .unwrap_or(0)
    }

    /// Evaluate mod p given per-variable power tables pows[v][e] = v^e.
    pub fn eval_mod(&self, p: u64, pows: &[&[u64]]) -> u64 {
        let mut acc: u64 = 0;
        for (exps, coeff) in self.terms() {
            let mut term = coeff.rem_euclid(p as i64) as u64;
            if term == 0 {
                continue;
            }
            for (v, &e) in exps.iter().enumerate() {
                if e > 0 {
                    term = (term as u128 * pows[v][e as usize] as u128 % p as u128) as u64;
                }
            }
            acc = (acc + term) % p;
        }
        acc
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (exps, coeff)) in self.terms().enumerate() {
            let mag = coeff.abs();
            if i == 0 {
                if coeff < 0 {
                    out.push('-');
                }
            } else if coeff < 0 {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mut factors: Vec<String> = Vec::new();
            for (v, &e) in exps.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(names[v].clone()),
                    _ => factors.push(format!("{}^{}", names[v], e)),
                }
            }
            if factors.is_empty() {
                let _ = write!(out, "{mag}");
            } else {
                if mag != 1 {
                    let _ = write!(out, "{mag}*");
                }
                out.push_str(&factors.join("*"));
            }
        }
        out
    }
}

/// Determinant of a square matrix of polynomials by cofactor expansion.
pub fn poly_det(entries: &[Vec<Poly>], nvars: usize) -> Poly {
    let n = entries.len();
    if n == 0 {
        return Poly::constant(nvars, 1);
    }
    if n == 1 {
        return entries[0][0].clone();
    }
    let mut acc = Poly::zero(nvars);
    for r in 0..n {
        if entries[r][0].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Poly>> = entries
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != r)
            .map(|(_, row)| row[1..].to_vec())
            .collect();
        let cofactor = entries[r][0].mul(&poly_det(&minor, nvars));
        acc = if r % 2 == 0 {
            acc.add(&cofactor)
        } else {
            acc.sub(&cofactor)
        };
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_eval() {
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        // (x + y)^2 = x^2 + 2xy + y^2
        let s = x.add(&y);
        let sq = s.mul(&s);
        assert_eq!(sq.total_degree(), 2);
        let names = vec!["x".to_string(), "y".to_string()];
        assert_eq!(sq.render(&names), "y^2 + 2*x*y + x^2");

        // eval at (x, y) = (3, 4) mod 5: (3+4)^2 = 49 = 4
        let tables: Vec<Vec<u64>> = [3u64, 4]
            .iter()
            .map(|&v| (0..3).map(|e| v.pow(e) % 5).collect())
            .collect();
        let pows: Vec<&[u64]> = tables.iter().map(|t| t.as_slice()).collect();
        assert_eq!(sq.eval_mod(5, &pows), 4);
    }

    #[test]
    fn cancellation_drops_terms() {
        let x = Poly::var(1, 0);
        let z = x.sub(&x);
        assert!(z.is_zero());
    }

    #[test]
    fn determinant_of_variable_matrix() {
        // det [[x, 1], [1, x]] = x^2 - 1
        let x = Poly::var(1, 0);
        let one = Poly::constant(1, 1);
        let d = poly_det(&[vec![x.clone(), one.clone()], vec![one, x]], 1);
        let names = vec!["x".to_string()];
        assert_eq!(d.render(&names), "-1 + x^2");
    }
}
