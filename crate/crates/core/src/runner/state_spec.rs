use std::fmt;
use std::str::FromStr;

use nalgebra::DVector;
use serde_json::{json, Value};

use crate::diffusion::required_cutoff;
use crate::error::{Error, Result};
use crate::fock::{gaussify, moments, von_neumann_entropy, DensityMatrix, FockSpace, DEFAULT_BUDGET};
use crate::linalg::{RMatrix, C64};
use crate::phase_space::GaussianState;

/// One single-mode factor of a state specification.
#[derive(Debug, Clone, PartialEq)]
pub enum Factor {
    Vacuum,
    Thermal(f64),
    Coherent(C64),
    Fock(usize),
    Cat { alpha: f64, phase: f64 },
    Random { seed: u64, rank: usize },
}

impl Factor {
    fn is_gaussian(&self) -> bool {
        matches!(self, Factor::Vacuum | Factor::Thermal(_) | Factor::Coherent(_))
    }

    /// Cutoff at which the factor stays within the default budget.
    fn cutoff_hint(&self) -> usize {
        let poisson = |mean: f64| {
            let mut term = (-mean).exp();
            let mut k = 0usize;
            while k < 2 || term > 0.1 * DEFAULT_BUDGET || (k as f64) < mean {
                k += 1;
                term *= mean / k as f64;
            }
            k + 1
        };
        let d = match self {
            Factor::Vacuum => 8,
            Factor::Thermal(n) => required_cutoff(*n, 0.0, DEFAULT_BUDGET),
            Factor::Coherent(a) => poisson(a.norm_sqr()),
            Factor::Fock(k) => k + 8,
            Factor::Cat { alpha, .. } => poisson(alpha * alpha),
            Factor::Random { .. } => 12,
        };
        d.max(8)
    }

    fn fock_state(&self, space: &FockSpace) -> Result<DensityMatrix> {
        match *self {
            Factor::Vacuum => Ok(DensityMatrix::vacuum(space)),
            Factor::Thermal(n) => DensityMatrix::thermal(space, n),
            Factor::Coherent(a) => DensityMatrix::coherent(space, &[a]),
            Factor::Fock(k) => DensityMatrix::fock(space, k),
            Factor::Cat { alpha, phase } => DensityMatrix::cat(space, C64::new(alpha, 0.0), phase),
            Factor::Random { seed, rank } => DensityMatrix::random_state(space, seed, rank),
        }
    }

    fn gaussian_state(&self) -> Option<Result<GaussianState>> {
        match *self {
            Factor::Vacuum => Some(Ok(GaussianState::vacuum(1))),
            Factor::Thermal(n) => Some(GaussianState::thermal(1, n)),
            Factor::Coherent(a) => Some(GaussianState::vacuum(1).with_mean(DVector::from_vec(vec![
                2f64.sqrt() * a.re,
                2f64.sqrt() * a.im,
            ]))),
            _ => None,
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Vacuum => write!(f, "vacuum"),
            Factor::Thermal(n) => write!(f, "thermal({n})"),
            Factor::Coherent(a) if a.im == 0.0 => write!(f, "coherent({})", a.re),
            Factor::Coherent(a) => write!(f, "coherent({},{})", a.re, a.im),
            Factor::Fock(k) => write!(f, "fock({k})"),
            Factor::Cat { alpha, phase } => write!(f, "cat({alpha},{phase})"),
            Factor::Random { seed, rank } => write!(f, "random({seed},{rank})"),
        }
    }
}

/// A product of single-mode constructors, written `name(arg, …) * name(arg, …)`.
///
/// Names are `vacuum`, `thermal(N)`, `coherent(re[, im])`, `fock(k)`, `cat(alpha[, phase])`
/// and `random(seed[, rank])`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSpec {
    pub factors: Vec<Factor>,
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            position: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.text[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.text[self.pos..].chars().next().map_or(1, char::len_utf8);
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.text[self.pos..].starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> &'a str {
        self.skip_ws();
        let start = self.pos;
        let len: usize = self.text[start..]
            .chars()
            .take_while(|&c| pred(c))
            .map(char::len_utf8)
            .sum();
        self.pos += len;
        &self.text[start..start + len]
    }

    fn number(&mut self) -> Result<f64> {
        let start = self.pos;
        let token = self.take_while(|c| c.is_ascii_digit() || matches!(c, '.' | '-' | '+' | 'e' | 'E'));
        token.parse().map_err(|_| Error::Parse {
            position: start,
            message: format!("expected a number, found '{token}'"),
        })
    }

    fn factor(&mut self) -> Result<Factor> {
        self.skip_ws();
        let start = self.pos;
        let name = self.take_while(|c| c.is_ascii_alphabetic());
        if name.is_empty() {
            return Err(self.error("expected a constructor name"));
        }
        let mut args = Vec::new();
        if self.eat('(') && !self.eat(')') {
            loop {
                args.push(self.number()?);
                if self.eat(')') {
                    break;
                }
                if !self.eat(',') {
                    return Err(self.error("expected ',' or ')'"));
                }
            }
        }
        let arity = |min: usize, max: usize| -> Result<()> {
            if args.len() < min || args.len() > max {
                return Err(Error::Parse {
                    position: start,
                    message: format!("{name} takes {min} to {max} arguments, got {}", args.len()),
                });
            }
            Ok(())
        };
        let count = |v: f64| -> Result<usize> {
            if v >= 0.0 && v.fract() == 0.0 && v < 1e15 {
                Ok(v as usize)
            } else {
                Err(Error::Parse {
                    position: start,
                    message: format!("{name} needs a non-negative integer, got {v}"),
                })
            }
        };
        let factor = match name {
            "vacuum" => {
                arity(0, 0)?;
                Factor::Vacuum
            }
            "thermal" => {
                arity(1, 1)?;
                if !(args[0] >= 0.0) {
                    return Err(Error::Parse {
                        position: start,
                        message: "thermal needs a non-negative photon number".into(),
                    });
                }
                Factor::Thermal(args[0])
            }
            "coherent" => {
                arity(1, 2)?;
                Factor::Coherent(C64::new(args[0], args.get(1).copied().unwrap_or(0.0)))
            }
            "fock" => {
                arity(1, 1)?;
                Factor::Fock(count(args[0])?)
            }
            "cat" => {
                arity(1, 2)?;
                Factor::Cat {
                    alpha: args[0],
                    phase: args.get(1).copied().unwrap_or(0.0),
                }
            }
            "random" => {
                arity(1, 2)?;
                Factor::Random {
                    seed: count(args[0])? as u64,
                    rank: args.get(1).map(|&r| count(r)).transpose()?.unwrap_or(2),
                }
            }
            other => {
                return Err(Error::Parse {
                    position: start,
                    message: format!("unknown constructor '{other}'"),
                })
            }
        };
        Ok(factor)
    }
}

impl FromStr for StateSpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut parser = Parser { text, pos: 0 };
        let mut factors = vec![parser.factor()?];
        while parser.eat('*') {
            factors.push(parser.factor()?);
        }
        parser.skip_ws();
        if parser.pos != text.len() {
            return Err(parser.error("unexpected trailing input"));
        }
        Ok(StateSpec { factors })
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join("*"))
    }
}

impl StateSpec {
    pub fn modes(&self) -> usize {
        self.factors.len()
    }

    pub fn is_gaussian(&self) -> bool {
        self.factors.iter().all(Factor::is_gaussian)
    }

    /// Smallest cutoff that keeps every factor within the default budget.
    pub fn cutoff_hint(&self) -> usize {
        self.factors.iter().map(Factor::cutoff_hint).max().unwrap_or(8)
    }

    pub fn fock_state(&self, cutoff: usize) -> Result<DensityMatrix> {
        let single = FockSpace::new(1, cutoff)?;
        let mut state = self.factors[0].fock_state(&single)?;
        for factor in &self.factors[1..] {
            state = state.tensor(&factor.fock_state(&single)?)?;
        }
        Ok(state.with_label(self.to_string()))
    }

    /// Exact Gaussian counterpart, when every factor is Gaussian.
    pub fn gaussian_state(&self) -> Option<Result<GaussianState>> {
        let mut iter = self.factors.iter().map(Factor::gaussian_state);
        let mut state = match iter.next()? {
            Some(Ok(s)) => s,
            Some(Err(e)) => return Some(Err(e)),
            None => return None,
        };
        for next in iter {
            match next? {
                Ok(s) => state = state.product(&s),
                Err(e) => return Some(Err(e)),
            }
        }
        Some(Ok(state))
    }
}

fn matrix_json(m: &RMatrix) -> Value {
    json!((0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| m[(r, c)]).collect::<Vec<f64>>())
        .collect::<Vec<_>>())
}

/// Moments, entropy, symplectic spectrum and tail mass of a specified state. Gaussian
/// specifications also carry the exact values.
pub fn describe_state(spec: &str, cutoff: Option<usize>) -> Result<Value> {
    let parsed: StateSpec = spec.parse()?;
    let cutoff = cutoff.unwrap_or_else(|| parsed.cutoff_hint());
    let rho = parsed.fock_state(cutoff)?;
    let (mean, covariance) = moments(&rho)?;
    let nu = gaussify(&rho)?.symplectic_eigenvalues()?;
    let space = rho.space();
    let photons: Vec<f64> = (0..space.modes())
        .map(|j| space.number(j).trace_with(rho.matrix()).re)
        .collect();
    let fock = json!({
        "entropy": von_neumann_entropy(&rho),
        "mean": mean.as_slice(),
        "covariance": matrix_json(&covariance),
        "symplectic_eigenvalues": nu,
        "mean_photons": photons,
        "tail_mass": rho.tail_mass(),
    });
    let gaussian = match parsed.gaussian_state() {
        Some(state) => {
            let state = state?;
            json!({
                "entropy": state.entropy()?,
                "mean": state.mean().as_slice(),
                "covariance": matrix_json(state.covariance()),
                "symplectic_eigenvalues": state.symplectic_eigenvalues()?,
            })
        }
        None => Value::Null,
    };
    Ok(json!({
        "spec": parsed.to_string(),
        "modes": parsed.modes(),
        "cutoff": cutoff,
        "fock": fock,
        "gaussian": gaussian,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_products_and_defaults() {
        let s: StateSpec = " thermal(0.5) * coherent(1, -0.5)*cat(2)* fock(3) * random(7) * vacuum"
            .parse()
            .unwrap();
        assert_eq!(s.modes(), 6);
        assert_eq!(s.factors[1], Factor::Coherent(C64::new(1.0, -0.5)));
        assert_eq!(s.factors[2], Factor::Cat { alpha: 2.0, phase: 0.0 });
        assert_eq!(s.factors[4], Factor::Random { seed: 7, rank: 2 });
        assert!(!s.is_gaussian());
        let g: StateSpec = "vacuum()*thermal(1)".parse().unwrap();
        assert!(g.is_gaussian());
        assert_eq!(g.to_string(), "vacuum*thermal(1)");
    }

    #[test]
    fn errors_carry_positions() {
        let at = |s: &str| match s.parse::<StateSpec>() {
            Err(Error::Parse { position, .. }) => position,
            other => panic!("expected a parse error, got {other:?}"),
        };
        assert_eq!(at("squeezed(1)"), 0);
        assert_eq!(at("thermal(1) * fock(x)"), 18);
        assert_eq!(at("fock(1.5)"), 0);
        assert_eq!(at("thermal(1) extra"), 11);
        assert_eq!(at("thermal(1, 2)"), 0);
        assert_eq!(at(""), 0);
    }

    #[test]
    fn describes_closed_form_cases() {
        let d = describe_state("thermal(1)", None).unwrap();
        let ln4 = 2.0 * 2f64.ln();
        assert!((d["fock"]["entropy"].as_f64().unwrap() - ln4).abs() < 1e-7);
        assert!((d["gaussian"]["entropy"].as_f64().unwrap() - ln4).abs() < 1e-12);
        assert!((d["gaussian"]["symplectic_eigenvalues"][0].as_f64().unwrap() - 3.0).abs() < 1e-12);
        assert!((d["fock"]["covariance"][0][0].as_f64().unwrap() - 3.0).abs() < 1e-6);

        let v = describe_state("vacuum", None).unwrap();
        assert!(v["fock"]["entropy"].as_f64().unwrap().abs() < 1e-12);
        assert!((v["fock"]["symplectic_eigenvalues"][0].as_f64().unwrap() - 1.0).abs() < 1e-9);

        let f = describe_state("fock(2)", None).unwrap();
        assert!((f["fock"]["symplectic_eigenvalues"][0].as_f64().unwrap() - 5.0).abs() < 1e-9);
        assert!(f["fock"]["entropy"].as_f64().unwrap().abs() < 1e-9);
        assert!(f["gaussian"].is_null());
    }
}
