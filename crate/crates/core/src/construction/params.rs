//! Parameter derivations for the gadget and the counterexample.

use serde::{Deserialize, Serialize};

use super::rational::{ceil_int, floor_int, serde_str, Rational};
use super::ConstructionError;

/// Report text for the size threshold above which the gadget properties are
/// guaranteed; it is only known to exist.
pub const THRESHOLD_UNKNOWN: &str = "threshold unknown; properties checked empirically";

/// Gadget parameters: `f = ⌈C/ε⌉` and `δ = ε²/(4C²)` unless `δ` was
/// overridden.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma3Params {
    #[serde(with = "serde_str")]
    pub epsilon: Rational,
    #[serde(with = "serde_str")]
    pub c_const: Rational,
    pub f: u64,
    #[serde(with = "serde_str")]
    pub delta: Rational,
    /// True when `delta` was set explicitly instead of derived.
    pub delta_overridden: bool,
}

impl Lemma3Params {
    pub fn f_squared_delta(&self) -> Rational {
        Rational::from_integer(i128::from(self.f * self.f)) * self.delta
    }

    /// Whether `f²δ < 1`, the hypothesis of the random-graph lemma.
    pub fn hypothesis_holds(&self) -> bool {
        self.f_squared_delta() < Rational::from_integer(1)
    }

    /// The same `ε`, `C` and `f` with a different edge-probability exponent.
    /// Used to reach typical behaviour at small `n`; the result may violate
    /// `f²δ < 1`, which [`Lemma3Params::hypothesis_holds`] reports.
    pub fn with_delta(&self, delta: Rational) -> Result<Lemma3Params, ConstructionError> {
        if delta <= Rational::from_integer(0) || delta >= Rational::from_integer(1) {
            return Err(ConstructionError::InvalidDelta(delta.to_string()));
        }
        Ok(Lemma3Params {
            delta,
            delta_overridden: true,
            ..self.clone()
        })
    }

    /// `⌊C·n⌋`, the size of the larger side of the sampled graph.
    pub fn m_for(&self, n: usize) -> usize {
        floor_int(&(self.c_const * Rational::from_integer(n as i128))) as usize
    }
}

pub fn derive_lemma3_params(epsilon: Rational, c_const: Rational) -> Result<Lemma3Params, ConstructionError> {
    let one = Rational::from_integer(1);
    if epsilon <= Rational::from_integer(0) || epsilon >= one {
        return Err(ConstructionError::InvalidEpsilon {
            value: epsilon.to_string(),
            range: "(0, 1)",
        });
    }
    if c_const < one {
        return Err(ConstructionError::InvalidC(c_const.to_string()));
    }
    let f = ceil_int(&(c_const / epsilon)) as u64;
    let delta = epsilon * epsilon / (Rational::from_integer(4) * c_const * c_const);
    let params = Lemma3Params {
        epsilon,
        c_const,
        f,
        delta,
        delta_overridden: false,
    };
    if !params.hypothesis_holds() {
        return Err(ConstructionError::HypothesisViolated(params.f_squared_delta().to_string()));
    }
    Ok(params)
}

/// Parameters of the counterexample for given `s`, `t`, `ε` and `C`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theorem1Params {
    #[serde(with = "serde_str")]
    pub epsilon: Rational,
    #[serde(with = "serde_str")]
    pub c_const: Rational,
    #[serde(with = "serde_str")]
    pub eps_prime: Rational,
    #[serde(with = "serde_str")]
    pub c_prime: Rational,
    pub s: u64,
    pub t: u64,
    pub n: u64,
    pub m: u64,
    pub palette_size: u64,
    /// `⌈4/ε⌉`: the final inequality of the argument needs `s` at least this.
    pub min_s_for_bound: u64,
    pub threshold: String,
}

impl Theorem1Params {
    pub fn derive(s: u64, t: u64, epsilon: Rational, c_const: Rational) -> Result<Theorem1Params, ConstructionError> {
        check_epsilon_half(epsilon)?;
        if c_const < Rational::from_integer(1) {
            return Err(ConstructionError::InvalidC(c_const.to_string()));
        }
        let (si, ti) = (i128::from(s), i128::from(t));
        if s < 1 || s > t || Rational::from_integer(ti) > c_const * Rational::from_integer(si) {
            return Err(ConstructionError::InvalidSizes(format!(
                "need 1 <= s <= t <= C*s, got s = {s}, t = {t}, C = {c_const}"
            )));
        }
        let (n, m) = n_and_m(s, t, epsilon);
        let c_prime = Rational::from_integer(2) * c_const + Rational::from_integer(2);
        if n > m || Rational::from_integer(i128::from(m)) > c_prime * Rational::from_integer(i128::from(n)) {
            return Err(ConstructionError::InvalidSizes(format!(
                "need n <= m <= C'*n, got n = {n}, m = {m}, C' = {c_prime}"
            )));
        }
        Ok(Theorem1Params {
            epsilon,
            c_const,
            eps_prime: epsilon / Rational::from_integer(2),
            c_prime,
            s,
            t,
            n,
            m,
            palette_size: m + n - 1,
            min_s_for_bound: ceil_int(&(Rational::from_integer(4) / epsilon)) as u64,
            threshold: THRESHOLD_UNKNOWN.to_string(),
        })
    }
}

fn check_epsilon_half(epsilon: Rational) -> Result<(), ConstructionError> {
    if epsilon <= Rational::from_integer(0) || epsilon >= Rational::new(1, 2) {
        return Err(ConstructionError::InvalidEpsilon {
            value: epsilon.to_string(),
            range: "(0, 1/2)",
        });
    }
    Ok(())
}

/// `n = s − 1` and `m = ⌊(1−ε)(s+t)⌋`.
fn n_and_m(s: u64, t: u64, epsilon: Rational) -> (u64, u64) {
    let m = floor_int(&((Rational::from_integer(1) - epsilon) * Rational::from_integer(i128::from(s + t))));
    (s - 1, m as u64)
}

/// The list-chromatic lower bound `m + n − ⌈ε′n⌉` against `(1−ε)(2s+t)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theorem1Bound {
    pub value: u64,
    #[serde(with = "serde_str")]
    pub target: Rational,
    pub holds: bool,
}

impl Theorem1Bound {
    /// `value / (2s + t)` as an exact rational.
    pub fn ratio(&self, s: u64, t: u64) -> Rational {
        Rational::new(i128::from(self.value), i128::from(2 * s + t))
    }
}

pub fn theorem1_bound(s: u64, t: u64, epsilon: Rational) -> Result<Theorem1Bound, ConstructionError> {
    check_epsilon_half(epsilon)?;
    if s < 1 || s > t {
        return Err(ConstructionError::InvalidSizes(format!("need 1 <= s <= t, got s = {s}, t = {t}")));
    }
    let (n, m) = n_and_m(s, t, epsilon);
    let eps_prime = epsilon / Rational::from_integer(2);
    let punched = ceil_int(&(eps_prime * Rational::from_integer(i128::from(n)))) as u64;
    let value = m + n - punched;
    let target = (Rational::from_integer(1) - epsilon) * Rational::from_integer(i128::from(2 * s + t));
    Ok(Theorem1Bound {
        value,
        target,
        holds: Rational::from_integer(i128::from(value)) > target,
    })
}
