//! Log-space evaluation of the two failure-probability bounds for the
//! random bipartite graph.

use super::ConstructionError;

/// `ln((C+1)n+1)·(C+1)n − ε²·n^{2−f²δ}`, the log of the union bound on the
/// block property failing.
pub fn event1_bound(n: f64, epsilon: f64, c_const: f64, f: f64, delta: f64) -> Result<f64, ConstructionError> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(ConstructionError::InvalidEpsilon {
            value: epsilon.to_string(),
            range: "(0, 1)",
        });
    }
    check_common(n, c_const, delta)?;
    if !(f >= 1.0 && f * f * delta < 1.0) {
        return Err(ConstructionError::HypothesisViolated((f * f * delta).to_string()));
    }
    let size = (c_const + 1.0) * n;
    Ok(size.ln_1p() * size - epsilon * epsilon * n.powf(2.0 - f * f * delta))
}

/// `ln((C+1)n) − n^{1−δ}/3`, the log of the union bound on some degree
/// exceeding `εn`.
pub fn degree_tail_bound(n: f64, c_const: f64, delta: f64) -> Result<f64, ConstructionError> {
    check_common(n, c_const, delta)?;
    Ok(((c_const + 1.0) * n).ln() - n.powf(1.0 - delta) / 3.0)
}

fn check_common(n: f64, c_const: f64, delta: f64) -> Result<(), ConstructionError> {
    if !(n >= 1.0 && n.is_finite()) {
        return Err(ConstructionError::InvalidSizes(format!("n must be a finite number >= 1, got {n}")));
    }
    if !(c_const >= 1.0 && c_const.is_finite()) {
        return Err(ConstructionError::InvalidC(c_const.to_string()));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(ConstructionError::InvalidDelta(delta.to_string()));
    }
    Ok(())
}
