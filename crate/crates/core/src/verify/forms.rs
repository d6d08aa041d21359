//! The quasi-additivity and covering inequalities as arithmetic on
//! supplied moduli. Their thresholds are unspecified in theory and come
//! from the configuration; verdicts carry that condition as a note.

use crate::modulus::laws::InequalityVerdict;
use crate::modulus::Modulus;

/// `mod(V, ∪K_i) < 2 δ / (η m)` with `δ` the largest `mod(V, K_i)`, under
/// the collar hypothesis `collar_i > η δ` for every island.
pub fn check_qal_form(
    container_modulus: Modulus,
    island_moduli: &[Modulus],
    collar_moduli: &[Modulus],
    eta: f64,
    m: usize,
    delta0: f64,
) -> InequalityVerdict {
    let name = "quasi-additivity";
    let delta = island_moduli
        .iter()
        .fold(Modulus::exact(0.0), |a, b| if b.hi() > a.hi() { *b } else { a });
    let bound = delta.scaled(2.0 / (eta * m as f64));
    if island_moduli.len() != m || collar_moduli.len() != m || m == 0 {
        return InequalityVerdict::inconclusive(
            name,
            container_modulus,
            bound,
            &format!("expected {m} island and collar moduli"),
        );
    }
    if let Some(i) = collar_moduli.iter().position(|c| c.lo() <= eta * delta.hi()) {
        return InequalityVerdict::inconclusive(
            name,
            container_modulus,
            bound,
            &format!(
                "collar hypothesis fails for island {i}: {} is not above eta * delta = {}",
                collar_moduli[i],
                eta * delta.hi()
            ),
        );
    }
    InequalityVerdict::le(name, container_modulus, bound)
        .note(format!("conditional on delta = {} < delta0 = {delta0}", delta.value))
}

/// `mod(V, B) < 2 d^2 mod(U, A) / η` for a degree-`d` covering, under the
/// collar assumption `mod(B', B) > η mod(U, A)`.
pub fn check_covering_form(
    mod_ua: Modulus,
    mod_vb: Modulus,
    mod_collar: Modulus,
    eta: f64,
    d: u32,
    epsilon: f64,
) -> InequalityVerdict {
    let name = "covering lemma";
    let bound = mod_ua.scaled(2.0 * f64::from(d * d) / eta);
    if mod_collar.lo() <= eta * mod_ua.hi() {
        return InequalityVerdict::inconclusive(
            name,
            mod_vb,
            bound,
            &format!(
                "collar assumption fails: {mod_collar} is not above eta * mod(U, A) = {}",
                eta * mod_ua.hi()
            ),
        );
    }
    InequalityVerdict::le(name, mod_vb, bound)
        .note(format!("conditional on mod(U, A) = {} < epsilon = {epsilon}", mod_ua.value))
}
