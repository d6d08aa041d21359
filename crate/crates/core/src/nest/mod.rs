//! Escape route, decoration, the modified principal nest and returns to `R`.

pub mod oracle;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub use oracle::{Depth1Class, GeometricOracle, PieceOracle, RealLineOracle};

/// Iterates of `f^q` tried before declaring the map satellite renormalizable.
pub const DEFAULT_SATELLITE_BUDGET: usize = 10_000;

/// One step `kappa_m` of the escape route: `f^{qm}(0)` lies in a univalent
/// pullback of `Z1[z_index]` of depth `q(n-m)+1`; `branch` picks it among
/// its siblings, one bit per `f^q` step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EscapeStep {
    pub m: usize,
    pub depth: usize,
    pub z_index: usize,
    pub branch: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decoration {
    pub q: usize,
    pub n: Option<usize>,
    pub kappa: Option<Vec<EscapeStep>>,
    pub satellite: bool,
    pub budget: usize,
}

impl Decoration {
    /// Depth `nq + 1` of `E^0 = V^0`.
    pub fn root_depth(&self) -> Option<usize> {
        self.n.map(|n| n * self.q + 1)
    }
}

pub fn escape_route(oracle: &dyn PieceOracle, budget: usize) -> Result<Decoration> {
    let q = oracle.q();
    let mut n = None;
    let mut z_index = 0;
    for m in 1..=budget {
        match oracle.depth1_class(q * m)? {
            Depth1Class::Critical => {}
            Depth1Class::Right(i) => {
                n = Some(m);
                z_index = i;
                break;
            }
            Depth1Class::Left(i) => {
                return Err(Error::Internal(format!(
                    "f^{}(0) left Y^1 through Y1[{i}]",
                    q * m
                )))
            }
        }
        // A periodic orbit that has come back to 0 without escaping
        // never will.
        if oracle.period().is_some_and(|p| (q * m) % p == 0) {
            break;
        }
    }
    let Some(n) = n else {
        return Ok(Decoration {
            q,
            n: None,
            kappa: None,
            satellite: true,
            budget,
        });
    };
    let mut kappa = Vec::with_capacity(n);
    for m in 1..=n {
        let branch = (0..n - m)
            .map(|l| oracle.side(q * (m + l), q * (n - m - l) + 1))
            .collect::<Result<Vec<u8>>>()?;
        kappa.push(EscapeStep {
            m,
            depth: q * (n - m) + 1,
            z_index,
            branch,
        });
    }
    Ok(Decoration {
        q,
        n: Some(n),
        kappa: Some(kappa),
        satellite: false,
        budget,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChildKind {
    Root,
    First,
    Fine,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RenormStatus {
    Renormalizable,
    Escaping,
    BudgetExhausted,
    Satellite,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NestBudgets {
    /// Iterates searched for one return.
    pub return_budget: usize,
    /// Returns of `g_chi` checked before calling the map renormalizable.
    pub renorm_returns: usize,
    pub max_levels: usize,
}

impl Default for NestBudgets {
    fn default() -> Self {
        NestBudgets {
            return_budget: 1_000_000,
            renorm_returns: 1000,
            max_levels: 24,
        }
    }
}

/// `E^k = Y^{depth}` with `g_k = f^{return_time} : E^k -> E^{k-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NestLevel {
    pub depth: usize,
    pub return_time: usize,
    pub kind: ChildKind,
    pub degree: u64,
    /// For fine children, the least `k` with `g^k(0)` outside the parent.
    pub escape_index: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrincipalNest {
    pub decoration: Decoration,
    pub levels: Vec<NestLevel>,
    pub chi: Option<usize>,
    pub period: Option<usize>,
    pub status: RenormStatus,
    pub budgets: NestBudgets,
}

impl PrincipalNest {
    pub fn depths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.depth).collect()
    }

    pub fn return_times(&self) -> Vec<usize> {
        self.levels.iter().skip(1).map(|l| l.return_time).collect()
    }
}

/// Degree of `f^t` from the critical piece of depth `d + t` onto the one of
/// depth `d`: two per time the orbit of 0 passes a critical piece.
fn return_degree(oracle: &dyn PieceOracle, d: usize, t: usize) -> Result<u64> {
    let mut deg = 1u64;
    for s in 0..t {
        if oracle.same_piece(0, s, d + t - s)? {
            deg = deg.saturating_mul(2);
        }
    }
    Ok(deg)
}

fn first_return(oracle: &dyn PieceOracle, d: usize, after: usize, budget: usize) -> Result<Option<usize>> {
    for t in after + 1..=after + budget {
        if oracle.same_piece(0, t, d)? {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

/// First child of the critical piece of depth `d`: the return time `l` and
/// the degree of `f^l` on the child `Y^{d+l}`.
pub fn first_child(oracle: &dyn PieceOracle, d: usize, budget: usize) -> Result<Option<NestLevel>> {
    let Some(l) = first_return(oracle, d, 0, budget)? else {
        return Ok(None);
    };
    Ok(Some(NestLevel {
        depth: d + l,
        return_time: l,
        kind: ChildKind::First,
        degree: return_degree(oracle, d, l)?,
        escape_index: None,
    }))
}

/// Fine child of the first child `W = Y^{d}` with return time `l`.
pub fn fine_child(oracle: &dyn PieceOracle, d: usize, l: usize, budget: usize) -> Result<Option<NestLevel>> {
    let mut k = 1;
    while oracle.same_piece(0, k * l, d)? {
        k += 1;
        if k * l > budget {
            return Ok(None);
        }
    }
    let Some(t) = first_return(oracle, d, k * l, budget)? else {
        return Ok(None);
    };
    Ok(Some(NestLevel {
        depth: d + t,
        return_time: t,
        kind: ChildKind::Fine,
        degree: return_degree(oracle, d, t)?,
        escape_index: Some(k),
    }))
}

fn returns_forever(oracle: &dyn PieceOracle, level: &NestLevel, returns: usize) -> Result<bool> {
    for j in 1..=returns {
        if !oracle.same_piece(0, j * level.return_time, level.depth)? {
            return Ok(false);
        }
        if oracle.period().is_some_and(|p| (j * level.return_time) % p == 0) {
            return Ok(true);
        }
    }
    Ok(true)
}

/// The nest `E^0 = Y^{nq+1} ⊃ E^1 ⊃ ...` with first children at odd
/// levels and fine children at even ones, stopped at the first odd level
/// whose return map keeps 0 in `E^chi`.
pub fn build_nest(oracle: &dyn PieceOracle, decoration: &Decoration, budgets: NestBudgets) -> Result<PrincipalNest> {
    let mut nest = PrincipalNest {
        decoration: decoration.clone(),
        levels: Vec::new(),
        chi: None,
        period: None,
        status: RenormStatus::BudgetExhausted,
        budgets,
    };
    let Some(d0) = decoration.root_depth() else {
        nest.status = RenormStatus::Satellite;
        return Ok(nest);
    };
    nest.levels.push(NestLevel {
        depth: d0,
        return_time: 0,
        kind: ChildKind::Root,
        degree: 1,
        escape_index: None,
    });
    for k in 1..=budgets.max_levels {
        let prev = *nest.levels.last().unwrap();
        let child = if k % 2 == 1 {
            first_child(oracle, prev.depth, budgets.return_budget)?
        } else {
            fine_child(oracle, prev.depth, prev.return_time, budgets.return_budget)?
        };
        let Some(child) = child else {
            nest.status = RenormStatus::Escaping;
            return Ok(nest);
        };
        nest.levels.push(child);
        if k % 2 == 1 && returns_forever(oracle, &child, budgets.renorm_returns)? {
            nest.chi = Some(k);
            nest.period = Some(child.return_time);
            nest.status = RenormStatus::Renormalizable;
            return Ok(nest);
        }
    }
    Ok(nest)
}

/// Times at which the critical orbit visits `R` (and `L`) below `horizon`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReturnRecord {
    pub r_times: Vec<usize>,
    pub l_times: Vec<usize>,
    pub gaps: Vec<usize>,
    pub threshold: usize,
    /// Some gap between consecutive `R` visits exceeds the threshold.
    pub has_long_gap: bool,
}

/// Visits of `f^i(0)`, `start <= i < horizon`, to `R` and `L`; gaps are
/// compared with `m q n`.
pub fn return_record(
    oracle: &dyn PieceOracle,
    decoration: &Decoration,
    start: usize,
    horizon: usize,
    m: usize,
) -> Result<ReturnRecord> {
    let threshold = m * decoration.q * decoration.n.unwrap_or(1);
    let mut r_times = Vec::new();
    let mut l_times = Vec::new();
    for i in start..horizon {
        match oracle.depth1_class(i)? {
            Depth1Class::Right(_) => r_times.push(i),
            Depth1Class::Left(_) => l_times.push(i),
            Depth1Class::Critical => {}
        }
    }
    let gaps: Vec<usize> = r_times.windows(2).map(|w| w[1] - w[0]).collect();
    let has_long_gap = gaps.iter().any(|&g| g > threshold);
    Ok(ReturnRecord {
        r_times,
        l_times,
        gaps,
        threshold,
        has_long_gap,
    })
}

#[cfg(test)]
mod tests;
