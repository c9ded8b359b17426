use crate::error::Result;
use crate::instance::Instance;
use crate::matroids::{verify_axioms, AxiomReport};
use crate::objectives::{verify_submodular, SubmodularityReport};

/// Exhaustive property checks of a small instance. Matroids with a ground
/// set above `axiom_cap`, or an objective above `submodular_cap`, are
/// skipped and listed.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub matroids: Vec<(usize, AxiomReport)>,
    pub skipped_matroids: Vec<usize>,
    pub objective: Option<SubmodularityReport>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.matroids.iter().all(|(_, r)| r.passed())
            && self.objective.as_ref().is_none_or(|r| r.passed())
    }
}

pub fn verify_instance(
    instance: &Instance,
    axiom_cap: usize,
    submodular_cap: usize,
) -> Result<VerifyReport> {
    let mut matroids = Vec::new();
    let mut skipped_matroids = Vec::new();
    for (l, m) in instance.matchoid.matroids().iter().enumerate() {
        if m.ground().len() <= axiom_cap {
            matroids.push((l, verify_axioms(m.as_ref(), axiom_cap)?));
        } else {
            skipped_matroids.push(l);
        }
    }
    let f = instance.objective.as_ref();
    let objective = (f.n() <= submodular_cap)
        .then(|| verify_submodular(f, submodular_cap))
        .transpose()?;
    Ok(VerifyReport {
        matroids,
        skipped_matroids,
        objective,
    })
}
