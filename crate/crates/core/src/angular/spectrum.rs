use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::exact::{nullspace, ExactMatrix};
use super::poly::{cq, from_coordinates, homogeneous_basis, PolySpinor, PolySpinorJson};
use super::{apply_L, L_matrix};
use crate::clifford::CliffordRep;
use crate::error::{Error, Result};

/// Upper bound on the per-degree basis size `m · C(n+d−1, d)`.
pub const DEFAULT_BASIS_CAP: usize = 2000;

/// `k ∈ Z` is in `S_L = Z ∖ {1, …, n−2}`.
pub fn is_admissible(n: usize, k: i64) -> bool {
    !(1..=n as i64 - 2).contains(&k)
}

pub fn admissible_spectrum(n: usize, k_lo: i64, k_hi: i64) -> Result<Vec<i64>> {
    if k_lo > k_hi {
        return Err(Error::InvalidInput(format!("empty window [{k_lo}, {k_hi}]")));
    }
    Ok((k_lo..=k_hi).filter(|&k| is_admissible(n, k)).collect())
}

/// Eigenvalues of `L` on one homogeneous degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeBlock {
    pub degree: u32,
    pub dimension: usize,
    /// `(k, multiplicity)`, ascending in `k`.
    pub eigenvalues: Vec<(i64, usize)>,
}

impl DegreeBlock {
    /// Multiplicities add up to the space dimension.
    pub fn is_complete(&self) -> bool {
        self.eigenvalues.iter().map(|(_, m)| m).sum::<usize>() == self.dimension
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumEntry {
    pub eigenvalue: i64,
    /// Total over all degrees `≤ degree_cap`.
    pub multiplicity: usize,
    pub eigenbasis: Vec<PolySpinor>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AngularSpectrum {
    pub n: usize,
    pub m: usize,
    pub degree_cap: u32,
    pub blocks: Vec<DegreeBlock>,
    pub entries: Vec<SpectrumEntry>,
}

impl AngularSpectrum {
    pub fn entry(&self, k: i64) -> Option<&SpectrumEntry> {
        self.entries.iter().find(|e| e.eigenvalue == k)
    }

    pub fn eigenvalues(&self) -> Vec<i64> {
        self.entries.iter().map(|e| e.eigenvalue).collect()
    }

    pub fn to_json_value(&self, with_basis: bool) -> SpectrumJson {
        SpectrumJson {
            n: self.n,
            m: self.m,
            degree_cap: self.degree_cap,
            blocks: self.blocks.clone(),
            entries: self
                .entries
                .iter()
                .map(|e| SpectrumEntryJson {
                    eigenvalue: e.eigenvalue,
                    multiplicity: e.multiplicity,
                    basis: with_basis.then(|| e.eigenbasis.iter().map(PolySpinor::to_json_value).collect()),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumJson {
    pub n: usize,
    pub m: usize,
    pub degree_cap: u32,
    pub blocks: Vec<DegreeBlock>,
    pub entries: Vec<SpectrumEntryJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEntryJson {
    pub eigenvalue: i64,
    pub multiplicity: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub basis: Option<Vec<PolySpinorJson>>,
}

/// Diagonalizes `L` on each homogeneous degree `0..=degree_cap` by exact
/// kernels of `L − kI` for integer `k ∈ [−d−n, d+n]`.
///
/// Every returned eigenvector satisfies `Lp = kp` exactly, and each degree's
/// multiplicities must add up to its dimension; either failure is an
/// [`Error::Internal`].
pub fn spectrum_bruteforce(rep: &CliffordRep, degree_cap: u32, basis_cap: usize) -> Result<AngularSpectrum> {
    let (n, m) = (rep.n(), rep.m());
    let mut blocks = Vec::new();
    let mut by_k: BTreeMap<i64, Vec<PolySpinor>> = BTreeMap::new();

    for d in 0..=degree_cap {
        let basis = homogeneous_basis(n, m, d);
        if basis.len() > basis_cap {
            return Err(Error::BasisTooLarge {
                size: basis.len(),
                cap: basis_cap,
            });
        }
        let l = ExactMatrix::from_gauss(&L_matrix(rep, d)?);
        let window = d as i64 + n as i64;
        let mut eigenvalues = Vec::new();
        for k in -window..=window {
            let kernel = nullspace(&l.shifted(k));
            if kernel.is_empty() {
                continue;
            }
            for v in &kernel {
                let p = from_coordinates(n, m, &basis, v);
                if apply_L(rep, &p)? != p.scale(&cq(k, 0)) {
                    return Err(Error::Internal(format!(
                        "eigenvector for k = {k} at degree {d} fails Lp = kp"
                    )));
                }
                by_k.entry(k).or_default().push(p);
            }
            eigenvalues.push((k, kernel.len()));
        }
        let block = DegreeBlock {
            degree: d,
            dimension: basis.len(),
            eigenvalues,
        };
        if !block.is_complete() {
            return Err(Error::Internal(format!(
                "degree {d}: multiplicities sum to {} of {}",
                block.eigenvalues.iter().map(|(_, m)| m).sum::<usize>(),
                block.dimension
            )));
        }
        blocks.push(block);
    }

    let entries = by_k
        .into_iter()
        .map(|(k, basis)| SpectrumEntry {
            eigenvalue: k,
            multiplicity: basis.len(),
            eigenbasis: basis,
        })
        .collect();
    Ok(AngularSpectrum {
        n,
        m,
        degree_cap,
        blocks,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::build_generators;

    #[test]
    fn admissible_sets() {
        assert_eq!(admissible_spectrum(3, -2, 3).unwrap(), vec![-2, -1, 0, 2, 3]);
        assert_eq!(admissible_spectrum(2, -2, 2).unwrap(), vec![-2, -1, 0, 1, 2]);
        assert_eq!(admissible_spectrum(5, 0, 4).unwrap(), vec![0, 4]);
        assert!(admissible_spectrum(3, 2, 1).is_err());
    }

    #[test]
    fn n3_degree0_is_constants() {
        let rep = build_generators(3).unwrap();
        let s = spectrum_bruteforce(&rep, 0, DEFAULT_BASIS_CAP).unwrap();
        assert_eq!(s.eigenvalues(), vec![0]);
        assert_eq!(s.entry(0).unwrap().multiplicity, 2);
    }

    #[test]
    fn n3_degree1_excludes_one() {
        let rep = build_generators(3).unwrap();
        let s = spectrum_bruteforce(&rep, 1, DEFAULT_BASIS_CAP).unwrap();
        let b1 = &s.blocks[1];
        assert_eq!(b1.dimension, 6);
        // L = −σ·ℓ: j = 3/2 gives k = −1, j = 1/2 gives k = 2
        assert_eq!(b1.eigenvalues, vec![(-1, 4), (2, 2)]);
    }

    #[test]
    fn n3_degree3_never_hits_excluded() {
        let rep = build_generators(3).unwrap();
        let s = spectrum_bruteforce(&rep, 3, DEFAULT_BASIS_CAP).unwrap();
        assert!(s.eigenvalues().iter().all(|&k| is_admissible(3, k)));
        assert!(s.blocks.iter().all(DegreeBlock::is_complete));
    }

    #[test]
    fn n2_degree2_has_both_signs() {
        let rep = build_generators(2).unwrap();
        let s = spectrum_bruteforce(&rep, 2, DEFAULT_BASIS_CAP).unwrap();
        let ks = s.eigenvalues();
        assert!(ks.iter().any(|&k| k < 0));
        assert!(ks.iter().any(|&k| k >= 1));
    }

    #[test]
    fn basis_cap_guard() {
        let rep = build_generators(4).unwrap();
        assert!(matches!(
            spectrum_bruteforce(&rep, 3, 50),
            Err(Error::BasisTooLarge { .. })
        ));
    }

    #[test]
    fn json_export_omits_basis_on_request() {
        let rep = build_generators(3).unwrap();
        let s = spectrum_bruteforce(&rep, 1, DEFAULT_BASIS_CAP).unwrap();
        let lean = serde_json::to_string(&s.to_json_value(false)).unwrap();
        assert!(!lean.contains("basis\""));
        let full = s.to_json_value(true);
        assert_eq!(
            full.entries[0].basis.as_ref().unwrap().len(),
            full.entries[0].multiplicity
        );
    }
}
