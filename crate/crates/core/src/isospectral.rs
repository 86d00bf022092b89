//! Isospectral Laplacian families from similarity transforms `QᵀLQ` with
//! orthonormal `Q` fixing the all-ones vector, and from agent relabeling.
//!
//! "Distinct" here means element-wise different matrices. Relabelings are
//! isomorphic as graphs; isomorphism classes are not computed.

use std::collections::HashSet;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matcore::{
    inverse_permutation, permutation_matrix, permutation_of, validate_iso_transform, SquareMatrix,
};
use crate::spectral::LAPLACIAN_TOLERANCE;
use crate::topology::{require_structural_laplacian, validate_laplacian, AgentConfiguration};

/// Largest order enumerated exhaustively (8! = 40320 conjugations).
pub const ENUMERATION_CAP: usize = 8;
/// Seed used for sampled families when the caller does not pick one.
pub const DEFAULT_SAMPLING_SEED: u64 = 0x1503_C0DE;
/// Tolerance on `Q` when accepting a similarity transform.
pub const TRANSFORM_TOLERANCE: f64 = 1e-9;
/// Element-wise tolerance below which a result counts as the base matrix.
pub const DISTINCTNESS_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IsoFamilyEntry {
    /// Zero-based permutation when the transform is a permutation matrix.
    pub perm: Option<Vec<usize>>,
    pub transform: SquareMatrix,
    pub result: SquareMatrix,
    pub laplacian_structured: bool,
    pub distinct_from_base: bool,
}

/// `QᵀLQ` after checking `Q` and `L`. The zero row sums of the result follow
/// from `Q·1 = 1`; they are verified here rather than assumed.
pub fn similarity_transform(l: &SquareMatrix, q: &SquareMatrix) -> Result<IsoFamilyEntry> {
    if l.order() != q.order() {
        return Err(Error::OrderMismatch {
            left: l.order(),
            right: q.order(),
        });
    }
    let verdict = validate_iso_transform(q, TRANSFORM_TOLERANCE);
    if !verdict.passes() {
        return Err(Error::InvalidTransform(verdict.failures().join("; ")));
    }
    require_structural_laplacian(l, LAPLACIAN_TOLERANCE)?;

    let perm = permutation_of(q);
    let result = match &perm {
        Some(p) => l.conjugate_by_permutation(p)?,
        None => &(&q.transpose() * l) * q,
    };

    let row_tol = 1e-8 * l.max_abs().max(1.0);
    if let Some(bad) = result.row_sums().iter().find(|s| s.abs() > row_tol) {
        return Err(Error::InvalidTransform(format!(
            "transformed matrix has row sum {bad:e}"
        )));
    }

    Ok(entry(l, q.clone(), perm, result))
}

fn entry(
    base: &SquareMatrix,
    transform: SquareMatrix,
    perm: Option<Vec<usize>>,
    result: SquareMatrix,
) -> IsoFamilyEntry {
    let laplacian_structured = validate_laplacian(&result, LAPLACIAN_TOLERANCE).passes();
    let distinct_from_base = !result.approx_eq(base, DISTINCTNESS_TOLERANCE);
    IsoFamilyEntry {
        perm,
        transform,
        result,
        laplacian_structured,
        distinct_from_base,
    }
}

/// How permutations are chosen for [`permutation_family`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyMode {
    /// All non-identity permutations in lexicographic order; orders above
    /// [`ENUMERATION_CAP`] are refused.
    Enumerate,
    /// Uniformly shuffled permutations from a seeded ChaCha8 stream.
    Sample { seed: u64 },
}

impl FamilyMode {
    /// Exhaustive when affordable, otherwise sampled with
    /// [`DEFAULT_SAMPLING_SEED`].
    pub fn auto(order: usize) -> Self {
        if order <= ENUMERATION_CAP {
            FamilyMode::Enumerate
        } else {
            FamilyMode::Sample {
                seed: DEFAULT_SAMPLING_SEED,
            }
        }
    }
}

/// Conjugates of `l` by up to `limit` non-identity permutations. With
/// `dedupe`, permutations whose conjugate equals (bit for bit) one already
/// produced are skipped, so the entries are the distinct relabelings.
pub fn permutation_family(
    l: &SquareMatrix,
    limit: usize,
    dedupe: bool,
    mode: FamilyMode,
) -> Result<Vec<IsoFamilyEntry>> {
    require_structural_laplacian(l, LAPLACIAN_TOLERANCE)?;
    let n = l.order();
    if limit == 0 {
        return Ok(Vec::new());
    }
    let identity: Vec<usize> = (0..n).collect();

    let perms: Box<dyn Iterator<Item = Vec<usize>>> = match mode {
        FamilyMode::Enumerate => {
            if n > ENUMERATION_CAP {
                return Err(Error::OrderTooLarge {
                    order: n,
                    cap: ENUMERATION_CAP,
                });
            }
            Box::new((0..n).permutations(n))
        }
        FamilyMode::Sample { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut p = identity.clone();
            // Bounded for orders with few permutations.
            let draws = limit.saturating_mul(64).max(1024);
            Box::new(
                std::iter::repeat_with(move || {
                    p.shuffle(&mut rng);
                    p.clone()
                })
                .take(draws),
            )
        }
    };

    let mut seen_perms = HashSet::new();
    let mut seen_results = HashSet::new();
    let mut out = Vec::new();
    for perm in perms {
        if perm == identity || !seen_perms.insert(perm.clone()) {
            continue;
        }
        let result = l.conjugate_by_permutation(&perm)?;
        if dedupe && !seen_results.insert(result.exact_key()) {
            continue;
        }
        let transform = permutation_matrix(&perm)?;
        out.push(entry(l, transform, Some(perm), result));
        if out.len() == limit {
            break;
        }
    }
    Ok(out)
}

/// Reorders agents so that the rebuilt Laplacian is `JᵀLJ` for
/// `J = permutation_matrix(perm)`: new position `i` holds old agent
/// `perm⁻¹(i)`. Ids travel with positions.
pub fn relabel_configuration(
    config: &AgentConfiguration,
    perm: &[usize],
) -> Result<AgentConfiguration> {
    if perm.len() != config.len() {
        return Err(Error::NotBijection {
            order: config.len(),
        });
    }
    let inverse = inverse_permutation(perm)?;
    let agents = inverse.iter().map(|&k| config.agents[k].clone()).collect();
    AgentConfiguration::new(config.sigma, config.range, agents)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::matcore::ones_axis_rotation;
    use crate::spectral::is_isospectral;
    use crate::topology::{build_laplacian, Agent};

    #[test]
    fn relabeling_examples() {
        let e = similarity_transform(&fixtures::l1(), &fixtures::j1()).unwrap();
        assert!(e.result.exact_eq(&fixtures::l2()));
        assert!(e.laplacian_structured && e.distinct_from_base);
        assert_eq!(e.perm, Some(vec![3, 2, 1, 0]));

        let e = similarity_transform(&fixtures::l1(), &fixtures::j2()).unwrap();
        assert!(e.result.exact_eq(&fixtures::l3()));
        assert!(e.distinct_from_base);

        let e = similarity_transform(&fixtures::l1(), &SquareMatrix::identity(4)).unwrap();
        assert!(e.result.exact_eq(&fixtures::l1()));
        assert!(!e.distinct_from_base);
    }

    #[test]
    fn permutation_path_matches_matrix_product() {
        let l = fixtures::l4_prime();
        let j = permutation_matrix(&[2, 0, 3, 1]).unwrap();
        let e = similarity_transform(&l, &j).unwrap();
        let product = &(&j.transpose() * &l) * &j;
        assert!(e.result.approx_eq(&product, 1e-12));
    }

    #[test]
    fn rejects_invalid_transform() {
        let c = std::f64::consts::FRAC_1_SQRT_2;
        let rot = SquareMatrix::from_rows(&[[c, -c], [c, c]]).unwrap();
        let l = fixtures::path(2);
        assert!(matches!(
            similarity_transform(&l, &rot),
            Err(Error::InvalidTransform(_))
        ));
        assert!(matches!(
            similarity_transform(&l, &SquareMatrix::identity(3)),
            Err(Error::OrderMismatch { .. })
        ));
    }

    #[test]
    fn rotation_breaks_laplacian_structure() {
        let base = fixtures::path(4);
        let q = ones_axis_rotation(4, std::f64::consts::PI / 6.0).unwrap();
        let e = similarity_transform(&base, &q).unwrap();
        assert!(e.perm.is_none());
        assert!(is_isospectral(&base, &e.result, 1e-9).unwrap());
        assert!(e.result.is_symmetric(1e-12));
        assert!(e.result.row_sums().iter().all(|s| s.abs() < 1e-12));
        let v = validate_laplacian(&e.result, 1e-9);
        assert!(!v.nonpositive_offdiag);
        assert!(!e.laplacian_structured);
        // Entry (1, 4) becomes a positive "weight" of about 0.244.
        assert!((e.result.get(0, 3) - 0.2440).abs() < 1e-4);
    }

    #[test]
    fn three_node_path_keeps_structure_under_rotation() {
        // Conjugates of the 3-node path keep Σw = 2 and Σ wᵢwⱼ = 1, which
        // forces every weight into [0, 4/3]; no rotation breaks the sign
        // pattern at this order.
        let base = fixtures::path(3);
        for k in 0..48 {
            let theta = std::f64::consts::TAU * k as f64 / 48.0;
            let q = ones_axis_rotation(3, theta).unwrap();
            let e = similarity_transform(&base, &q).unwrap();
            assert!(is_isospectral(&base, &e.result, 1e-9).unwrap());
            assert!(e.laplacian_structured, "theta = {theta}");
        }
    }

    #[test]
    fn family_counts() {
        let family =
            permutation_family(&fixtures::l1(), usize::MAX, true, FamilyMode::Enumerate).unwrap();
        assert_eq!(family.len(), 6);
        assert!(family.iter().any(|e| e.result.exact_eq(&fixtures::l2())));
        assert!(family.iter().any(|e| e.result.exact_eq(&fixtures::l3())));
        assert!(family.iter().all(|e| e.laplacian_structured));

        let k4 = permutation_family(
            &fixtures::complete(4),
            usize::MAX,
            true,
            FamilyMode::Enumerate,
        )
        .unwrap();
        assert_eq!(k4.len(), 1);
        assert!(!k4[0].distinct_from_base);

        let all =
            permutation_family(&fixtures::l1(), usize::MAX, false, FamilyMode::Enumerate).unwrap();
        assert_eq!(all.len(), 23);
    }

    #[test]
    fn family_order_is_lexicographic() {
        let first = permutation_family(&fixtures::l1(), 2, false, FamilyMode::Enumerate).unwrap();
        assert_eq!(first.len(), 2);
        assert_eq!(first[0].perm, Some(vec![0, 1, 3, 2]));
        assert_eq!(first[1].perm, Some(vec![0, 2, 1, 3]));
        assert!(first[1].result.exact_eq(&fixtures::l3()));
    }

    #[test]
    fn large_orders_need_sampling() {
        let l = fixtures::path(9);
        assert_eq!(
            permutation_family(&l, 5, false, FamilyMode::Enumerate),
            Err(Error::OrderTooLarge { order: 9, cap: 8 })
        );
        let a = permutation_family(&l, 5, false, FamilyMode::auto(9)).unwrap();
        let b = permutation_family(
            &l,
            5,
            false,
            FamilyMode::Sample {
                seed: DEFAULT_SAMPLING_SEED,
            },
        )
        .unwrap();
        assert_eq!(a.len(), 5);
        assert_eq!(a, b);
        for e in &a {
            assert!(is_isospectral(&l, &e.result, 1e-9).unwrap());
        }
        let c = permutation_family(&l, 5, false, FamilyMode::Sample { seed: 7 }).unwrap();
        assert_ne!(a, c);
    }

    fn square_config() -> AgentConfiguration {
        AgentConfiguration::new(
            1.5,
            2.0,
            vec![
                Agent::new("p", 0.0, 0.0),
                Agent::new("q", 1.2, 0.1),
                Agent::new("r", 1.1, 1.4),
                Agent::new("s", -0.3, 1.0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn relabeling_conjugates_laplacian() {
        let config = square_config();
        let l = build_laplacian(&config).unwrap();
        for perm in [[0, 1, 2, 3], [3, 2, 1, 0], [0, 2, 1, 3], [1, 3, 0, 2]] {
            let moved = relabel_configuration(&config, &perm).unwrap();
            let j = permutation_matrix(&perm).unwrap();
            let expected = &(&j.transpose() * &l) * &j;
            assert!(build_laplacian(&moved).unwrap().approx_eq(&expected, 1e-15));
        }
        assert_eq!(
            relabel_configuration(&config, &[0, 1, 2, 3]).unwrap(),
            config
        );
        assert!(relabel_configuration(&config, &[0, 1, 1, 3]).is_err());
        assert!(relabel_configuration(&config, &[0, 1, 2]).is_err());
    }
}
