//! Seeded randomized property checks for the Clifford layer.
//!
//! Exact identities are compared with `==` over `Z[√2]`; the reflection
//! commutation check runs in `f64` on numerically certified spin elements.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::spin::{
    certify, left_representation, reflection_r, standard_norm, vector_action, NUMERIC_TOL,
};
use super::{CliffordElement, CliffordError, MultiIndex};
use crate::number_ring::RingElement;

type Exact = CliffordElement<RingElement>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    /// Ambient dimension `n + 1` for the randomized checks.
    pub generators: usize,
    /// Random cases per algebraic identity.
    pub cases: usize,
    /// Certified spin elements for the reflection commutation check.
    pub spin_cases: usize,
    /// Largest `n` for the exhaustive `r₁` sign table.
    pub max_table_n: usize,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            generators: 5,
            cases: 500,
            spin_cases: 100,
            max_table_n: 6,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    /// Largest deviation seen; zero for exact checks that passed.
    pub max_error: f64,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }
}

fn ring(rng: &mut ChaCha8Rng) -> RingElement {
    RingElement::new(rng.gen_range(-4i64..=4), rng.gen_range(-3i64..=3))
}

fn sparse(rng: &mut ChaCha8Rng, gens: usize) -> Result<Exact, CliffordError> {
    let terms = rng.gen_range(1..=4);
    let items: Vec<_> = (0..terms)
        .map(|_| (MultiIndex(rng.gen_range(0..(1u32 << gens))), ring(rng)))
        .collect();
    Exact::from_terms(gens, items)
}

/// Random real vector of standardized norm `+1`.
fn unit_vector(rng: &mut ChaCha8Rng, gens: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..gens)
            .map(|i| {
                if i == 0 {
                    rng.gen_range(-0.5..0.5)
                } else {
                    rng.gen_range(-1.0..1.0)
                }
            })
            .collect();
        let q = standard_norm(&v);
        if q > 0.1 {
            return v.iter().map(|x| x / q.sqrt()).collect();
        }
    }
}

/// `(−1)^{|J|+1}` if `1 ∉ J`, `(−1)^{|J|}` if `1 ∈ J`.
pub fn r1_sign(j: MultiIndex) -> i32 {
    let parity = j.grade() + u32::from(!j.contains(1));
    if parity.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn exact_check(
    name: &'static str,
    cases: usize,
    mut trial: impl FnMut() -> Result<bool, CliffordError>,
) -> Result<CheckResult, CliffordError> {
    let mut failures = 0;
    for _ in 0..cases {
        if !trial()? {
            failures += 1;
        }
    }
    Ok(CheckResult {
        name,
        cases,
        failures,
        max_error: if failures == 0 { 0.0 } else { f64::INFINITY },
    })
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport, CliffordError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let gens = cfg.generators;
    let mut checks = Vec::new();

    checks.push(exact_check("associativity", cfg.cases, || {
        let (x, y, z) = (
            sparse(&mut rng, gens)?,
            sparse(&mut rng, gens)?,
            sparse(&mut rng, gens)?,
        );
        Ok(x.product(&y)?.product(&z)? == x.product(&y.product(&z)?)?)
    })?);
    checks.push(exact_check(
        "reversal_anti_automorphism",
        cfg.cases,
        || {
            let (x, y) = (sparse(&mut rng, gens)?, sparse(&mut rng, gens)?);
            Ok(x.product(&y)?.reversal() == y.reversal().product(&x.reversal())?)
        },
    )?);
    let rep_gens = gens.min(4);
    checks.push(exact_check(
        "left_representation_homomorphism",
        cfg.cases,
        || {
            let (x, y) = (sparse(&mut rng, rep_gens)?, sparse(&mut rng, rep_gens)?);
            Ok(left_representation(&x.product(&y)?)
                == left_representation(&x)
                    .mul(&left_representation(&y))
                    .expect("square"))
        },
    )?);

    let mut table_cases = 0;
    let mut table_failures = 0;
    for n in 1..=cfg.max_table_n {
        let g = n + 1;
        for mask in 0..(1u32 << g) {
            let j = MultiIndex(mask);
            let e = Exact::from_terms(g, [(j, RingElement::from_int(1))])?;
            let expected = e.scale(&RingElement::from_int(r1_sign(j)));
            table_cases += 1;
            if reflection_r(1, &e)? != expected {
                table_failures += 1;
            }
        }
    }
    checks.push(CheckResult {
        name: "r1_sign_table",
        cases: table_cases,
        failures: table_failures,
        max_error: if table_failures == 0 {
            0.0
        } else {
            f64::INFINITY
        },
    });

    let mut worst = 0.0f64;
    let mut failures = 0;
    for _ in 0..cfg.spin_cases {
        let mut s = CliffordElement::<f64>::one(gens)?;
        for _ in 0..4 {
            s = s.product(&CliffordElement::vector(&unit_vector(&mut rng, gens))?)?;
        }
        if !certify(&s).is_spin() {
            failures += 1;
            continue;
        }
        let rs = reflection_r(1, &s)?;
        for axis in 0..gens {
            let e = CliffordElement::<f64>::basis(gens, &[axis])?;
            let lhs = reflection_r(
                1,
                &CliffordElement::vector(&vector_action(&s, &e.vector_part())?)?,
            )?
            .vector_part();
            let rhs = vector_action(&rs, &reflection_r(1, &e)?.vector_part())?;
            worst = worst.max(max_abs_diff(&lhs, &rhs));
        }
    }
    if worst > NUMERIC_TOL {
        failures += 1;
    }
    checks.push(CheckResult {
        name: "reflection_commutation",
        cases: cfg.spin_cases,
        failures,
        max_error: worst,
    });

    Ok(SuiteReport {
        config: *cfg,
        checks,
    })
}
