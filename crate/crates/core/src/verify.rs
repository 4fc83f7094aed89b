//! Verification suites. Each suite enumerates its instances, checks them in
//! parallel and keeps the first counterexample in enumeration order.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::coha::{
    euler_class_from_weights, monomial_symmetric, quiver_polynomial, restriction, shuffle_mul,
    simple_structure_rank_check, structure_factor_image, structure_rank_check, CohaElement, CohaError,
    StructureReport,
};
use crate::modrep::{ModuleType, QuiverContext, RepError};
use crate::poly::{symmetrize_check, MPoly, Var};
use crate::qalg::{codim_lemma_terms, reineke_identity_check, QAlgError};
use crate::qseries::{kazarian_sides, QDomain, QSeriesError, Truncated};
use crate::quiver::{euler_form, DimVector, DynkinType, Quiver, QuiverError};
use crate::residue::{ddelta_transform, residue_mul, ResidueError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    QAlg(#[from] QAlgError),
    #[error(transparent)]
    QSeries(#[from] QSeriesError),
    #[error(transparent)]
    Coha(#[from] CohaError),
    #[error(transparent)]
    Residue(#[from] ResidueError),
}

impl VerifyError {
    /// Errors that mean an identity failed rather than bad input.
    fn is_failure(&self) -> bool {
        matches!(
            self,
            VerifyError::Coha(CohaError::Mismatch { .. } | CohaError::NotBlockSymmetric(_))
                | VerifyError::Residue(
                    ResidueError::Mismatch { .. }
                        | ResidueError::TruncationTooLow { .. }
                        | ResidueError::Coha(CohaError::Mismatch { .. } | CohaError::NotBlockSymmetric(_))
                )
                | VerifyError::QAlg(QAlgError::SignMismatch { .. })
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub name: String,
    pub status: Status,
    pub instances_checked: u64,
    pub instances: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}: {} ({} instances)", self.name, self.status, self.instances_checked)?;
        for i in &self.instances {
            writeln!(f, "  {i}")?;
        }
        if let Some(c) = &self.counterexample {
            writeln!(f, "  first counterexample: {c}")?;
        }
        Ok(())
    }
}

type Outcome = Result<Option<String>, VerifyError>;

/// Runs `check` on every labelled instance; `Ok(Some(detail))` marks a failure.
fn run_suite<T: Sync>(name: &str, instances: Vec<(String, T)>, check: impl Fn(&T) -> Outcome + Sync) -> Result<Report, VerifyError> {
    let outcomes: Vec<Outcome> = instances.par_iter().map(|(_, x)| check(x)).collect();
    let mut counterexample = None;
    let mut labels = Vec::with_capacity(instances.len());
    for ((label, _), outcome) in instances.iter().zip(outcomes) {
        let failure = match outcome {
            Ok(None) => None,
            Ok(Some(detail)) => Some(detail),
            Err(e) if e.is_failure() => Some(e.to_string()),
            Err(e) => return Err(e),
        };
        match failure {
            None => labels.push(format!("{label}: ok")),
            Some(detail) => {
                labels.push(format!("{label}: FAIL"));
                counterexample.get_or_insert_with(|| format!("{label}: {detail}"));
            }
        }
    }
    Ok(Report {
        name: name.to_string(),
        status: if counterexample.is_some() { Status::Fail } else { Status::Pass },
        instances_checked: labels.len() as u64,
        instances: labels,
        counterexample,
    })
}

fn nonzero_vectors(n: usize, max_total: u32) -> Vec<DimVector> {
    (1..=max_total).flat_map(|t| DimVector::all_with_total(n, t)).collect()
}

fn orbit_instances(ctx: &QuiverContext, max_total: u32) -> Result<Vec<(String, ModuleType)>, VerifyError> {
    let mut out = Vec::new();
    for g in nonzero_vectors(ctx.quiver().vertex_count(), max_total) {
        for m in ctx.orbits_for(&g)? {
            out.push((format!("gamma={g} m={m}"), m));
        }
    }
    Ok(out)
}

/// The quantum dilogarithm identity up to the componentwise cap, at
/// q-precision `k`.
pub fn verify_reineke(ctx: &QuiverContext, cap: &DimVector, k: u32) -> Result<Report, VerifyError> {
    let outcome = reineke_identity_check(ctx, cap, k)?;
    let detail = outcome
        .mismatch
        .as_ref()
        .map(|(g, l, r)| format!("coefficient of y^{g}: simple side {l}, root side {r}"));
    Ok(Report {
        name: "reineke".into(),
        status: if outcome.holds() { Status::Pass } else { Status::Fail },
        instances_checked: outcome.monomials_compared as u64,
        instances: vec![format!("cap={cap} precision={k}: {} monomials", outcome.monomials_compared)],
        counterexample: detail,
    })
}

/// `sum_m q^codim prod f_{m_u} = prod f_{gamma(i)}` for all `|gamma| <= max_total`.
pub fn verify_betti(ctx: &QuiverContext, max_total: u32, k: u32) -> Result<Report, VerifyError> {
    let dom = Truncated::new(k);
    let instances = nonzero_vectors(ctx.quiver().vertex_count(), max_total)
        .into_iter()
        .map(|g| (format!("gamma={g}"), g))
        .collect();
    run_suite("betti", instances, |g| {
        let (lhs, rhs) = kazarian_sides(ctx, g, &dom)?;
        Ok((!dom.eq(&lhs, &rhs)).then(|| format!("orbit sum {lhs} vs product {rhs}")))
    })
}

/// `sum m_u^2 - sum gamma(i)^2 + 2w - 2 codim = 0` for every orbit.
pub fn verify_codim_lemma(ctx: &QuiverContext, max_total: u32) -> Result<Report, VerifyError> {
    run_suite("codim-lemma", orbit_instances(ctx, max_total)?, |m| {
        let t = codim_lemma_terms(ctx, m)?;
        let sum: i64 = t.iter().sum();
        Ok((sum != 0).then(|| format!("terms {t:?} sum to {sum}")))
    })
}

/// Quiver polynomials are homogeneous of degree `codim` with integer
/// coefficients, and restrict to the Euler class computed from normal weights.
pub fn verify_euler(ctx: &QuiverContext, max_total: u32) -> Result<Report, VerifyError> {
    run_suite("euler", orbit_instances(ctx, max_total)?, |m| {
        let p = quiver_polynomial(ctx, m)?;
        let via_restriction = restriction(ctx, m, &p)?;
        let via_weights = euler_class_from_weights(ctx, m)?;
        Ok((via_restriction != via_weights).then(|| format!("restriction {via_restriction} vs weights {via_weights}")))
    })
}

/// A random symmetric polynomial in `w[1,1..nvars]` of degree at most `max_deg`.
pub fn random_one_block(rng: &mut impl Rng, nvars: u32, max_deg: u32) -> MPoly {
    let mut p = MPoly::integer(rng.gen_range(-3..=3));
    for d in 1..=max_deg {
        let parts = random_partition(rng, d, nvars);
        let c = BigRational::from_integer(BigInt::from(rng.gen_range(-3..=3)));
        p = &p + &monomial_symmetric(0, nvars, &parts).scale(&c);
    }
    if p.is_zero() {
        MPoly::one()
    } else {
        p
    }
}

fn random_partition(rng: &mut impl Rng, n: u32, max_parts: u32) -> Vec<u32> {
    let mut parts = Vec::new();
    let mut left = n;
    while left > 0 && (parts.len() as u32) < max_parts {
        let p = if parts.len() as u32 + 1 == max_parts { left } else { rng.gen_range(1..=left) };
        parts.push(p);
        left -= p;
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));
    parts
}

/// A random homogeneous block-symmetric element of `H_gamma` of degree `deg`
/// (a nonzero constant when `gamma` has no variables).
pub fn random_homogeneous(rng: &mut impl Rng, gamma: &DimVector, deg: u32) -> CohaElement {
    let verts: Vec<usize> = (0..gamma.len()).filter(|&i| gamma[i] > 0).collect();
    if deg == 0 || verts.is_empty() {
        return CohaElement::new(gamma.clone(), MPoly::integer(rng.gen_range(1..=3))).expect("constant");
    }
    let mut p = MPoly::zero();
    while p.is_zero() {
        for _ in 0..2 {
            let mut t = MPoly::integer(rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 });
            let mut left = deg;
            while left > 0 {
                let i = *verts.choose(rng).unwrap();
                let d = rng.gen_range(1..=left);
                t = &t * &monomial_symmetric(i, gamma[i], &random_partition(rng, d, gamma[i]));
                left -= d;
            }
            p = &p + &t;
        }
    }
    CohaElement::new(gamma.clone(), p).expect("block-symmetric by construction")
}

/// A random Laurent polynomial in `a[i,1..gamma1(i)]` of degree at most `max_deg`.
pub fn random_residue_input(rng: &mut impl Rng, gamma1: &DimVector, max_deg: u32) -> MPoly {
    let vars: Vec<Var> = (0..gamma1.len())
        .flat_map(|i| (1..=gamma1[i]).map(move |s| Var::a(i as u32 + 1, s)))
        .collect();
    let mut g = MPoly::integer(rng.gen_range(-2..=2));
    for _ in 0..3 {
        let mut t = MPoly::integer(rng.gen_range(-3..=3));
        for _ in 0..rng.gen_range(0..=max_deg) {
            if let Some(v) = vars.choose(rng) {
                t = &t * &MPoly::var(*v);
            }
        }
        g = &g + &t;
    }
    g
}

fn random_vector(rng: &mut impl Rng, n: usize, max_total: u32) -> DimVector {
    let mut v = vec![0u32; n];
    let total = rng.gen_range(1..=max_total.max(1));
    for _ in 0..total {
        v[rng.gen_range(0..n)] += 1;
    }
    DimVector(v)
}

/// `restriction(f_1 * ... * f_N) = prod f_u(mu) E_m` on random one-block
/// factors of degree at most `max_deg`, over random orbits with
/// `|gamma| <= max_total`.
pub fn verify_euler_products(
    ctx: &QuiverContext,
    max_total: u32,
    max_deg: u32,
    samples: usize,
    seed: u64,
) -> Result<Report, VerifyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let orbits: Vec<ModuleType> = orbit_instances(ctx, max_total)?.into_iter().map(|(_, m)| m).collect();
    if orbits.is_empty() {
        return run_suite("euler-products", Vec::<(String, ())>::new(), |_| Ok(None));
    }
    let mut instances = Vec::with_capacity(samples);
    for _ in 0..samples {
        let m = orbits.choose(&mut rng).unwrap().clone();
        let fs: Vec<MPoly> = m
            .entries()
            .iter()
            .map(|&mu| if mu == 0 { MPoly::integer(rng.gen_range(1..=3)) } else { random_one_block(&mut rng, mu, max_deg) })
            .collect();
        let label = format!(
            "m={m} f=[{}]",
            fs.iter().map(|f| f.to_string()).collect::<Vec<_>>().join("; ")
        );
        instances.push((label, (m, fs)));
    }
    run_suite("euler-products", instances, |(m, fs)| {
        structure_factor_image(ctx, m, fs)?;
        Ok(None)
    })
}

fn structure_outcome(r: &StructureReport) -> Option<String> {
    if let Some(row) = r.rows.iter().find(|row| row.h_dim != row.span_rank || row.generators != row.h_dim) {
        return Some(format!(
            "degree {}: dim H = {}, span rank = {}, generators = {}",
            row.k, row.h_dim, row.span_rank, row.generators
        ));
    }
    r.orbit_injective
        .iter()
        .find(|(_, ok)| !ok)
        .map(|(m, _)| format!("orbit {m}: restricted images are dependent"))
}

fn structure_report(name: &str, r: StructureReport) -> Report {
    let counterexample = structure_outcome(&r);
    let mut instances: Vec<String> = r
        .rows
        .iter()
        .map(|row| format!("gamma={} degree {}: dim H = {}, span rank = {}", r.gamma, row.k, row.h_dim, row.span_rank))
        .collect();
    instances.extend(
        r.orbit_injective
            .iter()
            .map(|(m, ok)| format!("orbit {m}: {}", if *ok { "injective" } else { "not injective" })),
    );
    Report {
        name: name.into(),
        status: if counterexample.is_some() { Status::Fail } else { Status::Pass },
        instances_checked: instances.len() as u64,
        instances,
        counterexample,
    }
}

/// Graded dimensions of the positive-root factorization versus `H_gamma`.
/// Refused with `NoUnitCoordinate` on `E_8`.
pub fn verify_structure(ctx: &QuiverContext, gamma: &DimVector, cap: u32) -> Result<Report, VerifyError> {
    Ok(structure_report("structure", structure_rank_check(ctx, gamma, cap)?))
}

/// Graded dimensions of the simple-root factorization versus `H_gamma`.
pub fn verify_simple_structure(ctx: &QuiverContext, gamma: &DimVector, cap: u32) -> Result<Report, VerifyError> {
    Ok(structure_report("structure-simple", simple_structure_rank_check(ctx, gamma, cap)?))
}

/// Residue product against the shuffle product on random inputs with
/// `|gamma1| + |gamma2| <= max_total` and degrees at most `max_deg`.
pub fn verify_residue(q: &Quiver, max_total: u32, max_deg: u32, samples: usize, seed: u64) -> Result<Report, VerifyError> {
    let n = q.vertex_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut instances = Vec::with_capacity(samples);
    for _ in 0..samples {
        let g1 = random_vector(&mut rng, n, max_total.saturating_sub(1).max(1));
        let g2 = random_vector(&mut rng, n, max_total.saturating_sub(g1.total() as u32).max(1));
        let g = random_residue_input(&mut rng, &g1, max_deg);
        let d = rng.gen_range(0..=max_deg);
        let f2 = random_homogeneous(&mut rng, &g2, d);
        instances.push((format!("gamma1={g1} gamma2={g2} g={g} f2={f2}"), (g1, g, f2)));
    }
    run_suite("residue", instances, |(g1, g, f2)| {
        let residue = residue_mul(q, g, g1, f2)?;
        let shuffle = shuffle_mul(q, &ddelta_transform(q, g1, g)?, f2)?;
        Ok((residue != shuffle).then(|| format!("residue {residue} vs shuffle {shuffle}")))
    })
}

/// Associativity, the grading law and block symmetry on random homogeneous
/// triples, plus `chi = hom - ext` on all pairs of indecomposables.
pub fn verify_engine(ctx: &QuiverContext, triples: usize, seed: u64) -> Result<Report, VerifyError> {
    let q = ctx.quiver();
    let n = q.vertex_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut instances: Vec<(String, EngineCase)> = Vec::new();
    for _ in 0..triples {
        let f: Vec<CohaElement> = (0..3)
            .map(|_| {
                let g = random_vector(&mut rng, n, 2);
                let d = rng.gen_range(0..=2);
                random_homogeneous(&mut rng, &g, d)
            })
            .collect();
        let label = format!(
            "triple {}",
            f.iter().map(|e| format!("{e:?}")).collect::<Vec<_>>().join(", ")
        );
        instances.push((label, EngineCase::Triple(f)));
    }
    for u in 0..ctx.root_count() {
        for v in 0..ctx.root_count() {
            instances.push((format!("chi(beta_{}, beta_{})", u + 1, v + 1), EngineCase::Pair(u, v)));
        }
    }
    run_suite("engine", instances, |case| match case {
        EngineCase::Triple(f) => {
            let left = shuffle_mul(q, &shuffle_mul(q, &f[0], &f[1])?, &f[2])?;
            let right = shuffle_mul(q, &f[0], &shuffle_mul(q, &f[1], &f[2])?)?;
            if left != right {
                return Ok(Some(format!("(fg)h = {left} but f(gh) = {right}")));
            }
            let g = left.gamma();
            if !symmetrize_check(left.poly(), g.entries()) {
                return Ok(Some(format!("{left} is not block-symmetric")));
            }
            let g01 = f[0].gamma() + f[1].gamma();
            let expected = f.iter().map(|e| e.homogeneous_degree().unwrap()).sum::<i64>()
                - euler_form(q, f[0].gamma(), f[1].gamma())?
                - euler_form(q, &g01, f[2].gamma())?;
            Ok((!left.poly().is_zero() && left.homogeneous_degree() != Some(expected))
                .then(|| format!("degree of {left} should be {expected}")))
        }
        EngineCase::Pair(u, v) => {
            let chi = euler_form(q, ctx.root(*u), ctx.root(*v))?;
            let (h, e) = (ctx.hom(*u, *v) as i64, ctx.ext(*u, *v) as i64);
            Ok((chi != h - e).then(|| format!("chi = {chi}, hom = {h}, ext = {e}")))
        }
    })
}

enum EngineCase {
    Triple(Vec<CohaElement>),
    Pair(usize, usize),
}

/// Parameters of [`verify_all`].
#[derive(Clone, Debug)]
pub struct AllConfig {
    pub precision: u32,
    /// Componentwise cap for the dilogarithm identity; defaults by rank.
    pub cap: Option<DimVector>,
    pub seed: u64,
}

impl Default for AllConfig {
    fn default() -> Self {
        AllConfig {
            precision: crate::qseries::DEFAULT_PRECISION,
            cap: None,
            seed: 1,
        }
    }
}

/// Orbit sweeps shrink with the rank so that every type stays at desk scale.
fn sweep_total(n: usize) -> u32 {
    match n {
        0..=4 => 5,
        5..=6 => 4,
        _ => 3,
    }
}

/// Every suite with parameters scaled to the quiver.
pub fn verify_all(ctx: &QuiverContext, cfg: &AllConfig) -> Result<Vec<Report>, VerifyError> {
    let q = ctx.quiver();
    let n = q.vertex_count();
    let total = sweep_total(n);
    let cap = cfg.cap.clone().unwrap_or_else(|| {
        let c = if n <= 4 { 3 } else { 2 };
        DimVector(vec![c; n])
    });
    let ones = DimVector(vec![1; n]);
    let mut reports = vec![
        verify_reineke(ctx, &cap, cfg.precision)?,
        verify_betti(ctx, if n == 4 { 4 } else { total }, cfg.precision)?,
        verify_codim_lemma(ctx, total)?,
        verify_euler(ctx, if n <= 3 { total } else { total.min(4) })?,
        verify_euler_products(ctx, total.min(4), 2, 25, cfg.seed)?,
        verify_simple_structure(ctx, &ones, 4)?,
    ];
    if q.dynkin_type() != DynkinType::E8 {
        reports.push(verify_structure(ctx, &ones, if n <= 4 { 6 } else { 3 })?);
    }
    reports.push(verify_residue(q, 4.min(total), 2, 25, cfg.seed)?);
    reports.push(verify_engine(ctx, 10, cfg.seed)?);
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::{validate_dynkin, RawQuiver};

    fn ctx(n: usize, edges: &[[usize; 2]]) -> QuiverContext {
        QuiverContext::new(
            validate_dynkin(&RawQuiver {
                vertices: n,
                edges: edges.to_vec(),
            })
            .unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn suites_pass_on_a2() {
        let c = ctx(2, &[[2, 1]]);
        for r in verify_all(&c, &AllConfig::default()).unwrap() {
            assert!(r.passed(), "{r}");
            assert!(r.instances_checked > 0, "{}", r.name);
        }
    }

    #[test]
    fn failures_are_reported_not_raised() {
        let r = run_suite("demo", vec![("a".to_string(), 1), ("b".to_string(), 2), ("c".to_string(), 3)], |x| {
            if *x >= 2 {
                Err(CohaError::Mismatch {
                    what: "demo",
                    expected: "1".into(),
                    found: x.to_string(),
                }
                .into())
            } else {
                Ok(None)
            }
        })
        .unwrap();
        assert_eq!(r.status, Status::Fail);
        assert_eq!(r.instances_checked, 3);
        assert!(r.counterexample.unwrap().starts_with("b: "));
        let e = run_suite("demo", vec![("a".to_string(), 1)], |_| {
            Err(CohaError::LengthMismatch { expected: 1, found: 2 }.into())
        });
        assert!(e.is_err());
    }

    #[test]
    fn json_shape() {
        let r = Report {
            name: "x".into(),
            status: Status::Pass,
            instances_checked: 2,
            instances: vec![],
            counterexample: None,
        };
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        assert_eq!(v["status"], "PASS");
        assert_eq!(v["instances_checked"], 2);
        assert!(v.get("counterexample").is_none());
    }
}
