//! The self-check suite behind the `verify` command.
//!
//! Nine criteria, each a fixed set of exact checks. Random inputs come from
//! a seeded ChaCha stream so two runs see the same cases.

use std::fmt::Debug;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::chern_fm::diagram::verify_diagram_generators;
use crate::chern_fm::{
    fibre_pair_transform, fm_transform_ch, mukai_nahm_ch, slope, ChernTriple, Direction, FibrePair,
    Transformed,
};
use crate::elliptic_fibre::{AtiyahBlock, CurvePoint, EllipticCurve, FibreBundleClass};
use crate::lattice::{DivisorClass, SurfaceModel};
use crate::moduli::{
    closed_form_total_dim, fibration_dimensions, lagrangian_check, nahm_bijection_check,
    ModuliDescriptor,
};
use crate::oracle;
use crate::simpson::{HilbertPolynomial, SheafComponent, TorsionSheafModel, Verdict};
use crate::spectral::{spectral_divisor, ProductFamily};

const SEED: u64 = 0x5eed_f00d;
/// Failures kept per criterion; the count is always exact.
const MAX_RECORDED: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub check: String,
    pub expected: String,
    pub got: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub criterion: u8,
    pub name: String,
    pub passed: bool,
    pub checks: u64,
    pub failed: u64,
    pub failures: Vec<Failure>,
}

impl CriterionResult {
    pub fn summary_line(&self) -> String {
        format!(
            "criterion {} [{}] {}: {} checks, {} failed",
            self.criterion,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.checks,
            self.failed
        )
    }
}

struct Checker {
    checks: u64,
    failed: u64,
    failures: Vec<Failure>,
}

impl Checker {
    fn new() -> Self {
        Checker {
            checks: 0,
            failed: 0,
            failures: Vec::new(),
        }
    }

    fn fail(&mut self, check: impl FnOnce() -> String, expected: String, got: String) {
        self.failed += 1;
        if self.failures.len() < MAX_RECORDED {
            self.failures.push(Failure {
                check: check(),
                expected,
                got,
            });
        }
    }

    fn eq<T: PartialEq + Debug>(&mut self, check: impl FnOnce() -> String, expected: T, got: T) {
        self.checks += 1;
        if expected != got {
            self.fail(check, format!("{expected:?}"), format!("{got:?}"));
        }
    }

    fn truth(&mut self, check: impl FnOnce() -> String, got: bool) {
        self.eq(check, true, got);
    }

    /// Unwraps, recording an error as a failed check.
    fn ok<T, E: Debug>(&mut self, check: impl FnOnce() -> String, r: Result<T, E>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.checks += 1;
                self.fail(check, "Ok".into(), format!("{e:?}"));
                None
            }
        }
    }

    fn finish(self, criterion: u8, name: &str) -> CriterionResult {
        CriterionResult {
            criterion,
            name: name.into(),
            passed: self.failed == 0,
            checks: self.checks,
            failed: self.failed,
            failures: self.failures,
        }
    }
}

const SURFACES: [SurfaceModel; 2] = [SurfaceModel::K3, SurfaceModel::ABELIAN];

fn grid() -> impl Iterator<Item = (i64, i64)> {
    (2..=6).flat_map(|r| (2..=6).map(move |k| (r, k)))
}

pub fn transform_character() -> CriterionResult {
    let mut c = Checker::new();
    for s in SURFACES {
        let l = if s.is_abelian() {
            DivisorClass::new(1, 1)
        } else {
            DivisorClass::new(1, 4)
        };
        for (r, k) in grid() {
            let label = || format!("{:?} r={r} k={k}", s.kind);
            let Some(t) = c.ok(label, fm_transform_ch(&ChernTriple::instanton(r, k), &s)) else {
                continue;
            };
            c.eq(
                label,
                Transformed {
                    triple: ChernTriple::new(0, DivisorClass::new(r, k), 0),
                    wit_index: 1,
                },
                t,
            );
            if let Some(p) = c.ok(
                label,
                HilbertPolynomial::of_torsion_character(&t.triple, l, &s),
            ) {
                c.eq(
                    || format!("{} reduced constant", label()),
                    Ratio::from_integer(0),
                    p.reduced_constant(),
                );
            }
        }
    }
    c.finish(1, "transform character")
}

pub fn lagrangian_identity() -> CriterionResult {
    let mut c = Checker::new();
    for s in SURFACES {
        for (r, k) in grid() {
            let label = || format!("{:?} r={r} k={k}", s.kind);
            let Some(m) = c.ok(label, ModuliDescriptor::new(s, r, k)) else {
                continue;
            };
            let d = fibration_dimensions(&m);
            let g = s.arithmetic_genus(DivisorClass::new(r, k));
            c.eq(|| format!("{} base", label()), g, d.base_dim);
            c.eq(|| format!("{} fibre", label()), g, d.fibre_dim);
            c.eq(|| format!("{} total", label()), 2 * g, d.total_dim);
            c.eq(
                || format!("{} closed form", label()),
                closed_form_total_dim(&m),
                d.total_dim,
            );
            c.truth(
                || format!("{} lagrangian_check", label()),
                lagrangian_check(&m),
            );
        }
    }
    c.finish(2, "lagrangian identity")
}

pub fn wall_oracle() -> CriterionResult {
    let mut c = Checker::new();
    for s in SURFACES {
        for bound in 1..=10 {
            let label = || format!("{:?} walls c={bound}", s.kind);
            if let Some(w) = c.ok(label, s.wall_set(bound)) {
                c.eq(label, oracle::walls_brute_force(&s, bound), w.walls);
            }
        }
    }
    let k3 = SurfaceModel::K3;
    c.eq(
        || "find_suitable(4, k3)".into(),
        Ok(DivisorClass::new(1, 4)),
        k3.find_suitable(4),
    );
    let label = || "is_suitable(σ+3f, 4, k3)".to_string();
    if let Some(v) = c.ok(label, k3.is_suitable(DivisorClass::new(1, 3), 4)) {
        c.eq(
            label,
            (false, Some(DivisorClass::new(2, -2))),
            (v.suitable, v.wall),
        );
    }
    c.finish(3, "wall oracle")
}

pub fn extension_regression() -> CriterionResult {
    let mut c = Checker::new();
    let s = SurfaceModel::K3;
    let window: Vec<_> = (1..=6)
        .flat_map(|x| (1..=40).map(move |y| DivisorClass::new(x, y)))
        .filter(|&l| s.is_ample_model(l))
        .collect();
    for d in 1..=5 {
        let a = DivisorClass::new(-1, d);
        let sub = ChernTriple::line_bundle(a, &s);
        let e = sub + ChernTriple::line_bundle(-a, &s);
        let bound = 2 + 2 * d;
        c.eq(|| format!("d={d} c1"), DivisorClass::ZERO, e.c1);
        c.eq(
            || format!("d={d} c2"),
            Ok(-s.sigma_self() + 2 * d),
            e.c2(&s),
        );
        c.eq(|| format!("d={d} c2 value"), Ok(bound), e.c2(&s));

        let mut positive_unsuitable = None;
        let mut suitable = Vec::new();
        for &l in &window {
            let Some(v) = c.ok(
                || format!("d={d} is_suitable({l})"),
                s.is_suitable(l, bound),
            ) else {
                continue;
            };
            if v.suitable {
                suitable.push(l);
            } else if positive_unsuitable.is_none()
                && slope(&sub, l, &s).is_ok_and(|m| m > Ratio::from_integer(0))
            {
                positive_unsuitable = Some(l);
            }
        }
        if let Some(l) = c.ok(|| format!("d={d} find_suitable"), s.find_suitable(bound)) {
            suitable.push(l);
        }
        c.truth(
            || format!("d={d} ample unsuitable L with positive slope"),
            positive_unsuitable.is_some(),
        );
        c.truth(
            || format!("d={d} suitable polarisations found"),
            !suitable.is_empty(),
        );
        for l in suitable {
            if let Some(m) = c.ok(|| format!("d={d} slope at {l}"), slope(&sub, l, &s)) {
                c.truth(
                    || format!("d={d} slope at suitable {l} is {m}, not negative"),
                    m < Ratio::from_integer(0),
                );
            }
        }
    }
    c.finish(4, "extension regression")
}

fn test_curves() -> Vec<EllipticCurve> {
    [5, 7, 11, 13]
        .into_iter()
        .flat_map(|p| [(p, 1, 1), (p, 2, 1)])
        .map(|(p, a, b)| EllipticCurve::new(p, a, b).expect("test curves are nonsingular"))
        .collect()
}

/// Random class of rank 1..=6; about a third of the blocks reuse an earlier
/// point so non-regular classes are common.
fn random_class(rng: &mut ChaCha8Rng, points: &[CurvePoint]) -> FibreBundleClass {
    let mut remaining = rng.gen_range(1..=6u32);
    let mut blocks: Vec<AtiyahBlock> = Vec::new();
    while remaining > 0 {
        let m = rng.gen_range(1..=remaining);
        let q = if !blocks.is_empty() && rng.gen_ratio(1, 3) {
            blocks[rng.gen_range(0..blocks.len())].q
        } else {
            points[rng.gen_range(0..points.len())]
        };
        blocks.push(AtiyahBlock { q, m });
        remaining -= m;
    }
    FibreBundleClass::new(blocks)
}

pub fn fibre_cohomology() -> CriterionResult {
    let mut c = Checker::new();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for curve in test_curves() {
        let points = curve.points();
        let name = format!("y²=x³+{}x+{} over F_{}", curve.a(), curve.b(), curve.p());
        for p in &points {
            for q in &points {
                c.eq(
                    || format!("{name}: {p} + {q}"),
                    Ok(oracle::add_projective(&curve, p, q)),
                    curve.add_points(p, q),
                );
            }
        }
        for _ in 0..120 {
            let v = random_class(&mut rng, &points);
            for t in &points {
                let label = || format!("{name}: V={:?} t={t}", v.blocks);
                let Some((h0, h1)) = c.ok(label, v.h0_h1(t, &curve)) else {
                    continue;
                };
                let matches = v
                    .blocks
                    .iter()
                    .filter(|b| oracle::add_projective(&curve, &b.q, t).is_identity())
                    .count() as u32;
                c.eq(|| format!("{} h0 = h1", label()), h0, h1);
                c.eq(|| format!("{} block matches", label()), matches, h1);
                c.eq(
                    || format!("{} oracle", label()),
                    oracle::fibre_cohomology(&curve, &v, t),
                    (h0, h1),
                );
                if v.is_regular() {
                    c.truth(|| format!("{} regular", label()), h1 <= 1);
                }
            }
        }
    }
    c.finish(5, "fibre cohomology")
}

pub fn spectral_support() -> CriterionResult {
    let mut c = Checker::new();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    let curves = test_curves();
    for i in 0..24 {
        let base = curves[rng.gen_range(0..curves.len())];
        let fibre = curves[rng.gen_range(0..curves.len())];
        let points = fibre.points();
        let family = ProductFamily::new(base, fibre, random_class(&mut rng, &points));
        let label = || format!("family {i}: {:?}", family.blocks.blocks);
        let Some(div) = c.ok(label, spectral_divisor(&family)) else {
            continue;
        };
        c.truth(
            || format!("{} has no vertical part", label()),
            div.vertical.is_empty(),
        );
        for w in &points {
            let predicted: u32 = family
                .blocks
                .blocks
                .iter()
                .filter(|b| match (b.q, *w) {
                    (CurvePoint::Infinity, CurvePoint::Infinity) => true,
                    (CurvePoint::Affine { x, y }, CurvePoint::Affine { x: wx, y: wy }) => {
                        x == wx && (y + wy) % fibre.p() == 0
                    }
                    _ => false,
                })
                .map(|b| b.m)
                .sum();
            let found = div
                .horizontal
                .iter()
                .find(|h| h.w_hat == *w)
                .map_or(0, |h| h.mult);
            let jumps = oracle::fibre_cohomology(&fibre, &family.blocks, w).1 > 0;
            c.eq(|| format!("{} support at {w}", label()), jumps, found > 0);
            c.eq(
                || format!("{} multiplicity at {w}", label()),
                predicted,
                found,
            );
        }
        if let Some(t) = c.ok(
            label,
            fm_transform_ch(&family.chern_triple(), &SurfaceModel::ABELIAN),
        ) {
            c.eq(|| format!("{} class", label()), t.triple.c1, div.class());
        }
    }
    c.finish(6, "spectral divisor")
}

/// Two sections and three fibres on the abelian surface.
pub fn two_sections_three_fibres(degrees: [i64; 5]) -> TorsionSheafModel {
    let s = DivisorClass::SIGMA;
    let f = DivisorClass::FIBRE;
    let components = [s, s, f, f, f]
        .into_iter()
        .zip(degrees)
        .map(|(class, degree)| SheafComponent { class, degree })
        .collect();
    TorsionSheafModel::from_components(SurfaceModel::ABELIAN, components)
}

pub fn stability_trichotomy() -> CriterionResult {
    let mut c = Checker::new();
    let l = DivisorClass::new(1, 1);
    let run = |c: &mut Checker, d: [i64; 5]| {
        c.ok(
            || format!("verdict {d:?}"),
            two_sections_three_fibres(d).stability_verdict(l),
        )
    };

    if let Some(v) = run(&mut c, [2, 1, 1, 1, 1]) {
        c.eq(|| "(2,1,1,1,1)".into(), Verdict::Stable, v.verdict);
    }
    if let Some(v) = run(&mut c, [2, 2, 1, 1, 0]) {
        c.eq(
            || "(2,2,1,1,0)".into(),
            Verdict::SemistableFibreOnly,
            v.verdict,
        );
        let w = v
            .witness
            .as_ref()
            .map(|w| (w.components.clone(), w.chi_sub));
        c.eq(
            || "(2,2,1,1,0) witness".into(),
            Some((vec![0, 1, 2, 3], 0)),
            w,
        );
    }
    if let Some(v) = run(&mut c, [4, 2, 0, 0, 0]) {
        c.eq(|| "(4,2,0,0,0)".into(), Verdict::Unstable, v.verdict);
        c.eq(
            || "(4,2,0,0,0) chi_sub".into(),
            Some(1),
            v.witness.map(|w| w.chi_sub),
        );
    }

    let polarisations = [l, DivisorClass::new(1, 2), DivisorClass::new(2, 1)];
    for d0 in 0..=4 {
        for d1 in 0..=4 {
            for d2 in 0..=4 {
                for d3 in 0..=4 {
                    let d4 = 6 - d0 - d1 - d2 - d3;
                    if !(0..=4).contains(&d4) {
                        continue;
                    }
                    let d = [d0, d1, d2, d3, d4];
                    let model = two_sections_three_fibres(d);
                    for &pl in &polarisations {
                        let label = || format!("{d:?} under {pl}");
                        if let Some(v) = c.ok(label, model.stability_verdict(pl)) {
                            c.eq(label, oracle::brute_force_verdict(&model, pl), v.verdict);
                        }
                    }
                    if let Some(cands) =
                        c.ok(|| format!("{d:?} candidates"), model.subsheaf_candidates())
                    {
                        for (mask, cand) in (1u32..).zip(cands) {
                            c.eq(
                                || format!("{d:?} chi_sub mask {mask}"),
                                oracle::subsheaf_chi(&model, mask),
                                cand.chi_sub,
                            );
                        }
                    }
                }
            }
        }
    }
    c.finish(7, "stability trichotomy")
}

pub fn duality_generators() -> CriterionResult {
    let mut c = Checker::new();
    let report = verify_diagram_generators();
    for check in &report.checks {
        c.truth(|| format!("diagram {:?}", check.generator), check.matches);
    }
    c.truth(
        || "Kronecker factorisation".into(),
        report.matrix_consistent,
    );
    for (r, k) in grid() {
        let e = ChernTriple::instanton(r, k);
        c.eq(
            || format!("mukai_nahm_ch involution r={r} k={k}"),
            Ok(e),
            mukai_nahm_ch(&e).and_then(|t| mukai_nahm_ch(&t)),
        );
        let label = || format!("nahm_bijection_check r={r} k={k}");
        if let Some(m) = c.ok(label, ModuliDescriptor::new(SurfaceModel::ABELIAN, r, k)) {
            c.eq(label, Ok(true), nahm_bijection_check(&m));
        }
        let v = FibrePair {
            rank: r,
            fibre_degree: k,
        };
        c.eq(
            || format!("fibre pair round trip {v:?}"),
            v,
            fibre_pair_transform(
                fibre_pair_transform(v, Direction::Forward),
                Direction::Inverse,
            ),
        );
    }
    c.finish(8, "duality generators")
}

pub fn cli_determinism() -> CriterionResult {
    let mut c = Checker::new();
    let defaults = crate::cli::Defaults::default();
    let first = crate::cli::batch(crate::cli::SAMPLE_BATCH, &defaults, 1);
    let second = crate::cli::batch(crate::cli::SAMPLE_BATCH, &defaults, 4);
    c.eq(
        || "sample batch reports".into(),
        10,
        first.0.lines().count(),
    );
    c.eq(|| "sample batch exit code".into(), 0, first.1);
    c.truth(
        || "sample batch byte identity across --jobs".into(),
        first == second,
    );
    let a = serde_json::to_string(&run_model_criteria()).expect("serializable");
    let b = serde_json::to_string(&run_model_criteria()).expect("serializable");
    c.truth(|| "criteria 1-8 byte identity".into(), a == b);
    c.finish(9, "cli determinism")
}

fn run_model_criteria() -> Vec<CriterionResult> {
    vec![
        transform_character(),
        lagrangian_identity(),
        wall_oracle(),
        extension_regression(),
        fibre_cohomology(),
        spectral_support(),
        stability_trichotomy(),
        duality_generators(),
    ]
}

pub fn run_all() -> Vec<CriterionResult> {
    let mut all = run_model_criteria();
    all.push(cli_determinism());
    all
}
