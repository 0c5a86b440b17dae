//! Acceptance suite. Prints one PASS/FAIL line per criterion and fails if any
//! criterion fails. Run with `--nocapture` to see the lines.

use std::time::{Duration, Instant};

use gelfand_core::analysis::{self, UscConfig};
use gelfand_core::gelfand::{self, characters, CharacterSet};
use gelfand_core::io::{Report, Status};
use gelfand_core::lipschitz;
use gelfand_core::vvfa::{
    self, ACharacterKind, AValuedFunction, Certificate, CertificateOutcome, FiniteSpace, ScalarFunction,
};
use gelfand_core::{gallery, random, Algebra, Element, Error, Tolerances, C64};

const SPECTRUM_HAUSDORFF: f64 = 1e-7;
const CERTIFICATE_RESIDUAL: f64 = 1e-8;
const A_CHARACTER_RESIDUAL: f64 = 1e-9;
const LIP_SLACK: f64 = 1e-10;
const USC_C_BOUND: f64 = 10.0;
const PERTURBATIONS: usize = 32;

struct Outcome {
    pass: bool,
    detail: String,
    report: String,
}

fn finish(name: &str, seed: u64, pass: bool, detail: String, report: Report) -> Outcome {
    let report = report
        .status(if pass { Status::Pass } else { Status::Fail })
        .with("criterion", name)
        .with("detail", &detail)
        .to_json();
    Outcome { pass, detail, report: format!("{seed}:{report}") }
}

// Independent oracles built straight from the structure constants.

fn regular(alg: &Algebra, a: &[C64]) -> faer::Mat<C64> {
    let n = alg.dim();
    faer::Mat::from_fn(n, n, |k, j| (0..n).map(|i| a[i] * alg.structure(i, j, k)).sum())
}

fn op_norm(alg: &Algebra, a: &[C64]) -> f64 {
    regular(alg, a).singular_values().expect("svd")[0]
}

fn product(alg: &Algebra, a: &[C64], b: &[C64]) -> Vec<C64> {
    let n = alg.dim();
    (0..n)
        .map(|k| {
            (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| a[i] * b[j] * alg.structure(i, j, k)).sum()
        })
        .collect()
}

fn difference(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn certificate_residual(alg: &Algebra, f: &AValuedFunction, lambda: &ScalarFunction, cert: &Certificate) -> f64 {
    let mut total = vec![C64::new(0.0, 0.0); alg.dim()];
    for (label, a) in cert.points.iter().zip(&cert.coefficients) {
        let x = f.space().index_of(label).expect("certificate point in the space");
        let shifted: Vec<C64> =
            alg.unit_coeffs().iter().zip(f.value(x).coeffs()).map(|(u, v)| u * lambda.values()[x] - v).collect();
        for (t, p) in total.iter_mut().zip(product(alg, a.coeffs(), &shifted)) {
            *t += p;
        }
    }
    op_norm(alg, &difference(alg.unit_coeffs(), &total))
}

fn hausdorff<T>(a: &[T], b: &[T], dist: impl Fn(&T, &T) -> f64) -> f64 {
    let one_way = |from: &[T], to: &[T]| {
        from.iter().map(|p| to.iter().map(|q| dist(p, q)).fold(f64::INFINITY, f64::min)).fold(0.0, f64::max)
    };
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    one_way(a, b).max(one_way(b, a))
}

fn distinct_values(alg: &Algebra, values: &[Element], radius: f64) -> Vec<Element> {
    let mut out: Vec<Element> = Vec::new();
    for v in values {
        if out.iter().all(|w| op_norm(alg, &difference(v.coeffs(), w.coeffs())) > radius) {
            out.push(v.clone());
        }
    }
    out
}

fn semisimple_gallery() -> Vec<(String, Algebra)> {
    gallery::GALLERY_NAMES
        .iter()
        .map(|name| (name.to_string(), gallery::gallery(name).expect("gallery entry")))
        .filter(|(_, a)| a.is_semisimple(Tolerances::default().rank).semisimple)
        .collect()
}

fn perturbed(rng: &mut random::SeededRng, base: &ScalarFunction) -> ScalarFunction {
    let noise = random::scalar_function(rng, base.space());
    base.zip_with(&noise, |a, b| a + b * 0.5)
}

fn criterion_1(seed: u64) -> Outcome {
    let tol = Tolerances::default();
    let mut worst = 0.0f64;
    let mut failures = 0;
    for i in 0..200u64 {
        let s = seed.wrapping_add(i);
        let alg = random::semisimple_algebra(&mut random::seeded(s), 2 + (i as usize % 5));
        let chars = match characters(&alg, &tol, s) {
            Ok(c) => c,
            Err(_) => {
                failures += 1;
                continue;
            }
        };
        let mut rng = random::seeded(s ^ 0x5eed);
        for _ in 0..5 {
            let a = random::element(&mut rng, &alg);
            let image: Vec<C64> = chars.characters().iter().map(|phi| phi.eval(&a)).collect();
            let l = regular(&alg, a.coeffs());
            let l = nalgebra::DMatrix::from_fn(l.nrows(), l.ncols(), |r, c| l[(r, c)]);
            let Some(schur) = nalgebra::Schur::try_new(l, 1e-15, 100_000) else {
                failures += 1;
                continue;
            };
            let eig: Vec<C64> = schur.unpack().1.diagonal().iter().copied().collect();
            let d = hausdorff(&image, &eig, |p, q| (p - q).norm());
            worst = worst.max(d);
            if gelfand::spectrum(&alg, &a, &chars, &tol).is_err() {
                failures += 1;
            }
        }
    }
    let pass = failures == 0 && worst <= SPECTRUM_HAUSDORFF;
    let detail = format!("1000 elements, max Hausdorff {worst:.2e} (tol {SPECTRUM_HAUSDORFF:e}), failures {failures}");
    let report = Report::new("criterion-1", seed).residual("hausdorff", worst).with("failures", failures);
    finish("dual-oracle spectrum equality", seed, pass, detail, report)
}

struct Instance {
    alg: Algebra,
    f: AValuedFunction,
    chars: CharacterSet,
    lambdas: Vec<ScalarFunction>,
}

fn membership_instances(seed: u64) -> Vec<Instance> {
    let tol = Tolerances::default();
    (0..200u64)
        .map(|i| {
            let s = seed.wrapping_add(i);
            let alg = if i % 2 == 0 {
                gallery::gallery(gallery::GALLERY_NAMES[(i as usize / 2) % gallery::GALLERY_NAMES.len()])
                    .expect("gallery")
            } else {
                random::semisimple_algebra(&mut random::seeded(s), 1 + (i as usize / 2) % 6)
            };
            let chars = characters(&alg, &tol, s).expect("characters");
            let mut rng = random::seeded(s ^ 0xf00d);
            let f = random::function(&mut rng, &alg, &FiniteSpace::indexed(1 + i as usize % 4));
            let image = vvfa::vv_spectrum_chars(&f, &chars, tol.dedup);
            let mut lambdas = image.points().to_vec();
            for _ in 0..PERTURBATIONS {
                let base = &image.points()[rand::Rng::random_range(&mut rng, 0..image.len())];
                lambdas.push(perturbed(&mut rng, base));
            }
            Instance { alg, f, chars, lambdas }
        })
        .collect()
}

fn criterion_2(seed: u64, instances: &[Instance]) -> Outcome {
    let tol = Tolerances::default();
    let (mut checked, mut members, mut disagreements, mut ambiguous, mut errors) = (0, 0, 0, 0, 0);
    for inst in instances {
        let image = vvfa::vv_spectrum_chars(&inst.f, &inst.chars, tol.dedup);
        for lambda in &inst.lambdas {
            checked += 1;
            let by_characters = image.distance_to(lambda) <= tol.dedup;
            match vvfa::vv_spectrum_membership(&inst.alg, &inst.f, lambda, &inst.chars, &tol) {
                Ok(m) if m.member == by_characters => members += usize::from(m.member),
                Ok(_) | Err(Error::OracleDisagreement(_)) => disagreements += 1,
                Err(Error::NumericalFailure { .. }) => ambiguous += 1,
                Err(_) => errors += 1,
            }
        }
    }
    let pass = disagreements == 0 && ambiguous == 0 && errors == 0;
    let detail = format!(
        "{} instances, {checked} lambdas ({members} members), disagreements {disagreements}, ambiguous {ambiguous}, errors {errors}",
        instances.len()
    );
    let report = Report::new("criterion-2", seed)
        .with("checked", checked)
        .with("members", members)
        .with("disagreements", disagreements)
        .with("ambiguous", ambiguous)
        .with("errors", errors);
    finish("vector-valued spectrum biconditional", seed, pass, detail, report)
}

fn criterion_3(seed: u64, instances: &[Instance]) -> Outcome {
    let tol = Tolerances::default();
    let (mut certified, mut failures) = (0, 0);
    let (mut worst_reported, mut worst_independent) = (0.0f64, 0.0f64);
    for inst in instances {
        let image = vvfa::vv_spectrum_chars(&inst.f, &inst.chars, tol.dedup);
        for lambda in inst.lambdas.iter().filter(|l| image.distance_to(l) > tol.dedup) {
            match vvfa::certificate(&inst.alg, &inst.f, lambda, &inst.chars, &tol) {
                Ok(CertificateOutcome::Certificate(cert)) => {
                    let independent = certificate_residual(&inst.alg, &inst.f, lambda, &cert);
                    worst_reported = worst_reported.max(cert.residual);
                    worst_independent = worst_independent.max(independent);
                    if cert.residual <= CERTIFICATE_RESIDUAL && independent <= CERTIFICATE_RESIDUAL {
                        certified += 1;
                    } else {
                        failures += 1;
                    }
                }
                _ => failures += 1,
            }
        }
    }
    let pass = failures == 0 && certified > 0;
    let detail = format!(
        "{certified} non-members certified, max residual {worst_reported:.2e} reported / {worst_independent:.2e} recomputed (tol {CERTIFICATE_RESIDUAL:e}), failures {failures}"
    );
    let report = Report::new("criterion-3", seed)
        .with("certified", certified)
        .with("failures", failures)
        .residual("reported", worst_reported)
        .residual("recomputed", worst_independent);
    finish("certificate soundness", seed, pass, detail, report)
}

fn criterion_4(seed: u64) -> Outcome {
    let tol = Tolerances::default();
    let (mut single, mut single_mismatch) = (0, 0);
    for (g, name) in gallery::GALLERY_NAMES.iter().enumerate() {
        let alg = gallery::gallery(name).expect("gallery");
        let chars = characters(&alg, &tol, seed).expect("characters");
        let mut rng = random::seeded(seed ^ g as u64);
        let mut elements = alg.basis_elements();
        elements.extend((0..5).map(|_| random::element(&mut rng, &alg)));
        for a in &elements {
            single += 1;
            let sp = gelfand::spectrum(&alg, a, &chars, &tol);
            let joint = gelfand::joint_spectrum(&alg, std::slice::from_ref(a), &chars, &tol, seed);
            let same = match (sp, joint) {
                (Ok(sp), Ok(joint)) => {
                    let firsts: Vec<C64> = joint.set.points().iter().map(|p| p[0]).collect();
                    joint.set.points().iter().all(|p| p.len() == 1) && firsts == sp.set.points()
                }
                _ => false,
            };
            single_mismatch += usize::from(!same);
        }
    }
    let (mut tuples, mut tuple_failures, mut probes) = (0, 0, 0);
    for i in 0..100u64 {
        let s = seed.wrapping_add(i);
        let alg = if i % 2 == 0 {
            gallery::gallery(gallery::GALLERY_NAMES[(i as usize / 2) % gallery::GALLERY_NAMES.len()]).expect("gallery")
        } else {
            random::semisimple_algebra(&mut random::seeded(s), 1 + (i as usize / 2) % 6)
        };
        let chars = characters(&alg, &tol, s).expect("characters");
        let mut rng = random::seeded(s ^ 0xbeef);
        let tuple: Vec<Element> = (0..1 + i as usize % 4).map(|_| random::element(&mut rng, &alg)).collect();
        tuples += 1;
        match gelfand::joint_spectrum(&alg, &tuple, &chars, &tol, s) {
            Ok(r) => probes += r.members_checked + r.probes_checked,
            Err(_) => tuple_failures += 1,
        }
    }
    let pass = single_mismatch == 0 && tuple_failures == 0;
    let detail = format!(
        "n=1: {single} gallery elements, {single_mismatch} mismatches; n<=4: {tuples} tuples, {probes} membership checks, {tuple_failures} failures"
    );
    let report = Report::new("criterion-4", seed)
        .with("single_mismatch", single_mismatch)
        .with("tuple_failures", tuple_failures)
        .with("membership_checks", probes);
    finish("joint spectrum reduction", seed, pass, detail, report)
}

fn criterion_5(seed: u64) -> Outcome {
    let tol = Tolerances::default();
    let algebras = semisimple_gallery();
    let (mut failures, mut worst) = (0, 0.0f64);
    for i in 0..100u64 {
        let s = seed.wrapping_add(i);
        let (_, alg) = &algebras[i as usize % algebras.len()];
        let space = FiniteSpace::indexed(1 + (i as usize / algebras.len()) % 4);
        let mut rng = random::seeded(s);
        let mut values: Vec<Element> = (0..space.len()).map(|_| random::element(&mut rng, alg)).collect();
        if i % 3 == 0 && values.len() > 1 {
            values[1] = values[0].clone();
        }
        let f = AValuedFunction::new(space.clone(), alg, values).expect("function");
        let chars = characters(alg, &tol, s).expect("characters");
        let frak = characters(&vvfa::scalar_function_algebra(&space), &tol, s).expect("characters");
        let expected = distinct_values(alg, f.values(), tol.dedup);
        match vvfa::a_valued_spectrum(alg, &f, &chars, &frak, &tol) {
            Ok(sp) => {
                let dist = |a: &Element, b: &Element| op_norm(alg, &difference(a.coeffs(), b.coeffs()));
                let gap = hausdorff(&sp.set, &expected, dist)
                    .max(hausdorff(&sp.a_character_images, &expected, dist))
                    .max(hausdorff(&sp.range, &expected, dist));
                worst = worst.max(gap);
                let exact = sp.set.len() == expected.len() && sp.a_character_images.len() == expected.len();
                if !(exact
                    && gap <= SPECTRUM_HAUSDORFF
                    && sp.range_excess <= SPECTRUM_HAUSDORFF
                    && sp.image_hausdorff <= SPECTRUM_HAUSDORFF)
                {
                    failures += 1;
                }
            }
            Err(_) => failures += 1,
        }
    }
    let pass = failures == 0;
    let detail = format!("100 instances, max Hausdorff to f(X) over the chain {worst:.2e} (tol {SPECTRUM_HAUSDORFF:e}), failures {failures}");
    let report = Report::new("criterion-5", seed).residual("hausdorff", worst).with("failures", failures);
    finish("A-valued spectrum equals the range", seed, pass, detail, report)
}

fn criterion_6(seed: u64) -> Outcome {
    let tol = Tolerances::default();
    let (mut instances, mut failures, mut worst_compat, mut worst_eval) = (0, 0, 0.0f64, 0.0f64);
    for (name, alg) in semisimple_gallery() {
        let chars = characters(&alg, &tol, seed).expect("characters");
        for points in 1..=4 {
            instances += 1;
            let space = FiniteSpace::indexed(points);
            let frak = characters(&vvfa::scalar_function_algebra(&space), &tol, seed).expect("characters");
            let lifted = match vvfa::enumerate_a_characters(&alg, &space, &chars, &frak, &tol) {
                Ok(l) => l,
                Err(e) => {
                    eprintln!("criterion 6: {name} on {points} points: {e}");
                    failures += 1;
                    continue;
                }
            };
            let n = alg.dim();
            let mut seen = vec![false; points];
            for psi in &lifted {
                worst_compat = worst_compat.max(psi.residuals().compatibility);
                let ACharacterKind::Evaluation(label) = psi.kind() else {
                    failures += 1;
                    continue;
                };
                let x = space.index_of(label).expect("label in space");
                seen[x] = true;
                let m = psi.matrix();
                let mut dev = 0.0f64;
                for r in 0..n {
                    for c in 0..n * points {
                        let expected = if c == x * n + r { 1.0 } else { 0.0 };
                        dev = dev.max((m[(r, c)] - C64::new(expected, 0.0)).norm());
                    }
                }
                worst_eval = worst_eval.max(dev);
            }
            if lifted.len() != points || !seen.iter().all(|&s| s) {
                failures += 1;
            }
        }
    }
    let pass = failures == 0 && worst_compat <= A_CHARACTER_RESIDUAL && worst_eval <= A_CHARACTER_RESIDUAL;
    let detail = format!(
        "{instances} instances, max compatibility {worst_compat:.2e}, max distance to evaluation {worst_eval:.2e} (tol {A_CHARACTER_RESIDUAL:e}), failures {failures}"
    );
    let report = Report::new("criterion-6", seed)
        .residual("compatibility", worst_compat)
        .residual("evaluation", worst_eval)
        .with("failures", failures);
    finish("A-character enumeration", seed, pass, detail, report)
}

fn criterion_7(seed: u64) -> Outcome {
    let tol = Tolerances::default();
    let (mut failures, mut worst_mult, mut worst_lip) = (0, f64::NEG_INFINITY, 0.0f64);
    for i in 0..100u64 {
        let s = seed.wrapping_add(i);
        let mut rng = random::seeded(s);
        let metric = random::metric(&mut rng, 1 + i as usize % 6);
        let alg = random::semisimple_algebra(&mut rng, 1 + (i as usize / 6) % 4);
        let f = random::function(&mut rng, &alg, metric.space());
        let g = random::function(&mut rng, &alg, metric.space());
        let fg = f.mul(&alg, &g).expect("same algebra");
        let norm = |h: &AValuedFunction| lipschitz::lip_norm(&alg, h, &metric).expect("norm");
        let excess = norm(&fg) - norm(&f) * norm(&g);
        worst_mult = worst_mult.max(excess);
        let uniform = vvfa::uniform_norm(&alg, &f);
        let n = metric.space().len();
        let mut lip = 0.0f64;
        for x in 0..n {
            for y in 0..n {
                if x != y {
                    let d = op_norm(&alg, &difference(f.value(x).coeffs(), f.value(y).coeffs()));
                    lip = lip.max(d / metric.distance(x, y));
                }
            }
        }
        let reported = lipschitz::lip_constant(&alg, &f, &metric).expect("constant");
        worst_lip = worst_lip.max((reported - lip).abs() / lip.max(1.0));
        let natural = lipschitz::lip_natural_check(&metric, &vvfa::scalar_function_algebra(metric.space()), &tol, s)
            .map(|r| r.natural)
            .unwrap_or(false);
        let chars = characters(&alg, &tol, s).expect("characters");
        let frak = characters(&vvfa::scalar_function_algebra(metric.space()), &tol, s).expect("characters");
        let range_ok = match vvfa::a_valued_spectrum(&alg, &f, &chars, &frak, &tol) {
            Ok(sp) => {
                let expected = distinct_values(&alg, f.values(), tol.dedup);
                sp.set.len() == expected.len()
                    && hausdorff(&sp.set, &expected, |a, b| op_norm(&alg, &difference(a.coeffs(), b.coeffs())))
                        <= SPECTRUM_HAUSDORFF
            }
            Err(_) => false,
        };
        if !(excess <= LIP_SLACK && uniform <= norm(&f) && natural && range_ok && worst_lip <= 1e-12) {
            failures += 1;
        }
    }
    let pass = failures == 0;
    let detail = format!(
        "100 metrics, max ||fg||_L - ||f||_L ||g||_L = {worst_mult:.2e} (slack {LIP_SLACK:e}), Lipschitz constant error {worst_lip:.1e}, failures {failures}"
    );
    let report = Report::new("criterion-7", seed)
        .residual("submultiplicativity", worst_mult)
        .residual("lipschitz_constant", worst_lip)
        .with("failures", failures);
    finish("Lipschitz algebra", seed, pass, detail, report)
}

fn criterion_8(seed: u64) -> Outcome {
    let tol = Tolerances::default();
    let (mut usc_failures, mut worst_c) = (0, 0.0f64);
    for i in 0..20u64 {
        let s = seed.wrapping_add(i);
        let alg = gallery::gallery(gallery::GALLERY_NAMES[i as usize % gallery::GALLERY_NAMES.len()]).expect("gallery");
        let f = random::function(&mut random::seeded(s), &alg, &FiniteSpace::indexed(1 + i as usize % 3));
        match analysis::usc_experiment(&alg, &f, &UscConfig::new(10, 0.5, s), &tol) {
            Ok(r) => {
                worst_c = worst_c.max(r.fitted_c);
                if !(r.pass && r.fitted_c <= USC_C_BOUND) {
                    usc_failures += 1;
                }
            }
            Err(_) => usc_failures += 1,
        }
    }
    let algebras = semisimple_gallery();
    let (mut trials, mut protected, mut setup_failures) = (0, 0, 0);
    for i in 0..10u64 {
        let s = seed.wrapping_add(100 + i);
        let (_, alg) = &algebras[i as usize % algebras.len()];
        let chars = characters(alg, &tol, s).expect("characters");
        let mut rng = random::seeded(s);
        let f = random::function(&mut rng, alg, &FiniteSpace::indexed(1 + i as usize % 4));
        let image = vvfa::vv_spectrum_chars(&f, &chars, tol.dedup);
        let lambda = loop {
            let base = &image.points()[rand::Rng::random_range(&mut rng, 0..image.len())];
            let l = perturbed(&mut rng, base);
            if image.distance_to(&l) > tol.dedup {
                break l;
            }
        };
        let result = match vvfa::certificate(alg, &f, &lambda, &chars, &tol) {
            Ok(CertificateOutcome::Certificate(cert)) => {
                analysis::neighborhood_trials(alg, &f, &lambda, &cert, &chars, &tol, 10, s)
            }
            Ok(_) => Err(Error::InvalidArgument("non-member classified as member".into())),
            Err(e) => Err(e),
        };
        match result {
            Ok(r) => {
                trials += r.trials;
                protected += r.protected;
            }
            Err(_) => setup_failures += 1,
        }
    }
    let pass = usc_failures == 0 && setup_failures == 0 && trials == 100 && protected == trials;
    let detail = format!(
        "20 runs, max fitted C {worst_c:.3} (bound {USC_C_BOUND}), failures {usc_failures}; neighborhoods {protected}/{trials} protected, setup failures {setup_failures}"
    );
    let report = Report::new("criterion-8", seed)
        .with("fitted_c", worst_c)
        .with("usc_failures", usc_failures)
        .with("trials", trials)
        .with("protected", protected)
        .with("setup_failures", setup_failures);
    finish("upper semicontinuity", seed, pass, detail, report)
}

fn criterion_9(seed: u64) -> Outcome {
    let tol = Tolerances::default();
    let alg = gallery::gallery("dual").expect("gallery");
    let chars = characters(&alg, &tol, seed).expect("characters");
    let (mut non_singleton, mut membership_failures, mut not_refused) = (0, 0, 0);
    for i in 0..50u64 {
        let space = FiniteSpace::indexed(1 + i as usize % 4);
        let f = random::function(&mut random::seeded(seed.wrapping_add(i)), &alg, &space);
        let sp = vvfa::vv_spectrum_chars(&f, &chars, tol.dedup);
        non_singleton += usize::from(sp.len() != 1);
        match vvfa::vv_spectrum_membership(&alg, &f, &sp.points()[0], &chars, &tol) {
            Ok(m) if m.member => {}
            _ => membership_failures += 1,
        }
        let frak = characters(&vvfa::scalar_function_algebra(&space), &tol, seed).expect("characters");
        if !matches!(vvfa::a_valued_spectrum(&alg, &f, &chars, &frak, &tol), Err(Error::SemisimplicityRequired)) {
            not_refused += 1;
        }
    }
    let pass = chars.len() == 1 && non_singleton == 0 && membership_failures == 0 && not_refused == 0;
    let detail = format!(
        "{} character(s), 50 functions: {non_singleton} non-singleton spectra, {membership_failures} membership failures, {not_refused} avspec calls not refused",
        chars.len()
    );
    let report = Report::new("criterion-9", seed)
        .with("characters", chars.len())
        .with("non_singleton", non_singleton)
        .with("not_refused", not_refused);
    finish("non-semisimple behaviour", seed, pass, detail, report)
}

fn run_all(seed: u64, mut timed: impl FnMut(usize, Duration)) -> Vec<Outcome> {
    let mut out = Vec::new();
    let mut clock = |n: usize, run: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let o = run();
        timed(n, start.elapsed());
        o
    };
    out.push(clock(1, &mut || criterion_1(seed)));
    let instances = membership_instances(seed);
    out.push(clock(2, &mut || criterion_2(seed, &instances)));
    out.push(clock(3, &mut || criterion_3(seed, &instances)));
    out.push(clock(4, &mut || criterion_4(seed)));
    out.push(clock(5, &mut || criterion_5(seed)));
    out.push(clock(6, &mut || criterion_6(seed)));
    out.push(clock(7, &mut || criterion_7(seed)));
    out.push(clock(8, &mut || criterion_8(seed)));
    out.push(clock(9, &mut || criterion_9(seed)));
    out
}

#[test]
fn acceptance() {
    const SEED: u64 = 7;
    let limits = [(1, Duration::from_secs(10)), (2, Duration::from_secs(30))];
    let mut elapsed = [Duration::ZERO; 10];
    let first = run_all(SEED, |n, d| elapsed[n] = d);
    let second = run_all(SEED, |_, _| {});

    let mut all = true;
    for (i, o) in first.iter().enumerate() {
        let n = i + 1;
        let limit = limits.iter().find(|(k, _)| *k == n).map(|(_, l)| *l);
        let in_time = limit.is_none_or(|l| elapsed[n] <= l);
        let pass = o.pass && in_time;
        all &= pass;
        let timing = match limit {
            Some(l) => format!("{:.2}s (limit {}s)", elapsed[n].as_secs_f64(), l.as_secs()),
            None => format!("{:.2}s", elapsed[n].as_secs_f64()),
        };
        println!("criterion {n:>2}: {}  {}  [{timing}]", if pass { "PASS" } else { "FAIL" }, o.detail);
    }
    let identical = first.iter().zip(&second).filter(|(a, b)| a.report == b.report).count();
    let deterministic = identical == first.len();
    all &= deterministic;
    println!(
        "criterion 10: {}  {identical}/{} criterion reports byte-identical on repeat",
        if deterministic { "PASS" } else { "FAIL" },
        first.len()
    );
    assert!(all, "acceptance criteria failed");
}
