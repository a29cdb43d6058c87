//! End-to-end acceptance suite. Prints one `PASS`/`FAIL` line per criterion
//! and fails if any criterion fails.

use std::collections::BTreeSet;
use std::io::Write;
use std::process::Command;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use mfp_core::geometry::{euclidean_volume, minkowski_points};
use mfp_core::{
    is_valid_subdivision, mfp_vertex_detailed, mfp_vertex_reference, minkowski_integral_vertex, reconstruct,
    fine_mixed_refinement, Covector, LatticePoint, MfpOracle, PerturbedCovector, PointConfiguration, ProjectionSplit,
    RationalPoint, ReferenceOracle, Scalar, VertexOracle, WeightVector,
};
use mfpx::{compute_newton_polytope, ode_problem, parse_raw, parse_system, EliminationProblem, OdeInput, Options, Relations};
use num_traits::Zero;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

const DATA: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data");

/// Written straight to the process stdout so the lines survive capture.
fn report(line: &str) {
    let mut out = std::io::stdout().lock();
    writeln!(out, "{line}").unwrap();
    out.flush().unwrap();
}

struct Ledger {
    failures: Vec<String>,
}

impl Ledger {
    fn record(&mut self, id: &str, ok: bool, detail: String, elapsed: Duration) {
        let verdict = if ok { "PASS" } else { "FAIL" };
        report(&format!("criterion {id}: {verdict} ({detail}; {:.1}s)", elapsed.as_secs_f64()));
        if !ok {
            self.failures.push(format!("criterion {id}: {detail}"));
        }
    }
}

/// Tallies certificate checks on every refinement the oracle produces.
#[derive(Default)]
struct Certificates {
    subdivisions: usize,
    failures: Vec<String>,
}

impl Certificates {
    fn check(&mut self, what: &str, r: &mfp_core::Refinement) {
        self.subdivisions += 1;
        let mut fail = |msg: String| self.failures.push(format!("{what}: {msg}"));
        if let Err(v) = is_valid_subdivision(&r.fine) {
            fail(format!("fine subdivision invalid: {v}"));
        }
        if let Err(v) = is_valid_subdivision(&r.base) {
            fail(format!("base subdivision invalid: {v}"));
        }
        if !r.fine.is_fine_mixed() {
            fail("refinement not fine mixed".into());
        }
        if !r.fine.refines(&r.base) {
            fail("refinement does not refine the base".into());
        }
    }
}

/// The fast oracle, certifying each refinement it computes.
struct CertifyingOracle<'a> {
    inner: MfpOracle,
    certs: &'a Mutex<Certificates>,
    label: String,
}

impl VertexOracle for CertifyingOracle<'_> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn query(&self, gamma: &Covector) -> mfp_core::Result<LatticePoint> {
        let (g, seed) = self.inner.perturb(gamma);
        let out = mfp_vertex_detailed(self.inner.config(), self.inner.split(), &g, seed)?;
        if let Some(r) = &out.refinement {
            self.certs.lock().unwrap().check(&self.label, r);
        }
        Ok(out.vertex)
    }
}

fn certify_problem(problem: &EliminationProblem, label: &str, certs: &Mutex<Certificates>) -> mfp_core::Result<()> {
    let oracle = CertifyingOracle {
        inner: MfpOracle::new(problem.config.clone(), problem.split, 0),
        certs,
        label: label.to_string(),
    };
    reconstruct(&oracle, mfpx::BATCH).map(|_| ())
}

fn below(rng: &mut ChaCha8Rng, n: u64) -> u64 {
    rng.next_u64() % n
}

fn coord(rng: &mut ChaCha8Rng) -> i64 {
    below(rng, 7) as i64 - 3
}

/// Between `min` and `min + spread - 1` random points.
fn random_points(rng: &mut ChaCha8Rng, min: usize, spread: u64, dim: usize) -> Vec<LatticePoint> {
    let count = min + below(rng, spread) as usize;
    (0..count).map(|_| LatticePoint::from_i64(&(0..dim).map(|_| coord(rng)).collect::<Vec<_>>())).collect()
}

fn triangles(d0: i64, d1: i64) -> EliminationProblem {
    let text = format!(
        "dim 2 split 1\npolytope 0: (0,0) ({d0},0) (0,{d0})\npolytope 1: (0,0) ({d1},0) (0,{d1})\n"
    );
    EliminationProblem::from_raw(&parse_raw(&text).unwrap()).unwrap()
}

fn system(file: &str) -> EliminationProblem {
    let text = std::fs::read_to_string(format!("{DATA}/{file}")).unwrap();
    EliminationProblem::from_system(&parse_system(&text).unwrap()).unwrap()
}

fn template(n: usize, d: usize, big_d: usize) -> EliminationProblem {
    ode_problem(&OdeInput::Template { n, d, big_d }, n, Relations::Chained).unwrap()
}

fn lattice(v: &[LatticePoint]) -> BTreeSet<LatticePoint> {
    v.iter().cloned().collect()
}

fn criterion_1(ledger: &mut Ledger, certs: &Mutex<Certificates>) {
    let start = Instant::now();
    let mut bad = Vec::new();
    for (d0, d1) in [(1, 1), (2, 3), (3, 5), (4, 7)] {
        let p = triangles(d0, d1);
        let t = Instant::now();
        let r = compute_newton_polytope(&p, Options::default()).unwrap();
        let want = vec![LatticePoint::from_i64(&[0]), LatticePoint::from_i64(&[d0 * d1])];
        if r.polytope.lattice_vertices() != Some(want) || t.elapsed() > Duration::from_secs(1) {
            bad.push(format!("({d0},{d1})"));
        }
        certify_problem(&p, &format!("triangles ({d0},{d1})"), certs).unwrap();
    }
    ledger.record("1", bad.is_empty(), format!("triangle family, failing: {bad:?}"), start.elapsed());
}

/// A random configuration whose projection spans the eliminated space.
fn oracle_instance(rng: &mut ChaCha8Rng) -> (PointConfiguration, ProjectionSplit) {
    loop {
        let k = 1 + below(rng, 2) as usize;
        let n = k + 1 + below(rng, (5 - k) as u64) as usize;
        let sets = (0..=k).map(|_| random_points(rng, 1, 5, n)).collect();
        let config = PointConfiguration::new(sets).unwrap();
        let split = ProjectionSplit::new(n, k).unwrap();
        let projected: Vec<Vec<LatticePoint>> =
            config.sets().iter().map(|s| s.iter().map(|a| split.p(a)).collect()).collect();
        if PointConfiguration::new(projected).unwrap().is_full_dimensional() {
            return (config, split);
        }
    }
}

fn criterion_2(ledger: &mut Ledger, certs: &Mutex<Certificates>) {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut agree = 0;
    for case in 0..100u64 {
        let (config, split) = oracle_instance(&mut rng);
        let primary = Covector::from_i64(&(0..split.kept()).map(|_| below(&mut rng, 41) as i64 - 20).collect::<Vec<_>>());
        let gamma = PerturbedCovector::with_seed(primary, case);
        let fast = mfp_vertex_detailed(&config, &split, &gamma, case).unwrap();
        if let Some(r) = &fast.refinement {
            certs.lock().unwrap().check(&format!("equivalence case {case}"), r);
        }
        let reference = mfp_vertex_reference(&config, &split, &gamma).unwrap();
        agree += usize::from(fast.vertex.to_rational() == reference);
    }
    let ok = agree == 100 && start.elapsed() < Duration::from_secs(60);
    ledger.record("2", ok, format!("oracle equivalence {agree}/100"), start.elapsed());
}

fn criterion_3(ledger: &mut Ledger, certs: &Mutex<Certificates>) {
    let start = Instant::now();
    let p = system("intro.txt");
    let r = compute_newton_polytope(&p, Options::default()).unwrap();
    let reference = ReferenceOracle::new(p.config.clone(), p.split, 0);
    let slow = reconstruct(&reference, mfpx::BATCH).unwrap();
    let elapsed = start.elapsed();
    let fast_v = lattice(&r.polytope.lattice_vertices().unwrap());
    let slow_v = lattice(&slow.polytope.lattice_vertices().unwrap());
    certify_problem(&p, "intro", certs).unwrap();
    let ok = fast_v == slow_v && (10..=400).contains(&r.subdivisions) && elapsed < Duration::from_secs(120);
    let detail = format!(
        "intro: {} vertices, identical to reference: {}, subdivisions {}",
        fast_v.len(),
        fast_v == slow_v,
        r.subdivisions
    );
    ledger.record("3", ok, detail, start.elapsed());
}

fn criterion_4(ledger: &mut Ledger, certs: &Mutex<Certificates>) {
    let start = Instant::now();
    let opts = Options { seed: 0, verify: true, count_lattice: false };
    let mut ok = true;
    let mut parts = Vec::new();
    let mut pipeline = Duration::ZERO;
    for (file, limit) in [("buse.txt", 200), ("abbott.txt", 750)] {
        let p = system(file);
        let t = Instant::now();
        let r = compute_newton_polytope(&p, opts).unwrap();
        pipeline += t.elapsed();
        ok &= r.verified == Some(true) && r.oracle_calls <= limit;
        parts.push(format!("{file}: verified {:?}, oracle_calls {} <= {limit}", r.verified, r.oracle_calls));
        certify_problem(&p, file, certs).unwrap();
    }
    ok &= pipeline < Duration::from_secs(600);
    parts.push(format!("pipeline {:.1}s", pipeline.as_secs_f64()));
    ledger.record("4", ok, parts.join(", "), start.elapsed());
}

fn criterion_5(ledger: &mut Ledger, certs: &Mutex<Certificates>) {
    let start = Instant::now();
    let opts = Options { seed: 0, verify: false, count_lattice: true };
    let mut ok = true;
    let mut parts = Vec::new();
    let mut pipeline = Duration::ZERO;
    for (n, d, big_d, want) in [(3, 2, 1, 266), (3, 3, 1, 8661)] {
        let p = template(n, d, big_d);
        let t = Instant::now();
        let got = compute_newton_polytope(&p, opts).unwrap().lattice_count.unwrap();
        pipeline += t.elapsed();
        ok &= got == want;
        parts.push(format!("[{n},{d},{big_d}] = {got} (want {want})"));
        certify_problem(&p, &format!("template [{n},{d},{big_d}]"), certs).unwrap();
    }
    ok &= pipeline < Duration::from_secs(900);
    ledger.record("5", ok, parts.join(", "), start.elapsed());

    let start = Instant::now();
    let got = compute_newton_polytope(&template(3, 3, 2), opts).unwrap().lattice_count.unwrap();
    ledger.record("5 (stretch, not gating)", got == 25525, format!("[3,3,2] = {got} (want 25525)"), start.elapsed());
}

fn volume(points: &[LatticePoint], dim: usize) -> Scalar {
    let rat: Vec<RationalPoint> = points.iter().map(LatticePoint::to_rational).collect();
    euclidean_volume(&rat, dim).unwrap()
}

/// Mixed volume of `k` sets in `Z^k` by inclusion-exclusion over subset sums.
fn mixed_volume(sets: &[Vec<LatticePoint>]) -> Scalar {
    let k = sets.len();
    let mut total = Scalar::zero();
    for mask in 1u32..(1 << k) {
        let chosen: Vec<&[LatticePoint]> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| &sets[i][..]).collect();
        let v = volume(&minkowski_points(&chosen), k);
        if (k - chosen.len()) % 2 == 0 {
            total += v;
        } else {
            total -= v;
        }
    }
    total
}

fn criterion_6(ledger: &mut Ledger, certs: &Mutex<Certificates>) {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut agree = 0;
    let mut case = 0u64;
    while case < 50 {
        let k = 1 + below(&mut rng, 3) as usize;
        let sets: Vec<Vec<LatticePoint>> = (0..k).map(|_| random_points(&mut rng, 1, 5, k)).collect();
        let config = PointConfiguration::new(sets).unwrap();
        if !config.is_full_dimensional() {
            continue;
        }
        let r = fine_mixed_refinement(&config, &WeightVector::zero(&config), case).unwrap();
        certs.lock().unwrap().check(&format!("mixed volume case {case}"), &r);
        let mut sum = Scalar::zero();
        for cell in r.fine.cells().iter().filter(|c| c.type_vector().iter().all(|&t| t == 1)) {
            sum += cell.volume(&config).unwrap();
        }
        agree += usize::from(sum == mixed_volume(config.sets()));
        case += 1;
    }
    let ok = agree == 50 && start.elapsed() < Duration::from_secs(60);
    ledger.record("6", ok, format!("mixed volume {agree}/50"), start.elapsed());
}

fn criterion_7(ledger: &mut Ledger, certs: &Mutex<Certificates>) {
    let certs = certs.lock().unwrap();
    let detail = match certs.failures.first() {
        None => format!("{} refinements certified", certs.subdivisions),
        Some(f) => format!("{} of {} refinements failed, first: {f}", certs.failures.len(), certs.subdivisions),
    };
    ledger.record("7", certs.failures.is_empty() && certs.subdivisions > 0, detail, Duration::ZERO);
}

fn criterion_8(ledger: &mut Ledger) {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let split = ProjectionSplit::new(3, 1).unwrap();
    let mut agree = 0;
    for poly in 0..10u64 {
        let delta = random_points(&mut rng, 3, 5, 3);
        let config = PointConfiguration::new(vec![delta.clone(), delta.clone()]).unwrap();
        for probe in 0..5 {
            let primary = Covector::from_i64(&[below(&mut rng, 21) as i64 - 10, below(&mut rng, 21) as i64 - 10]);
            let gamma = PerturbedCovector::with_seed(primary, poly * 5 + probe);
            let lhs = mfp_vertex_reference(&config, &split, &gamma).unwrap();
            let rhs = minkowski_integral_vertex(&delta, &split, &gamma).unwrap().scale(&Scalar::from_integer(2.into()));
            agree += usize::from(lhs == rhs);
        }
    }
    ledger.record("8", agree == 50, format!("factorial identity {agree}/50"), start.elapsed());
}

fn run_cli(args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_mfpx")).args(args).output().unwrap();
    assert!(out.status.success(), "mfpx {args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

fn criterion_9(ledger: &mut Ledger) {
    let start = Instant::now();
    let intro = format!("{DATA}/intro.txt");
    let runs: [&[&str]; 2] = [
        &["compute", "--input", &intro, "--seed", "5", "--count-lattice"],
        &["ode", "--template", "3,2,1", "--order", "3", "--seed", "9", "--count-lattice"],
    ];
    let mut ok = true;
    for args in runs {
        let base = run_cli(args);
        for threads in ["1", "1", "2", "4"] {
            let mut with = vec!["--threads", threads];
            with.extend_from_slice(args);
            ok &= run_cli(&with) == base;
        }
    }
    ledger.record("9", ok, "byte-identical output across runs and thread counts".into(), start.elapsed());
}

#[test]
fn acceptance() {
    let mut ledger = Ledger { failures: Vec::new() };
    let certs = Mutex::new(Certificates::default());
    criterion_1(&mut ledger, &certs);
    criterion_2(&mut ledger, &certs);
    criterion_3(&mut ledger, &certs);
    criterion_4(&mut ledger, &certs);
    criterion_5(&mut ledger, &certs);
    criterion_6(&mut ledger, &certs);
    criterion_7(&mut ledger, &certs);
    criterion_8(&mut ledger);
    criterion_9(&mut ledger);
    // The stretch target does not gate.
    let gating: Vec<&String> = ledger.failures.iter().filter(|f| !f.contains("stretch")).collect();
    assert!(gating.is_empty(), "failed: {gating:#?}");
}
