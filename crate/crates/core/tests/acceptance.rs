//! Acceptance suite: fourteen criteria, each printed as one PASS/FAIL line.
//!
//! Runs without the libtest harness so the lines reach the terminal. The
//! process fails when a criterion fails that is not listed in
//! `KNOWN_DEVIATIONS`, or when a listed deviation unexpectedly passes.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use rand::seq::SliceRandom;

use simplexion::build::{self, trial_rng};
use simplexion::cli::automorphisms;
use simplexion::geom::{self, Geometry};
use simplexion::linalg::{bareiss, berkowitz};
use simplexion::spectra::{self, numeric_inertia};
use simplexion::{conn, hodge, refine, Complex, Graph, Simplex, Vertex};

/// Sub-checks known to fail, as `(criterion, label)`.
const KNOWN_DEVIATIONS: &[(u32, &str)] = &[(11, "K2 final distance < 0.05")];

struct Item {
    label: String,
    ok: bool,
    detail: String,
}

#[derive(Default)]
struct Criterion {
    items: Vec<Item>,
}

impl Criterion {
    fn check(&mut self, label: impl Into<String>, ok: bool, detail: impl Into<String>) {
        self.items.push(Item { label: label.into(), ok, detail: detail.into() });
    }
}

struct Corpus {
    named: Vec<Complex>,
    refined: Vec<Complex>,
}

impl Corpus {
    fn build() -> Self {
        let mut named = Vec::new();
        for n in 1..=5 {
            named.push(build::complete(n).unwrap());
        }
        for n in 3..=12 {
            named.push(build::cycle(n).unwrap());
        }
        for d in 0..=3 {
            named.push(build::cross_polytope(d).unwrap());
        }
        named.push(build::icosahedron());
        let refined = named
            .iter()
            .map(|c| {
                let r = refine::barycentric(c).unwrap();
                let name = format!("{}_1", c.name().unwrap_or("G"));
                r.with_name(name)
            })
            .filter(|r| r.len() <= conn::EXACT_CAP)
            .collect();
        Corpus { named, refined }
    }

    fn all(&self) -> impl Iterator<Item = &Complex> {
        self.named.iter().chain(&self.refined)
    }
}

fn name(c: &Complex) -> &str {
    c.name().unwrap_or("?")
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Whitney complexes of `E(n, p)` with `n` cycling through `1..=7` and `p`
/// through `{0.2, 0.5, 0.8}`.
fn random_complexes(count: u64, seed: u64) -> impl Iterator<Item = (u64, Complex)> {
    (0..count).map(move |t| {
        let n = 1 + (t % 7) as usize;
        let p = [0.2, 0.5, 0.8][(t / 7 % 3) as usize];
        (t, build::random_graph(n, p, &mut trial_rng(seed, t)).whitney_complex())
    })
}

fn c1_unimodularity(corpus: &Corpus, cr: &mut Criterion) {
    for c in corpus.all() {
        let r = conn::unimodularity_check(c).unwrap();
        cr.check(format!("|det L| = 1 on {}", name(c)), r.holds, format!("det = {}", r.determinant));
    }
    let bad = random_complexes(10_000, 11).find(|(_, c)| {
        bareiss::determinant(&conn::connection_matrix(c)).unwrap().abs() != BigInt::one()
    });
    cr.check("|det L| = 1 on 10000 random complexes", bad.is_none(), format!("first failure: {:?}", bad.map(|b| b.0)));
}

fn c2_energy(corpus: &Corpus, cr: &mut Criterion) {
    for c in corpus.all() {
        let r = conn::energy_check(c).unwrap();
        cr.check(
            format!("energy = chi on {}", name(c)),
            r.holds,
            format!("energy {} chi {}", r.energy, r.euler_characteristic),
        );
    }
    let bad = random_complexes(1_000, 22).find(|(_, c)| {
        let g = bareiss::unimodular_inverse(&conn::connection_matrix(c)).unwrap();
        conn::green_star_matrix(c) != g
    });
    cr.check("Green star formula on 1000 random complexes", bad.is_none(), format!("first failure: {:?}", bad.map(|b| b.0)));
}

fn c3_inertia(corpus: &Corpus, cr: &mut Criterion) {
    for c in corpus.all() {
        let r = conn::inertia_check(c).unwrap();
        cr.check(format!("p - n = chi on {}", name(c)), r.holds, format!("{:?} chi {}", r.inertia, r.euler_characteristic));
        let values = spectra::spectrum(c, spectra::Operator::Connection).unwrap().values;
        let num = numeric_inertia(&values, 1e-8);
        cr.check(
            format!("numeric signs agree on {}", name(c)),
            num == r.inertia,
            format!("numeric {num:?} exact {:?}", r.inertia),
        );
    }
}

fn c4_poincare_hopf(corpus: &Corpus, cr: &mut Criterion) {
    for c in corpus.all() {
        let geo = Geometry::of(c);
        let chi = c.euler_characteristic();
        let n = geo.len();
        let bad = (0..100).find(|&t| {
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut trial_rng(44, t));
            let mut f = vec![0.0; n];
            for (rank, &p) in order.iter().enumerate() {
                f[p] = rank as f64;
            }
            (0..n).map(|v| geom::graph_index(&geo.graph, &f, v)).sum::<i64>() != chi
        });
        cr.check(format!("index sum = chi, 100 functions on {}", name(c)), bad.is_none(), format!("trial {bad:?}"));
        let sum: BigRational = geom::levitt_curvatures(c).into_iter().map(|(_, k)| k).sum();
        cr.check(format!("curvature sum = chi on {}", name(c)), sum == rat(chi), format!("sum {sum}"));
    }
    let oct = build::cross_polytope(2).unwrap();
    let est = geom::curvature_expectation(&oct, &Simplex::vertex(0), 100_000, 4).unwrap();
    cr.check(
        "expected index at an octahedron vertex = 1/3 +- 0.02",
        (est.mean - 1.0 / 3.0).abs() <= 0.02,
        format!("mean {:.5} +- {:.5}", est.mean, est.std_err),
    );
}

fn c5_stirling(corpus: &Corpus, cr: &mut Criterion) {
    for c in corpus.all() {
        let r = refine::barycentric(c).unwrap();
        let actual: Vec<BigInt> = r.f_vector().counts().iter().map(|&v| v.into()).collect();
        let predicted = refine::predicted_f_vector(&c.f_vector());
        cr.check(format!("f(G1) = S f(G) on {}", name(c)), actual == predicted, format!("{actual:?} vs {predicted:?}"));
    }
    let oct1 = refine::barycentric(&build::cross_polytope(2).unwrap()).unwrap();
    cr.check("octahedron refines to (26,72,48)", oct1.f_vector().counts() == [26, 72, 48], format!("{:?}", oct1.f_vector().counts()));
    for r in 0..=6 {
        let v = refine::euler_unique_vector(r).unwrap();
        let expected: Vec<BigRational> = (0..=r).map(|k| rat(if k % 2 == 0 { 1 } else { -1 })).collect();
        cr.check(format!("fixed vector for r = {r}"), v == expected, format!("{v:?}"));
    }
}

fn c6_spheres(cr: &mut Criterion) {
    for d in 0..=3 {
        let chi = build::cross_polytope(d).unwrap().euler_characteristic();
        let want = 1 + if d % 2 == 0 { 1 } else { -1 };
        cr.check(format!("chi(cross-polytope {d}) = {want}"), chi == want, format!("chi {chi}"));
    }
    let s = build::points(2).unwrap().join(&build::cycle(4).unwrap()).0;
    let ok = geom::is_d_sphere(&s, 2).unwrap();
    cr.check("0-sphere + 1-sphere is a 2-sphere", ok, "");
    for c in [build::points(2).unwrap(), build::cycle(5).unwrap(), build::cross_polytope(2).unwrap()] {
        let r = geom::reeb_sphere_check(&c).unwrap();
        cr.check(format!("two critical points on {}", name(&c)), r.success, format!("{r:?}"));
    }
}

fn star(k: usize) -> Complex {
    let edges: Vec<(usize, usize)> = (1..=k).map(|i| (0, i)).collect();
    build::whitney(k + 1, &edges).unwrap().with_name(format!("star{k}"))
}

fn c7_hydrogen(corpus: &Corpus, cr: &mut Criterion) {
    let cases = [build::complete(2).unwrap(), build::cycle(4).unwrap(), build::cycle(5).unwrap(), star(3)];
    for c in &cases {
        let h = conn::hydrogen_check(c).unwrap();
        cr.check(format!("L - L^-1 = H on {}", name(c)), h.holds, format!("{:?}", h.witness));
        let l = conn::connection_matrix(c);
        let g = conn::green_inverse(c).unwrap();
        let same = berkowitz::charpoly(&l.mul(&l).unwrap()).unwrap() == berkowitz::charpoly(&g.mul(&g).unwrap()).unwrap();
        cr.check(format!("charpoly(L^2) = charpoly(L^-2) on {}", name(c)), same, "");
        let z = spectra::zeta_symmetry_check(c, &[0.1, 0.5, 1.0, 2.0, 5.0, 10.0], 1e-8).unwrap();
        cr.check(format!("|zeta(it) - zeta(-it)| < 1e-8 on {}", name(c)), z.holds, format!("max {:e}", z.max_deviation));
    }
    for c in corpus.all() {
        let t = conn::trace_identity(c).unwrap();
        cr.check(
            format!("trace identity on {}", name(c)),
            t.holds,
            format!("tr {} spheres {} f' {}", t.trace, t.sphere_sum, t.derivative_difference),
        );
    }
}

fn c8_cohomology(corpus: &Corpus, cr: &mut Criterion) {
    let c4 = build::cycle(4).unwrap();
    let prod = build::ring_product(&c4, &c4).order_complex().with_name("C4xC4");
    let cases: [(Complex, Vec<usize>); 4] = [
        (c4.clone(), vec![1, 1]),
        (build::cross_polytope(2).unwrap(), vec![1, 0, 1]),
        (build::icosahedron(), vec![1, 0, 1]),
        (prod, vec![1, 2, 1]),
    ];
    for (c, want) in &cases {
        let b = hodge::betti(c).unwrap().betti;
        cr.check(format!("Betti of {} = {want:?}", name(c)), &b == want, format!("{b:?}"));
    }
    for c in corpus.all() {
        let ep = hodge::betti(c).map(|r| r.euler_characteristic == c.euler_characteristic());
        cr.check(format!("Euler-Poincare on {}", name(c)), matches!(ep, Ok(true)), format!("{ep:?}"));
        let ms = hodge::mckean_singer_check(c, &[0.1, 1.0, 10.0]).unwrap();
        cr.check(
            format!("McKean-Singer on {}", name(c)),
            ms.holds,
            format!("str(H^k) {:?} heat {:?}", ms.exact_supertraces, ms.heat_supertraces),
        );
    }
}

fn c9_wu(corpus: &Corpus, cr: &mut Criterion) {
    for d in 0..=3 {
        let w = build::complete(d + 1).unwrap().wu();
        let want = if d % 2 == 0 { 1 } else { -1 };
        cr.check(format!("omega(K{}) = {want}", d + 1), w == want, format!("omega {w}"));
    }
    let mut fixtures: Vec<Complex> = (4..=7).map(|n| build::cone(&build::cycle(n).unwrap()).with_name(format!("wheel{n}"))).collect();
    fixtures.push(build::complete(4).unwrap());
    fixtures.push(build::cone(&build::cross_polytope(2).unwrap()).with_name("cone(octahedron)"));
    fixtures.push(refine::barycentric(&build::complete(4).unwrap()).unwrap().with_name("K4_1"));
    for c in &fixtures {
        let d = c.dim();
        let b = geom::boundary(c, d).unwrap();
        let (chi, omega, chi_b) = (c.euler_characteristic(), c.wu(), b.euler_characteristic());
        cr.check(
            format!("chi - omega = chi(boundary) on {}", name(c)),
            chi - omega == chi_b && !b.is_empty(),
            format!("chi {chi} omega {omega} boundary chi {chi_b} size {}", b.len()),
        );
    }
    for c in corpus.all() {
        let omega = c.wu();
        let r = hodge::interaction_cohomology(c).unwrap();
        cr.check(
            format!("interaction cohomology sums to omega on {}", name(c)),
            r.euler_characteristic == omega,
            format!("betti {:?} omega {omega}", r.betti),
        );
        let k: BigRational = hodge::wu_gauss_bonnet(c).into_iter().map(|(_, k)| k).sum();
        cr.check(format!("Wu curvature sum = omega on {}", name(c)), k == rat(omega), format!("sum {k}"));
    }
}

fn c10_trees(cr: &mut Criterion) {
    for n in 1..=5 {
        for (i, g) in build::connected_graphs(n).unwrap().iter().enumerate() {
            let exact = spectra::tree_forest_numbers(g).unwrap();
            let brute = spectra::brute_tree_forest(g).unwrap();
            cr.check(format!("graph {i} on {n} vertices"), exact == brute, format!("{exact:?} vs {brute:?}"));
        }
    }
    let c3 = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
    let tf = spectra::tree_forest_numbers(&c3).unwrap();
    cr.check("C3 gives (9, 16)", tf == (9.into(), 16.into()), format!("{tf:?}"));
}

fn c11_limit(cr: &mut Criterion) {
    for c in [build::cycle(4).unwrap(), build::complete(2).unwrap()] {
        let r = spectra::barycentric_limit(&c, 5, refine::default_cap()).unwrap();
        let distances: Vec<String> = r.levels.iter().map(|l| format!("{:.4}", l.distance.unwrap_or(f64::NAN))).collect();
        cr.check(format!("{} monotone", name(&c)), r.monotone == Some(true), distances.join(" > "));
        let last = r.final_distance.unwrap_or(f64::INFINITY);
        cr.check(format!("{} final distance < 0.05", name(&c)), last < 0.05, format!("final {last:.4}"));
    }
}

fn c12_lefschetz(cr: &mut Criterion) {
    for n in 3..=8 {
        let c = build::cycle(n).unwrap();
        let maps = automorphisms(&c, usize::MAX).unwrap();
        cr.check(format!("C{n} has {} automorphisms", 2 * n), maps.len() == 2 * n, format!("found {}", maps.len()));
        let bad = maps.iter().position(|t| !hodge::lefschetz(&c, t).unwrap().agree);
        cr.check(format!("Lefschetz on all automorphisms of C{n}"), bad.is_none(), format!("map {bad:?}"));
        let id: BTreeMap<Vertex, Vertex> = c.vertices().iter().map(|&v| (v, v)).collect();
        let r = hodge::lefschetz(&c, &id).unwrap();
        cr.check(format!("identity on C{n} gives chi"), r.fixed_point_sum == c.euler_characteristic() && r.agree, format!("{r:?}"));
    }
    let oct = build::cross_polytope(2).unwrap();
    let perm = |p: [Vertex; 6]| -> BTreeMap<Vertex, Vertex> { (0..6).map(|v| (v, p[v as usize])).collect() };
    let generators = [
        ("identity", perm([0, 1, 2, 3, 4, 5])),
        ("antipodal swap", perm([1, 0, 2, 3, 4, 5])),
        ("axis rotation", perm([2, 3, 4, 5, 0, 1])),
        ("axis transposition", perm([0, 1, 4, 5, 2, 3])),
    ];
    for (label, t) in &generators {
        let r = hodge::lefschetz(&oct, t).unwrap();
        cr.check(
            format!("octahedron {label}"),
            r.agree,
            format!("cohomological {} fixed-point {}", r.cohomological, r.fixed_point_sum),
        );
        if *label == "identity" {
            cr.check("octahedron identity gives chi", r.fixed_point_sum == 2, format!("{}", r.fixed_point_sum));
        }
    }
}

fn c13_lax(cr: &mut Criterion) {
    for c in [build::complete(2).unwrap(), build::cycle(4).unwrap()] {
        for gamma in [0.0, 1.0] {
            let r = spectra::lax_flow(&c, gamma, 1.0, spectra::LAX_DEFAULT_DT).unwrap();
            cr.check(
                format!("{} gamma = {gamma}", name(&c)),
                r.eigenvalue_drift < 1e-6 && r.square_deviation < 1e-6,
                format!("drift {:e} deviation {:e}", r.eigenvalue_drift, r.square_deviation),
            );
        }
    }
}

fn c14_random(cr: &mut Criterion) {
    let n = 8;
    for p in [0.2, 0.5, 0.8] {
        let mc = build::monte_carlo(n, p, 100_000, 1414).unwrap();
        let zd = mc.dimension.z_score(build::expected_dimension(n).eval(p));
        let ze = mc.euler.z_score(build::expected_euler(n).eval(p));
        cr.check(format!("p = {p} dimension |z| < 4"), zd.abs() < 4.0, format!("z {zd:.3}"));
        cr.check(format!("p = {p} euler |z| < 4"), ze.abs() < 4.0, format!("z {ze:.3}"));
    }
}

fn main() {
    // `cargo test -- --list` and similar probes expect a quick exit
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let t = Instant::now();
    let corpus = Corpus::build();
    println!(
        "acceptance corpus: {} named complexes, {} refinements ({:.1?})",
        corpus.named.len(),
        corpus.refined.len(),
        t.elapsed()
    );

    type Runner<'a> = Box<dyn Fn(&mut Criterion) + 'a>;
    let criteria: Vec<(u32, &str, u64, Runner)> = vec![
        (1, "unimodularity", 600, Box::new(|cr| c1_unimodularity(&corpus, cr))),
        (2, "energy theorem", 600, Box::new(|cr| c2_energy(&corpus, cr))),
        (3, "inverse spectral", 600, Box::new(|cr| c3_inertia(&corpus, cr))),
        (4, "Poincare-Hopf and Gauss-Bonnet", 300, Box::new(|cr| c4_poincare_hopf(&corpus, cr))),
        (5, "Stirling refinement", 60, Box::new(|cr| c5_stirling(&corpus, cr))),
        (6, "spheres", 300, Box::new(c6_spheres)),
        (7, "hydrogen and zeta", 120, Box::new(|cr| c7_hydrogen(&corpus, cr))),
        (8, "cohomology", 600, Box::new(|cr| c8_cohomology(&corpus, cr))),
        (9, "Wu and interaction", 600, Box::new(|cr| c9_wu(&corpus, cr))),
        (10, "trees and forests", 300, Box::new(c10_trees)),
        (11, "Barycentric limit", 300, Box::new(c11_limit)),
        (12, "Lefschetz", 300, Box::new(c12_lefschetz)),
        (13, "Lax flow", 120, Box::new(c13_lax)),
        (14, "random-model formulas", 600, Box::new(c14_random)),
    ];

    let mut unexpected = Vec::new();
    for (id, title, budget, run) in &criteria {
        let start = Instant::now();
        let mut cr = Criterion::default();
        run(&mut cr);
        let elapsed = start.elapsed();
        cr.check(format!("runtime < {budget} s"), elapsed < Duration::from_secs(*budget), format!("{elapsed:.1?}"));

        let known = |label: &str| KNOWN_DEVIATIONS.contains(&(*id, label));
        let failed: Vec<&Item> = cr.items.iter().filter(|i| !i.ok).collect();
        let verdict = if failed.is_empty() {
            "PASS"
        } else if failed.iter().all(|i| known(&i.label)) {
            "FAIL (known deviation)"
        } else {
            "FAIL"
        };
        println!(
            "criterion {id:>2} {title}: {verdict} ({} checks, {:.1?})",
            cr.items.len(),
            elapsed
        );
        for i in &failed {
            println!("    failed: {} [{}]", i.label, i.detail);
            if !known(&i.label) {
                unexpected.push(format!("criterion {id}: {}", i.label));
            }
        }
        for (kid, label) in KNOWN_DEVIATIONS.iter().filter(|(k, _)| k == id) {
            if cr.items.iter().any(|i| i.label == *label && i.ok) {
                unexpected.push(format!("criterion {kid}: known deviation '{label}' now passes"));
            }
        }
    }
    println!("acceptance total {:.1?}", t.elapsed());
    if !unexpected.is_empty() {
        eprintln!("unexpected acceptance results:");
        for u in &unexpected {
            eprintln!("  {u}");
        }
        std::process::exit(1);
    }
}
