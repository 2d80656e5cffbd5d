//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use rosq::chart::{chart_document, ChartDoc, ChartPage};
use rosq::detection::{certify_detection, comparison_map, detection_window, DetectionClass, Family, Verdict};
use rosq::engine::{generator_differential, leibniz_image, page_length, run_to_einfty, turn_page};
use rosq::grading::degree_of_monomial;
use rosq::homotopy::{check_strongly_even, check_vanishing_krho_minus_1, homotopy_groups, periodicity};
use rosq::oracle::{compare_with_engine, oracle_page_homology};
use rosq::pages::{build_e2_en, Page, PointData, Span, Truncation};
use rosq::{ModuleDescriptor, Monomial, RODegree, Theory, TriDegree, Window};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// E₂ against an exhaustive enumeration of `ū^x u_{2σ}^y a_σ^s`.
fn e2_fidelity() -> Outcome {
    let mut checked = 0;
    for n in 1..=4 {
        let w = Window::new((-12, 12), (-6, 6), (0, 16)).map_err(err)?;
        let e2 = build_e2_en(n, &w, Truncation::default_for(n)).map_err(err)?;
        let mut found = std::collections::BTreeMap::new();
        for x in -40..=40 {
            for y in -20..=20 {
                for s in 0..=16 {
                    let m = Monomial::en(vec![], x, y, s);
                    let td = degree_of_monomial(&m, n).map_err(err)?;
                    if w.contains(td) {
                        ensure(found.insert(td, m).is_none(), || format!("two monomials at {td}"))?;
                    }
                }
            }
        }
        for td in w.tri_degrees() {
            let want = match found.get(&td) {
                None => ModuleDescriptor::Zero,
                Some(_) if td.s == 0 => ModuleDescriptor::witt_level(0),
                Some(_) => ModuleDescriptor::tors_level(1),
            };
            let got = e2.descriptor(td).unwrap_or(ModuleDescriptor::Zero);
            ensure(got == want, || format!("n={n} {td}: {got} vs {want}"))?;
            if let Some(m) = found.get(&td) {
                ensure(e2.get(td).and_then(PointData::monomial) == Some(m), || format!("n={n} {td}: monomial"))?;
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} tri-degrees, n=1..4"))
}

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn multisets(doc: &ChartDoc) -> (Vec<(i64, i64, String, String, String)>, Vec<([i64; 2], [i64; 2], u32)>) {
    let mut p: Vec<_> =
        doc.points.iter().map(|p| (p.a, p.s, p.kind.clone(), p.annot.clone(), p.monomial.clone())).collect();
    let mut a: Vec<_> = doc.arrows.iter().map(|a| (a.from, a.to, a.page)).collect();
    p.sort();
    a.sort();
    (p, a)
}

fn figures() -> Outcome {
    let (stems, filt) = (Span::new(-4, 36), Span::new(0, 40));
    let run = run_to_einfty(3, &Window::integer(stems, filt).map_err(err)?, 6, 6).map_err(err)?;
    let mut summary = Vec::new();
    for (name, page) in [("e3", Page::Finite(3)), ("e7", Page::Finite(7)), ("e15", Page::Finite(15)), ("einf", Page::Infinity)] {
        let text = std::fs::read_to_string(golden_dir().join(format!("n3_{name}.json"))).map_err(err)?;
        let golden: ChartDoc = serde_json::from_str(&text).map_err(err)?;
        let lattice = run.page(page).ok_or("missing page")?;
        let arrows = match page {
            Page::Finite(r) => run.arrows_on(r),
            Page::Infinity => &[],
        };
        let ours = chart_document(lattice, arrows, stems, filt).map_err(err)?;
        ensure(ours.page == golden.page && ours.height == 3, || format!("{name}: header"))?;
        let (gp, ga) = multisets(&golden);
        let (op, oa) = multisets(&ours);
        if gp != op {
            let diff: Vec<_> = gp.iter().filter(|x| !op.contains(x)).chain(op.iter().filter(|x| !gp.contains(x))).take(3).collect();
            return Err(format!("{name}: points differ, e.g. {diff:?}"));
        }
        ensure(ga == oa, || format!("{name}: arrows differ ({} golden, {} ours)", ga.len(), oa.len()))?;
        summary.push(format!("{name} {}p/{}a", op.len(), oa.len()));
    }
    // the d₃ from stem 4, s = 0 to stem 3, s = 3 appears on E3
    let e3: ChartDoc = serde_json::from_str(&std::fs::read_to_string(golden_dir().join("n3_e3.json")).map_err(err)?).map_err(err)?;
    ensure(e3.arrows.iter().any(|a| a.from == [4, 0] && a.to == [3, 3]), || "no d3 from (4,0)".into())?;
    ensure(matches!(e3.page, ChartPage::Finite(3)), || "page label".into())?;
    Ok(summary.join(", "))
}

fn convergence() -> Outcome {
    let mut out = Vec::new();
    for n in 1..=4u32 {
        let top = i64::from(page_length(n));
        let w = Window::new((-8, 4 * top), (-2, 2), (0, 2 * top + 2)).map_err(err)?;
        let run = run_to_einfty(n, &w, 6, n + 3).map_err(err)?;
        let pages: Vec<Page> = run.pages.iter().map(|l| l.page).collect();
        let want: Vec<Page> = (1..=n).map(|k| Page::Finite(page_length(k))).collect();
        ensure(pages == want, || format!("n={n}: pages {pages:?}"))?;
        ensure(!run.arrows.last().unwrap().is_empty(), || format!("n={n}: last page has no arrows"))?;
        let (_, after) = turn_page(&run.einfty.with_page(Page::Finite(page_length(n)))).map_err(err)?;
        ensure(after.is_empty(), || format!("n={n}: {} arrows survive past E{top}", after.len()))?;
        ensure(run.degree_audit().is_empty(), || format!("n={n}: degree audit"))?;
        let above = run.above_vanishing_line();
        ensure(above.is_empty(), || format!("n={n}: E∞ above the vanishing line at {:?}", above.first()))?;
        out.push(format!("n={n} E{top}"));
    }
    Ok(out.join(", "))
}

fn periodicity_check() -> Outcome {
    let mut out = Vec::new();
    for n in 1..=4u32 {
        let expected = 1u64 << (n + 2);
        let filt = (0, i64::from(page_length(n)));
        let mut seen = Vec::new();
        for width in [2 * expected, 4 * expected] {
            let w = Window::integer((0, width as i64), filt).map_err(err)?;
            let run = run_to_einfty(n, &w, 6, n + 3).map_err(err)?;
            seen.push(periodicity(&run.einfty).map_err(err)?);
        }
        ensure(seen == [Some(expected); 2], || format!("n={n}: periods {seen:?}, expected {expected}"))?;
        out.push(format!("{expected}"));
    }
    Ok(format!("periods {}", out.join(", ")))
}

fn krho_window(n: u32) -> Window {
    Window::new((-8, 8), (-3, 3), (0, 4 * (1 << n) + 3)).unwrap()
}

fn vanishing() -> Outcome {
    let mut points = 0;
    for n in 1..=3 {
        let run = run_to_einfty(n, &krho_window(n), 6, n + 3).map_err(err)?;
        for v in check_vanishing_krho_minus_1(&run, Span::new(-2, 2)).map_err(err)? {
            ensure(!v.points.is_empty(), || format!("n={n} k={}: no points", v.k))?;
            for p in &v.points {
                ensure(p.einfty.is_zero(), || format!("n={n} {}: {} at E∞", p.at, p.einfty))?;
                ensure(p.death_page == Some(p.expected_death_page), || {
                    format!("n={n} {} (l={}): dies on {:?}, expected d{}", p.at, p.ell, p.death_page, p.expected_death_page)
                })?;
            }
            points += v.points.len();
        }
    }
    Ok(format!("{points} points, n=1..3, k=-2..2"))
}

fn strongly_even() -> Outcome {
    let mut out = 0;
    for n in 1..=3 {
        let run = run_to_einfty(n, &krho_window(n), 6, n + 3).map_err(err)?;
        for v in check_strongly_even(&run, Span::new(-2, 2)).map_err(err)? {
            ensure(v.pass(), || format!("n={n} k={}: {v:?}", v.k))?;
            ensure(v.restriction == format!("u^{}", v.k), || format!("restriction {}", v.restriction))?;
            out += 1;
        }
    }
    Ok(format!("{out} stems"))
}

fn ko_regression() -> Outcome {
    use ModuleDescriptor as D;
    let expected: [&[(i64, ModuleDescriptor)]; 9] = [
        &[(0, D::witt_level(0))],
        &[(1, D::tors_level(1))],
        &[(2, D::tors_level(1))],
        &[],
        &[(0, D::witt_level(1))],
        &[],
        &[],
        &[],
        &[(0, D::witt_level(0))],
    ];
    for m in [4, 6] {
        let w = Window::integer((-4, 12), (0, 12)).map_err(err)?;
        let run = run_to_einfty(1, &w, 4, m).map_err(err)?;
        let reports = homotopy_groups(&run.einfty, Span::new(0, 8)).map_err(err)?;
        let oracle = oracle_page_homology(&w, 1, 4, m, 1).map_err(err)?;
        for (stem, (r, want)) in reports.iter().zip(expected).enumerate() {
            let got: Vec<(i64, ModuleDescriptor)> = r.entries.iter().map(|e| (e.s, e.descriptor)).collect();
            ensure(got == want, || format!("M={m} stem {stem}: {got:?}"))?;
            // ℤ₂ has order 2^M, 2ℤ₂ ⊂ ℤ₂ has 2^{M−1}, ℤ/2 has 2
            for s in 0..=12 {
                let order = want.iter().find(|(t, _)| *t == s).map_or(0, |(_, d)| match d {
                    D::WittLevel { e } => u64::from(m - e),
                    _ => 1,
                });
                let td = TriDegree::new(stem as i64, 0, s);
                let o = oracle.order(Page::Infinity, td).ok_or("oracle has no E∞")?;
                ensure(o == order, || format!("M={m} {td}: oracle 2^{o}, expected 2^{order}"))?;
            }
        }
    }
    Ok("Z2, Z/2, Z/2, 0, 2Z2, 0, 0, 0, Z2 (oracle-confirmed, M=4,6)".into())
}

fn engine_oracle() -> Outcome {
    let mut out = Vec::new();
    for n in 1..=3 {
        let w = Window::integer((-8, 24), (0, 32)).map_err(err)?;
        let start = Instant::now();
        let run = run_to_einfty(n, &w, 4, 5).map_err(err)?;
        let report = oracle_page_homology(&w, n, 4, 5, n).map_err(err)?;
        let bad = compare_with_engine(&run, &report);
        ensure(bad.is_empty(), || format!("n={n}: {} mismatches, first {:?}", bad.len(), bad[0]))?;
        let points: usize = report.pages.iter().map(|p| p.orders.len()).sum();
        out.push(format!("n={n} {points} nonzero ({:.1}s)", start.elapsed().as_secs_f64()));
    }
    Ok(out.join(", "))
}

fn detection_matrix() -> Outcome {
    let mut counts = [0usize; 2];
    for n in 1..=4 {
        for index in 1..=n + 1 {
            for family in [Family::H, Family::HSquared, Family::G] {
                let class = DetectionClass::new(family, index).map_err(err)?;
                let t = Truncation::default_for(n);
                let run = run_to_einfty(n, &detection_window(class, n), t.series_deg, t.witt_prec).map_err(err)?;
                let report = certify_detection(class, &run).map_err(err)?;
                ensure(report.verdict != Verdict::Killed, || format!("{class} killed at n={n}"))?;
                let want = match family {
                    Family::G => index < n,
                    _ => index <= n,
                };
                let want = if want { Verdict::Detected } else { Verdict::ZeroImage };
                ensure(report.verdict == want, || format!("{class} at n={n}: {}", report.verdict))?;
                report.check_consistency().map_err(err)?;
                counts[usize::from(want == Verdict::ZeroImage)] += 1;
            }
        }
    }
    Ok(format!("{} detected, {} zero-image, 0 killed", counts[0], counts[1]))
}

/// `d` of `w^c` for the page-`k` generator `w = u_{2σ}^{2^{k−1}}`, expanded
/// factor by factor over `|c|` copies of `w^{±1}`: each copy contributes one
/// equal term, and the targets are 2-torsion.
fn expanded_leibniz(m: &Monomial, n: u32, k: u32) -> Option<Monomial> {
    let half = 1i64 << (k - 1);
    if m.u2sigma % half != 0 {
        // lower pages already decided this class; the page-k generator
        // does not divide it
        return None;
    }
    let c = m.u2sigma / half;
    let terms = c.unsigned_abs();
    if terms % 2 == 0 {
        return None;
    }
    let rule = generator_differential(Theory::En, n, k).ok()?;
    let rest = Monomial::en(m.series.clone(), m.ubar, m.u2sigma - half, m.asigma);
    Some(rest.mul(&rule.target).unwrap())
}

fn property_suites() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed_2026);
    let mut cases = 0;
    // Leibniz valuation rule vs the expansion, products of ≤ 3 generators
    for _ in 0..4000 {
        let n = rng.gen_range(1..=5u32);
        let k = rng.gen_range(1..=n);
        let mut m = Monomial::one(Theory::En);
        for _ in 0..rng.gen_range(0..=3) {
            let g = match rng.gen_range(0..6) {
                0 => Monomial::en(vec![], 0, 1 << rng.gen_range(0..4), 0),
                1 => Monomial::en(vec![], 0, -(1 << rng.gen_range(0..4)), 0),
                2 => Monomial::en(vec![], if rng.gen() { 1 } else { -1 }, 0, 0),
                3 => Monomial::en(vec![], 0, 0, 1),
                4 if n > 1 => Monomial::one(Theory::En).with_series_exp(rng.gen_range(1..n), 1),
                _ => Monomial::one(Theory::En),
            };
            m = m.mul(&g).unwrap();
        }
        let engine = leibniz_image(&m, n, k).map_err(err)?;
        ensure(engine == expanded_leibniz(&m, n, k), || format!("Leibniz mismatch on {m} (n={n}, k={k})"))?;
        // d∘d = 0 symbolically
        if let Some(img) = engine {
            ensure(leibniz_image(&img, n, k).map_err(err)?.is_none(), || format!("d∘d on {m}"))?;
        }
        cases += 1;
    }
    // d∘d = 0 on every window point: no point is both a source and a
    // target on one page
    for n in 1..=4 {
        let w = Window::new((-12, 12), (-4, 4), (0, 2 * i64::from(page_length(n)))).map_err(err)?;
        let run = run_to_einfty(n, &w, 6, n + 3).map_err(err)?;
        for arrows in &run.arrows {
            let sources: BTreeSet<TriDegree> = arrows.iter().map(|d| d.source).collect();
            ensure(arrows.iter().all(|d| !sources.contains(&d.target)), || format!("n={n}: d∘d ≠ 0"))?;
        }
        // ū-shift periodicity of E∞
        for td in w.tri_degrees() {
            let shifted = TriDegree { stem: td.stem + RODegree::RHO, s: td.s };
            if w.contains(shifted) {
                ensure(run.einfty.descriptor(td) == run.einfty.descriptor(shifted), || format!("n={n}: ū-shift at {td}"))?;
            }
        }
        cases += 1;
    }
    // comparison map: ring homomorphism and commutation with the generators
    for _ in 0..4000 {
        let n = rng.gen_range(1..=5u32);
        let mut pick = || {
            let v: Vec<i64> = (0..rng.gen_range(0..6)).map(|_| rng.gen_range(0..3)).collect();
            Monomial::bpr(v, rng.gen_range(-4..5), rng.gen_range(0..7))
        };
        let (x, y) = (pick(), pick());
        let lhs = comparison_map(&x.mul(&y).unwrap(), n);
        let rhs = comparison_map(&x, n).zip(comparison_map(&y, n)).map(|(a, b)| a.mul(&b).unwrap());
        ensure(lhs == rhs, || format!("comparison map not multiplicative on {x}, {y}"))?;
        cases += 1;
    }
    for n in 1..=6 {
        for k in 1..=n + 2 {
            let b = generator_differential(Theory::Bpr, n, k).map_err(err)?;
            let (src, tgt) = (comparison_map(&b.source, n), comparison_map(&b.target, n));
            match generator_differential(Theory::En, n, k) {
                Ok(e) => ensure(src == Some(e.source) && tgt == Some(e.target), || format!("n={n} k={k}"))?,
                Err(_) => ensure(tgt.is_none(), || format!("n={n} k={k}: surviving target"))?,
            }
            cases += 1;
        }
    }
    Ok(format!("{cases} cases (seeded)"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Duration); 10] = [
        ("E2 fidelity", e2_fidelity, Duration::from_secs(10)),
        ("differential pattern vs figure goldens", figures, Duration::from_secs(30)),
        ("convergence page", convergence, Duration::from_secs(120)),
        ("periodicity", periodicity_check, Duration::from_secs(120)),
        ("(k rho - 1)-stem vanishing", vanishing, Duration::from_secs(120)),
        ("strongly even", strongly_even, Duration::from_secs(120)),
        ("KO regression", ko_regression, Duration::from_secs(120)),
        ("engine/oracle equivalence", engine_oracle, Duration::from_secs(300)),
        ("detection matrix", detection_matrix, Duration::from_secs(120)),
        ("property suites", property_suites, Duration::from_secs(120)),
    ];
    let mut failed = 0;
    for (i, (name, f, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = f();
        let took = start.elapsed();
        let result = match result {
            Ok(detail) if took > budget => Err(format!("{detail}; took {took:.1?}, budget {budget:?}")),
            other => other,
        };
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{took:.2?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} [{took:.2?}]", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
