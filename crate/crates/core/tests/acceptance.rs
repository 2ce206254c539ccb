//! Acceptance suite: one pass/fail line per criterion.
//!
//! Run with `cargo test --test acceptance`. The GA(4,2) run (N = 322,560)
//! is skipped unless `--allow-large` is passed after `--`; build with
//! `--release` for it.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use unitary_birkhoff::birkhoff::{
    decompose, strategy2_applicable, DecomposeOptions, Strategy, Tolerances,
};
use unitary_birkhoff::field::{dlog_position, mod_inverse, primitive_root, to_dits, Prime};
use unitary_birkhoff::gfmatrix::{pitch_matrix, GfMatrix};
use unitary_birkhoff::linalg::{build_t, lower_block, m_matrix, van_der_waerden};
use unitary_birkhoff::perm::{enumerate_group, GroupElement, GroupKind, GroupLabel, Parity};
use unitary_birkhoff::{haar_unitary, term_count, xu_from_unitary, ComplexMatrix, XuMatrix};

const SEEDS: [u64; 5] = [11, 22, 33, 44, 55];

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn check(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn haar_xu(n: usize, seed: u64) -> XuMatrix {
    xu_from_unitary(&haar_unitary(n - 1, seed), n).expect("Haar input is XU")
}

fn group(kind: GroupKind) -> Vec<GroupElement> {
    enumerate_group(kind).expect("group fits the enumeration guard")
}

fn term_counts() -> Outcome {
    let expected: [u64; 17] = [
        1,
        2,
        6,
        12,
        20,
        360,
        42,
        1344,
        216,
        1_814_400,
        110,
        239_500_800,
        156,
        43_589_145_600,
        653_837_184_000,
        322_560,
        272,
    ];
    let start = Instant::now();
    let mismatches: Vec<String> = (1..=17)
        .filter_map(|n| {
            let got = term_count(n).count;
            (got != BigUint::from(expected[n - 1]))
                .then(|| format!("n={n}: {got} != {}", expected[n - 1]))
        })
        .collect();
    let elapsed = start.elapsed();
    check(
        mismatches.is_empty() && elapsed < Duration::from_secs(1),
        format!("n = 1..17 term counts, {mismatches:?}, {elapsed:?}"),
    )
}

/// Runs one decomposition and checks the three audits at the given bounds.
fn audited(
    kind: GroupKind,
    strategy: Strategy,
    seed: u64,
    tol: Tolerances,
    opts: &DecomposeOptions,
) -> Result<(), String> {
    let n = kind.degree();
    let x = haar_xu(n, seed);
    let d = decompose(&x, kind, strategy, opts).map_err(|e| e.to_string())?;
    let r = d.verify(x.matrix(), tol).map_err(|e| e.to_string())?;
    if r.passed() {
        Ok(())
    } else {
        Err(format!(
            "{kind} {strategy} seed {seed}: |Σc-1|={:e} |Σ|c|²-1|={:e} residual={:e}",
            r.sum_c_error, r.sum_abs2_error, r.residual
        ))
    }
}

fn end_to_end() -> Outcome {
    let mut runs = Vec::new();
    for p in [2, 3, 5, 7] {
        runs.push((GroupKind::supercirculant(p).unwrap(), Strategy::First));
    }
    for (p, w) in [(2, 2), (2, 3), (3, 2)] {
        let g = GroupKind::epicirculant(p, w).unwrap();
        runs.push((g, Strategy::First));
        if strategy2_applicable(g).applicable {
            runs.push((g, Strategy::Second));
        }
    }
    for n in [4, 5, 6] {
        runs.push((GroupKind::symmetric(n), Strategy::First));
        runs.push((GroupKind::symmetric(n), Strategy::Second));
    }
    let start = Instant::now();
    let mut failures = Vec::new();
    for &(kind, strategy) in &runs {
        for seed in SEEDS {
            if let Err(e) = audited(
                kind,
                strategy,
                seed,
                Tolerances::default(),
                &DecomposeOptions::default(),
            ) {
                failures.push(e);
            }
        }
    }
    let elapsed = start.elapsed();
    check(
        failures.is_empty() && elapsed < Duration::from_secs(30),
        format!("{} group/strategy pairs x 5 seeds at 1e-9 / 1e-8·n in {elapsed:?}; failures {failures:?}", runs.len()),
    )
}

fn end_to_end_large() -> Outcome {
    let kind = GroupKind::epicirculant(2, 4).unwrap();
    let tol = Tolerances {
        sum: 1e-9,
        residual_per_n: 1e-7,
    };
    let start = Instant::now();
    let result = audited(
        kind,
        Strategy::First,
        SEEDS[0],
        tol,
        &DecomposeOptions { allow_large: true },
    );
    let elapsed = start.elapsed();
    check(
        result.is_ok() && elapsed < Duration::from_secs(600),
        format!(
            "GA(4,2), N = 322560, residual bound 1e-7·n, {elapsed:?} {:?}",
            result.err()
        ),
    )
}

fn nonzero_counts() -> Outcome {
    let cases = [
        (GroupKind::epicirculant(3, 2).unwrap(), 216),
        (GroupKind::epicirculant(2, 2).unwrap(), 12),
        (GroupKind::symmetric(6), 360),
    ];
    let mut details = Vec::new();
    let mut ok = true;
    for (kind, want) in cases {
        let x = haar_xu(kind.degree(), SEEDS[1]);
        let d = decompose(&x, kind, Strategy::Second, &DecomposeOptions::default()).unwrap();
        let odd_zero = d
            .terms
            .iter()
            .filter(|t| t.label.to_perm().parity() == Parity::Odd)
            .all(|t| t.weight == Complex64::new(0.0, 0.0));
        let got = d.nonzero_count();
        ok &= got == want && odd_zero;
        details.push(format!(
            "{kind}: {got} nonzero (want {want}), odd weights exactly 0: {odd_zero}"
        ));
    }
    check(ok, details.join("; "))
}

fn trace_tables() -> Outcome {
    let mut bad = 0usize;
    let mut checked = 0usize;
    for p in [3, 5, 7] {
        for e in group(GroupKind::supercirculant(p).unwrap()) {
            let GroupLabel::Super(l) = e.label else {
                unreachable!()
            };
            let closed = if l.x != 1 {
                1
            } else if l.a != 0 {
                0
            } else {
                p
            };
            bad += usize::from(e.perm.trace() != closed);
            checked += 1;
        }
    }
    let mut literal_mismatch = 0usize;
    for (p, w) in [(2usize, 2usize), (3, 2), (2, 3)] {
        let prime = Prime::new(p).unwrap();
        let id = GfMatrix::identity(prime, w);
        for e in group(GroupKind::epicirculant(p, w).unwrap()) {
            let GroupLabel::Epi(l) = &e.label else {
                unreachable!()
            };
            let lin = id.sub(&l.x).unwrap();
            let lambda = lin.rank();
            // the rank formula counts kernel solutions; it applies when (1 - x) u = a is solvable
            let solvable = (0..p.pow(w as u32))
                .any(|u| lin.matvec(&to_dits(u, prime, w).unwrap()).unwrap() == l.a);
            let literal = match (lambda, l.a.is_zero()) {
                (0, true) => p.pow(w as u32),
                (0, false) => 0,
                _ => p.pow((w - lambda) as u32),
            };
            let closed = if lambda > 0 && !solvable { 0 } else { literal };
            bad += usize::from(e.perm.trace() != closed || l.closed_form_trace() != closed);
            literal_mismatch += usize::from(e.perm.trace() != literal);
            checked += 1;
        }
    }
    check(
        bad == 0,
        format!(
            "{checked} elements of S(3),S(5),S(7),E(2,2),E(3,2),E(2,3); {bad} mismatches \
             (rank formula p^(w-λ) taken as 0 when (1-x)u=a has no solution; the unconditional form misses {literal_mismatch})"
        ),
    )
}

fn determinant_parities() -> Outcome {
    let mut ok = true;
    let mut details = Vec::new();
    for p in [3, 5, 7, 11, 13] {
        let prime = Prime::new(p).unwrap();
        let g = primitive_root(prime);
        let mut odd_pure_pitch = 0;
        for e in group(GroupKind::supercirculant(p).unwrap()) {
            let GroupLabel::Super(l) = e.label else {
                unreachable!()
            };
            let parity = e.perm.parity();
            if l.x == 1 {
                ok &= parity == Parity::Even;
            }
            if l.a == 0 {
                let phi = dlog_position(l.x, prime).unwrap();
                ok &= (parity == Parity::Odd) == (phi % 2 == 1);
                odd_pure_pitch += usize::from(parity == Parity::Odd);
                if l.x == g {
                    ok &= parity == Parity::Odd;
                }
            }
        }
        ok &= odd_pure_pitch == (p - 1) / 2;
        details.push(format!("p={p}: g={g}, {odd_pure_pitch} odd S(0,x)"));
    }
    check(ok, details.join(", "))
}

fn affine_evenness() -> Outcome {
    let e23 = group(GroupKind::epicirculant(2, 3).unwrap());
    let all_even = e23.iter().all(|e| e.perm.parity() == Parity::Even);
    let witness = group(GroupKind::epicirculant(3, 2).unwrap())
        .into_iter()
        .find(|e| e.perm.trace() == 3 && e.perm.parity() == Parity::Odd);
    check(
        all_even && e23.len() == 1344 && witness.is_some(),
        format!(
            "E(2^3): {} elements, all even: {all_even}; E(3^2) odd witness with trace 3: {}",
            e23.len(),
            witness.map_or("none".to_string(), |w| w.label.to_string())
        ),
    )
}

fn pairs_agree(a: &GroupElement, b: &GroupElement) -> bool {
    let label_product = a.label.compose(&b.label).unwrap().to_perm();
    let matrix_product = ComplexMatrix::permutation(&a.perm)
        .mul(&ComplexMatrix::permutation(&b.perm))
        .unwrap();
    ComplexMatrix::permutation(&label_product) == matrix_product
}

fn inverse_agrees(a: &GroupElement) -> bool {
    let inv = ComplexMatrix::permutation(&a.label.inverse().to_perm());
    // permutation matrices are orthogonal: P⁻¹ = Pᵀ
    inv == ComplexMatrix::permutation(&a.perm).adjoint()
}

fn group_law() -> Outcome {
    let mut pairs = 0;
    let mut bad = 0;
    for kind in [
        GroupKind::supercirculant(5).unwrap(),
        GroupKind::epicirculant(2, 2).unwrap(),
    ] {
        let g = group(kind);
        for a in &g {
            bad += usize::from(!inverse_agrees(a));
            for b in &g {
                pairs += 1;
                bad += usize::from(!pairs_agree(a, b));
            }
        }
    }
    let e32 = group(GroupKind::epicirculant(3, 2).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..1000 {
        let a = &e32[rng.gen_range(0..e32.len())];
        let b = &e32[rng.gen_range(0..e32.len())];
        pairs += 1;
        bad += usize::from(!pairs_agree(a, b) || !inverse_agrees(a));
    }
    check(
        bad == 0,
        format!("{pairs} pairs (S(5) 400, E(2,2) 576, E(3,2) 1000 random), {bad} disagreements"),
    )
}

fn pitch_matrices() -> Outcome {
    let mut bad = 0;
    let mut checked = 0;
    for (p, w) in [(2usize, 2usize), (2, 3), (3, 2), (3, 3)] {
        let prime = Prime::new(p).unwrap();
        let n = p.pow(w as u32);
        for r in 1..n {
            for s in 1..n {
                let x = pitch_matrix(r, s, prime, w).unwrap();
                let (rd, sd) = (to_dits(r, prime, w).unwrap(), to_dits(s, prime, w).unwrap());
                let satisfied = (0..w).all(|v| {
                    (0..w).map(|j| sd.digits()[j] * x.get(j, v)).sum::<usize>() % p
                        == rd.digits()[v]
                });
                bad += usize::from(!satisfied || x.det() == 0);
                checked += 1;
            }
        }
    }
    for p in [3, 5, 7] {
        let prime = Prime::new(p).unwrap();
        for r in 1..p {
            for s in 1..p {
                let want = r * mod_inverse(s, prime).unwrap() % p;
                bad += usize::from(pitch_matrix(r, s, prime, 1).unwrap().get(0, 0) != want);
                checked += 1;
            }
        }
    }
    check(
        bad == 0,
        format!("{checked} (r,s) pairs for n in {{4,8,9,27}} and p in {{3,5,7}}, {bad} failures"),
    )
}

fn character_sets() -> Outcome {
    let values = |kind| -> HashSet<i64> {
        group(kind)
            .iter()
            .map(|e| e.perm.trace() as i64 - 1)
            .collect()
    };
    let mut ok = true;
    let mut details = Vec::new();
    for p in [3i64, 5, 7] {
        let v = values(GroupKind::supercirculant(p as usize).unwrap());
        ok &= v.is_subset(&HashSet::from([-1, 0, p - 1]));
        details.push(format!("S({p}) {:?}", sorted(&v)));
    }
    for (p, w) in [(2i64, 2u32), (2, 3), (3, 2)] {
        let v = values(GroupKind::epicirculant(p as usize, w as usize).unwrap());
        let mut allowed: HashSet<i64> = (1..=w).map(|k| p.pow(k) - 1).collect();
        allowed.extend([-1, 0]);
        ok &= v.is_subset(&allowed);
        details.push(format!("E({p}^{w}) {:?}", sorted(&v)));
    }
    for n in [4i64, 5, 6] {
        let v = values(GroupKind::symmetric(n as usize));
        ok &= !v.contains(&(n - 2));
        details.push(format!("P({n}) {:?}", sorted(&v)));
    }
    check(ok, details.join("; "))
}

fn sorted(v: &HashSet<i64>) -> Vec<i64> {
    let mut out: Vec<i64> = v.iter().copied().collect();
    out.sort_unstable();
    out
}

fn structural_numeric() -> Outcome {
    let mut failures = Vec::new();
    for n in [3, 4, 5, 7, 8, 9] {
        for seed in SEEDS {
            let x = haar_xu(n, seed);
            let d = unitary_birkhoff::decompose_structural(&x).unwrap();
            let r = d.verify(x.matrix(), Tolerances::default()).unwrap();
            if !(r.sum_c_ok() && r.residual_ok()) {
                failures.push(format!(
                    "n={n} seed={seed}: {:e} {:e}",
                    r.sum_c_error, r.residual
                ));
            }
        }
    }
    check(failures.is_empty(), format!("n in {{3,4,5,7,8,9}} x 5 seeds: Σc = 1 ± 1e-9, residual <= 1e-8·n; failures {failures:?}"))
}

/// Searches XU inputs for a structural decomposition with `Σ|c|² != 1`.
fn structural_norm_regression() -> Outcome {
    let mut inputs: Vec<(String, XuMatrix)> = Vec::new();
    for n in [3, 4, 5, 7, 8, 9] {
        for seed in SEEDS {
            inputs.push((format!("haar n={n} seed={seed}"), haar_xu(n, seed)));
        }
        for e in group(unitary_birkhoff::birkhoff::natural_group(n).unwrap())
            .into_iter()
            .take(8)
        {
            inputs.push((
                format!("{}", e.label),
                XuMatrix::new(ComplexMatrix::permutation(&e.perm), 1e-9).unwrap(),
            ));
        }
    }
    let mut worst = 0f64;
    let mut found = None;
    for (name, x) in &inputs {
        let d = unitary_birkhoff::decompose_structural(x).unwrap();
        let dev = (d.sum_abs2() - 1.0).abs();
        worst = worst.max(dev);
        if dev > 1e-9 && found.is_none() {
            found = Some(name.clone());
        }
    }
    // Informational: the expansion itself only needs unit line sums. On the
    // non-unitary van der Waerden matrix it keeps Σc = 1 with Σ|c|² = 1/n.
    let n = 5;
    let t = build_t(n);
    let u = lower_block(&t, &van_der_waerden(n), 1e-9).unwrap();
    let mut w_sum_abs2 = 0.0;
    let mut w_sum = Complex64::new(0.0, 0.0);
    let mut coeffs = vec![Complex64::new(1.0 / n as f64, 0.0); n];
    for r in 1..n {
        for s in 1..n {
            let m = m_matrix(&t, r, s).unwrap();
            for (a, c) in coeffs.iter_mut().enumerate() {
                *c += u[(r - 1, s - 1)] * m[(0, a)] / n as f64;
            }
        }
    }
    for c in &coeffs {
        w_sum += c;
        w_sum_abs2 += c.norm_sqr();
    }
    check(
        found.is_some(),
        format!(
            "{} XU inputs searched, max |Σ|c|²-1| = {worst:e}, case found: {found:?}. \
             For X in XU(n) Σ|c|² = 1 holds identically (Parseval per pitch class), so no XU case can exist. \
             [info, not counted] W (n=5, not unitary): Σc = {:.3}, Σ|c|² = {w_sum_abs2:.3}",
            inputs.len(),
            w_sum.re
        ),
    )
}

fn main() {
    let allow_large = std::env::args().any(|a| a == "--allow-large");
    // `cargo test --test acceptance -- --list` and filters come through here too
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let mut criteria: Vec<Criterion> = vec![
        ("1 term counts", term_counts),
        ("2 end-to-end decompositions", end_to_end),
        ("3 strategy-2 nonzero counts", nonzero_counts),
        ("4 trace closed forms", trace_tables),
        ("5 supercirculant parities", determinant_parities),
        ("6 GA(w,2) evenness / odd witness", affine_evenness),
        ("7 group law vs matrix product", group_law),
        ("8 pitch matrices", pitch_matrices),
        ("9 standard character values", character_sets),
        ("10a structural decomposition", structural_numeric),
        (
            "10b structural Σ|c|² regression case",
            structural_norm_regression,
        ),
    ];
    if allow_large {
        criteria.insert(2, ("2L GA(4,2) with --allow-large", end_to_end_large));
    }
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let o = run();
        println!(
            "[{}] criterion {name}: {} ({:.2?})",
            if o.passed { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed()
        );
        failed += usize::from(!o.passed);
    }
    if !allow_large {
        println!("[SKIP] criterion 2L GA(4,2): pass --allow-large to run");
    }
    if failed > 0 {
        println!("{failed} criterion/criteria failed");
        std::process::exit(1);
    }
}
