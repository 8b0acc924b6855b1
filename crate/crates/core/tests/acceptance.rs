//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line. Run with `cargo test --release --test acceptance -- --nocapture`
//! to see the lines; the timed criteria assume a release build.

use qhopf_core::confluence::check_confluence;
use qhopf_core::connection::{
    check_strong_connection, combine_connections, connections_agree_at, explicit_connection,
    CombineInputs,
};
use qhopf_core::hopf::hopf_axiom_report;
use qhopf_core::ktheory::{
    bass_collapses_to, bass_idempotent, index_pairing, pairing_grid, projection_en, projection_pn,
    KHomClass, ProjectionOperand,
};
use qhopf_core::ncpoly::{gens, NCPoly, Weight};
use qhopf_core::oprep::{
    elementary_matrix, matrix_unit, represent, represent_free, RepKind, RepSpec,
};
use qhopf_core::par::Parallelism;
use qhopf_core::presentation::{PresId, Word};
use qhopf_core::scalar::QRat;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

fn report(criterion: &str, pass: bool, detail: String) -> bool {
    println!(
        "[{}] {} — {}",
        if pass { "PASS" } else { "FAIL" },
        criterion,
        detail
    );
    pass
}

fn seed() -> u64 {
    std::env::var("QHOPF_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(0x5eed_0001)
}

const QS: [f64; 3] = [0.25, 0.5, 0.75];

#[test]
fn acceptance_01_winding_pairing() {
    let start = Instant::now();
    let ns: Vec<i64> = (-5..=5).collect();
    let grid = pairing_grid(KHomClass::IdEps, &ns, &QS, 128, 1e-9, Parallelism::auto()).unwrap();
    let worst = grid
        .iter()
        .map(|g| (g.raw - g.n as f64).abs())
        .fold(0.0f64, f64::max);
    let elapsed = start.elapsed();
    let pass = worst <= 1e-9 && elapsed.as_secs_f64() < 5.0;
    assert!(
        report(
            "criterion 1: winding pairing <[(id,eps)],[p_N]> = N",
            pass,
            format!(
                "max |raw - N| = {:.2e}, {} entries in {:?}",
                worst,
                grid.len(),
                elapsed
            ),
        ),
        "worst deviation {}",
        worst
    );
}

#[test]
fn acceptance_02_rank_pairing() {
    let start = Instant::now();
    let ns: Vec<i64> = (-5..=5).collect();
    let grid = pairing_grid(KHomClass::EpsEps0, &ns, &QS, 128, 1e-9, Parallelism::auto()).unwrap();
    let worst = grid
        .iter()
        .map(|g| (g.raw - 1.0).abs())
        .fold(0.0f64, f64::max);
    let elapsed = start.elapsed();
    let pass = worst <= 1e-9 && elapsed.as_secs_f64() < 5.0;
    assert!(
        report(
            "criterion 2: rank pairing <[(eps,eps0)],[p_N]> = 1",
            pass,
            format!("max |raw - 1| = {:.2e} in {:?}", worst, elapsed),
        ),
        "worst deviation {}",
        worst
    );
}

#[test]
fn acceptance_03_frame_class_equals_opposite_line_bundle() {
    let start = Instant::now();
    let q = 0.5;
    let dim = 200;
    let mut worst = 0.0f64;
    for n in -4..=4i64 {
        let f = projection_en(n, 6).unwrap();
        let rf = index_pairing(
            KHomClass::IdEps,
            &ProjectionOperand::Frame(&f),
            q,
            dim,
            1e-6,
        )
        .unwrap();
        let p = projection_pn(PresId::Isometry, -n).unwrap();
        let rp = index_pairing(
            KHomClass::IdEps,
            &ProjectionOperand::Exact(&p),
            q,
            dim,
            1e-6,
        )
        .unwrap();
        worst = worst.max((rf.raw - rp.raw).abs());
    }
    let elapsed = start.elapsed();
    let pass = worst <= 1e-6 && elapsed.as_secs_f64() < 30.0;
    assert!(
        report(
            "criterion 3: frame projections pair like the opposite line bundle",
            pass,
            format!("max disagreement {:.2e} in {:?}", worst, elapsed),
        ),
        "worst disagreement {}",
        worst
    );
}

#[test]
fn acceptance_04_bass_collapse() {
    let mut pass = true;
    for n in 1..=6i64 {
        let c = vec![vec![gens::shift().pow(n as u32)]];
        let d = vec![vec![gens::shift_star().pow(n as u32)]];
        let p = bass_idempotent(&c, &d).unwrap();
        let target = projection_pn(PresId::Isometry, -n).unwrap();
        if !p.is_idempotent() || !bass_collapses_to(&p, &target) {
            pass = false;
        }
    }
    assert!(report(
        "criterion 4: Bass idempotent of shift lifts collapses to p_{-N}",
        pass,
        "term-by-term symbolic equality for N = 1..6".into(),
    ));
}

#[test]
fn acceptance_05_strong_connection_certification() {
    let explicit = explicit_connection();
    let rep1 = check_strong_connection(&explicit, 8);
    let combined = combine_connections(CombineInputs::standard()).unwrap();
    let rep2 = check_strong_connection(&combined, 8);
    let mut agree = true;
    for n in -8..=0i64 {
        if !connections_agree_at(&explicit, &combined, n) {
            agree = false;
        }
    }
    let pass = rep1.passed() && rep2.passed() && agree;
    assert!(
        report(
            "criterion 5: strong-connection axioms and combination agreement",
            pass,
            format!(
                "explicit: {} checks, combined: {} checks, agreement on -8..0: {}",
                rep1.checks.len(),
                rep2.checks.len(),
                agree
            ),
        ),
        "explicit failures: {:?}, combined failures: {:?}",
        rep1.failures(),
        rep2.failures()
    );
}

#[test]
fn acceptance_06_rewriting_soundness() {
    let start = Instant::now();
    let mut pass = true;
    let mut detail = Vec::new();

    for id in PresId::all() {
        let rep = check_confluence(id, 6, 0);
        if !rep.passed() || !rep.exhaustive {
            pass = false;
        }
        detail.push(format!("{}:{} words", id, rep.words_checked));
    }

    // defining relations normalize to zero, including the redundant one
    let one = NCPoly::one(PresId::SuQ2);
    let q = QRat::q_pow(1);
    let qi = QRat::q_pow(-1);
    let relations = [
        gens::a()
            .mul(&gens::b())
            .sub(&gens::b().mul(&gens::a()).scale(&q)),
        gens::a()
            .mul(&gens::c())
            .sub(&gens::c().mul(&gens::a()).scale(&q)),
        gens::b()
            .mul(&gens::d())
            .sub(&gens::d().mul(&gens::b()).scale(&q)),
        gens::c()
            .mul(&gens::d())
            .sub(&gens::d().mul(&gens::c()).scale(&q)),
        gens::b().mul(&gens::c()).sub(&gens::c().mul(&gens::b())),
        gens::a()
            .mul(&gens::d())
            .sub(&gens::b().mul(&gens::c()).scale(&q))
            .sub(&one),
        gens::d()
            .mul(&gens::a())
            .sub(&gens::b().mul(&gens::c()).scale(&qi))
            .sub(&one),
    ];
    for r in &relations {
        if !r.normalize().is_zero() {
            pass = false;
        }
    }
    // involution consistency: b* = -q c, a* = d
    if gens::b().star() != gens::c().scale(&-&q) || gens::a().star() != gens::d() {
        pass = false;
    }
    // every shipped rule is itself a vanishing relation
    for id in PresId::all() {
        let p = id.get();
        for rule in &p.rules {
            let lhs = NCPoly::from_word(id, rule.lhs.clone(), QRat::one());
            let mut rhs = NCPoly::zero(id);
            for (w, c) in &rule.rhs {
                rhs = rhs.add(&NCPoly::from_word(id, w.clone(), c.clone()));
            }
            if !lhs.sub(&rhs).normalize().is_zero() {
                pass = false;
            }
        }
    }

    for rep in hopf_axiom_report() {
        if !rep.passed() {
            pass = false;
        }
    }

    let elapsed = start.elapsed();
    if elapsed.as_secs_f64() >= 60.0 {
        pass = false;
    }
    assert!(report(
        "criterion 6: rewriting soundness (confluence, relations, Hopf axioms)",
        pass,
        format!("{} in {:?}", detail.join(", "), elapsed),
    ));
}

#[test]
fn acceptance_07_representation_fidelity() {
    let q = 0.5;
    let dim = 64;
    let spec = RepSpec::new(RepKind::RhoSuq2, q, dim).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed());
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let len = rng.random_range(1..=5usize);
        let letters: Vec<u8> = (0..len).map(|_| rng.random_range(0..4u8)).collect();
        let w = NCPoly::from_word(PresId::SuQ2, Word(letters), QRat::one());
        let lhs = represent(&w.normalize(), &spec).unwrap();
        let rhs = represent_free(&w, &spec).unwrap();
        let k = dim - len;
        let resid = lhs
            .leading_corner(k)
            .sub(&rhs.leading_corner(k))
            .max_abs_entry();
        worst = worst.max(resid);
    }
    let pass = worst <= 1e-10;
    assert!(
        report(
            "criterion 7: homomorphism residuals on random words",
            pass,
            format!(
                "200 words of length <= 5, max interior residual {:.2e}",
                worst
            ),
        ),
        "worst residual {}",
        worst
    );
}

#[test]
fn acceptance_08_elementary_matrices() {
    let dim = 64;
    let mut worst = 0.0f64;
    for &q in &QS {
        for n in 0..=8i64 {
            for m in -n..=(8 - n) {
                if n + m.abs() > 8 {
                    continue;
                }
                let e = elementary_matrix(n, m, q, dim).unwrap();
                let unit = matrix_unit((n + m) as usize, n as usize, dim);
                worst = worst.max(e.sub(&unit).max_abs_entry());
            }
        }
    }
    let pass = worst <= 1e-9;
    assert!(
        report(
            "criterion 8: elementary matrices approximate matrix units",
            pass,
            format!(
                "n + |m| <= 8, three q values, max entry error {:.2e}",
                worst
            ),
        ),
        "worst error {}",
        worst
    );
}

#[test]
fn acceptance_09_frame_consistency() {
    let mut pass = true;
    for n in -6..=6i64 {
        match projection_en(n, 6) {
            Ok(f) => {
                if !f.verify_frame_identity() {
                    pass = false;
                }
                if !f.verify_weights() {
                    pass = false;
                }
                for k in 0..f.dim() {
                    for l in 0..f.dim() {
                        let body = f.entry_body(k, l);
                        if !body.is_zero() && body.weight() != Weight::Homogeneous(0) {
                            pass = false;
                        }
                    }
                }
            }
            Err(_) => pass = false,
        }
    }
    assert!(report(
        "criterion 9: frame coefficient solves and weight-zero entries",
        pass,
        "exact unit sums and gradings for |N| <= 6".into(),
    ));
}
