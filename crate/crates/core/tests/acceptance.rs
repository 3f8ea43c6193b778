//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the
//! libtest harness so the lines are always printed.

use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use unitary_forms::arithmetic::hilbert_suite;
use unitary_forms::genus_pipeline::{
    cancellation_suite, genus_size, pattern_is_hereditary, springer_suite, GenusReport, OrderSpec,
};
use unitary_forms::isometry_engine::{approximation_suite, orthogonal_group, verify_gen_by_reflections, DicksonEngine};
use unitary_forms::quadratic_space::classify::DEFAULT_BUDGET;
use unitary_forms::quadratic_space::forms::SesqForm;
use unitary_forms::quadratic_space::{lambda_p_extension, AlgMatrix, HermForm, QuadClass};
use unitary_forms::ring_core::{BaseRing, RingHom};
use unitary_forms::transfer::{make_transfer, transfer_suite};
use unitary_forms::unitary_algebra::{MatrixInvolution, UnitaryRing};
use unitary_forms::Result;

const SEED: u64 = 20;

fn fp(p: u64) -> Arc<UnitaryRing> {
    Arc::new(UnitaryRing::scalar_ring(BaseRing::prime_field(p).unwrap(), 1, false).unwrap())
}

fn m2f3() -> Arc<UnitaryRing> {
    Arc::new(UnitaryRing::matrix_algebra(2, BaseRing::prime_field(3).unwrap(), MatrixInvolution::Transpose, 1).unwrap())
}

fn ones(ring: &Arc<UnitaryRing>, m: usize) -> QuadClass {
    QuadClass::from_gram(ring.clone(), AlgMatrix::identity(&ring.algebra, m)).unwrap()
}

fn genus_of(spec: &OrderSpec) -> Result<GenusReport> {
    let ring = spec.build()?;
    let q = spec.form(&ring, None)?;
    genus_size(spec, &q)
}

fn c1() -> Result<(bool, String, Duration)> {
    let mut ok = true;
    let mut notes = Vec::new();
    let mut worst = Duration::ZERO;
    for primes in [vec![3u64], vec![3, 5], vec![3, 5, 7]] {
        let t = Instant::now();
        let pi = primes.iter().product::<u64>() as i64;
        let r = genus_of(&OrderSpec::quaternion(&primes, -1, -1, pi))?;
        worst = worst.max(t.elapsed());
        let expect = 1u64 << primes.len();
        let full = r.certificates.len() == primes.len() + 1 && r.certificates.iter().all(|c| c.exact);
        ok &= r.size == Some(expect) && full;
        notes.push(format!("t={} size={:?}", primes.len(), r.size));
    }
    Ok((ok && worst < Duration::from_secs(10), notes.join(", "), worst))
}

fn c2() -> Result<(bool, String, Duration)> {
    let t = Instant::now();
    let a = vec![vec![0, 1], vec![1, 0]];
    let r = genus_of(&OrderSpec::tiled(&[3, 5], 2, &[(3, a.clone()), (5, a)]))?;
    let rule_ok = r.certificates.iter().filter(|c| c.place != 0).all(|c| c.rule == "R-idempotents");
    let el = t.elapsed();
    Ok((r.size == Some(1) && rule_ok && el < Duration::from_secs(5), format!("size={:?} via R-idempotents={rule_ok}", r.size), el))
}

fn c3() -> Result<(bool, String, Duration)> {
    let t = Instant::now();
    let r = genus_of(&OrderSpec::tiled(&[3], 2, &[(3, vec![vec![0, 1], vec![0, 0]])]))?;
    let via = r.certificates.iter().any(|c| c.rule == "R-hereditary");
    let control = pattern_is_hereditary(&[vec![0, 2], vec![2, 0]]);
    Ok((r.size == Some(1) && via && !control, format!("size={:?} via R-hereditary={via}, control hereditary={control}", r.size), t.elapsed()))
}

fn c4() -> Result<(bool, String, Duration)> {
    let t = Instant::now();
    let mut ok = true;
    let mut notes = Vec::new();
    for (name, ring, m) in [("F3", fp(3), 1), ("F3", fp(3), 2), ("F3", fp(3), 3), ("F5", fp(5), 1), ("F5", fp(5), 2), ("M2F3", m2f3(), 1)] {
        let r = verify_gen_by_reflections(&ones(&ring, m), DEFAULT_BUDGET)?;
        ok &= r.passed();
        notes.push(format!("{name}/{m}: [O:O']={}", r.index));
    }
    let el = t.elapsed();
    Ok((ok && el < Duration::from_secs(60), notes.join(", "), el))
}

fn c5() -> Result<(bool, String, Duration)> {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut checked, mut bad, mut hom_bad) = (0usize, 0usize, 0usize);
    for (ring, m) in [(fp(3), 1), (fp(3), 2), (fp(3), 3), (fp(5), 1), (fp(5), 2), (m2f3(), 1)] {
        let q = ones(&ring, m);
        let o = orthogonal_group(&q, DEFAULT_BUDGET)?;
        let engine = DicksonEngine::new(&q)?;
        for phi in &o.elements {
            let sig = engine.signature(phi)?;
            for (ctx, &bit) in engine.contexts.iter().zip(&sig.bits) {
                let psi = engine.residue.matrix_to_component(ctx.component.index, phi)?;
                if let Some(agrees) = ctx.rednorm_check(&psi, bit)? {
                    checked += 1;
                    bad += usize::from(!agrees);
                }
            }
        }
        for _ in 0..1000 {
            let a = &o.elements[rng.gen_range(0..o.elements.len())];
            let b = &o.elements[rng.gen_range(0..o.elements.len())];
            let lhs = engine.signature(&o.mul(a, b))?;
            let rhs = engine.signature(a)?.add(&engine.signature(b)?);
            hom_bad += usize::from(lhs != rhs);
        }
    }
    Ok((bad == 0 && hom_bad == 0 && checked > 0, format!("{checked} norm checks, {bad} mismatches, {hom_bad} homomorphism failures"), t.elapsed()))
}

fn c6() -> Result<(bool, String, Duration)> {
    let t = Instant::now();
    let f3 = fp(3);
    let one = f3.algebra.one();
    let h = HermForm::new(SesqForm::new(f3.clone(), AlgMatrix::diagonal(&f3.algebra, &[one.clone(), one]))?)?;
    let ctx = make_transfer(&f3, &h)?;
    let r = transfer_suite(&ctx, DEFAULT_BUDGET)?;
    let el = t.elapsed();
    Ok((r.passed() && el < Duration::from_secs(60), format!("{} pairs, bijection={}", r.pairs_checked, r.bijection), el))
}

fn c7() -> Result<(bool, String, Duration)> {
    let t = Instant::now();
    let r = approximation_suite(3, 4, 3, 100, SEED)?;
    let el = t.elapsed();
    Ok((r.passed() && el < Duration::from_secs(30), format!("{}/{} exact, {}/{} congruent", r.exact_isometries, r.trials, r.congruent, r.trials), el))
}

fn c8() -> Result<(bool, String, Duration)> {
    let t = Instant::now();
    let mut ok = true;
    let mut n = 0;
    for q in [3u64, 5] {
        for e in [2u32, 3] {
            let hom = RingHom::new(&BaseRing::prime_field(q)?, &BaseRing::finite_field(q, e)?)?;
            for full in [false, true] {
                let ring = UnitaryRing::scalar_ring(BaseRing::prime_field(q)?, 1, full)?;
                for m in 1..=2 {
                    ok &= lambda_p_extension(&ring, &hom, m)?.holds;
                    n += 1;
                }
            }
        }
    }
    Ok((ok, format!("{n} cases"), t.elapsed()))
}

fn c9() -> Result<(bool, String, Duration)> {
    let t = Instant::now();
    let c3 = cancellation_suite(&fp(3), 3, DEFAULT_BUDGET)?;
    let c5 = cancellation_suite(&fp(5), 2, DEFAULT_BUDGET)?;
    let s = springer_suite(&fp(3), 3, 2, DEFAULT_BUDGET)?;
    let ctrl = springer_suite(&fp(3), 2, 1, DEFAULT_BUDGET)?;
    let pair_ok = ctrl.collapsing_pairs.iter().any(|p| {
        let mut v = [p.a[0][0].as_str(), p.b[0][0].as_str()];
        v.sort();
        v == ["[1]", "[2]"]
    });
    let el = t.elapsed();
    let ok = c3.holds && c5.holds && s.holds && !ctrl.holds && pair_ok && el < Duration::from_secs(120);
    Ok((
        ok,
        format!(
            "cancellation F3/F5 {}/{} triples, Springer e=3 {} pairs, e=2 control pair <1>,<2> found={pair_ok}",
            c3.triples_checked, c5.triples_checked, s.pairs_checked
        ),
        el,
    ))
}

fn c10() -> Result<(bool, String, Duration)> {
    let t = Instant::now();
    let r = hilbert_suite(50, 500, SEED)?;
    Ok((r.passed(), format!("{} oracle pairs, {} product samples", r.oracle_pairs, r.product_samples), t.elapsed()))
}

fn main() {
    let criteria: [(&str, fn() -> Result<(bool, String, Duration)>); 10] = [
        ("quaternion-order genus 2^t", c1),
        ("genus-one order", c2),
        ("hereditary tiled order", c3),
        ("generation by reflections", c4),
        ("Dickson consistency", c5),
        ("transfer suite", c6),
        ("weak approximation round trip", c7),
        ("scalar-extension surjectivity", c8),
        ("cancellation and Springer", c9),
        ("Hilbert symbol oracle", c10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let (ok, detail, el) = match f() {
            Ok(x) => x,
            Err(e) => (false, format!("error: {e}"), Duration::ZERO),
        };
        failed += usize::from(!ok);
        println!("criterion {:>2} {}: {name} ({detail}; {:.2?})", i + 1, if ok { "PASS" } else { "FAIL" }, el);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
