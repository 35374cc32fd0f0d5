use maniac_core::codec::{derive_params, ManiacParams, Mode};
use maniac_core::gabidulin::SideInfo;
use maniac_core::netsim::{transmit, AdversaryPlan, CutProfile, NetworkSpec, Strategy};
use maniac_core::{Error, Mat};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const CUTS: CutProfile = CutProfile { c1: 4, c2: 4, c: 5 };

#[test]
fn folding_coherence_without_errors() {
    let p = derive_params(257, 1, 1, 2, 1, CUTS).unwrap();
    let spec = NetworkSpec::reference(257).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for seed in 0..20 {
        let (x1, x2) = p.random_messages(&mut rng);
        let (m1, m2) = p.source_messages(&x1, &x2, Mode::Coherent).unwrap();
        let t = transmit(&spec, &m1, &m2, &AdversaryPlan::none(), seed).unwrap();
        let yf = maniac_core::fold::fold(&t.y, &p.tower.fq).unwrap();
        let m2f = maniac_core::fold::fold(&m2, &p.tower.fq).unwrap();
        let stacked = Mat::vstack(&[&x1, &m2f]).unwrap();
        assert_eq!(yf, p.d_matrix(&t.t1, &t.t2).unwrap().mul(&stacked).unwrap());
    }
}

#[test]
fn every_adversary_strategy_within_budget() {
    let p = derive_params(257, 1, 1, 2, 1, CUTS).unwrap();
    let spec = NetworkSpec::reference(257).unwrap();
    let strategies = [
        Strategy::RandomEdges,
        Strategy::TargetedDownstream,
        Strategy::FixedEdges { edges: vec![2] },
        Strategy::FixedEdges { edges: vec![12] },
    ];
    for mode in [Mode::Coherent, Mode::Noncoherent] {
        for strategy in &strategies {
            let plan = AdversaryPlan { z: 1, strategy: strategy.clone(), payload: maniac_core::netsim::Payload::Uniform };
            let mut rng = ChaCha8Rng::seed_from_u64(2);
            let mut successes = 0;
            for seed in 0..50 {
                let (x1, x2) = p.random_messages(&mut rng);
                let (h1, h2) = p.source_messages(&x1, &x2, mode).unwrap();
                let t = transmit(&spec, &h1, &h2, &plan, seed).unwrap();
                assert!(t.e.rank() <= 1);
                let out = match mode {
                    Mode::Coherent => p.coherent_decode(&t.y, &t.t1, &t.t2),
                    Mode::Noncoherent => p.noncoherent_decode(&t.y).map(|o| o.decoded),
                };
                match out {
                    Ok(d) => {
                        assert_eq!((d.x1, d.x2), (x1, x2), "{mode:?} {strategy:?} seed {seed}");
                        successes += 1;
                    }
                    Err(e) => assert!(e.is_transfer_failure(), "{e}"),
                }
            }
            assert!(successes >= 45, "{mode:?} {strategy:?}: {successes}/50");
        }
    }
}

/// Received word for code2 after separating the sources coherently.
fn x2_stage_word(p: &ManiacParams, y: &Mat, t1: &Mat, t2: &Mat) -> Option<Mat> {
    let yf = maniac_core::fold::fold(y, &p.tower.fq).unwrap();
    let d_inv = p.d_matrix(t1, t2).unwrap().inverse().ok()?;
    Some(d_inv.mul(&yf).unwrap().slice_rows(p.r1..p.c))
}

#[test]
fn over_budget_attacks_fail_loudly_or_decode_a_closer_word() {
    // two attacked edges against a code built for z = 1
    let p = derive_params(257, 1, 1, 2, 1, CUTS).unwrap();
    let spec = NetworkSpec::reference(257).unwrap();
    let plan = AdversaryPlan::fixed(2, vec![1, 6]);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut failed, mut correct) = (0, 0);
    for seed in 0..100 {
        let (x1, x2) = p.random_messages(&mut rng);
        let (m1, m2) = p.source_messages(&x1, &x2, Mode::Coherent).unwrap();
        let t = transmit(&spec, &m1, &m2, &plan, seed).unwrap();
        assert_eq!(t.e.rank(), 2);
        match p.coherent_decode(&t.y, &t.t1, &t.t2) {
            Ok(d) if d.x1 == x1 && d.x2 == x2 => correct += 1,
            Ok(d) => {
                // a wrong answer must be a codeword within the decoding radius
                // of what code2 actually received
                let r2 = x2_stage_word(&p, &t.y, &t.t1, &t.t2).unwrap();
                let dist = r2.sub(&p.code2.encode(&d.x2).unwrap().embed_into(&p.tower.fq).unwrap()).unwrap().rank();
                assert!(dist <= 1, "seed {seed}: silent wrong decode at distance {dist}");
            }
            Err(e) => {
                assert!(e.is_transfer_failure(), "{e}");
                failed += 1;
            }
        }
    }
    assert!(failed > 50, "only {failed} failures, {correct} correct");
}

#[test]
fn noncoherent_rejects_malformed_input() {
    let p = derive_params(257, 1, 1, 2, 1, CUTS).unwrap();
    let y = Mat::zeros(&p.tower.fp, 5, 10);
    assert!(matches!(p.noncoherent_decode(&y), Err(Error::ShapeMismatch(_))));
    // all-zero received packets: no pivots, every location erased
    let y = Mat::zeros(&p.tower.fp, 5, p.n + p.big_n + p.ell);
    assert!(matches!(p.noncoherent_decode(&y), Err(Error::Stage1Failure(_))));
}

#[test]
fn coherent_flags_singular_transfer() {
    let p = derive_params(257, 1, 1, 2, 1, CUTS).unwrap();
    let fp = &p.tower.fp;
    let y = Mat::zeros(fp, 5, p.ell);
    let err = p.coherent_decode(&y, &Mat::zeros(fp, 5, 3), &Mat::zeros(fp, 5, 4)).unwrap_err();
    assert_eq!(err, Error::SingularD);
    assert_eq!(err.label(), "singular_d");
}

#[test]
fn codes_have_distance_two_z_plus_one() {
    for z in 0..=1 {
        let (r1, r2) = if z == 0 { (2, 3) } else { (1, 2) };
        let p = derive_params(257, z, r1, r2, 1, CUTS).unwrap();
        assert_eq!(p.code1.distance(), 2 * z + 1);
        assert_eq!(p.code2.distance(), 2 * z + 1);
        let none = SideInfo::none(&p.tower.fp, p.n, p.ell);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let (x1, _) = p.random_messages(&mut rng);
        let m1 = p.s1_encode(&x1).unwrap();
        assert_eq!(p.code1.decode(&m1, &none).unwrap().0, x1);
    }
}
