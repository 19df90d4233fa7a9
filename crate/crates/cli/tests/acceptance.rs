//! Acceptance criteria 1-12. Runs without the libtest harness and prints one
//! PASS/FAIL line per criterion; exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::Rng;

use cbsig::algebra::{sd_bruteforce, BitVector, Poly};
use cbsig::blind;
use cbsig::cfs::{self, CounterMode};
use cbsig::codec::Encode;
use cbsig::costmodel::{self, TABLE1};
use cbsig::goppa::{GoppaCode, NiederreiterKeyPair};
use cbsig::ibs;
use cbsig::kks::{KksKeyPair, KksParams};
use cbsig::ring_zlc;
use cbsig::rng::{from_seed, split};
use cbsig::stern::SternKeyPair;
use cbsig::threshold::{acg, dv};
use cbsig::Error;
use cbsig_cli::envelope::{Envelope, Header, Kind, SchemeId};
use cbsig_cli::harness::{self, Adversary, Config, Instance, Protocol};

const BUDGET: u64 = 1_000_000;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome {
            pass,
            detail: detail.into(),
        }
    }
}

type Check = fn() -> Result<Outcome, Error>;

fn timed(limit: Option<Duration>, f: Check) -> (Outcome, Duration) {
    let start = Instant::now();
    let mut out = f().unwrap_or_else(|e| Outcome::new(false, format!("error: {e}")));
    let took = start.elapsed();
    if let Some(limit) = limit {
        if took > limit {
            out.pass = false;
            out.detail.push_str(&format!("; runtime {took:.2?} over {limit:?}"));
        }
    }
    (out, took)
}

fn all_ok<I: IntoIterator<Item = bool>>(it: I) -> bool {
    it.into_iter().fold(true, |acc, b| acc & b)
}

fn c1_density() -> Result<Outcome, Error> {
    let mut rng = from_seed(101);
    let code = GoppaCode::generate(6, 2, &mut rng)?;
    let trials = 5000;
    let mut decoded = 0;
    for _ in 0..trials {
        let s = BitVector::random(code.syndrome_len(), &mut rng);
        match code.decode(&s) {
            Ok(e) => {
                assert_eq!(code.syndrome(&e), s);
                decoded += 1;
            }
            Err(Error::Undecodable) => {}
            Err(e) => return Err(e),
        }
    }
    let frac = decoded as f64 / trials as f64;
    // 1 + 64 + C(64, 2) decodable syndromes out of 2^12
    let exact = (1.0 + 64.0 + 2016.0) / 4096.0;
    Ok(Outcome::new(
        (0.45..=0.56).contains(&frac),
        format!("{decoded}/{trials} = {frac:.4} (exact {exact:.4})"),
    ))
}

fn c2_oracle() -> Result<Outcome, Error> {
    let mut rng = from_seed(102);
    let code = GoppaCode::generate(5, 2, &mut rng)?;
    let bits = code.syndrome_len();
    let (mut agree, mut both_none, mut mismatches) = (0, 0, 0);
    for v in 0..1u64 << bits {
        let s = BitVector::from_u64(bits, v);
        let ours = code.decode(&s);
        let oracle = sd_bruteforce(code.parity_check(), &s, code.t());
        match (ours, oracle) {
            (Ok(a), Ok(b)) if a == b => agree += 1,
            (Err(Error::Undecodable), Err(Error::NoSolution)) => both_none += 1,
            _ => mismatches += 1,
        }
    }
    Ok(Outcome::new(
        mismatches == 0 && agree + both_none == 1 << bits,
        format!("{agree} decoded identically, {both_none} unsolvable on both sides, {mismatches} mismatches"),
    ))
}

fn c3_cfs() -> Result<Outcome, Error> {
    let mut rng = from_seed(103);
    let kp = NiederreiterKeyPair::generate(6, 2, &mut rng)?;
    let mut total = 0u64;
    let mut verified = 0;
    for i in 0..200u32 {
        let msg = format!("message {i}");
        let out = cfs::sign(&kp.secret, msg.as_bytes(), CounterMode::Sequential, BUDGET, &mut rng)?;
        total += out.attempts;
        verified += cfs::verify(&kp.public, msg.as_bytes(), &out.signature) as usize;
    }
    let mean = total as f64 / 200.0;
    Ok(Outcome::new(
        verified == 200 && (1.5..=2.7).contains(&mean),
        format!("{verified}/200 verify, mean attempts {mean:.3}"),
    ))
}

fn stern_config(adversary: Adversary, rounds: usize, trials: usize, seed: u64) -> Config {
    Config {
        protocol: Protocol::Stern,
        adversary,
        rounds,
        trials,
        seed,
        instance: Instance::default(),
    }
}

fn sigma(p: f64, n: u64) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

fn c4_stern() -> Result<Outcome, Error> {
    let honest = harness::run(&stern_config(Adversary::Honest, 1000, 1, 104), None)?;
    let cheat = harness::run(&stern_config(Adversary::OptimalCheater, 1, 10_000, 105), None)?;
    let full = harness::run(&stern_config(Adversary::OptimalCheater, 8, 20_000, 106), None)?;
    let p8 = (2.0f64 / 3.0).powi(8);
    let s8 = sigma(p8, full.full_protocol.total);
    let ok_honest = honest.per_round.rate == 1.0 && honest.per_round.total == 1000;
    let ok_cheat = (cheat.per_round.rate - 2.0 / 3.0).abs() <= 0.03;
    let ok_full = (full.full_protocol.rate - p8).abs() <= 3.0 * s8;
    Ok(Outcome::new(
        ok_honest && ok_cheat && ok_full,
        format!(
            "honest {}/{}; cheater per round {:.4}; r=8 full {:.4} vs {:.4} (3 sigma {:.4})",
            honest.per_round.successes,
            honest.per_round.total,
            cheat.per_round.rate,
            full.full_protocol.rate,
            p8,
            3.0 * s8
        ),
    ))
}

fn c5_kks() -> Result<Outcome, Error> {
    let params = KksParams {
        n: 48,
        r: 24,
        n_prime: 24,
        k: 4,
        t1: 8,
        t2: 16,
    };
    let mut rng = from_seed(107);
    let kp = KksKeyPair::generate(&params, &mut rng)?;
    let g = &kp.secret.g;
    let mut weights_ok = true;
    let mut verified = 0;
    let mut sigs = Vec::new();
    for v in 1u64..16 {
        let m = BitVector::from_u64(params.k, v);
        // codeword of the hidden code, summed row by row
        let mut word = BitVector::zeros(g.cols());
        for i in (0..params.k).filter(|&i| m.get(i)) {
            word.xor_assign(g.row(i));
        }
        weights_ok &= (params.t1..=params.t2).contains(&word.weight());
        let sig = kp.sign(&m)?;
        verified += kp.public.verify(&m, &sig) as usize;
        sigs.push((m, sig));
    }
    let mut rejected = 0;
    for _ in 0..500 {
        let (m, sig) = &sigs[rng.gen_range(0..sigs.len())];
        let mut bad = sig.clone();
        bad.sigma.flip(rng.gen_range(0..params.n));
        rejected += !kp.public.verify(m, &bad) as usize;
    }
    Ok(Outcome::new(
        verified == 15 && weights_ok && rejected == 500,
        format!(
            "{verified}/15 verify, codeword weights in [{}, {}]: {weights_ok}, {rejected}/500 mutations rejected",
            params.t1, params.t2
        ),
    ))
}

/// `ceil(log2 C(n, w))` in floating point; exact away from powers of two.
fn index_width_f64(n: u64, w: u64) -> u64 {
    let lg: f64 = (0..w).map(|i| ((n - i) as f64).log2() - ((i + 1) as f64).log2()).sum();
    lg.ceil() as u64
}

fn c6_zlc() -> Result<Outcome, Error> {
    let mut rng = from_seed(108);
    let keys: Vec<_> = (0..3)
        .map(|_| NiederreiterKeyPair::generate(5, 2, &mut rng))
        .collect::<Result<_, _>>()?;
    let members: Vec<_> = keys.iter().map(|k| k.public.clone()).collect();
    let mut verified = 0;
    let mut length_ok = true;
    for signer in 0..3 {
        let msg = format!("ring message {signer}");
        let (sig, _) = ring_zlc::sign(&members, signer, &keys[signer].secret, msg.as_bytes(), BUDGET, &mut rng)?;
        verified += ring_zlc::verify(&members, msg.as_bytes(), &sig) as usize;
        let n = members[0].n() as u64;
        let expected: u64 = sig.x0.len() as u64
            + sig.z.iter().map(|z| 16 + index_width_f64(n, z.weight() as u64)).sum::<u64>();
        length_ok &= ring_zlc::packed_len(&sig) as u64 == expected && sig.pack().len() as u64 == expected;
    }
    let width = index_width_f64(1 << 16, 9);
    let formula_ok = width == 126 && all_ok((1..=100).map(|l| ring_zlc::estimated_bits(16, 9, l) == 144 + 126 * l as u64));
    Ok(Outcome::new(
        verified == 3 && length_ok && formula_ok,
        format!(
            "{verified}/3 verify, packed length exact: {length_ok}, estimated_bits(16, 9, l) = 144 + {width} l: {formula_ok}"
        ),
    ))
}

fn c7_acg() -> Result<Outcome, Error> {
    let (n, k, t) = (24, 12, 3);
    let mut rng = from_seed(109);
    let mut honest_ok = true;
    let mut under_rejected = 0;
    let mut under_total = 0;
    let mut notes = Vec::new();
    for (big_n, l) in [(3usize, 1usize), (5, 3)] {
        let (ring, keys) = acg::keygen(n, k, t, big_n, &mut rng)?;
        let signers: Vec<(usize, &BitVector)> = keys.iter().take(l).enumerate().map(|(i, key)| (i, &key.s)).collect();
        let mut leader = acg::HonestLeader::new(&ring, &signers)?;
        let accepted = acg::identify(&ring, l, &mut leader, 200, &mut rng);
        honest_ok &= accepted;
        let (sig, _) = acg::fs_sign(&ring, &signers, b"threshold", 16, &mut rng)?;
        honest_ok &= acg::fs_verify(&ring, b"threshold", &sig);
        notes.push(format!("({big_n},{l}) honest {accepted}"));

        let mut weak = acg::HonestLeader::new(&ring, &signers[..l - 1])?;
        for _ in 0..200 {
            let c = acg::Leader::commit(&mut weak, &mut rng);
            let resp = acg::Leader::respond(&mut weak, 2);
            under_total += 1;
            under_rejected += !acg::check(&ring, l, &c, 2, &resp) as usize;
        }
    }
    let cfg = Config {
        protocol: Protocol::Acg,
        adversary: Adversary::OptimalCheater,
        rounds: 1,
        trials: 10_000,
        seed: 110,
        instance: Instance {
            code: (n, k, t),
            ring: (3, 1),
            ..Instance::default()
        },
    };
    let cheat = harness::run(&cfg, None)?;
    let bound = 2.0 / 3.0 + 3.0 * sigma(2.0 / 3.0, cheat.per_round.total);
    Ok(Outcome::new(
        honest_ok && under_rejected == under_total && cheat.per_round.rate <= bound,
        format!(
            "{}; under-threshold b=2 rejected {under_rejected}/{under_total}; cheater {:.4} <= {bound:.4}",
            notes.join(", "),
            cheat.per_round.rate
        ),
    ))
}

fn c8_dv() -> Result<Outcome, Error> {
    let (m, t, big_n, l) = (5u32, 2usize, 4usize, 2usize);
    let mut rng = from_seed(111);
    let keys: Vec<_> = (0..big_n)
        .map(|_| NiederreiterKeyPair::generate(m, t, &mut rng))
        .collect::<Result<_, _>>()?;
    let members: Vec<_> = keys.iter().map(|k| k.public.clone()).collect();
    let signers: Vec<_> = [1usize, 3].iter().map(|&i| (i, &keys[i].secret)).collect();
    let (sig, _) = dv::sign(&members, &signers, b"dv message", dv::default_budget(l, t), &mut rng)?;
    let verified = dv::verify(&members, b"dv message", &sig);
    let degree_ok = sig.f.degree() == Some(big_n - l);
    let origin_ok = sig.f.coeff(0) == dv::ring_origin(&members)?;
    let mt = m * t as u32;
    let mut perturbed = 0;
    let mut rejected = 0;
    for i in 0..=big_n - l {
        for _ in 0..20 {
            let delta = rng.gen_range(1..1u64 << mt);
            let mut coeffs = sig.f.coeffs().to_vec();
            coeffs[i] ^= delta;
            let mut bad = sig.clone();
            bad.f = Poly::from_coeffs(coeffs);
            perturbed += 1;
            rejected += !dv::verify(&members, b"dv message", &bad) as usize;
        }
    }
    Ok(Outcome::new(
        verified && degree_ok && origin_ok && rejected == perturbed,
        format!(
            "verify {verified}, deg f = {:?}, f(0) = ring origin: {origin_ok}, {rejected}/{perturbed} perturbations rejected",
            sig.f.degree()
        ),
    ))
}

fn c9_blind() -> Result<Outcome, Error> {
    let (m, t, p, big_l) = (5u32, 2usize, 4usize, 2usize);
    let mut rng = from_seed(112);
    let kp = NiederreiterKeyPair::generate(m, t, &mut rng)?;
    let mut total = 0u64;
    let mut verified = 0;
    for i in 0..200u32 {
        let msg = format!("blind {i}");
        let (sig, attempts) = blind::run_pipeline(&kp.public, &kp.secret, msg.as_bytes(), p, big_l, BUDGET, &mut rng)?;
        total += attempts;
        verified += blind::verify(&kp.public, msg.as_bytes(), &sig) as usize;
    }
    let mean = total as f64 / 200.0;
    // 2^10 / C(32, 2)
    let expected = 1024.0 / 496.0;
    assert!((blind::expected_attempts(m, t) - expected).abs() < 1e-12);
    Ok(Outcome::new(
        verified == 200 && (mean - expected).abs() <= 0.3 * expected,
        format!("{verified}/200 verify, mean attempts {mean:.3} vs {expected:.3}"),
    ))
}

fn c10_ibs() -> Result<Outcome, Error> {
    let mut rng = from_seed(113);
    let kgc = NiederreiterKeyPair::generate(6, 2, &mut rng)?;
    let mut same = 0;
    let mut complete = 0;
    for i in 0..50u64 {
        let id = format!("user-{i}@example.org");
        let (cred, _) = ibs::kgc_extract(&kgc.secret, id.as_bytes(), BUDGET, &mut split(500, i))?;
        let direct = cfs::sign(&kgc.secret, id.as_bytes(), CounterMode::Sequential, BUDGET, &mut split(500, i))?;
        same += (cred.j == direct.signature.counter && cred.s == direct.signature.z && cred.is_valid(&kgc.public)) as usize;
        let (ok, log) = ibs::identify_with_credential(&kgc.public, &cred, 20, &mut rng)?;
        complete += (ok && log.len() == 20) as usize;
    }
    let cfg = Config {
        protocol: Protocol::Ibs,
        adversary: Adversary::OptimalCheater,
        rounds: 1,
        trials: 10_000,
        seed: 114,
        instance: Instance::default(),
    };
    let cheat = harness::run(&cfg, None)?;
    Ok(Outcome::new(
        same == 50 && complete == 50 && (cheat.per_round.rate - 2.0 / 3.0).abs() <= 0.03,
        format!(
            "{same}/50 extractions equal CFS, {complete}/50 identifications accepted, cheater per round {:.4}",
            cheat.per_round.rate
        ),
    ))
}

fn c11_table1() -> Result<Outcome, Error> {
    let rows = costmodel::table1(&TABLE1)?;
    let mut misses = Vec::new();
    let mut cells = 0;
    for row in &rows {
        for (name, cell) in row.cells() {
            cells += 1;
            if !cell.within(0.02) {
                misses.push(format!(
                    "{} {name} {} vs {} ({:.1}%)",
                    row.scheme,
                    cell.display_reproduced(),
                    cell.display_published(),
                    100.0 * cell.relative_error()
                ));
            }
        }
    }
    let detail = if misses.is_empty() {
        format!("{cells}/{cells} cells within 2%")
    } else {
        format!("{}/{cells} cells within 2%; off: {}", cells - misses.len(), misses.join("; "))
    };
    Ok(Outcome::new(misses.is_empty(), detail))
}

fn c12_serialization() -> Result<Outcome, Error> {
    let mut rng = from_seed(115);
    let mut files: Vec<Vec<u8>> = Vec::new();
    let mut round_trips = 0;
    let mut failures = Vec::new();

    fn check<T>(scheme: SchemeId, kind: Kind, value: &T, files: &mut Vec<Vec<u8>>) -> bool
    where
        T: Encode + cbsig::codec::Decode + PartialEq,
    {
        let bytes = Envelope::seal(scheme, kind, Header::default(), value).to_bytes();
        let ok = Envelope::parse(&bytes)
            .and_then(|env| env.open::<T>())
            .map(|back| back == *value)
            .unwrap_or(false);
        files.push(bytes);
        ok
    }

    let instances = 100;
    for i in 0..instances {
        let msg = format!("serialize {i}");
        let msg = msg.as_bytes();
        let mut ok = true;

        let nr = NiederreiterKeyPair::generate(5, 2, &mut rng)?;
        ok &= check(SchemeId::Nr, Kind::PublicKey, &nr.public, &mut files);
        ok &= check(SchemeId::Nr, Kind::SecretKey, &nr.secret, &mut files);
        let cfs_sig = cfs::sign(&nr.secret, msg, CounterMode::Random, BUDGET, &mut rng)?.signature;
        ok &= check(SchemeId::Cfs, Kind::Signature, &cfs_sig, &mut files);

        let st = SternKeyPair::generate(32, 16, 4, &mut rng)?;
        ok &= check(SchemeId::Stern, Kind::SecretKey, &st, &mut files);
        let st_sig = cbsig::stern::fs_sign(&st.public, &st.secret, msg, 4, &mut rng)?;
        ok &= check(SchemeId::Stern, Kind::Signature, &st_sig, &mut files);

        let kks = KksKeyPair::generate(
            &KksParams {
                n: 48,
                r: 24,
                n_prime: 24,
                k: 4,
                t1: 8,
                t2: 16,
            },
            &mut rng,
        )?;
        ok &= check(SchemeId::Kks, Kind::SecretKey, &kks, &mut files);
        let kks_sig = kks.sign(&BitVector::from_u64(4, 1 + i as u64 % 15))?;
        ok &= check(SchemeId::Kks, Kind::Signature, &kks_sig, &mut files);

        let others: Vec<_> = (0..2)
            .map(|_| NiederreiterKeyPair::generate(5, 2, &mut rng))
            .collect::<Result<_, _>>()?;
        let members = vec![nr.public.clone(), others[0].public.clone(), others[1].public.clone()];
        let ring = ring_zlc::Ring::new(members.clone())?;
        ok &= check(SchemeId::Zlc, Kind::PublicKey, &ring, &mut files);
        let (zlc_sig, _) = ring_zlc::sign(&members, 0, &nr.secret, msg, BUDGET, &mut rng)?;
        ok &= check(SchemeId::Zlc, Kind::Signature, &zlc_sig, &mut files);

        let signers = [(0usize, &nr.secret), (2, &others[1].secret)];
        let (dv_sig, _) = dv::sign(&members, &signers, msg, dv::default_budget(2, 2), &mut rng)?;
        ok &= check(SchemeId::Dv, Kind::Signature, &dv_sig, &mut files);

        let (acg_ring, acg_keys) = acg::keygen(24, 12, 3, 3, &mut rng)?;
        ok &= check(SchemeId::Acg, Kind::PublicKey, &acg_ring, &mut files);
        ok &= check(SchemeId::Acg, Kind::SecretKey, &acg_keys[0], &mut files);
        let (acg_sig, _) = acg::fs_sign(&acg_ring, &[(0, &acg_keys[0].s)], msg, 4, &mut rng)?;
        ok &= check(SchemeId::Acg, Kind::Signature, &acg_sig, &mut files);

        let state = blind::blind(&nr.public, msg, 4, 2, &mut rng)?;
        ok &= check(SchemeId::Blind, Kind::BlindState, &state, &mut files);
        let (blind_sig, _) = blind::run_pipeline(&nr.public, &nr.secret, msg, 4, 2, BUDGET, &mut rng)?;
        ok &= check(SchemeId::Blind, Kind::Signature, &blind_sig, &mut files);

        let (cred, _) = ibs::kgc_extract(&nr.secret, msg, BUDGET, &mut rng)?;
        ok &= check(SchemeId::Ibs, Kind::Credential, &cred, &mut files);

        if ok {
            round_trips += 1;
        } else {
            failures.push(i);
        }
    }

    let mut detected = 0;
    for _ in 0..1000 {
        let mut bytes = files[rng.gen_range(0..files.len())].clone();
        let bit = rng.gen_range(0..bytes.len() * 8);
        bytes[bit / 8] ^= 1 << (bit % 8);
        detected += Envelope::parse(&bytes).is_err() as usize;
    }
    Ok(Outcome::new(
        round_trips == instances && detected == 1000,
        format!(
            "{round_trips}/{instances} instances round-trip across 9 schemes ({} objects), corruption detected {detected}/1000{}",
            files.len(),
            if failures.is_empty() { String::new() } else { format!("; failed at {failures:?}") }
        ),
    ))
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let criteria: [(&str, Option<Duration>, Check); 12] = [
        ("decodable-syndrome density", Some(secs(10)), c1_density),
        ("decoder-oracle equivalence", Some(secs(30)), c2_oracle),
        ("CFS completeness and attempts", None, c3_cfs),
        ("Stern soundness", None, c4_stern),
        ("KKS exhaustive verification", None, c5_kks),
        ("ZLC ring signature", None, c6_zlc),
        ("ACG threshold identification", None, c7_acg),
        ("DV threshold signature", None, c8_dv),
        ("blind pipeline", None, c9_blind),
        ("identity-based identification", None, c10_ibs),
        ("cost table reproduction", Some(secs(1)), c11_table1),
        ("serialization", None, c12_serialization),
    ];
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.into_iter().enumerate() {
        let (out, took) = timed(limit, f);
        let tag = if out.pass { "PASS" } else { "FAIL" };
        failed += !out.pass as usize;
        println!("[{tag}] {:>2} {name}: {} ({:.2?})", i + 1, out.detail, took);
    }
    println!("acceptance: {} passed, {failed} failed", 12 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
