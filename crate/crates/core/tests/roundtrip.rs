//! Encoding round trips over random instances of every scheme.

use cbsig::algebra::BitVector;
use cbsig::codec::{Decode, Encode};
use cbsig::goppa::{NiederreiterKeyPair, NiederreiterSecretKey};
use cbsig::kks::{KksKeyPair, KksParams, KksPublicKey, KksSecretKey, KksSignature};
use cbsig::rng::from_seed;
use cbsig::stern::{Statement, SternKeyPair, SternSignature};
use cbsig::threshold::{acg, dv};
use cbsig::{blind, cfs, ibs, ring_zlc, stern};
use proptest::prelude::*;

fn same<T: Encode + Decode + PartialEq + std::fmt::Debug>(v: &T) {
    let bytes = v.encoded();
    assert_eq!(&T::decode_exact(&bytes).unwrap(), v);
    // truncation never decodes
    if !bytes.is_empty() {
        assert!(T::decode_exact(&bytes[..bytes.len() - 1]).is_err());
    }
}

const DESK_KKS: KksParams = KksParams {
    n: 48,
    r: 24,
    n_prime: 24,
    k: 4,
    t1: 8,
    t2: 16,
};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn niederreiter_and_cfs(seed in any::<u64>(), msg in proptest::collection::vec(any::<u8>(), 0..40)) {
        let mut rng = from_seed(seed);
        let kp = NiederreiterKeyPair::generate(5, 2, &mut rng).unwrap();
        same(&kp.public);
        same(&kp.secret);
        let back = NiederreiterSecretKey::decode_exact(&kp.secret.encoded()).unwrap();
        prop_assert_eq!(back.public_key(), kp.public.clone());
        let sig = cfs::sign(&kp.secret, &msg, cfs::CounterMode::Random, 10_000, &mut rng).unwrap().signature;
        same(&sig);
        prop_assert!(cfs::verify(&kp.public, &msg, &cfs::CfsSignature::decode_exact(&sig.encoded()).unwrap()));
    }

    #[test]
    fn stern(seed in any::<u64>(), msg in proptest::collection::vec(any::<u8>(), 0..40)) {
        let mut rng = from_seed(seed);
        let kp = SternKeyPair::generate(64, 32, 7, &mut rng).unwrap();
        same(&kp.public);
        let sig = stern::fs_sign(&kp.public, &kp.secret, &msg, 12, &mut rng).unwrap();
        same(&sig);
        let back = SternSignature::decode_exact(&sig.encoded()).unwrap();
        prop_assert!(stern::fs_verify(&Statement::decode_exact(&kp.public.encoded()).unwrap(), &msg, &back));
    }

    #[test]
    fn kks(seed in any::<u64>(), m in 1u64..16) {
        let mut rng = from_seed(seed);
        let kp = KksKeyPair::generate(&DESK_KKS, &mut rng).unwrap();
        same(&kp.public);
        same(&kp.secret);
        let msg = BitVector::from_u64(4, m);
        let sig = kp.sign(&msg).unwrap();
        same(&sig);
        let pk = KksPublicKey::decode_exact(&kp.public.encoded()).unwrap();
        let sk = KksSecretKey::decode_exact(&kp.secret.encoded()).unwrap();
        prop_assert_eq!(sk.j.clone(), kp.secret.j.clone());
        prop_assert!(pk.verify(&msg, &KksSignature::decode_exact(&sig.encoded()).unwrap()));
    }

    #[test]
    fn ring_signatures(seed in any::<u64>(), signer in 0usize..3) {
        let mut rng = from_seed(seed);
        let keys: Vec<_> = (0..3).map(|_| NiederreiterKeyPair::generate(5, 2, &mut rng).unwrap()).collect();
        let members: Vec<_> = keys.iter().map(|k| k.public.clone()).collect();
        let (sig, _) = ring_zlc::sign(&members, signer, &keys[signer].secret, b"m", 10_000, &mut rng).unwrap();
        same(&sig);
        let others = [(0, &keys[0].secret), (2, &keys[2].secret)];
        let (dsig, _) = dv::sign(&members, &others, b"m", 10_000, &mut rng).unwrap();
        same(&dsig);
        prop_assert!(dv::verify(&members, b"m", &dv::DvSignature::decode_exact(&dsig.encoded()).unwrap()));
    }

    #[test]
    fn acg(seed in any::<u64>()) {
        let mut rng = from_seed(seed);
        let (ring, keys) = acg::keygen(24, 12, 3, 3, &mut rng).unwrap();
        same(&ring);
        same(&keys[1]);
        let signers = [(1, &keys[1].s)];
        let (sig, _) = acg::fs_sign(&ring, &signers, b"m", 6, &mut rng).unwrap();
        same(&sig);
        prop_assert!(acg::fs_verify(&ring, b"m", &acg::AcgSignature::decode_exact(&sig.encoded()).unwrap()));
    }

    #[test]
    fn blind_and_ibs(seed in any::<u64>()) {
        let mut rng = from_seed(seed);
        let kp = NiederreiterKeyPair::generate(5, 2, &mut rng).unwrap();
        let (sig, _) = blind::run_pipeline(&kp.public, &kp.secret, b"m", 4, 2, 1000, &mut rng).unwrap();
        same(&sig);
        prop_assert!(blind::verify(&kp.public, b"m", &blind::BlindSignature::decode_exact(&sig.encoded()).unwrap()));
        let (cred, _) = ibs::kgc_extract(&kp.secret, b"id", 10_000, &mut rng).unwrap();
        same(&cred);
    }
}
