use rand::Rng;

use super::BitVector;
use crate::{Error, Result};

/// Permutation of `{0, .., n-1}` stored as its image array.
///
/// [`apply`](Self::apply) scatters: position `i` of the input lands at
/// position `image[i]` of the output. Seen as an `n x n` matrix `P`, this is
/// `P * v^T`. The row-vector product `v * P` gathers instead and is
/// [`apply_inverse`](Self::apply_inverse).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            image: (0..n).collect(),
        }
    }

    pub fn from_image(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &x in &image {
            if x >= n || seen[x] {
                return Err(Error::malformed("image array is not a bijection"));
            }
            seen[x] = true;
        }
        Ok(Permutation { image })
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    #[inline]
    pub fn map(&self, i: usize) -> usize {
        self.image[i]
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.image.len()];
        for (i, &x) in self.image.iter().enumerate() {
            inv[x] = i;
        }
        Permutation { image: inv }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len());
        Permutation {
            image: other.image.iter().map(|&x| self.image[x]).collect(),
        }
    }

    pub fn apply(&self, v: &BitVector) -> BitVector {
        assert_eq!(v.len(), self.len(), "permutation size mismatch");
        BitVector::from_indices(v.len(), v.iter_ones().map(|i| self.image[i]))
    }

    pub fn apply_inverse(&self, v: &BitVector) -> BitVector {
        assert_eq!(v.len(), self.len(), "permutation size mismatch");
        let mut out = BitVector::zeros(v.len());
        for (i, &x) in self.image.iter().enumerate() {
            if v.get(x) {
                out.set(i, true);
            }
        }
        out
    }

    /// Scatters a slice with the same convention as [`apply`](Self::apply).
    pub fn apply_slice<T: Clone>(&self, items: &[T]) -> Vec<T> {
        assert_eq!(items.len(), self.len());
        let mut out: Vec<Option<T>> = vec![None; items.len()];
        for (i, item) in items.iter().enumerate() {
            out[self.image[i]] = Some(item.clone());
        }
        out.into_iter().map(|x| x.expect("bijection")).collect()
    }

    /// Two bytes per entry, little-endian.
    pub fn to_bytes(&self) -> Vec<u8> {
        assert!(self.len() <= 1 << 16, "permutation too large for 16-bit entries");
        self.image.iter().flat_map(|&x| (x as u16).to_le_bytes()).collect()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() % 2 != 0 {
            return Err(Error::malformed("odd permutation byte length"));
        }
        let image = bytes
            .chunks_exact(2)
            .map(|c| u16::from_le_bytes([c[0], c[1]]) as usize)
            .collect();
        Self::from_image(image)
    }
}

/// Uniform permutation via Fisher-Yates.
pub fn random_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Permutation {
    let mut image: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        image.swap(i, j);
    }
    Permutation { image }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::from_seed;
    use proptest::prelude::*;

    #[test]
    fn apply_scatters() {
        let p = Permutation::from_image(vec![2, 0, 1]).unwrap();
        let v = BitVector::from_indices(3, [0]);
        assert_eq!(p.apply(&v), BitVector::from_indices(3, [2]));
        assert_eq!(p.apply_inverse(&BitVector::from_indices(3, [2])), v);
        assert_eq!(p.apply_slice(&['a', 'b', 'c']), vec!['b', 'c', 'a']);
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::from_image(vec![0, 0]).is_err());
        assert!(Permutation::from_image(vec![0, 2]).is_err());
    }

    #[test]
    fn fisher_yates_is_roughly_uniform() {
        let mut rng = from_seed(11);
        let mut counts = std::collections::HashMap::new();
        for _ in 0..6000 {
            *counts.entry(random_permutation(3, &mut rng).image).or_insert(0usize) += 1;
        }
        assert_eq!(counts.len(), 6);
        for c in counts.values() {
            assert!((*c as f64 - 1000.0).abs() < 150.0);
        }
    }

    proptest! {
        #[test]
        fn inverse_composes_to_identity(seed in any::<u64>(), n in 1usize..100) {
            let mut rng = from_seed(seed);
            let p = random_permutation(n, &mut rng);
            prop_assert_eq!(p.compose(&p.inverse()), Permutation::identity(n));
            prop_assert_eq!(p.inverse().compose(&p), Permutation::identity(n));
        }

        #[test]
        fn weight_is_permutation_invariant(seed in any::<u64>(), n in 1usize..150) {
            let mut rng = from_seed(seed);
            let p = random_permutation(n, &mut rng);
            let v = BitVector::random(n, &mut rng);
            prop_assert_eq!(p.apply(&v).weight(), v.weight());
            prop_assert_eq!(p.apply_inverse(&p.apply(&v)), v);
        }

        #[test]
        fn bytes_roundtrip(seed in any::<u64>(), n in 0usize..300) {
            let mut rng = from_seed(seed);
            let p = random_permutation(n, &mut rng);
            prop_assert_eq!(Permutation::from_bytes(&p.to_bytes()).unwrap(), p);
        }
    }
}
