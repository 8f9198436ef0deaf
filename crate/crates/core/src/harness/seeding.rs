use crate::rng::mix64;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

struct Fnv1a(u64);

impl Fnv1a {
    fn new() -> Self {
        Self(FNV_OFFSET)
    }

    fn bytes(&mut self, bytes: &[u8]) -> &mut Self {
        for b in bytes {
            self.0 ^= u64::from(*b);
            self.0 = self.0.wrapping_mul(FNV_PRIME);
        }
        // field separator
        self.0 ^= 0xff;
        self.0 = self.0.wrapping_mul(FNV_PRIME);
        self
    }

    fn finish(&self) -> u64 {
        self.0
    }
}

/// Seed of one run, stable across platforms and releases.
pub fn run_seed(master: u64, algorithm: &str, function: &str, dim: usize, rep: usize) -> u64 {
    let key = Fnv1a::new()
        .bytes(b"run")
        .bytes(algorithm.as_bytes())
        .bytes(function.as_bytes())
        .bytes(&(dim as u64).to_le_bytes())
        .bytes(&(rep as u64).to_le_bytes())
        .finish();
    mix64(master ^ mix64(key))
}

/// Seed of the random-sampling target estimate for one (function, dim) cell.
pub fn rse_seed(master: u64, function: &str, dim: usize) -> u64 {
    let key = Fnv1a::new()
        .bytes(b"rse")
        .bytes(function.as_bytes())
        .bytes(&(dim as u64).to_le_bytes())
        .finish();
    mix64(master ^ mix64(key))
}
