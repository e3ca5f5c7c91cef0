use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// What a substream is used for. Each purpose gets its own key, so the arc
/// draws and both attention coins at a slot are mutually independent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Purpose {
    Arcs = 0,
    PositiveAttention = 1,
    NegativeAttention = 2,
    InitialState = 3,
}

/// Address of one independent random substream.
///
/// The generator is keyed directly by `(seed, run, slot, purpose)`, so a draw
/// depends only on its address and never on how many draws other slots or
/// runs consumed, or in which order they were evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RandomStream {
    pub seed: u64,
    pub run: u64,
    pub slot: u64,
    pub purpose: Purpose,
}

impl RandomStream {
    pub fn new(seed: u64, run: u64, slot: u64, purpose: Purpose) -> Self {
        RandomStream {
            seed,
            run,
            slot,
            purpose,
        }
    }

    pub fn at(self, slot: u64, purpose: Purpose) -> Self {
        RandomStream {
            slot,
            purpose,
            ..self
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut key = [0u8; 32];
        key[0..8].copy_from_slice(&self.seed.to_le_bytes());
        key[8..16].copy_from_slice(&self.run.to_le_bytes());
        key[16..24].copy_from_slice(&self.slot.to_le_bytes());
        key[24..32].copy_from_slice(&(self.purpose as u64).to_le_bytes());
        ChaCha8Rng::from_seed(key)
    }
}
