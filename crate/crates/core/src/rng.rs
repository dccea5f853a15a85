//! Seeded random streams.
//!
//! Every stream is a ChaCha8 generator keyed by the master seed; the stream
//! selector picks the ChaCha stream id. Streams never overlap, so adding
//! workers or data subsampling does not shift the noise or coordinate draws.
//!
//! | stream        | id            |
//! |---------------|---------------|
//! | coordinates   | 1             |
//! | noise         | 2             |
//! | init          | 3             |
//! | subsample     | 4             |
//! | worker `i`    | 1024 + i      |

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    Coordinates,
    Noise,
    Init,
    Subsample,
    Worker(usize),
}

impl Stream {
    pub fn id(self) -> u64 {
        match self {
            Stream::Coordinates => 1,
            Stream::Noise => 2,
            Stream::Init => 3,
            Stream::Subsample => 4,
            Stream::Worker(i) => 1024 + i as u64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedStreams {
    master: u64,
}

impl SeedStreams {
    pub fn new(master: u64) -> Self {
        Self { master }
    }

    pub fn master(&self) -> u64 {
        self.master
    }

    pub fn stream(&self, which: Stream) -> StreamRng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master);
        rng.set_stream(which.id());
        rng
    }
}
