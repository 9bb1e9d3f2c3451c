//! Frequency permutation arrays under the ℓ∞ (Chebyshev) metric.
//!
//! A frequency permutation array is a set of words over `1..=m` in which
//! every symbol appears exactly λ times (n = λm), with pairwise distance at
//! least d. This crate provides:
//!
//! * [`word`]: the word type, parameters, the metric and enumeration;
//! * [`codec`]: an O(n) encoder of k-bit messages, an O(k) unique decoder,
//!   and a randomized local decoder that recovers one bit from at most
//!   λ+1 symbols;
//! * [`combinatorics`]: band matrices, permanents (naive and Ryser), exact
//!   ball volumes and bounds on the maximum code size;
//! * [`channel`]: ℓ∞-bounded noise and seeded decoding experiments;
//! * [`pir`]: a (λ+1)-server private information retrieval simulation.
//!
//! ```
//! use fpa_core::{encode, unique_decode, CodeParams, Message};
//!
//! let params = CodeParams::new(2, 6, 2).unwrap();
//! let msg: Message = "10".parse().unwrap();
//! let word = encode(&msg, &params).unwrap();
//! assert_eq!(word.to_string(), "3,1,1,2,2,3");
//! assert_eq!(unique_decode(&word, &params).unwrap(), msg);
//! ```

pub mod channel;
pub mod codec;
pub mod combinatorics;
mod error;
pub mod pir;
pub mod rng;
pub mod word;

pub use channel::{perturb, run_experiment, ChannelConfig, ChannelMode, ExperimentReport};
pub use codec::{
    encode, enumerate_codewords, local_decode, local_decode_tree, unique_decode, LocalDecodeResult,
};
pub use combinatorics::{BinaryMatrix, BoundsReport};
pub use error::{Error, Result};
pub use pir::{
    estimate_privacy, estimate_retrievability, pir_retrieve, pir_setup, PrivacyEstimate,
    PrivacyMode, RetrievalTranscript, ServerFarm,
};
pub use rng::{QuerySampler, RandomSource, ScriptedSampler};
pub use word::{
    enumerate_words, identity_perm, linf_distance, space_size, validate_word, CodeParams, FreqPerm,
    Message,
};
