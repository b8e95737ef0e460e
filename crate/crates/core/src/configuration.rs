use std::fmt;

use rand::Rng;

use crate::error::{param, Result};

/// A full assignment of 0/1 states to every node of a landscape.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    bits: Vec<u8>,
}

impl Configuration {
    /// Builds a configuration from explicit states; every entry must be 0 or 1.
    pub fn from_bits(bits: Vec<u8>) -> Result<Self> {
        if bits.is_empty() {
            return param("configuration must have at least one node");
        }
        if let Some(b) = bits.iter().find(|&&b| b > 1) {
            return param(format!("state value {b} is not binary"));
        }
        Ok(Self { bits })
    }

    pub fn zeros(n: usize) -> Self {
        Self { bits: vec![0; n] }
    }

    /// Parses a string of `0`/`1` characters, node 0 first.
    pub fn parse(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => param(format!("unexpected character {other:?} in bit string")),
            })
            .collect::<Result<Vec<u8>>>()?;
        Self::from_bits(bits)
    }

    /// Draws each state independently with probability one half.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        if n == 0 {
            return param("n must be positive");
        }
        Ok(Self {
            bits: (0..n).map(|_| u8::from(rng.gen::<bool>())).collect(),
        })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    #[inline]
    pub fn bit(&self, p: usize) -> u8 {
        self.bits[p]
    }

    #[inline]
    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    #[inline]
    pub fn flip(&mut self, p: usize) {
        self.bits[p] ^= 1;
    }

    pub fn flipped(&self, p: usize) -> Self {
        let mut c = self.clone();
        c.flip(p);
        c
    }

    pub fn complement(&self) -> Self {
        Self {
            bits: self.bits.iter().map(|b| b ^ 1).collect(),
        }
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            f.write_str(if *b == 0 { "0" } else { "1" })?;
        }
        Ok(())
    }
}

/// Number of positions at which two configurations differ.
pub fn hamming_distance(a: &Configuration, b: &Configuration) -> Result<usize> {
    if a.len() != b.len() {
        return param(format!("length mismatch: {} vs {}", a.len(), b.len()));
    }
    Ok(a.bits.iter().zip(&b.bits).filter(|(x, y)| x != y).count())
}
