use crate::error::{Error, Result};

/// Resource bounds applied before any enumeration starts.
///
/// Bell-number growth makes large ground sets a deliberate choice, so every
/// entry point checks these before allocating.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest ground-set size accepted by lattice enumeration.
    pub max_k: usize,
    /// Largest dimension of a restriction cube (it has `2^k` vertices).
    pub max_cube_k: usize,
    /// Largest order complex (total face count) the homology engine will build.
    pub max_faces: usize,
    /// Largest `k` for which the refinement relation is materialized as a table.
    pub relation_table_max_k: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_k: 12,
            max_cube_k: 8,
            max_faces: 16_000_000,
            relation_table_max_k: 8,
        }
    }
}

impl Limits {
    pub fn with_max_k(mut self, max_k: usize) -> Self {
        self.max_k = max_k;
        self
    }

    pub fn check_k(&self, k: usize) -> Result<()> {
        if k > self.max_k {
            return Err(Error::SizeGuard {
                what: "ground set size k",
                value: k,
                bound: self.max_k,
            });
        }
        Ok(())
    }

    pub fn check_cube_k(&self, k: usize) -> Result<()> {
        self.check_k(k)?;
        if k > self.max_cube_k {
            return Err(Error::SizeGuard {
                what: "cube dimension k",
                value: k,
                bound: self.max_cube_k,
            });
        }
        Ok(())
    }
}
