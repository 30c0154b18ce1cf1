/// Resource caps for the expensive operations.
///
/// Every cap fails safe: an operation that would exceed its cap returns
/// [`crate::Error::CapExceeded`] before doing any work.
#[derive(Debug, Clone)]
pub struct Caps {
    /// Largest monomial-slice width (`generators^degree`) a rank
    /// computation may allocate columns for.
    pub max_columns: usize,
    /// Largest number of cells a face complex may enumerate.
    pub max_cells: usize,
    /// Largest number of words an enumeration may materialize.
    pub max_enumeration: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_columns: 300_000,
            max_cells: 100_000,
            max_enumeration: 200_000,
        }
    }
}

impl Caps {
    /// Check a column count against `max_columns`.
    pub fn check_columns(&self, what: &str, needed: usize) -> crate::Result<()> {
        if needed > self.max_columns {
            Err(crate::Error::cap(what, needed, self.max_columns))
        } else {
            Ok(())
        }
    }

    pub fn check_cells(&self, what: &str, needed: usize) -> crate::Result<()> {
        if needed > self.max_cells {
            Err(crate::Error::cap(what, needed, self.max_cells))
        } else {
            Ok(())
        }
    }

    pub fn check_enumeration(&self, what: &str, needed: usize) -> crate::Result<()> {
        if needed > self.max_enumeration {
            Err(crate::Error::cap(what, needed, self.max_enumeration))
        } else {
            Ok(())
        }
    }

    /// Default degree ceiling for graded-dimension sweeps of a presented
    /// algebra: the tuned table for the standard families, otherwise the
    /// largest degree whose monomial slice fits under `max_columns`.
    pub fn default_degree_cap(&self, kind: crate::presentations::PresKind, n: u8) -> usize {
        use crate::presentations::PresKind;
        match (kind, n) {
            (PresKind::Tr, 0..=3) => 8,
            (PresKind::Tr, 4) => 6,
            (PresKind::Tr, 5) => 4,
            (PresKind::Qtr, 0..=3) => 5,
            (PresKind::Qtr, 4) => 4,
            (PresKind::Qtr0, 0..=3) => 4,
            (PresKind::Qtr0, 4) => 3,
            _ => {
                let m = kind.generator_count(n);
                if m <= 1 {
                    return 8;
                }
                let mut d = 0;
                let mut cols: usize = 1;
                while cols.saturating_mul(m) <= self.max_columns {
                    cols *= m;
                    d += 1;
                }
                d
            }
        }
    }
}

