/// Size guards for the exponential parts of the library.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest ambient width `d` accepted by operations that enumerate `F_2^d`.
    pub max_width: usize,
    /// Maximum number of transversals produced by one enumeration.
    pub max_transversals: u64,
    /// Maximum number of intermediate rays kept by the double description method.
    pub max_dd_rays: usize,
    /// Maximum number of linear maps enumerated by a relaxation query.
    pub max_maps: u64,
    /// Maximum number of variables in a single LP.
    pub max_lp_vars: usize,
    /// Maximum number of arcs in a flow network.
    pub max_arcs: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_width: 24,
            max_transversals: 1_000_000,
            max_dd_rays: 200_000,
            max_maps: 1 << 20,
            max_lp_vars: 20_000,
            max_arcs: 4_000_000,
        }
    }
}

impl Limits {
    pub(crate) fn check_width(&self, d: usize) -> crate::Result<()> {
        if d > self.max_width {
            return Err(crate::CtpError::CapExceeded {
                what: "ambient width",
                limit: self.max_width as u64,
            });
        }
        Ok(())
    }
}
