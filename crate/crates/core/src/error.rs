use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("pole during evaluation: denominator {re:e}{im:+e}i")]
    Eval { re: f64, im: f64 },
    #[error("prefactor mismatch: {0}")]
    Prefactor(String),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("z^-1 outside the reliable window [{min_exp}, {z_order}]")]
    Window { min_exp: i64, z_order: i64 },
    #[error("composition error: {0}")]
    Composition(String),
    #[error("certificate failed: {0}")]
    Certificate(String),
    #[error("rank error: {0}")]
    Rank(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("pole collision between degree {m_i} sector {sector_i:?} and degree {m_j} sector {sector_j:?}")]
    PoleCollision {
        m_i: u32,
        sector_i: (u32, u32),
        m_j: u32,
        sector_j: (u32, u32),
    },
    #[error("i/o error: {0}")]
    Io(String),
    #[error("truncation budget exceeded: |q|^{exponent} = {bound:e} >= {budget:e}")]
    Truncation {
        exponent: u32,
        bound: f64,
        budget: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
