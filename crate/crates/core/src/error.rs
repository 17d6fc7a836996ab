use thiserror::Error;

/// Errors raised by lattice, Weyl-group and oracle operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ambient dimension must be at least 2, got {0}")]
    InvalidDimension(usize),

    #[error("dimension mismatch: n = {left} vs n = {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("invalid index set: {0}")]
    InvalidIndexSet(String),

    #[error("a Cremona transformation on X_{{{n},{s}}} needs at least {need} points", need = n + 1)]
    TooFewPoints { n: usize, s: usize },

    #[error("generator index {index} out of range 1..={s}")]
    GeneratorOutOfRange { index: usize, s: usize },

    #[error("operation is only defined for n = 2, got n = {0}")]
    NotPlanar(usize),

    #[error("at most n + 3 = {max} points are supported here, got {s}")]
    TooManyPoints { s: usize, max: usize },

    #[error("negative multiplicity {value} at E{index}")]
    NegativeMultiplicity { index: usize, value: i64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("cannot parse divisor literal {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("census file: {0}")]
    Census(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn add(a: i64, b: i64) -> Result<i64> {
    a.checked_add(b).ok_or(Error::Overflow("addition"))
}

pub(crate) fn sub(a: i64, b: i64) -> Result<i64> {
    a.checked_sub(b).ok_or(Error::Overflow("subtraction"))
}

pub(crate) fn mul(a: i64, b: i64) -> Result<i64> {
    a.checked_mul(b).ok_or(Error::Overflow("multiplication"))
}

/// Binomial coefficient with `binom(a, k) = 0` whenever `a < k` (negative `a` included).
pub fn binom(a: i64, k: i64) -> Result<i64> {
    if k < 0 || a < k {
        return Ok(0);
    }
    let k = k.min(a - k);
    let mut acc: i128 = 1;
    for i in 1..=k as i128 {
        // acc * (a - k + i) is divisible by i at every step.
        acc = acc
            .checked_mul(a as i128 - k as i128 + i)
            .ok_or(Error::Overflow("binomial"))?
            / i;
        if acc > i64::MAX as i128 {
            return Err(Error::Overflow("binomial"));
        }
    }
    Ok(acc as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binom_small_values() {
        assert_eq!(binom(7, 4), Ok(35));
        assert_eq!(binom(5, 4), Ok(5));
        assert_eq!(binom(5, 2), Ok(10));
        assert_eq!(binom(0, 0), Ok(1));
        assert_eq!(binom(3, 5), Ok(0));
        assert_eq!(binom(-3, 2), Ok(0));
        assert_eq!(binom(-1, 0), Ok(0));
        assert_eq!(binom(60, 30), Ok(118264581564861424));
    }

    #[test]
    fn binom_overflow_is_reported() {
        assert_eq!(binom(200, 100), Err(Error::Overflow("binomial")));
    }

    #[test]
    fn binom_matches_pascal() {
        for a in 0..40i64 {
            for k in 1..=a {
                assert_eq!(
                    binom(a + 1, k).unwrap(),
                    binom(a, k).unwrap() + binom(a, k - 1).unwrap()
                );
            }
        }
    }
}
