use crate::error::{Error, Result};

/// Binomial coefficient `C(n, k)`, computed multiplicatively so that every
/// intermediate value is itself a binomial coefficient. Exact for all
/// `n <= 64`; larger arguments fail only if the result overflows `u128`.
pub fn combination_count(n: u64, k: u64) -> Result<u128> {
    if k > n {
        return Err(Error::invalid(format!("cannot choose {k} out of {n}")));
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k {
        // acc = C(n - k + i - 1, i - 1) here, so the division is exact.
        acc = acc.checked_mul(u128::from(n - k + i)).ok_or_else(|| Error::invalid(format!("C({n}, {k}) overflows")))?
            / u128::from(i);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundaries() {
        for n in 0..70 {
            assert_eq!(combination_count(n, 0).unwrap(), 1);
            assert_eq!(combination_count(n, n).unwrap(), 1);
        }
        assert!(combination_count(3, 4).is_err());
    }

    #[test]
    fn hybrid_counts() {
        assert_eq!(combination_count(30, 2).unwrap(), 435);
        assert_eq!(combination_count(30, 5).unwrap(), 142_506);
    }

    #[test]
    fn large_arguments() {
        assert_eq!(combination_count(64, 32).unwrap(), 1_832_624_140_942_590_534);
        assert_eq!(combination_count(100, 50).unwrap(), 100_891_344_545_564_193_334_812_497_256);
    }
}
