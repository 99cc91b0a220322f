use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Power series of J_l(x) in exact rational arithmetic, rounded once at the end.
pub fn series_oracle(l: u32, x: f64) -> f64 {
    let half = BigRational::from_float(x).unwrap() / BigRational::from_integer(BigInt::from(2));
    let h2 = &half * &half;
    let mut term = BigRational::one();
    for i in 1..=l {
        term = term * &half / BigRational::from_integer(BigInt::from(i));
    }
    let tiny = BigRational::new(BigInt::one(), BigInt::from(10).pow(30));
    let mut sum = BigRational::zero();
    let mut k = 0u32;
    loop {
        sum += &term;
        k += 1;
        term = -term * &h2 / BigRational::from_integer(BigInt::from(k * (k + l)));
        // terms decrease monotonically once k exceeds x/2
        if (k as f64) > x && term.abs() < tiny {
            break;
        }
    }
    sum.to_f64().unwrap()
}
