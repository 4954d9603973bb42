//! Data-parallel term evaluation with a deterministic reduction.
//!
//! The ideal and lattice sums are commutative reductions of independently
//! computable terms. Terms are mapped in parallel (rayon) or sequentially
//! (without the `parallel` feature), collected in their canonical input
//! order, and folded sequentially at full working precision. The final
//! rounding is therefore independent of the thread schedule, and the
//! parallel and sequential paths produce bit-identical results.

use crate::complex::BigComplex;
use rug::Float;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map every item and sum the resulting complex values in input order.
pub fn map_sum_complex<T, F>(items: &[T], prec: u32, f: F) -> BigComplex
where
    T: Sync,
    F: Fn(&T) -> BigComplex + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        let vals: Vec<BigComplex> = items.par_iter().map(&f).collect();
        fold_complex(vals, prec)
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_sum_complex_seq(items, prec, f)
    }
}

/// Sequential reference path. Always available so benchmarks can compare
/// both implementations in one binary.
pub fn map_sum_complex_seq<T, F>(items: &[T], prec: u32, f: F) -> BigComplex
where
    F: Fn(&T) -> BigComplex,
{
    let vals: Vec<BigComplex> = items.iter().map(&f).collect();
    fold_complex(vals, prec)
}

/// Map every item and sum the resulting real values in input order.
pub fn map_sum_float<T, F>(items: &[T], prec: u32, f: F) -> Float
where
    T: Sync,
    F: Fn(&T) -> Float + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        let vals: Vec<Float> = items.par_iter().map(&f).collect();
        fold_float(vals, prec)
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_sum_float_seq(items, prec, f)
    }
}

/// Sequential reference path for real-valued sums.
pub fn map_sum_float_seq<T, F>(items: &[T], prec: u32, f: F) -> Float
where
    F: Fn(&T) -> Float,
{
    let vals: Vec<Float> = items.iter().map(&f).collect();
    fold_float(vals, prec)
}

fn fold_complex(vals: Vec<BigComplex>, prec: u32) -> BigComplex {
    let mut acc = BigComplex::zero(prec);
    for v in vals {
        acc = &acc + &v;
    }
    acc
}

fn fold_float(vals: Vec<Float>, prec: u32) -> Float {
    let mut acc = Float::new(prec);
    for v in vals {
        acc += v;
    }
    acc
}

#[cfg(all(test, feature = "parallel"))]
mod tests {
    use super::*;

    #[test]
    fn parallel_and_sequential_paths_are_bit_identical() {
        let items: Vec<i64> = (1..4000).collect();
        let f = |k: &i64| {
            let x = Float::with_val(192, *k);
            let s = x.clone().sqrt().sin();
            let c = x.ln().cos();
            BigComplex::new(s, c)
        };
        let par = map_sum_complex(&items, 192, f);
        let seq = map_sum_complex_seq(&items, 192, f);
        assert_eq!(par.re, seq.re);
        assert_eq!(par.im, seq.im);
    }
}
