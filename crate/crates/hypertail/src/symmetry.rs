//! Parameter symmetries of the hypergeometric PMF.
//!
//! Each transform rewrites a point evaluation h(M, N, n, i) into an
//! equivalent one with the same exact probability:
//!
//! ```text
//! color_flip:  h(M, N, n, i) = h(N-M, N, n,   n-i)
//! drawn_swap:  h(M, N, n, i) = h(M,   N, N-n, M-i)
//! role_swap:   h(M, N, n, i) = h(n,   N, M,   i)
//! ```
//!
//! All three are involutions and map valid parameters to valid parameters.
//! The transformed count can leave the support (or even go negative); the
//! PMF is 0 on both sides then, so the identities still hold.

use crate::dist::{ExactProb, Hypergeometric};

/// A PMF evaluation point: parameters plus the white count being asked
/// about. `count` is signed so that transform images below 0 stay
/// representable; the PMF there is 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PmfPoint {
    pub params: Hypergeometric,
    pub count: i64,
}

impl PmfPoint {
    pub fn new(params: Hypergeometric, count: i64) -> Self {
        PmfPoint { params, count }
    }

    /// The exact PMF at this point; 0 for negative counts.
    pub fn pmf(&self) -> ExactProb {
        if self.count < 0 {
            return ExactProb::zero();
        }
        self.params.pmf(self.count as u64)
    }

    /// Flip every ball's colour: whites' = N-M, count' = n-i.
    pub fn color_flip(&self) -> PmfPoint {
        PmfPoint {
            params: self.params.color_flipped(),
            count: self.params.draws() as i64 - self.count,
        }
    }

    /// Swap drawn and not-drawn balls: draws' = N-n, count' = M-i.
    pub fn drawn_swap(&self) -> PmfPoint {
        let p = &self.params;
        PmfPoint {
            params: Hypergeometric::new(
                p.population(),
                p.whites(),
                p.population() - p.draws(),
            )
            .expect("population - draws <= population"),
            count: p.whites() as i64 - self.count,
        }
    }

    /// Swap the roles of "white" and "drawn": whites' = n, draws' = M,
    /// count unchanged.
    pub fn role_swap(&self) -> PmfPoint {
        let p = &self.params;
        PmfPoint {
            params: Hypergeometric::new(p.population(), p.draws(), p.whites())
                .expect("draws <= population"),
            count: self.count,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::bigint::BigInt;
    use num::rational::BigRational;

    fn point(population: u64, whites: u64, draws: u64, count: i64) -> PmfPoint {
        PmfPoint::new(
            Hypergeometric::new(population, whites, draws).unwrap(),
            count,
        )
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn color_flip_example() {
        let pt = point(10, 4, 3, 2);
        let image = pt.color_flip();
        assert_eq!(image, point(10, 6, 3, 1));
        assert_eq!(pt.pmf().ratio(), &rat(3, 10));
        assert_eq!(image.pmf().ratio(), &rat(3, 10));

        let pt = point(10, 5, 5, 3);
        let image = pt.color_flip();
        assert_eq!(image, point(10, 5, 5, 2));
        assert_eq!(pt.pmf(), image.pmf());
    }

    #[test]
    fn drawn_swap_example() {
        let pt = point(10, 4, 3, 2);
        let image = pt.drawn_swap();
        assert_eq!(image, point(10, 4, 7, 2));
        assert_eq!(image.pmf().ratio(), &rat(3, 10));

        let pt = point(7, 0, 3, 0);
        let image = pt.drawn_swap();
        assert_eq!(image, point(7, 0, 4, 0));
        assert_eq!(pt.pmf(), ExactProb::one());
        assert_eq!(image.pmf(), ExactProb::one());
    }

    #[test]
    fn role_swap_example() {
        let pt = point(10, 4, 3, 2);
        let image = pt.role_swap();
        assert_eq!(image, point(10, 3, 4, 2));
        assert_eq!(image.pmf().ratio(), &rat(3, 10));
        // fixed point when M = n
        let pt = point(10, 5, 5, 3);
        assert_eq!(pt.role_swap(), pt);
    }

    #[test]
    fn involutions() {
        for population in 0..=8u64 {
            for whites in 0..=population {
                for draws in 0..=population {
                    for count in -1..=(population as i64 + 1) {
                        let pt = point(population, whites, draws, count);
                        assert_eq!(pt.color_flip().color_flip(), pt);
                        assert_eq!(pt.drawn_swap().drawn_swap(), pt);
                        assert_eq!(pt.role_swap().role_swap(), pt);
                    }
                }
            }
        }
    }

    #[test]
    fn pmf_preserved_exhaustively_small() {
        for population in 0..=12u64 {
            for whites in 0..=population {
                for draws in 0..=population {
                    for count in 0..=draws as i64 {
                        let pt = point(population, whites, draws, count);
                        let p = pt.pmf();
                        assert_eq!(pt.color_flip().pmf(), p, "color_flip at {pt:?}");
                        assert_eq!(pt.drawn_swap().pmf(), p, "drawn_swap at {pt:?}");
                        assert_eq!(pt.role_swap().pmf(), p, "role_swap at {pt:?}");
                    }
                }
            }
        }
    }

    /// The colour-flip identity is sometimes misquoted with the flipped
    /// urn's population written as M instead of N. That variant is not a
    /// valid symmetry: on a small grid it either produces impossible
    /// parameters (drawing n > M balls) or changes the probability. The
    /// implemented form preserves the PMF everywhere on the same grid.
    #[test]
    fn color_flip_population_must_stay_n() {
        let mut misquoted_breaks = 0u32;
        for population in 1..=10u64 {
            for whites in 0..=population {
                for draws in 0..=population {
                    for count in 0..=draws as i64 {
                        let pt = point(population, whites, draws, count);
                        // misquoted image: population' = M rather than N
                        let flipped_whites = population - whites;
                        let misquoted = match Hypergeometric::new(whites, flipped_whites, draws)
                        {
                            Ok(params) => {
                                PmfPoint::new(params, draws as i64 - count).pmf()
                            }
                            // n > M: the misquoted urn cannot even be built
                            Err(_) => {
                                misquoted_breaks += 1;
                                continue;
                            }
                        };
                        if misquoted != pt.pmf() {
                            misquoted_breaks += 1;
                        }
                        // implemented form holds at every point
                        assert_eq!(pt.color_flip().pmf(), pt.pmf());
                    }
                }
            }
        }
        // concrete counterexample: h(6,10,3,2) = 1/2 but the misquoted
        // image h(4,6,3,1) = 1/5
        let pt = point(10, 6, 3, 2);
        assert_eq!(pt.pmf().ratio(), &rat(1, 2));
        let misquoted = point(6, 4, 3, 1);
        assert_eq!(misquoted.pmf().ratio(), &rat(1, 5));
        assert_eq!(pt.color_flip().pmf().ratio(), &rat(1, 2));
        assert!(misquoted_breaks > 0, "misquoted variant never failed");
    }

    #[test]
    fn closure_on_valid_params() {
        // Hypergeometric::new inside each transform would panic on
        // invalid images; this sweep proves it never does.
        for population in 0..=10u64 {
            for whites in 0..=population {
                for draws in 0..=population {
                    let pt = point(population, whites, draws, 0);
                    let _ = pt.color_flip();
                    let _ = pt.drawn_swap();
                    let _ = pt.role_swap();
                }
            }
        }
    }
}
