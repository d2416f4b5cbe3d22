//! Complementary error function.
//!
//! Rational approximations from fdlibm's `s_erf.c` (Sun Microsystems, 1993,
//! freely redistributable), evaluated generically.

use super::{check_finite, Result};
use crate::scalar::{lit, Scalar};

const ERX: f64 = 8.450_629_115_104_675_292_97e-01;

// erf on [0, 0.84375]
const PP: [f64; 5] = [
    1.283_791_670_955_125_585_61e-01,
    -3.250_421_072_470_014_993_70e-01,
    -2.848_174_957_559_851_047_66e-02,
    -5.770_270_296_489_441_591_57e-03,
    -2.376_301_665_665_016_260_84e-05,
];
const QQ: [f64; 5] = [
    3.979_172_239_591_553_528_19e-01,
    6.502_224_998_876_729_444_85e-02,
    5.081_306_281_875_765_627_76e-03,
    1.324_947_380_043_216_445_26e-04,
    -3.960_228_278_775_368_123_20e-06,
];

// erf on [0.84375, 1.25]
const PA: [f64; 7] = [
    -2.362_118_560_752_659_440_77e-03,
    4.148_561_186_837_483_316_66e-01,
    -3.722_078_760_357_013_238_47e-01,
    3.183_466_199_011_617_536_74e-01,
    -1.108_946_942_823_966_774_76e-01,
    3.547_830_432_561_823_593_71e-02,
    -2.166_375_594_868_790_843_00e-03,
];
const QA: [f64; 6] = [
    1.064_208_804_008_442_282_86e-01,
    5.403_979_177_021_710_489_37e-01,
    7.182_865_441_419_626_628_68e-02,
    1.261_712_198_087_616_421_12e-01,
    1.363_708_391_202_905_073_62e-02,
    1.198_449_984_679_910_741_70e-02,
];

// erfc on [1.25, 1/0.35]
const RA: [f64; 8] = [
    -9.864_944_034_847_148_227_05e-03,
    -6.938_585_727_071_817_643_72e-01,
    -1.055_862_622_532_329_098_14e+01,
    -6.237_533_245_032_600_603_96e+01,
    -1.623_966_694_625_734_703_55e+02,
    -1.846_050_929_067_110_359_94e+02,
    -8.128_743_550_630_659_342_46e+01,
    -9.814_329_344_169_145_485_92e+00,
];
const SA: [f64; 8] = [
    1.965_127_166_743_925_712_92e+01,
    1.376_577_541_435_190_426_00e+02,
    4.345_658_774_752_292_288_21e+02,
    6.453_872_717_332_678_803_36e+02,
    4.290_081_400_275_678_333_86e+02,
    1.086_350_055_417_794_351_34e+02,
    6.570_249_770_319_281_701_35e+00,
    -6.042_441_521_485_809_874_38e-02,
];

// erfc on [1/0.35, 28]
const RB: [f64; 7] = [
    -9.864_942_924_700_099_285_97e-03,
    -7.992_832_376_805_230_065_74e-01,
    -1.775_795_491_775_475_198_89e+01,
    -1.606_363_848_558_219_160_62e+02,
    -6.375_664_433_683_896_277_22e+02,
    -1.025_095_131_611_077_249_54e+03,
    -4.835_191_916_086_513_970_19e+02,
];
const SB: [f64; 7] = [
    3.033_806_074_348_245_829_24e+01,
    3.257_925_129_965_739_188_26e+02,
    1.536_729_586_084_436_959_94e+03,
    3.199_858_219_508_595_539_08e+03,
    2.553_050_406_433_164_425_83e+03,
    4.745_285_412_069_553_672_15e+02,
    -2.244_095_244_658_581_833_62e+01,
];

/// c0 + c1 s + c2 s² + …
fn horner<T: Scalar>(coeffs: &[f64], s: T) -> T {
    coeffs
        .iter()
        .rev()
        .fold(T::zero(), |acc, &c| acc * s + lit(c))
}

/// 1 + c0 s + c1 s² + …
fn horner_monic<T: Scalar>(coeffs: &[f64], s: T) -> T {
    T::one() + s * horner(coeffs, s)
}

/// erfc(x) for finite x.
///
/// Relative accuracy is about one ulp in `f64` for x < 27; beyond that the
/// result underflows to 0 (or saturates at 2 for x < −6).
pub fn erfc_fn<T: Scalar>(x: T) -> Result<T> {
    check_finite(x)?;
    let one = T::one();
    let two = lit::<T>(2.0);
    let negative = x < T::zero();
    let ax = x.abs();

    if ax < lit(0.843_75) {
        let temp = if ax < lit(1.387_778_780_781_445_7e-17) {
            ax
        } else {
            let z = ax * ax;
            let y = horner(&PP, z) / horner_monic(&QQ, z);
            if ax < lit(0.25) {
                ax + ax * y
            } else {
                lit::<T>(0.5) + (ax * y + (ax - lit(0.5)))
            }
        };
        return Ok(if negative { one + temp } else { one - temp });
    }

    if ax < lit(1.25) {
        let s = ax - one;
        let ratio = horner(&PA, s) / horner_monic(&QA, s);
        return Ok(if negative {
            one + lit(ERX) + ratio
        } else {
            one - lit(ERX) - ratio
        });
    }

    if ax >= lit(28.0) {
        return Ok(if negative { two } else { T::zero() });
    }
    if negative && ax > lit(6.0) {
        return Ok(two);
    }

    let s = (ax * ax).recip();
    let (r, q) = if ax < lit(1.0 / 0.35) {
        (horner(&RA, s), horner_monic(&SA, s))
    } else {
        (horner(&RB, s), horner_monic(&SB, s))
    };
    // Round x to single precision so that z² is exact; the remainder goes in
    // the second exponential.
    let z = T::from(ax.to_f32().unwrap_or(0.0)).unwrap_or(ax);
    let tail =
        (-z * z - lit(0.5625)).exp() * ((z - ax) * (z + ax) + r / q).exp() / ax;
    Ok(if negative { two - tail } else { tail })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reference_values() {
        assert_eq!(erfc_fn(0.0).unwrap(), 1.0);
        // 40-digit references
        let cases = [
            (1.0f64, 0.157_299_207_050_285_130_66),
            (0.5, 0.479_500_122_186_953_462_32),
            (-1.7, 1.983_790_458_590_774_560_8),
            (3.0, 2.209_049_699_858_544_137_3e-5),
            (10.0, 2.088_487_583_762_544_757e-45),
        ];
        for (x, want) in cases {
            let got = erfc_fn(x).unwrap();
            assert!(((got - want) / want).abs() < 1e-13, "erfc({x}) = {got}, want {want}");
        }
    }

    #[test]
    fn deep_tail() {
        let v = erfc_fn(10.0).unwrap();
        assert!(v > 0.0 && v < 1e-40);
        assert_eq!(erfc_fn(40.0).unwrap(), 0.0);
        assert_eq!(erfc_fn(-40.0).unwrap(), 2.0);
        assert!(erfc_fn(f64::INFINITY).is_err());
    }

    #[test]
    fn single_precision() {
        assert!((erfc_fn(1.0f32).unwrap() - 0.157_299_2f32).abs() < 1e-6);
    }

    proptest! {
        #[test]
        fn symmetry(x in -6.0f64..6.0) {
            let sum = erfc_fn(x).unwrap() + erfc_fn(-x).unwrap();
            prop_assert!((sum - 2.0).abs() < 1e-14);
        }

        #[test]
        fn open_range(x in -30.0f64..26.0) {
            let v = erfc_fn(x).unwrap();
            prop_assert!(v > 0.0 && v <= 2.0);
        }
    }
}
