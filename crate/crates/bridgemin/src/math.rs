//! Special functions shared by the analytic and sampling modules.
//!
//! Everything routes through `libm` so the crate stays `no_std` and the
//! numerics are identical on every platform.

use core::f64::consts::PI;

pub(crate) const SQRT_PI: f64 = 1.772_453_850_905_516_f64;

/// Scaled complementary error function `exp(x^2) * erfc(x)`.
///
/// The direct product overflows/underflows once `x*x` exceeds the exponent
/// range, even though the quantity itself decays like `1/(x sqrt(pi))`. Past
/// that point the asymptotic expansion is accurate to full precision.
pub(crate) fn erfcx(x: f64) -> f64 {
    if x < 25.0 {
        // erfc underflows near 26.5 and exp(x^2) overflows near 26.6; below
        // 25 the direct product is exact to ~1e-13 relative.
        libm::exp(x * x) * libm::erfc(x)
    } else {
        // erfcx(x) ~ (1/(x sqrt(pi))) * sum_k (-1)^k (2k-1)!! / (2x^2)^k
        const DOUBLE_FACT: [f64; 7] = [1.0, 3.0, 15.0, 105.0, 945.0, 10395.0, 135135.0];
        let inv2x2 = 1.0 / (2.0 * x * x);
        let mut term = 1.0;
        let mut sum = 1.0;
        for df in DOUBLE_FACT {
            term = -term * inv2x2;
            sum += df * term;
        }
        sum / (x * SQRT_PI)
    }
}

/// Standard normal distribution function.
#[cfg(test)]
pub(crate) fn norm_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * core::f64::consts::FRAC_1_SQRT_2)
}

/// Standard normal density.
pub(crate) fn norm_pdf(x: f64) -> f64 {
    libm::exp(-0.5 * x * x) / libm::sqrt(2.0 * PI)
}

/// Quantile of the standard normal distribution (Wichura's PPND16 rational
/// approximations, relative error below 1e-15 over (0, 1)).
///
/// Returns `-inf`/`+inf` at 0 and 1 and NaN outside `[0, 1]`.
pub(crate) fn inv_norm_cdf(p: f64) -> f64 {
    if p.is_nan() || !(0.0..=1.0).contains(&p) {
        return f64::NAN;
    }
    if p == 0.0 {
        return f64::NEG_INFINITY;
    }
    if p == 1.0 {
        return f64::INFINITY;
    }

    let q = p - 0.5;
    if q.abs() <= 0.425 {
        const A: [f64; 8] = [
            3.387_132_872_796_366_608e0,
            1.331_416_678_917_843_774_5e2,
            1.971_590_950_306_551_442_7e3,
            1.373_169_376_550_946_112_5e4,
            4.592_195_393_154_987_145_7e4,
            6.726_577_092_700_870_085_3e4,
            3.343_057_558_358_812_810_5e4,
            2.509_080_928_730_122_672_7e3,
        ];
        const B: [f64; 8] = [
            1.0,
            4.231_333_070_160_091_125_2e1,
            6.871_870_074_920_579_083e2,
            5.394_196_021_424_751_107_7e3,
            2.121_379_430_158_659_586_7e4,
            3.930_789_580_009_271_061e4,
            2.872_908_573_572_194_267_4e4,
            5.226_495_278_852_854_561e3,
        ];
        let r = 0.180625 - q * q;
        return q * poly7(&A, r) / poly7(&B, r);
    }

    let r = if q < 0.0 { p } else { 1.0 - p };
    let mut r = libm::sqrt(-libm::log(r));
    let val = if r <= 5.0 {
        const C: [f64; 8] = [
            1.423_437_110_749_683_577_34e0,
            4.630_337_846_156_545_295_9e0,
            5.769_497_221_460_691_405_5e0,
            3.647_848_324_763_204_605_04e0,
            1.270_458_252_452_368_382_58e0,
            2.417_807_251_774_506_117_7e-1,
            2.272_384_498_926_918_458_33e-2,
            7.745_450_142_783_414_076_4e-4,
        ];
        const D: [f64; 8] = [
            1.0,
            2.053_191_626_637_758_821_87e0,
            1.676_384_830_183_803_849_4e0,
            6.897_673_349_851_000_045_5e-1,
            1.481_039_764_274_800_745_9e-1,
            1.519_866_656_361_645_719_66e-2,
            5.475_938_084_995_344_946e-4,
            1.050_750_071_644_416_843_24e-9,
        ];
        r -= 1.6;
        poly7(&C, r) / poly7(&D, r)
    } else {
        const E: [f64; 8] = [
            6.657_904_643_501_103_777_2e0,
            5.463_784_911_164_114_369_9e0,
            1.784_826_539_917_291_335_8e0,
            2.965_605_718_285_048_912_3e-1,
            2.653_218_952_657_612_309_3e-2,
            1.242_660_947_388_078_438_6e-3,
            2.711_555_568_743_487_578_15e-5,
            2.010_334_399_292_288_132_65e-7,
        ];
        const F: [f64; 8] = [
            1.0,
            5.998_322_065_558_879_376_9e-1,
            1.369_298_809_227_358_053_1e-1,
            1.487_536_129_085_061_485_25e-2,
            7.868_691_311_456_132_591e-4,
            1.846_318_317_510_054_681_8e-5,
            1.421_511_758_316_445_888_7e-7,
            2.044_263_103_389_939_785_64e-15,
        ];
        r -= 5.0;
        poly7(&E, r) / poly7(&F, r)
    };
    if q < 0.0 { -val } else { val }
}

#[inline]
fn poly7(c: &[f64; 8], x: f64) -> f64 {
    ((((((c[7] * x + c[6]) * x + c[5]) * x + c[4]) * x + c[3]) * x + c[2]) * x + c[1]) * x + c[0]
}
