//! Small statistical helpers: the standard normal quantile and summary
//! statistics used by the simulation harness.

/// Inverse CDF of the standard normal distribution.
///
/// Rational approximation in the Beasley-Springer-Moro/Acklam family
/// (Wichura's refined coefficients); absolute error is far below 1e-9
/// over the open unit interval, so no external stats dependency is needed.
///
/// Panics if `p` is outside (0, 1).
pub fn normal_quantile(p: f64) -> f64 {
    assert!(p > 0.0 && p < 1.0, "normal_quantile requires 0 < p < 1");
    let q = p - 0.5;
    if q.abs() <= 0.425 {
        // Central region: rational in q^2.
        let r = 0.180625 - q * q;
        let num = poly(
            &[
                3.387_132_872_796_366_608e0,
                1.331_416_678_917_843_774_5e2,
                1.971_590_950_306_551_442_7e3,
                1.373_169_376_550_946_112_5e4,
                4.592_195_393_154_987_145_7e4,
                6.726_577_092_700_870_085_3e4,
                3.343_057_558_358_812_810_5e4,
                2.509_080_928_730_122_672_7e3,
            ],
            r,
        );
        let den = poly(
            &[
                1.0,
                4.231_333_070_160_091_125_2e1,
                6.871_870_074_920_579_083e2,
                5.394_196_021_424_751_107_7e3,
                2.121_379_430_158_659_586_7e4,
                3.930_789_580_009_271_061e4,
                2.872_908_573_572_194_267_4e4,
                5.226_495_278_852_854_561e3,
            ],
            r,
        );
        return q * num / den;
    }

    // Tail regions: rational in sqrt(-log(min(p, 1-p))).
    let mut r = if q < 0.0 { p } else { 1.0 - p };
    r = (-r.ln()).sqrt();
    let x = if r <= 5.0 {
        let r = r - 1.6;
        let num = poly(
            &[
                1.423_437_110_749_683_577_3e0,
                4.630_337_846_156_545_295_9e0,
                5.769_497_221_460_691_405_5e0,
                3.647_848_324_763_204_605e0,
                1.270_458_252_452_368_382_6e0,
                2.417_807_251_774_506_117_7e-1,
                2.272_384_498_926_918_458_3e-2,
                7.745_450_142_783_414_076_4e-4,
            ],
            r,
        );
        let den = poly(
            &[
                1.0,
                2.053_191_626_637_758_821_9e0,
                1.676_384_830_183_803_849_4e0,
                6.897_673_349_851_000_045_5e-1,
                1.481_039_764_274_800_745_9e-1,
                1.519_866_656_361_645_719_7e-2,
                5.475_938_084_995_344_946e-4,
                1.050_750_071_644_416_843_2e-9,
            ],
            r,
        );
        num / den
    } else {
        let r = r - 5.0;
        let num = poly(
            &[
                6.657_904_643_501_103_777_2e0,
                5.463_784_911_164_114_369_9e0,
                1.784_826_539_917_291_335_8e0,
                2.965_605_718_285_048_912_3e-1,
                2.653_218_952_657_612_309_3e-2,
                1.242_660_947_388_078_438_6e-3,
                2.711_555_568_743_487_578_2e-5,
                2.010_334_399_292_288_132_6e-7,
            ],
            r,
        );
        let den = poly(
            &[
                1.0,
                5.998_322_065_558_879_376_9e-1,
                1.369_298_809_227_358_053_1e-1,
                1.487_536_129_085_061_485_3e-2,
                7.868_691_311_456_132_591e-4,
                1.846_318_317_510_054_681_8e-5,
                1.421_511_758_316_445_888_7e-7,
                2.044_263_103_389_939_785_6e-15,
            ],
            r,
        );
        num / den
    };
    if q < 0.0 {
        -x
    } else {
        x
    }
}

/// Two-sided critical value `z_{alpha/2}` for a level-`alpha` test.
pub fn z_crit(alpha: f64) -> f64 {
    assert!(alpha > 0.0 && alpha < 1.0);
    normal_quantile(1.0 - alpha / 2.0)
}

fn poly(coeffs: &[f64], x: f64) -> f64 {
    // coeffs[0] + coeffs[1] x + coeffs[2] x^2 + ...
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// Sample mean and unbiased sample variance.
pub fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, f64::NAN);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64;
    (mean, var)
}
