//! Globally adaptive 21-point Gauss-Kronrod integration of vector integrands.

use alloc::vec::Vec;

use super::QuadratureSpec;

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_932_140_916,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Ten-point Gauss weights paired with the odd-indexed Kronrod nodes.
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Integral, error and absolute integral of every component over `[a, b]`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Estimate<const N: usize> {
    pub value: [f64; N],
    pub error: [f64; N],
    pub abs: [f64; N],
}

#[derive(Clone, Copy, Debug)]
struct Interval<const N: usize> {
    a: f64,
    b: f64,
    est: Estimate<N>,
}

/// Outcome of an adaptive run; `finite` is false when the integrand produced
/// NaN or infinity somewhere.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Adaptive<const N: usize> {
    pub value: [f64; N],
    pub error: [f64; N],
    pub converged: [bool; N],
    pub finite: bool,
}

fn rescale_error(err: f64, resabs: f64, resasc: f64) -> f64 {
    let mut e = err.abs();
    if resasc != 0.0 && e != 0.0 {
        let scale = libm::pow(200.0 * e / resasc, 1.5);
        e = if scale < 1.0 { resasc * scale } else { resasc };
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        let floor = 50.0 * f64::EPSILON * resabs;
        if floor > e {
            e = floor;
        }
    }
    e
}

/// Apply the 21-point rule on `[a, b]`. The second output of `f` is a
/// nonnegative error density added to the rule error.
pub(crate) fn qk21<const N: usize, F>(f: &mut F, a: f64, b: f64) -> Estimate<N>
where
    F: FnMut(f64) -> ([f64; N], [f64; N]),
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let habs = half.abs();

    let mut fv1 = [[0.0; N]; 10];
    let mut fv2 = [[0.0; N]; 10];
    let (fc, auxc) = f(center);

    let mut resg = [0.0; N];
    let mut resk = [0.0; N];
    let mut resabs = [0.0; N];
    let mut aux = [0.0; N];
    for i in 0..N {
        resk[i] = WGK[10] * fc[i];
        resabs[i] = resk[i].abs();
        aux[i] = WGK[10] * auxc[i].abs();
    }

    for j in 0..10 {
        let dx = half * XGK[j];
        let (f1, a1) = f(center - dx);
        let (f2, a2) = f(center + dx);
        for i in 0..N {
            let sum = f1[i] + f2[i];
            resk[i] += WGK[j] * sum;
            resabs[i] += WGK[j] * (f1[i].abs() + f2[i].abs());
            aux[i] += WGK[j] * (a1[i].abs() + a2[i].abs());
            if j % 2 == 1 {
                resg[i] += WG[j / 2] * sum;
            }
        }
        fv1[j] = f1;
        fv2[j] = f2;
    }

    let mut est = Estimate {
        value: [0.0; N],
        error: [0.0; N],
        abs: [0.0; N],
    };
    for i in 0..N {
        let mean = 0.5 * resk[i];
        let mut resasc = WGK[10] * (fc[i] - mean).abs();
        for j in 0..10 {
            resasc += WGK[j] * ((fv1[j][i] - mean).abs() + (fv2[j][i] - mean).abs());
        }
        let err = (resk[i] - resg[i]) * half;
        est.value[i] = resk[i] * half;
        est.abs[i] = resabs[i] * habs;
        est.error[i] = rescale_error(err, resabs[i] * habs, resasc * habs) + aux[i] * habs;
    }
    est
}

/// Global adaptive bisection. With `relative_to_abs`, each component's
/// absolute tolerance is raised to `rel_tol` times its absolute integral.
pub(crate) fn adaptive<const N: usize, F>(
    f: &mut F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
    relative_to_abs: bool,
) -> Adaptive<N>
where
    F: FnMut(f64) -> ([f64; N], [f64; N]),
{
    let first = qk21(f, a, b);
    let mut intervals: Vec<Interval<N>> = Vec::with_capacity(64);
    intervals.push(Interval { a, b, est: first });

    loop {
        let mut value = [0.0; N];
        let mut error = [0.0; N];
        let mut abs = [0.0; N];
        for iv in &intervals {
            for i in 0..N {
                value[i] += iv.est.value[i];
                error[i] += iv.est.error[i];
                abs[i] += iv.est.abs[i];
            }
        }

        let finite = value.iter().chain(error.iter()).all(|x| x.is_finite());
        let mut tol = [0.0; N];
        let mut converged = [true; N];
        for i in 0..N {
            tol[i] = (spec.rel_tol * value[i].abs()).max(spec.abs_tol);
            if relative_to_abs {
                tol[i] = tol[i].max(spec.rel_tol * abs[i]);
            }
            converged[i] = finite && error[i] <= tol[i];
        }

        let done = !finite || converged.iter().all(|&c| c) || intervals.len() >= spec.max_subdivisions;
        if done {
            return Adaptive {
                value,
                error,
                converged,
                finite,
            };
        }

        // Bisect the interval contributing the largest share of any budget.
        let mut worst = 0;
        let mut worst_score = -1.0;
        for (idx, iv) in intervals.iter().enumerate() {
            let mut score: f64 = 0.0;
            for i in 0..N {
                let t = tol[i].max(f64::MIN_POSITIVE);
                score = score.max(iv.est.error[i] / t);
            }
            if score > worst_score {
                worst_score = score;
                worst = idx;
            }
        }

        let iv = intervals[worst];
        let mid = 0.5 * (iv.a + iv.b);
        if !(mid > iv.a && mid < iv.b) {
            // The interval cannot be split further in floating point.
            return Adaptive {
                value,
                error,
                converged,
                finite,
            };
        }
        let left = qk21(f, iv.a, mid);
        let right = qk21(f, mid, iv.b);
        intervals[worst] = Interval {
            a: iv.a,
            b: mid,
            est: left,
        };
        intervals.insert(
            worst + 1,
            Interval {
                a: mid,
                b: iv.b,
                est: right,
            },
        );
    }
}
