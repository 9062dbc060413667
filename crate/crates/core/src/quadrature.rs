//! One-dimensional quadrature: adaptive Gauss–Kronrod (7/15) and fixed
//! Gauss–Legendre rules.

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the odd-indexed Kronrod nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const MAX_DEPTH: u32 = 60;

/// Single G7/K15 panel: returns (kronrod estimate, |kronrod - gauss|).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut resk = fc * WGK[7];
    let mut resg = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        resk += WGK[j] * s;
        if j % 2 == 1 {
            resg += WG[j / 2] * s;
        }
    }
    (resk * h, ((resk - resg) * h).abs())
}

/// Adaptive Gauss–Kronrod integration of `f` over `[a, b]` to relative
/// tolerance `rel_tol` (with a tiny absolute floor so zero integrals terminate).
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let (whole, err) = gk15(&f, a, b);
    let target = rel_tol * whole.abs();
    if err <= target.max(f64::MIN_POSITIVE) {
        return whole;
    }
    // Each panel is judged against its share of the global target.
    recurse(&f, a, b, target.max(1e-300), b - a, 0)
}

fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    target: f64,
    total_len: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (left, el) = gk15(f, a, m);
    let (right, er) = gk15(f, m, b);
    let local_target = target * (b - a) / total_len;
    if el + er <= local_target || depth >= MAX_DEPTH || m <= a || m >= b {
        return left + right;
    }
    let l = if el <= 0.5 * local_target {
        left
    } else {
        recurse(f, a, m, target, total_len, depth + 1)
    };
    let r = if er <= 0.5 * local_target {
        right
    } else {
        recurse(f, m, b, target, total_len, depth + 1)
    };
    l + r
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`,
/// by Newton iteration on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "need at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Fixed Gauss–Legendre rule mapped onto intervals.
#[derive(Debug, Clone)]
pub struct GaussRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussRule {
    pub fn new(n: usize) -> Self {
        let (nodes, weights) = gauss_legendre(n);
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(c + h * x))
            .sum::<f64>()
            * h
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronrod_weights_sum_to_two() {
        let sk: f64 = 2.0 * WGK[..7].iter().sum::<f64>() + WGK[7];
        let sg: f64 = 2.0 * WG[..3].iter().sum::<f64>() + WG[3];
        assert!((sk - 2.0).abs() < 1e-15);
        assert!((sg - 2.0).abs() < 1e-15);
    }

    #[test]
    fn single_panel_exact_for_polynomials() {
        // K15 is exact to degree 23, G7 to degree 13.
        for deg in 0..=13 {
            let (v, err) = gk15(&|x: f64| x.powi(deg), 0.0, 1.0);
            assert!((v - 1.0 / (deg as f64 + 1.0)).abs() < 1e-15, "deg {deg}");
            assert!(err < 1e-14, "deg {deg} err {err}");
        }
        let (v, _) = gk15(&|x: f64| x.powi(23), -1.0, 2.0);
        let exact = (2f64.powi(24) - 1.0) / 24.0;
        assert!((v - exact).abs() / exact < 1e-12);
    }

    #[test]
    fn adaptive_handles_peaked_integrands() {
        let v = integrate(|x: f64| x.sqrt(), 0.0, 1.0, 1e-12);
        assert!((v - 2.0 / 3.0).abs() < 1e-11);
        let v = integrate(|x: f64| 1.0 / (1e-4 + x * x), -1.0, 1.0, 1e-12);
        let exact = 2.0 * (1.0 / 1e-4f64.sqrt()) * (1.0 / 1e-4f64.sqrt()).atan();
        assert!((v - exact).abs() / exact < 1e-11);
        assert_eq!(integrate(|_| 0.0, 0.0, 1.0, 1e-12), 0.0);
    }

    #[test]
    fn gauss_legendre_matches_known_rules() {
        let (x, w) = gauss_legendre(2);
        assert!((x[1] - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!((w[0] - 1.0).abs() < 1e-15);
        for n in [3usize, 8, 16, 24] {
            let rule = GaussRule::new(n);
            assert_eq!(rule.len(), n);
            let top = 2 * n - 1;
            let v = rule.integrate(0.0, 1.0, |t| t.powi(top as i32));
            assert!((v - 1.0 / (top as f64 + 1.0)).abs() < 1e-14, "n {n}");
        }
    }
}
