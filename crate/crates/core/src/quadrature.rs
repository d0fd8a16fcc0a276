//! Gauss–Legendre panels, with a square-root substitution for panels that
//! touch a branch point.

use std::sync::OnceLock;

/// Nodes per panel.
pub const ORDER: usize = 64;

#[derive(Clone, Debug)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Rule on [-1, 1] by Newton iteration on the three-term recurrence.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
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
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F, lo: f64, hi: f64) -> f64 {
        let (c, h) = (0.5 * (lo + hi), 0.5 * (hi - lo));
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(c + h * x)).sum::<f64>() * h
    }

    /// Mapped nodes and scaled weights on `[lo, hi]`.
    pub fn points(&self, lo: f64, hi: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let (c, h) = (0.5 * (lo + hi), 0.5 * (hi - lo));
        self.nodes.iter().zip(&self.weights).map(move |(&x, &w)| (c + h * x, w * h))
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// The shared order-64 rule.
pub fn rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(ORDER))
}

/// Which ends of an interval carry square-root behavior.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ends {
    pub lo: bool,
    pub hi: bool,
}

impl Ends {
    pub const NONE: Ends = Ends { lo: false, hi: false };
    pub const LO: Ends = Ends { lo: true, hi: false };
    pub const HI: Ends = Ends { lo: false, hi: true };
    pub const BOTH: Ends = Ends { lo: true, hi: true };
}

/// Quadrature nodes and weights for `[lo, hi]`. At a flagged end `e` the
/// panel uses `x = e + u^2`, so integrands like `sqrt(x - e) g(x)` become smooth.
pub fn nodes(lo: f64, hi: f64, ends: Ends, panels: usize) -> Vec<(f64, f64)> {
    let gl = rule();
    let mut out = Vec::with_capacity(ORDER * panels.max(1) * 2);
    if hi <= lo {
        return out;
    }
    let panels = panels.max(1);
    match (ends.lo, ends.hi) {
        (false, false) => {
            let h = (hi - lo) / panels as f64;
            for p in 0..panels {
                let (a, b) = (lo + p as f64 * h, if p + 1 == panels { hi } else { lo + (p + 1) as f64 * h });
                out.extend(gl.points(a, b));
            }
        }
        (true, false) => sqrt_end(lo, hi, 1.0, panels, &mut out),
        (false, true) => sqrt_end(hi, lo, -1.0, panels, &mut out),
        (true, true) => {
            let mid = 0.5 * (lo + hi);
            sqrt_end(lo, mid, 1.0, panels, &mut out);
            sqrt_end(hi, mid, -1.0, panels, &mut out);
        }
    }
    out
}

// x = e + dir * u^2 for u in [0, sqrt(|far - e|)], split into equal u-panels.
fn sqrt_end(e: f64, far: f64, dir: f64, panels: usize, out: &mut Vec<(f64, f64)>) {
    let umax = (far - e).abs().sqrt();
    let h = umax / panels as f64;
    for p in 0..panels {
        for (u, w) in rule().points(p as f64 * h, (p + 1) as f64 * h) {
            out.push((e + dir * u * u, w * 2.0 * u));
        }
    }
}

/// `∫_lo^hi f` with the given endpoint treatment; the sign is flipped when `hi < lo`.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, ends: Ends, panels: usize) -> f64 {
    if hi < lo {
        let flipped = Ends { lo: ends.hi, hi: ends.lo };
        return -integrate(f, hi, lo, flipped, panels);
    }
    nodes(lo, hi, ends, panels).into_iter().map(|(x, w)| w * f(x)).sum()
}

/// Integral over `[lo, hi]` after splitting at every breakpoint inside it.
/// Subintervals get square-root treatment at each breakpoint they touch, and
/// at `lo`/`hi` when those appear in `breaks`.
pub fn integrate_with_breaks<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, breaks: &[f64], panels: usize) -> f64 {
    if hi < lo {
        return -integrate_with_breaks(f, hi, lo, breaks, panels);
    }
    let is_break = |x: f64| breaks.contains(&x);
    let mut cuts: Vec<f64> = breaks.iter().copied().filter(|&b| b > lo && b < hi).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut pts = vec![lo];
    pts.extend(cuts);
    pts.push(hi);
    let mut total = 0.0;
    for w in pts.windows(2) {
        let ends = Ends { lo: is_break(w[0]), hi: is_break(w[1]) };
        total += integrate(&mut f, w[0], w[1], ends, panels);
    }
    total
}
