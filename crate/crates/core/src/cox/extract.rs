use super::{associativity_residual, CoxError, GridFunction};

/// Dyadic refinement levels below the unit.
pub const EXTRACTION_DEPTH: u32 = 10;
pub const BISECTION_TOL: f64 = 1e-12;
const MAX_INPUT_RESIDUAL: f64 = 1e-4;

/// A monotone `h` with `h(0) = 0`, `h(unit) = 1` and
/// `h(f(x,y)) ≈ h(x) + h(y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Representation {
    pub unit: f64,
    /// Associativity residual of the input.
    pub input_residual: f64,
    /// Nodes `(x, h(x))`, strictly increasing in both coordinates.
    pub nodes: Vec<(f64, f64)>,
    /// `h` at each grid point.
    pub grid: Vec<f64>,
    pub residual: f64,
    /// Grid indices of the worst pair.
    pub worst: Option<(usize, usize)>,
}

impl Representation {
    /// Piecewise linear through the nodes, extended linearly past the
    /// last one.
    pub fn eval(&self, x: f64) -> f64 {
        let k = self
            .nodes
            .partition_point(|&(nx, _)| nx <= x)
            .clamp(1, self.nodes.len() - 1);
        let (x0, h0) = self.nodes[k - 1];
        let (x1, h1) = self.nodes[k];
        h0 + (h1 - h0) * (x - x0) / (x1 - x0)
    }
}

/// Solve `f(x, x) = target` for `x` in `[0, hi]`.
fn halve(f: &GridFunction, target: f64, hi: f64) -> Result<f64, CoxError> {
    let (mut lo, mut hi) = (0.0, hi);
    let at = |x: f64| f.eval(x, x).ok_or(CoxError::Bracket(target));
    if at(lo)? > target || at(hi)? < target {
        return Err(CoxError::Bracket(target));
    }
    // bisect down to adjacent floats, well inside BISECTION_TOL
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if at(mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if hi - lo > BISECTION_TOL {
        return Err(CoxError::Bracket(target));
    }
    let (el, eh) = ((at(lo)? - target).abs(), (at(hi)? - target).abs());
    Ok(if el < eh { lo } else { hi })
}

/// Build an additive representation by iterate-and-bisect.
///
/// The unit is halved `EXTRACTION_DEPTH` times by bisection on
/// `f(x,x) = prev`, giving the point with `h = 2^-D`. The point with
/// `h = k·2^-D` is then `f` of the points for `⌊k/2⌋` and `⌈k/2⌉`, until
/// the domain is exhausted.
pub fn extract_additive_representation(f: &GridFunction, unit: f64) -> Result<Representation, CoxError> {
    if !(unit > 0.0 && unit <= f.x_max()) {
        return Err(CoxError::BadUnit);
    }
    let r = associativity_residual(f)?;
    if r.value >= MAX_INPUT_RESIDUAL {
        return Err(CoxError::NotAssociative(r.value));
    }
    // chain[d] has h = 2^-d
    let mut chain = vec![unit];
    for d in 0..EXTRACTION_DEPTH as usize {
        chain.push(halve(f, chain[d], chain[d])?);
    }
    let depth = EXTRACTION_DEPTH as usize;
    let scale = (1u64 << depth) as f64;
    // pts[k] has h = k / 2^D
    let mut pts = vec![0.0, chain[depth]];
    loop {
        let k = pts.len();
        let next = if k.is_power_of_two() && k.trailing_zeros() as usize <= depth {
            chain[depth - k.trailing_zeros() as usize]
        } else {
            let Some(v) = f.eval(pts[k / 2], pts[k - k / 2]) else { break };
            v
        };
        if next <= pts[k - 1] {
            return Err(CoxError::NotMonotone(k - 1, k));
        }
        pts.push(next);
        if !f.in_domain(next) {
            break;
        }
    }
    let nodes: Vec<(f64, f64)> = pts
        .iter()
        .enumerate()
        .map(|(k, &x)| (x, k as f64 / scale))
        .collect();
    let mut rep = Representation {
        unit,
        input_residual: r.value,
        nodes,
        grid: Vec::new(),
        residual: 0.0,
        worst: None,
    };
    let n = f.points();
    rep.grid = (0..n).map(|i| rep.eval(f.x(i))).collect();
    for i in 0..n {
        for j in 0..n {
            let v = f.at(i, j);
            if !f.in_domain(v) {
                break;
            }
            let r = (rep.eval(v) - rep.grid[i] - rep.grid[j]).abs();
            if rep.worst.is_none() || r > rep.residual {
                rep.residual = r;
                rep.worst = Some((i, j));
            }
        }
    }
    Ok(rep)
}
