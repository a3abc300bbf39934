use rayon::prelude::*;

use super::CoxError;

/// Grid points per axis for step `1/1024` on `[0,1]`.
pub const DEFAULT_POINTS: usize = 1025;

/// A two-argument function sampled on the square grid over `[0, x_max]`.
///
/// Values may exceed `x_max`; they are stored but not interpolated
/// through.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    n: usize,
    x_max: f64,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn from_values(n: usize, x_max: f64, values: Vec<f64>) -> Result<Self, CoxError> {
        if n < 2 || !(x_max > 0.0 && x_max.is_finite()) {
            return Err(CoxError::BadGrid);
        }
        if values.len() != n * n {
            return Err(CoxError::ValueCount {
                expected: n * n,
                found: values.len(),
            });
        }
        let g = Self { n, x_max, values };
        g.check()?;
        Ok(g)
    }

    pub fn sample(n: usize, x_max: f64, f: impl Fn(f64, f64) -> f64) -> Result<Self, CoxError> {
        if n < 2 || !(x_max > 0.0 && x_max.is_finite()) {
            return Err(CoxError::BadGrid);
        }
        let h = x_max / (n - 1) as f64;
        let values = (0..n * n)
            .map(|k| f((k / n) as f64 * h, (k % n) as f64 * h))
            .collect();
        Self::from_values(n, x_max, values)
    }

    /// `sum` = x+y, `sumprod` = x+y+xy, `sumsq` = x+y².
    pub fn builtin(name: &str, n: usize, x_max: f64) -> Result<Self, CoxError> {
        match name {
            "sum" => Self::sample(n, x_max, |x, y| x + y),
            "sumprod" => Self::sample(n, x_max, |x, y| x + y + x * y),
            "sumsq" => Self::sample(n, x_max, |x, y| x + y * y),
            other => Err(CoxError::UnknownBuiltin(other.to_string())),
        }
    }

    fn check(&self) -> Result<(), CoxError> {
        let n = self.n;
        for i in 0..n {
            let x = self.x(i);
            if (self.at(i, 0) - x).abs() > 1e-9 * (1.0 + x.abs()) {
                return Err(CoxError::NoIdentity(i));
            }
        }
        for i in 0..n {
            for j in 0..n {
                let v = self.at(i, j);
                if !v.is_finite() {
                    return Err(CoxError::NotMonotone(i, j));
                }
                if i + 1 < n && self.at(i + 1, j) <= v {
                    return Err(CoxError::NotMonotone(i + 1, j));
                }
                if j + 1 < n && self.at(i, j + 1) <= v {
                    return Err(CoxError::NotMonotone(i, j + 1));
                }
            }
        }
        Ok(())
    }

    pub fn points(&self) -> usize {
        self.n
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn step(&self) -> f64 {
        self.x_max / (self.n - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.step()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    pub(crate) fn in_domain(&self, v: f64) -> bool {
        (0.0..=self.x_max * (1.0 + 1e-12)).contains(&v)
    }

    /// Cell index and fractional offset of `v`, or `None` outside.
    #[inline]
    fn locate(&self, v: f64) -> Option<(usize, f64)> {
        if !self.in_domain(v) {
            return None;
        }
        let t = v * ((self.n - 1) as f64 / self.x_max);
        let i = (t.floor() as usize).min(self.n - 2);
        Some((i, (t - i as f64).clamp(0.0, 1.0)))
    }

    /// Bilinear interpolation; `None` outside the domain.
    pub fn eval(&self, x: f64, y: f64) -> Option<f64> {
        let (i, s) = self.locate(x)?;
        let (j, t) = self.locate(y)?;
        let a = self.at(i, j) * (1.0 - t) + self.at(i, j + 1) * t;
        let b = self.at(i + 1, j) * (1.0 - t) + self.at(i + 1, j + 1) * t;
        Some(a * (1.0 - s) + b * s)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("grid {} {}\n", self.n, self.x_max);
        for row in self.values.chunks(self.n) {
            let r: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            out.push_str(&r.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, CoxError> {
        let mut toks = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or(""))
            .flat_map(str::split_whitespace);
        if toks.next() != Some("grid") {
            return Err(CoxError::Format("expected `grid <n> <x_max>` header".into()));
        }
        let n: usize = toks
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| CoxError::Format("bad point count".into()))?;
        let x_max: f64 = toks
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| CoxError::Format("bad x_max".into()))?;
        let values = toks
            .map(|t| t.parse::<f64>().map_err(|_| CoxError::Format(format!("bad value `{t}`"))))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_values(n, x_max, values)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    pub value: f64,
    /// Grid indices `(i, j, k)` of the worst triple.
    pub worst: Option<(usize, usize, usize)>,
    pub admissible: u64,
    pub skipped: u64,
}

/// `max |f(f(x,y),z) - f(x,f(y,z))|` over grid triples whose intermediate
/// values stay in the domain. Ties keep the lexicographically first
/// triple.
pub fn associativity_residual(f: &GridFunction) -> Result<Residual, CoxError> {
    let n = f.n;
    type Row = (f64, Option<(usize, usize, usize)>, u64, u64);
    let per_row: Vec<Row> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut best = (0.0f64, None, 0u64, 0u64);
            for j in 0..n {
                let Some((vi, vs)) = f.locate(f.at(i, j)) else {
                    best.3 += ((n - j) * n) as u64;
                    break;
                };
                let row_lo = &f.values[vi * n..(vi + 1) * n];
                let row_hi = &f.values[(vi + 1) * n..(vi + 2) * n];
                let row_i = &f.values[i * n..(i + 1) * n];
                for k in 0..n {
                    let Some((wj, wt)) = f.locate(f.at(j, k)) else {
                        best.3 += (n - k) as u64;
                        break;
                    };
                    best.2 += 1;
                    let left = row_lo[k] * (1.0 - vs) + row_hi[k] * vs;
                    let right = row_i[wj] * (1.0 - wt) + row_i[wj + 1] * wt;
                    let r = (left - right).abs();
                    if best.1.is_none() || r > best.0 {
                        best.0 = r;
                        best.1 = Some((i, j, k));
                    }
                }
            }
            best
        })
        .collect();
    let mut out = Residual {
        value: 0.0,
        worst: None,
        admissible: 0,
        skipped: 0,
    };
    for (r, w, a, s) in per_row {
        out.admissible += a;
        out.skipped += s;
        if w.is_some() && (out.worst.is_none() || r > out.value) {
            out.value = r;
            out.worst = w;
        }
    }
    if out.admissible == 0 {
        return Err(CoxError::DomainTooSmall);
    }
    Ok(out)
}

/// A strictly increasing map with `g(0) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub enum MonotoneMap {
    Identity,
    Scale(f64),
    /// `t^p`, `p > 0`.
    Power(f64),
    /// Piecewise linear through `(xs[i], ys[i])`.
    Table { xs: Vec<f64>, ys: Vec<f64> },
}

fn interp(xs: &[f64], ys: &[f64], t: f64) -> Option<f64> {
    if t < xs[0] || t > *xs.last()? {
        return None;
    }
    let k = xs.partition_point(|&x| x <= t).clamp(1, xs.len() - 1);
    let (x0, x1, y0, y1) = (xs[k - 1], xs[k], ys[k - 1], ys[k]);
    Some(y0 + (y1 - y0) * (t - x0) / (x1 - x0))
}

impl MonotoneMap {
    pub fn validate(&self) -> Result<(), CoxError> {
        match self {
            MonotoneMap::Identity => Ok(()),
            MonotoneMap::Scale(c) if *c > 0.0 && c.is_finite() => Ok(()),
            MonotoneMap::Power(p) if *p > 0.0 && p.is_finite() => Ok(()),
            MonotoneMap::Table { xs, ys } => {
                if xs.len() < 2 || xs.len() != ys.len() {
                    return Err(CoxError::NotInvertible("table needs matching columns of length >= 2".into()));
                }
                if xs[0] != 0.0 || ys[0] != 0.0 {
                    return Err(CoxError::NotInvertible("table must start at (0, 0)".into()));
                }
                if xs.windows(2).any(|w| w[1] <= w[0]) || ys.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(CoxError::NotInvertible("table is not strictly increasing".into()));
                }
                Ok(())
            }
            other => Err(CoxError::NotInvertible(format!("{other:?}"))),
        }
    }

    pub fn apply(&self, t: f64) -> Option<f64> {
        match self {
            MonotoneMap::Identity => Some(t),
            MonotoneMap::Scale(c) => Some(c * t),
            MonotoneMap::Power(p) => Some(t.powf(*p)),
            MonotoneMap::Table { xs, ys } => interp(xs, ys, t),
        }
    }

    pub fn inverse(&self, t: f64) -> Option<f64> {
        match self {
            MonotoneMap::Identity => Some(t),
            MonotoneMap::Scale(c) => Some(t / c),
            MonotoneMap::Power(p) => Some(t.powf(1.0 / p)),
            MonotoneMap::Table { xs, ys } => interp(ys, xs, t),
        }
    }
}

/// `f_g(x, y) = g(f(g⁻¹x, g⁻¹y))` on the same grid.
pub fn rescaling_transport(f: &GridFunction, g: &MonotoneMap) -> Result<GridFunction, CoxError> {
    g.validate()?;
    let n = f.n;
    let pre: Vec<f64> = (0..n)
        .map(|i| {
            g.inverse(f.x(i))
                .filter(|&u| f.in_domain(u))
                .ok_or_else(|| CoxError::NotInvertible(format!("g⁻¹({}) leaves the domain", f.x(i))))
        })
        .collect::<Result<_, _>>()?;
    let mut values = Vec::with_capacity(n * n);
    for &u in &pre {
        for &v in &pre {
            let inner = f.eval(u, v).expect("preimages lie in the domain");
            let out = g
                .apply(inner)
                .ok_or_else(|| CoxError::NotInvertible(format!("g undefined at {inner}")))?;
            values.push(out);
        }
    }
    GridFunction::from_values(n, f.x_max, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sum_is_exactly_associative() {
        let f = GridFunction::builtin("sum", 65, 1.0).unwrap();
        let r = associativity_residual(&f).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(r.admissible > 0 && r.skipped > 0);
        assert_eq!(r.admissible + r.skipped, 65u64.pow(3));
    }

    #[test]
    fn sumsq_is_not_associative() {
        let f = GridFunction::builtin("sumsq", 65, 1.0).unwrap();
        let r = associativity_residual(&f).unwrap();
        assert!(r.value > 0.01);
        let (i, j, k) = r.worst.unwrap();
        let (x, y, z) = (f.x(i), f.x(j), f.x(k));
        let exact = ((x + y * y) + z * z - (x + (y + z * z).powi(2))).abs();
        assert!((exact - r.value).abs() < 1e-3);
    }

    #[test]
    fn invariants_enforced() {
        assert_eq!(
            GridFunction::sample(5, 1.0, |x, y| x * y).unwrap_err(),
            CoxError::NoIdentity(1)
        );
        assert!(matches!(
            GridFunction::sample(5, 1.0, |x, y| x + y - y * y * 4.0),
            Err(CoxError::NotMonotone(_, _))
        ));
        assert_eq!(GridFunction::builtin("max", 5, 1.0).unwrap_err(), CoxError::UnknownBuiltin("max".into()));
        assert_eq!(
            GridFunction::sample(2, 1.0, |x, y| x + y + 10.0 * x).unwrap_err(),
            CoxError::NoIdentity(1)
        );
    }

    #[test]
    fn skips_are_counted() {
        // every f(x, y) with y > 0 leaves [0, 1]
        let f = GridFunction::from_values(2, 1.0, vec![0.0, 2.0, 1.0, 3.0]).unwrap();
        let r = associativity_residual(&f).unwrap();
        assert_eq!((r.admissible, r.skipped), (2, 6));
    }

    #[test]
    fn transport_examples() {
        let f = GridFunction::builtin("sum", 65, 1.0).unwrap();
        assert_eq!(rescaling_transport(&f, &MonotoneMap::Identity).unwrap(), f);
        let g = rescaling_transport(&f, &MonotoneMap::Scale(2.0)).unwrap();
        for (a, b) in g.values().iter().zip(f.values()) {
            assert!((a - b).abs() < 1e-15);
        }
        let sq = rescaling_transport(&f, &MonotoneMap::Power(2.0)).unwrap();
        let (x, y) = (sq.x(9), sq.x(30));
        assert!((sq.at(9, 30) - (x.sqrt() + y.sqrt()).powi(2)).abs() < 1e-12);
        assert!(rescaling_transport(&f, &MonotoneMap::Scale(0.5)).is_err());
        assert!(rescaling_transport(&f, &MonotoneMap::Power(-1.0)).is_err());
    }

    #[test]
    fn table_map_inverts() {
        let g = MonotoneMap::Table {
            xs: vec![0.0, 0.5, 1.0],
            ys: vec![0.0, 0.25, 1.0],
        };
        g.validate().unwrap();
        for t in [0.0, 0.1, 0.5, 0.8, 1.0] {
            let y = g.apply(t).unwrap();
            assert!((g.inverse(y).unwrap() - t).abs() < 1e-15);
        }
        assert!(g.apply(1.5).is_none());
    }

    #[test]
    fn text_round_trip() {
        let f = GridFunction::builtin("sumprod", 9, 1.0).unwrap();
        let back = GridFunction::parse(&f.to_text()).unwrap();
        assert_eq!(back, f);
        assert!(GridFunction::parse("grid 2 1\n0 1 1\n").is_err());
    }
}
