//! Uniformly sampled signals and their CSV form.

use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

/// 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Uniform grid `t0 + k dt`, `k = 0..n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub t0: f64,
    pub dt: f64,
    pub n: usize,
}

impl GridSpec {
    pub fn new(t0: f64, dt: f64, n: usize) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite() && t0.is_finite()) || n == 0 {
            return Err(Error::InvalidArgument(format!("bad grid {t0}:{dt}:{n}")));
        }
        Ok(GridSpec { t0, dt, n })
    }

    /// `n` points spanning `[a, b]`.
    pub fn span(a: f64, b: f64, n: usize) -> Result<Self> {
        if n < 2 || !(b > a) {
            return Err(Error::InvalidArgument(format!("bad span [{a}, {b}] with {n} points")));
        }
        Self::new(a, (b - a) / (n - 1) as f64, n)
    }

    pub fn t(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.dt
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|k| self.t(k)).collect()
    }

    pub fn last(&self) -> f64 {
        self.t(self.n - 1)
    }
}

impl FromStr for GridSpec {
    type Err = Error;

    /// `T0:DT:N`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::InvalidArgument(format!("grid must be T0:DT:N, got {s:?}"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let t0 = parts[0].trim().parse().map_err(|_| bad())?;
        let dt = parts[1].trim().parse().map_err(|_| bad())?;
        let n = parts[2].trim().parse().map_err(|_| bad())?;
        Self::new(t0, dt, n)
    }
}

/// Real or complex samples on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSignal {
    grid: GridSpec,
    re: Vec<f64>,
    im: Option<Vec<f64>>,
    window: (f64, f64),
}

impl GridSignal {
    pub fn real(grid: GridSpec, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n {
            return Err(Error::InvalidArgument(format!(
                "{} values for a grid of {} points",
                values.len(),
                grid.n
            )));
        }
        Ok(GridSignal { window: (grid.t0, grid.last()), grid, re: values, im: None })
    }

    pub fn complex(grid: GridSpec, re: Vec<f64>, im: Vec<f64>) -> Result<Self> {
        if im.len() != re.len() {
            return Err(Error::InvalidArgument("real and imaginary parts differ in length".into()));
        }
        let mut s = Self::real(grid, re)?;
        s.im = Some(im);
        Ok(s)
    }

    pub fn from_fn<F: Fn(f64) -> f64>(grid: GridSpec, f: F) -> Self {
        let values = grid.points().into_iter().map(f).collect();
        Self::real(grid, values).expect("lengths agree")
    }

    pub fn zeros(grid: GridSpec) -> Self {
        Self::real(grid, vec![0.0; grid.n]).expect("lengths agree")
    }

    pub fn with_window(mut self, window: (f64, f64)) -> Self {
        self.window = window;
        self
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn t0(&self) -> f64 {
        self.grid.t0
    }

    pub fn dt(&self) -> f64 {
        self.grid.dt
    }

    pub fn len(&self) -> usize {
        self.re.len()
    }

    pub fn is_empty(&self) -> bool {
        self.re.is_empty()
    }

    pub fn window(&self) -> (f64, f64) {
        self.window
    }

    pub fn times(&self) -> Vec<f64> {
        self.grid.points()
    }

    pub fn values(&self) -> &[f64] {
        &self.re
    }

    pub fn imag(&self) -> Option<&[f64]> {
        self.im.as_deref()
    }

    pub fn is_complex(&self) -> bool {
        self.im.is_some()
    }

    pub fn real_part(&self) -> GridSignal {
        GridSignal { grid: self.grid, re: self.re.clone(), im: None, window: self.window }
    }

    pub fn imag_part(&self) -> Option<GridSignal> {
        self.im.as_ref().map(|im| GridSignal { grid: self.grid, re: im.clone(), im: None, window: self.window })
    }

    /// Extent of the grid itself.
    pub fn support(&self) -> (f64, f64) {
        (self.grid.t0, self.grid.last())
    }

    /// Four-point Lagrange interpolation of the real part.
    pub fn interpolate(&self, t: f64) -> Result<f64> {
        interpolate(&self.grid, &self.re, t)
    }

    pub fn interpolate_imag(&self, t: f64) -> Result<Option<f64>> {
        self.im.as_ref().map(|im| interpolate(&self.grid, im, t)).transpose()
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
        let header: Vec<String> = rdr.headers()?.iter().map(|h| h.to_string()).collect();
        let is_complex = match header.iter().map(String::as_str).collect::<Vec<_>>()[..] {
            ["t", "value"] => false,
            ["t", "re", "im"] => true,
            _ => {
                return Err(Error::Csv(format!(
                    "expected header t,value or t,re,im, got {}",
                    header.join(",")
                )))
            }
        };
        let mut ts = Vec::new();
        let mut re = Vec::new();
        let mut im = Vec::new();
        for (line, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let num = |i: usize| -> Result<f64> {
                rec.get(i)
                    .and_then(|x| x.parse().ok())
                    .ok_or_else(|| Error::Csv(format!("row {}: bad number in column {}", line + 2, i + 1)))
            };
            ts.push(num(0)?);
            re.push(num(1)?);
            if is_complex {
                im.push(num(2)?);
            }
        }
        if ts.is_empty() {
            return Err(Error::Csv("signal has no rows".into()));
        }
        let grid = if ts.len() == 1 {
            GridSpec::new(ts[0], 1.0, 1)?
        } else {
            let dt = (ts[ts.len() - 1] - ts[0]) / (ts.len() - 1) as f64;
            for (k, &t) in ts.iter().enumerate() {
                if (t - (ts[0] + k as f64 * dt)).abs() > 1e-9 * dt.abs().max(t.abs()) {
                    return Err(Error::Csv(format!("row {}: grid is not uniform", k + 2)));
                }
            }
            GridSpec::new(ts[0], dt, ts.len())?
        };
        if is_complex {
            Self::complex(grid, re, im)
        } else {
            Self::real(grid, re)
        }
    }

    pub fn load_csv(path: impl AsRef<Path>) -> Result<Self> {
        Self::read_csv(std::fs::File::open(path)?)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        match &self.im {
            None => {
                w.write_record(["t", "value"])?;
                for (k, v) in self.re.iter().enumerate() {
                    w.write_record([fmt_f64(self.grid.t(k)), fmt_f64(*v)])?;
                }
            }
            Some(im) => {
                w.write_record(["t", "re", "im"])?;
                for (k, (a, b)) in self.re.iter().zip(im).enumerate() {
                    w.write_record([fmt_f64(self.grid.t(k)), fmt_f64(*a), fmt_f64(*b)])?;
                }
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        crate::io::write_atomic(path, |f| self.write_csv(f))
    }
}

fn interpolate(grid: &GridSpec, v: &[f64], t: f64) -> Result<f64> {
    let (a, b) = (grid.t0, grid.last());
    let slack = 1e-12 * (1.0 + a.abs().max(b.abs()));
    if !(t >= a - slack && t <= b + slack) {
        return Err(Error::OutOfWindow { window: (a, b), points: vec![t] });
    }
    let n = v.len();
    if n == 1 {
        return Ok(v[0]);
    }
    let x = ((t - a) / grid.dt).clamp(0.0, (n - 1) as f64);
    let cell = (x.floor() as usize).min(n - 2);
    if n < 4 {
        let u = x - cell as f64;
        return Ok(v[cell] * (1.0 - u) + v[cell + 1] * u);
    }
    let j0 = cell.saturating_sub(1).min(n - 4);
    let u = x - j0 as f64;
    // Lagrange basis on nodes 0, 1, 2, 3
    let l0 = -(u - 1.0) * (u - 2.0) * (u - 3.0) / 6.0;
    let l1 = u * (u - 2.0) * (u - 3.0) / 2.0;
    let l2 = -u * (u - 1.0) * (u - 3.0) / 2.0;
    let l3 = u * (u - 1.0) * (u - 2.0) / 6.0;
    Ok(l0 * v[j0] + l1 * v[j0 + 1] + l2 * v[j0 + 2] + l3 * v[j0 + 3])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parse() {
        let g: GridSpec = "-1:0.5:5".parse().unwrap();
        assert_eq!(g.points(), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        assert!("1:0:3".parse::<GridSpec>().is_err());
        assert!("1:2".parse::<GridSpec>().is_err());
    }

    #[test]
    fn cubic_is_exact_on_cubics() {
        let g = GridSpec::new(-2.0, 0.25, 17).unwrap();
        let f = |t: f64| 2.0 * t * t * t - t + 0.5;
        let s = GridSignal::from_fn(g, f);
        for t in [-2.0, -1.9, -0.33, 0.0, 1.111, 1.99, 2.0] {
            assert!((s.interpolate(t).unwrap() - f(t)).abs() < 1e-12);
        }
        assert!(matches!(s.interpolate(2.1), Err(Error::OutOfWindow { .. })));
    }

    #[test]
    fn csv_round_trip() {
        let g = GridSpec::new(0.1, 0.3, 4).unwrap();
        let s = GridSignal::complex(g, vec![1.0, 2.0, 3.0, 1.0 / 3.0], vec![0.0, -1.0, 1e-300, 5.0]).unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let back = GridSignal::read_csv(&buf[..]).unwrap();
        assert_eq!(back.values(), s.values());
        assert_eq!(back.imag(), s.imag());
        assert!((back.dt() - 0.3).abs() < 1e-15);
    }

    #[test]
    fn csv_rejects_bad_header() {
        assert!(GridSignal::read_csv("x,y\n1,2\n".as_bytes()).is_err());
        assert!(GridSignal::read_csv("t,value\n0,1\n1,2\n3,4\n".as_bytes()).is_err());
    }
}
