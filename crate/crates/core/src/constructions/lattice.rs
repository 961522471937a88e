//! The two general methods: `nm`-fold and `2nm`-fold colourings of `G[1,b]`
//! from shifted copies of the side-1/2 hexagon grid.

use super::ceil_tol;
use super::colouring::{lcm, ColourMap, ColouringError, Interval, Layer, PeriodicColouring, Provenance};
use crate::geometry::{HexGrid, Point};

const SQRT3: f64 = 1.732_050_807_568_877_2;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn check_counts(n: u32, m: u32) -> Result<(), ColouringError> {
    if n == 0 || m == 0 {
        return Err(ColouringError::Parameter(format!("n and m must be positive (n={n}, m={m})")));
    }
    Ok(())
}

/// Column and row colour periods `(ceil((2b/sqrt3 + 1) n), ceil((2b/sqrt3 + 1) m))`.
pub fn nm_periods(b: f64, n: u32, m: u32) -> (u64, u64) {
    let f = 2.0 * b / SQRT3 + 1.0;
    (ceil_tol(f * n as f64), ceil_tol(f * m as f64))
}

pub fn nm_colour_count(b: f64, n: u32, m: u32) -> u64 {
    let (kn, km) = nm_periods(b, n, m);
    kn * km
}

/// `nm`-fold colouring of `G[a,b]` with `nm_colour_count(b/a, n, m)` colours.
///
/// Layer `(i, j)` is the side-1/2 grid moved by `j/n` of a cell step to the
/// right and `i/m` of a cell step down-right. Together the layers' centres
/// form the lattice spanned by `e/n` and `d/m` (`e` = right step, `d` =
/// down-right step); the centre `alpha e/n + beta d/m` gets colour
/// `(beta mod km, alpha mod kn)`.
pub fn construct_nm(interval: Interval, n: u32, m: u32) -> Result<PeriodicColouring, ColouringError> {
    let (kn, km) = nm_periods(interval.ratio(), n, m);
    construct_nm_with_periods(interval, n, m, kn, km)
}

/// [`construct_nm`] with explicit column period `kn` and row period `km`.
pub fn construct_nm_with_periods(
    interval: Interval,
    n: u32,
    m: u32,
    kn: u64,
    km: u64,
) -> Result<PeriodicColouring, ColouringError> {
    check_counts(n, m)?;
    if kn == 0 || km == 0 {
        return Err(ColouringError::Parameter("colour periods must be positive".into()));
    }
    let k = u32::try_from(kn * km).map_err(|_| ColouringError::Parameter("too many colours".into()))?;
    let (n64, m64) = (n as u64, m as u64);
    let col_cycle = kn / gcd(n64, kn);
    let row_cycle = km / gcd(m64, km);
    let pq = u32::try_from(col_cycle).map_err(|_| ColouringError::Parameter("period overflow".into()))?;
    let pr = u32::try_from(lcm(col_cycle, row_cycle))
        .map_err(|_| ColouringError::Parameter("period overflow".into()))?;

    let base = HexGrid::new(0.5, Point::ORIGIN)?;
    let right = base.q_step();
    let down_right = base.q_step() - base.r_step();
    let (kn_i, km_i) = (kn as i64, km as i64);
    let mut layers = Vec::with_capacity((n * m) as usize);
    for i in 0..m as i64 {
        for j in 0..n as i64 {
            let offset = right * (j as f64 / n as f64) + down_right * (i as f64 / m as f64);
            let (n_i, m_i) = (n as i64, m as i64);
            let map = ColourMap::from_fn(pq, pr, |q, r| {
                let alpha = j + n_i * (q + r);
                let beta = i - m_i * r;
                (beta.rem_euclid(km_i) * kn_i + alpha.rem_euclid(kn_i)) as u32
            });
            layers.push(Layer::new(base.translated(offset), map));
        }
    }
    let prov = Provenance::new("nm")
        .with("b", interval.ratio())
        .with("n", n)
        .with("m", m)
        .with("column_period", kn)
        .with("row_period", km);
    let unit = PeriodicColouring::new(Interval::unit(interval.ratio())?, k, layers, prov)?;
    rescale(unit, interval)
}

/// Column and row periods `(ceil(2n (b+1)), ceil(2m (b+1) / 3))` of the
/// `2nm` method.
pub fn two_nm_periods(b: f64, n: u32, m: u32) -> (u64, u64) {
    (ceil_tol((b + 1.0) * 2.0 * n as f64), ceil_tol((b + 1.0) * 2.0 * m as f64 / 3.0))
}

pub fn two_nm_colour_count(b: f64, n: u32, m: u32) -> u64 {
    let (c, r) = two_nm_periods(b, n, m);
    2 * c * r
}

/// `2nm`-fold colouring of `G[a,b]` with `two_nm_colour_count(b/a, n, m)`
/// colours.
///
/// Grids `W(i, j)` are the side-1/2 grid moved by `j/n` of a cell width to
/// the right and `i/m` of a 3/2 vertical column step down; same-coloured
/// `W` cells form a rectangular lattice of `cols` fine steps by `rows` fine
/// steps. Grids `V(i, j)` repeat `W(i, j)` moved by half a rectangle
/// diagonally, filling the rectangle centres.
///
/// When `n` and `m` are both even two `W` grids coincide and the fold
/// collapses, so that case is rejected.
pub fn construct_2nm(interval: Interval, n: u32, m: u32) -> Result<PeriodicColouring, ColouringError> {
    check_counts(n, m)?;
    if n.is_multiple_of(2) && m.is_multiple_of(2) {
        return Err(ColouringError::Parameter(format!(
            "2nm method needs n or m odd (n={n}, m={m}): otherwise two layers coincide"
        )));
    }
    let (cols, rows) = two_nm_periods(interval.ratio(), n, m);
    let k = u32::try_from(2 * cols * rows).map_err(|_| ColouringError::Parameter("too many colours".into()))?;
    let (n64, m64) = (n as u64, m as u64);
    let col_cycle = cols / gcd(n64, cols);
    let row_cycle = rows / gcd(m64, rows);
    let pq = u32::try_from(col_cycle).map_err(|_| ColouringError::Parameter("period overflow".into()))?;
    let pr = u32::try_from(2 * lcm(col_cycle, row_cycle))
        .map_err(|_| ColouringError::Parameter("period overflow".into()))?;

    let base = HexGrid::new(0.5, Point::ORIGIN)?;
    let dx = SQRT3 / (2.0 * n as f64);
    let dy = 1.5 / m as f64;
    let half = Point::new(cols as f64 * dx / 2.0, rows as f64 * dy / 2.0);
    let (cols_i, rows_i, n_i, m_i) = (cols as i64, rows as i64, n as i64, m as i64);

    let mut w_layers = Vec::with_capacity((n * m) as usize);
    for i in 0..m_i {
        for j in 0..n_i {
            // Centre of cell (q, r) in fine units: (j + n q + n r/2, -i + m r/2).
            // Odd rows sit on the half-shifted coset; t selects it.
            let map = ColourMap::from_fn(pq, pr, |q, r| {
                let t = r.rem_euclid(2);
                let half_r = (r - t) / 2;
                let x = j + n_i * q + n_i * half_r;
                let y = -i + m_i * half_r;
                (t * cols_i * rows_i + x.rem_euclid(cols_i) + cols_i * y.rem_euclid(rows_i)) as u32
            });
            let offset = Point::new(j as f64 * dx, -(i as f64) * dy);
            w_layers.push(Layer::new(base.translated(offset), map));
        }
    }
    let v_layers: Vec<Layer> = w_layers
        .iter()
        .map(|l| Layer::new(l.grid.translated(half), l.colours.clone()))
        .collect();
    let mut layers = w_layers;
    layers.extend(v_layers);
    let prov = Provenance::new("2nm")
        .with("b", interval.ratio())
        .with("n", n)
        .with("m", m)
        .with("column_period", cols)
        .with("row_period", rows);
    let unit = PeriodicColouring::new(Interval::unit(interval.ratio())?, k, layers, prov)?;
    rescale(unit, interval)
}

pub(super) fn rescale(unit: PeriodicColouring, interval: Interval) -> Result<PeriodicColouring, ColouringError> {
    if interval.a() == 1.0 {
        Ok(unit)
    } else {
        unit.scaled(interval.a())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::HexCell;

    #[test]
    fn nm_counts_match_tables() {
        assert_eq!(nm_colour_count(1.0, 1, 2), 15);
        assert_eq!(nm_colour_count(1.0, 2, 3), 35);
        assert_eq!(nm_colour_count(2.0, 3, 3), 100);
        assert_eq!(nm_colour_count(2.0, 3, 28), 930);
        assert_eq!(nm_colour_count(2.0, 3, 29), 960);
        assert_eq!(nm_colour_count(2.0, 1, 1), 16);
    }

    #[test]
    fn two_nm_counts_match_tables() {
        assert_eq!(two_nm_colour_count(1.0, 1, 1), 16);
        assert_eq!(two_nm_colour_count(1.0, 1, 2), 24);
        assert_eq!(two_nm_colour_count(1.0, 1, 3), 32);
    }

    #[test]
    fn constructed_sizes() {
        let iv = Interval::unit(1.0).unwrap();
        let c = construct_nm(iv, 2, 3).unwrap();
        assert_eq!((c.j(), c.k()), (6, 35));
        let c = construct_2nm(iv, 1, 2).unwrap();
        assert_eq!((c.j(), c.k()), (4, 24));
        assert!(construct_2nm(iv, 2, 2).is_err());
        assert!(construct_nm(iv, 0, 2).is_err());
    }

    #[test]
    fn equilateral_witnesses() {
        // n = m: the same-colour lattice is spanned by two vectors of equal
        // length at 60 degrees
        for n in 1..=4u32 {
            let c = construct_nm(Interval::unit(1.0).unwrap(), n, n).unwrap();
            let g0 = c.layers()[0].grid;
            let colour = c.cell_colours(0, HexCell::new(0, 0))[0];
            let (kn, km) = nm_periods(1.0, n, n);
            let h = g0.center(HexCell::new(0, 0));
            let right = g0.q_step() * (kn as f64 / n as f64);
            let down = (g0.q_step() - g0.r_step()) * (km as f64 / n as f64);
            let min = 1.0 + SQRT3 / 2.0;
            let (h1, h2) = (h + right, h + down);
            assert!(h.dist(h1) >= min && h.dist(h2) >= min && h1.dist(h2) >= min);
            for p in [h1, h2] {
                assert!(c.colours_at(p).contains(colour));
            }
        }
    }

    #[test]
    fn scaling_keeps_counts() {
        let c = construct_nm(Interval::new(2.0, 4.0).unwrap(), 3, 3).unwrap();
        assert_eq!((c.j(), c.k()), (9, 100));
        assert!((c.side() - 1.0).abs() < 1e-15);
        assert_eq!(c.interval().b(), 4.0);
    }
}
