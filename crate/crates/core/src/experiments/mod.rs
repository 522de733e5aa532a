//! Data behind the tables and figures: seed paths into the cage, cage
//! percentages per prime, and the size distribution of the rotation tree.

use std::fmt::Write as _;
use std::io::Write;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bgs::{seed_to_cage, Seed};
use crate::field::{is_prime, phi, Prime};
use crate::graph::{GraphError, GraphIndex};
use crate::lift::{ln_biguint, SizeBound};
use crate::point::Surface;

/// Primes `p > 3` in `lo..=hi`.
pub fn primes_in(lo: u64, hi: u64) -> Vec<Prime> {
    (lo.max(5)..=hi)
        .filter(|&p| is_prime(p as u128))
        .map(|p| Prime::new(p).expect("checked prime"))
        .collect()
}

fn superscript(n: u32) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    n.to_string()
        .chars()
        .map(|c| DIGITS[c.to_digit(10).expect("decimal") as usize])
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableRow {
    pub p: u64,
    pub seed: Option<Seed>,
}

impl TableRow {
    /// `rot₁ⁿ : (1,1,1),(1,1,2),...`, or `none` when no `n <= 5` works.
    pub fn path_text(&self) -> String {
        let Some(seed) = &self.seed else {
            return "none".to_string();
        };
        let mut s = format!("rot₁{} : ", superscript(seed.n));
        for (k, x) in seed.points.iter().enumerate() {
            if k > 0 {
                s.push(',');
            }
            let _ = write!(s, "({x})");
        }
        s
    }

    pub fn line(&self) -> String {
        format!("{}\t{}", self.p, self.path_text())
    }
}

pub fn table111(primes: &[Prime]) -> Vec<TableRow> {
    primes
        .par_iter()
        .map(|&prime| TableRow {
            p: prime.get(),
            seed: seed_to_cage(&Surface::new(prime)),
        })
        .collect()
}

pub const CAGE_CSV_HEADER: &str =
    "p,vertices,cage_count,parabolic_order_p_count,percentage,heuristic";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CageStats {
    pub p: u64,
    pub vertices: usize,
    pub cage_count: usize,
    /// Points outside the cage with a coordinate `2/3` (order `p`).
    pub parabolic_order_p_count: usize,
    /// `100 (cage + parabolic order p) / |X*(p)|`.
    pub percentage: f64,
    pub heuristic: f64,
}

/// `1/p + phi(p-1)/(p-1) + phi(p^2-1)/((p-1)(p^2-1))`.
pub fn cage_heuristic(p: u64) -> f64 {
    let pf = p as f64;
    let q = p as u128;
    let phi1 = phi(q - 1).expect("p > 1") as f64;
    let phi2 = phi(q * q - 1).expect("p > 1") as f64;
    1.0 / pf + phi1 / (pf - 1.0) + phi2 / ((pf - 1.0) * (pf * pf - 1.0))
}

pub fn cage_stats(prime: Prime, enum_cap: u64) -> Result<CageStats, GraphError> {
    let g = GraphIndex::build(prime, enum_cap)?;
    let surface = Surface::new(prime);
    let table = surface.class_table();
    let tt = surface.two_thirds().value();
    let (mut cage, mut para) = (0, 0);
    for id in 0..g.len() as u32 {
        let c = g.coords(id);
        if c.iter()
            .any(|&v| surface.is_maximal_order(table[v as usize].order))
        {
            cage += 1;
        } else if c.contains(&tt) {
            para += 1;
        }
    }
    Ok(CageStats {
        p: prime.get(),
        vertices: g.len(),
        cage_count: cage,
        parabolic_order_p_count: para,
        percentage: 100.0 * (cage + para) as f64 / g.len() as f64,
        heuristic: cage_heuristic(prime.get()),
    })
}

pub fn cage_stats_range(primes: &[Prime], enum_cap: u64) -> Result<Vec<CageStats>, GraphError> {
    primes
        .par_iter()
        .map(|&p| cage_stats(p, enum_cap))
        .collect()
}

pub fn write_cage_csv<W: Write>(rows: &[CageStats], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Vieta involution on slot `k`: `x_k -> 3 x_i x_j - x_k`.
fn vieta_big(c: &[BigUint; 3], k: usize) -> [BigUint; 3] {
    let mut out = c.clone();
    out[k] = BigUint::from(3u32) * &c[(k + 1) % 3] * &c[(k + 2) % 3] - &c[k];
    out
}

fn collect_level(c: [BigUint; 3], last: usize, remaining: u32, out: &mut Vec<f64>) {
    if remaining == 0 {
        out.push(c.iter().map(ln_biguint).fold(f64::NEG_INFINITY, f64::max));
        return;
    }
    for k in (0..3).filter(|&k| k != last) {
        collect_level(vieta_big(&c, k), k, remaining - 1, out);
    }
}

/// `ln size` of every node at depth `level` of the Markoff tree from
/// `(1,1,1)`. Each `rot_i` is a Vieta involution followed by a swap, and
/// size ignores coordinate order, so the tree is walked by involutions with
/// no involution repeated back to back: `3 * 2^(level-1)` nodes, none of
/// which steps back to its grandparent.
pub fn level_log_sizes(level: u32) -> Vec<f64> {
    let root = [1u32, 1, 1].map(BigUint::from);
    if level == 0 {
        return vec![0.0];
    }
    let mut parts: Vec<Vec<f64>> = (0..3usize)
        .into_par_iter()
        .map(|k| {
            let mut out = Vec::new();
            collect_level(vieta_big(&root, k), k, level - 1, &mut out);
            out
        })
        .collect();
    let mut all = Vec::with_capacity(3 << (level - 1));
    for p in parts.iter_mut() {
        all.append(p);
    }
    all
}

/// Growth bound for a tree node at depth `level`: `level` blocks of length one.
pub fn level_bound(level: u32) -> SizeBound {
    SizeBound {
        ln_exponent: (2 * level - 1) as f64 * std::f64::consts::LN_2,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub bin: usize,
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

/// Equal-width bins over `[min, max]`; the top edge belongs to the last bin.
pub fn histogram(values: &[f64], bins: usize) -> Vec<HistogramBin> {
    assert!(bins > 0 && !values.is_empty());
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let width = if hi > lo {
        (hi - lo) / bins as f64
    } else {
        1.0
    };
    let mut counts = vec![0usize; bins];
    for &v in values {
        let k = (((v - lo) / width) as usize).min(bins - 1);
        counts[k] += 1;
    }
    counts
        .into_iter()
        .enumerate()
        .map(|(k, count)| HistogramBin {
            bin: k,
            lo: lo + k as f64 * width,
            hi: lo + (k + 1) as f64 * width,
            count,
        })
        .collect()
}

pub fn write_histogram_csv<W: Write>(bins: &[HistogramBin], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for b in bins {
        w.serialize(b)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_rows() {
        let rows = table111(&primes_in(47, 59));
        let line = |p| rows.iter().find(|r| r.p == p).unwrap().path_text();
        assert_eq!(line(47), "rot₁³ : (1,1,1),(1,1,2),(1,2,5),(1,5,13)");
        assert!(line(59).starts_with("rot₁⁵ : "));
        assert!(line(59).ends_with(",(1,34,30)"));
        assert_eq!(
            rows[0].line(),
            "47\trot₁³ : (1,1,1),(1,1,2),(1,2,5),(1,5,13)"
        );
    }

    #[test]
    fn primes_skip_two_and_three() {
        let ps: Vec<u64> = primes_in(2, 13).iter().map(|p| p.get()).collect();
        assert_eq!(ps, vec![5, 7, 11, 13]);
    }

    #[test]
    fn heuristic_at_31() {
        let expected = 1.0 / 31.0 + 8.0 / 30.0 + 256.0 / 28800.0;
        assert!((cage_heuristic(31) - expected).abs() < 1e-12);
        assert!((cage_heuristic(31) - 0.3078).abs() < 1e-4);
    }

    #[test]
    fn cage_stats_sane_and_round_trip() {
        let rows = cage_stats_range(&primes_in(5, 60), 3000).unwrap();
        for r in &rows {
            assert!(r.cage_count + r.parabolic_order_p_count <= r.vertices);
            assert!(r.percentage <= 100.0 && r.percentage > 0.0);
            if r.p % 4 == 3 {
                assert_eq!(r.parabolic_order_p_count, 0);
            }
        }
        let mut buf = Vec::new();
        write_cage_csv(&rows, &mut buf).unwrap();
        assert!(buf.starts_with(format!("{CAGE_CSV_HEADER}\n").as_bytes()));
        let back: Vec<CageStats> = csv::Reader::from_reader(buf.as_slice())
            .deserialize()
            .collect::<Result<_, _>>()
            .unwrap();
        assert_eq!(back, rows);
    }

    /// Cage count by brute force over the class of each coordinate.
    #[test]
    fn cage_count_matches_mask() {
        let prime = Prime::new(31).unwrap();
        let g = GraphIndex::build(prime, 100).unwrap();
        let s = Surface::new(prime);
        let by_point = g.points().filter(|x| x.is_maximal(&s)).count();
        assert_eq!(cage_stats(prime, 100).unwrap().cage_count, by_point);
        assert_eq!(g.cage_mask(&s).iter().filter(|&&b| b).count(), by_point);
    }

    #[test]
    fn level_sizes() {
        assert_eq!(level_log_sizes(1), vec![2f64.ln(); 3]);
        for level in 1..=10 {
            assert_eq!(level_log_sizes(level).len(), 3 << (level - 1));
        }
        let l2 = level_log_sizes(2);
        let mut sizes: Vec<u64> = l2.iter().map(|v| v.exp().round() as u64).collect();
        sizes.sort();
        assert_eq!(sizes, vec![5, 5, 5, 5, 5, 5]);
    }

    #[test]
    fn level_bound_dominates() {
        for level in 1..=12 {
            let b = level_bound(level);
            let max = level_log_sizes(level).into_iter().fold(0.0, f64::max);
            assert_eq!(b.dominates(max), crate::lift::Dominance::Holds);
        }
    }

    #[test]
    fn histogram_counts() {
        let h = histogram(&[0.0, 0.5, 1.0, 1.0, 2.0], 2);
        assert_eq!(h.iter().map(|b| b.count).collect::<Vec<_>>(), vec![2, 3]);
        assert_eq!(h.iter().map(|b| b.count).sum::<usize>(), 5);
        let mut buf = Vec::new();
        write_histogram_csv(&h, &mut buf).unwrap();
        assert!(String::from_utf8(buf)
            .unwrap()
            .starts_with("bin,lo,hi,count\n"));
    }

    fn normalize(line: &str) -> String {
        line.split_whitespace().collect::<Vec<_>>().join(" ")
    }

    fn golden_rows() -> Vec<(u64, String)> {
        include_str!("../../tests/golden/table111.txt")
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| {
                let (p, rest) = l.split_once('\t').expect("p<TAB>path");
                (p.parse().unwrap(), normalize(rest))
            })
            .collect()
    }

    #[test]
    fn golden_covers_every_prime_from_5_to_199() {
        let ps: Vec<u64> = golden_rows().iter().map(|r| r.0).collect();
        let expected: Vec<u64> = primes_in(5, 199).iter().map(|p| p.get()).collect();
        assert_eq!(ps, expected);
    }

    #[test]
    fn table_matches_golden_below_199() {
        let rows = table111(&primes_in(5, 197));
        for (row, (p, text)) in rows.iter().zip(&golden_rows()) {
            assert_eq!(row.p, *p);
            assert_eq!(normalize(&row.path_text()), *text, "p = {p}");
        }
    }

    /// The golden row for 199 stops at (1,1,2), but 1 has order 11 and 2 has
    /// order 9 mod 199, so (1,1,2) is not maximal; 5 is elliptic of order 200.
    #[test]
    fn row_199_is_two_steps() {
        let row = &table111(&primes_in(199, 199))[0];
        assert_eq!(row.path_text(), "rot₁² : (1,1,1),(1,1,2),(1,2,5)");
        assert_ne!(normalize(&row.path_text()), golden_rows().last().unwrap().1);
        let s = Surface::new(row_prime(199));
        assert_eq!(s.classify(1).order, 11);
        assert_eq!(s.classify(2).order, 9);
        assert_eq!(s.classify(5).order, 200);
    }

    fn row_prime(p: u64) -> Prime {
        Prime::new(p).unwrap()
    }
}
