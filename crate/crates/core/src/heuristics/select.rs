//! Pair selection for the generic merge step. Positions are 0-based slots
//! of the working list; zero entries are never selected.

use crate::error::{Error, Result};
use crate::exponent::Exponent;

use super::PairRule;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Selection<E> {
    pub i: usize,
    pub j: usize,
    pub gamma: E,
}

fn positive<E: Exponent>(s: &[E]) -> Vec<usize> {
    (0..s.len()).filter(|&k| !s[k].is_zero()).collect()
}

fn min_low_bit<E: Exponent>(s: &[E], pos: &[usize]) -> Option<u32> {
    pos.iter().filter_map(|&k| s[k].low_bit()).min()
}

/// Pair with the most shared binary digits; `γ` is their common part.
pub fn select_greedy_common_one<E: Exponent>(s: &[E]) -> Result<Selection<E>> {
    let pos = positive(s);
    let mut best: Option<(u32, usize, usize)> = None;
    for (a, &i) in pos.iter().enumerate() {
        for &j in &pos[a + 1..] {
            let shared = s[i].common_bits(&s[j]).ones();
            if shared > 0 && best.is_none_or(|(b, _, _)| shared > b) {
                best = Some((shared, i, j));
            }
        }
    }
    let (_, i, j) = best.ok_or_else(|| Error::internal(format!("no two entries of {s:?} share a binary digit")))?;
    Ok(Selection { i, j, gamma: s[i].common_bits(&s[j]) })
}

// Δ(|a − b|), with equal entries ranked above everything else.
fn difference_rank<E: Exponent>(a: &E, b: &E) -> u32 {
    let d = if a >= b { a.clone() - b.clone() } else { b.clone() - a.clone() };
    d.low_bit().unwrap_or(u32::MAX)
}

/// Among entries of least 2-adic valuation, the pair whose difference has
/// the largest valuation; `γ` is the smaller entry.
pub fn select_greedy_power_two<E: Exponent>(s: &[E]) -> Result<Selection<E>> {
    let pos = positive(s);
    let low = min_low_bit(s, &pos).ok_or_else(|| Error::internal("no positive entries"))?;
    let pool: Vec<usize> = pos.into_iter().filter(|&k| s[k].low_bit() == Some(low)).collect();
    let mut best: Option<(u32, usize, usize)> = None;
    for (a, &i) in pool.iter().enumerate() {
        for &j in &pool[a + 1..] {
            let rank = difference_rank(&s[i], &s[j]);
            if best.is_none_or(|(b, _, _)| rank > b) {
                best = Some((rank, i, j));
            }
        }
    }
    let (_, i, j) = best.ok_or_else(|| Error::internal(format!("fewer than two entries of {s:?} reach the least valuation")))?;
    Ok(Selection { i, j, gamma: s[i].clone().min(s[j].clone()) })
}

pub fn select<E: Exponent>(rule: PairRule, s: &[E]) -> Result<Selection<E>> {
    match rule {
        PairRule::CommonOne => select_greedy_common_one(s),
        PairRule::PowerTwo => select_greedy_power_two(s),
    }
}

/// Every pair the rule admits, in lexicographic order.
pub fn candidates<E: Exponent>(rule: PairRule, s: &[E]) -> Vec<Selection<E>> {
    let pos = positive(s);
    let mut out = Vec::new();
    match rule {
        PairRule::CommonOne => {
            for (a, &i) in pos.iter().enumerate() {
                for &j in &pos[a + 1..] {
                    let gamma = s[i].common_bits(&s[j]);
                    if !gamma.is_zero() {
                        out.push(Selection { i, j, gamma });
                    }
                }
            }
        }
        PairRule::PowerTwo => {
            let Some(low) = min_low_bit(s, &pos) else { return out };
            let pool: Vec<usize> = pos.into_iter().filter(|&k| s[k].low_bit() == Some(low)).collect();
            for (a, &i) in pool.iter().enumerate() {
                for &j in &pool[a + 1..] {
                    out.push(Selection { i, j, gamma: s[i].clone().min(s[j].clone()) });
                }
            }
        }
    }
    out
}
