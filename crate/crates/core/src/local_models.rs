//! Ruled surfaces over P¹ and their modifications over marked points.
//!
//! Over each modified point `P'` of weight `m'` the fiber of `X_e` is replaced
//! by a chain of rational curves. Chains are always listed from the `C_0`
//! side (the strict transform of the original fiber) to the `C_1` side.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainComponent {
    pub self_int: i64,
    pub fiber_mult: i64,
}

/// Where the strict transform of the branch curve meets the modified fiber.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StrictMeet {
    /// Transversally through `C_1` (weight 1, nothing blown up).
    C1,
    /// Through the chain component with this index.
    Component(usize),
    None,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainDescriptor {
    pub components: Vec<ChainComponent>,
    pub blow_ups: usize,
    pub s_meets: StrictMeet,
}

impl ChainDescriptor {
    fn from_pairs(pairs: &[(i64, i64)], s_meets: StrictMeet) -> Self {
        let components: Vec<_> = pairs
            .iter()
            .map(|&(self_int, fiber_mult)| ChainComponent {
                self_int,
                fiber_mult,
            })
            .collect();
        let blow_ups = components.len() - 1;
        ChainDescriptor {
            components,
            blow_ups,
            s_meets,
        }
    }

    /// `Σ_d mult(d)·(c·d)` for each component `c`; all zero for a genuine fiber.
    pub fn balance_residuals(&self) -> Vec<i64> {
        let n = self.components.len();
        (0..n)
            .map(|c| {
                let mut acc = self.components[c].fiber_mult * self.components[c].self_int;
                if c > 0 {
                    acc += self.components[c - 1].fiber_mult;
                }
                if c + 1 < n {
                    acc += self.components[c + 1].fiber_mult;
                }
                acc
            })
            .collect()
    }

    pub fn is_balanced(&self) -> bool {
        self.balance_residuals().iter().all(|&r| r == 0)
    }

    pub fn pairs(&self) -> Vec<(i64, i64)> {
        self.components
            .iter()
            .map(|c| (c.self_int, c.fiber_mult))
            .collect()
    }
}

fn check_weight(m: i64) -> Result<()> {
    if m < 1 {
        Err(Error::Precondition(format!(
            "weight m' must be positive, got {m}"
        )))
    } else {
        Ok(())
    }
}

pub fn blow_up_count(m: i64) -> Result<usize> {
    check_weight(m)?;
    Ok(match m {
        1 => 0,
        m if m % 2 == 0 => (m / 2) as usize,
        m => ((m + 3) / 2) as usize,
    })
}

/// Fiber chain over a point of weight `m'`, read off the closed-form tables.
pub fn fiber_chain(m: i64) -> Result<ChainDescriptor> {
    check_weight(m)?;
    if m == 1 {
        return Ok(ChainDescriptor::from_pairs(&[(0, 1)], StrictMeet::C1));
    }
    let l = (m / 2) as usize;
    let mut pairs = vec![(-1, 1)];
    pairs.extend(std::iter::repeat_n((-2, 1), l - 1));
    if m % 2 == 0 {
        pairs.push((-1, 1));
        let last = pairs.len() - 1;
        Ok(ChainDescriptor::from_pairs(
            &pairs,
            StrictMeet::Component(last),
        ))
    } else {
        pairs.extend([(-3, 1), (-1, 2), (-2, 1)]);
        let double = pairs.len() - 2;
        Ok(ChainDescriptor::from_pairs(
            &pairs,
            StrictMeet::Component(double),
        ))
    }
}

/// Resolves `{x² = y^{m'}} ∪ {x = 0}` by explicit point blow-ups.
///
/// `{x = 0}` is the section `C_1` and `{y = 0}` the fiber through the point.
/// The fiber is tracked for its multiplicities in `π*(P')` but is not part of
/// the divisor that has to become normal crossing. The state is the local
/// equation `x^a = y^b` at the current centre together with the two curves
/// `{x=0}`, `{y=0}` through it.
pub fn local_blowup_oracle(m: i64) -> Result<ChainDescriptor> {
    check_weight(m)?;

    #[derive(Clone, Copy, PartialEq)]
    enum Curve {
        C1,
        Fiber(usize),
    }
    struct FiberCurve {
        self_int: i64,
        mult: i64,
    }
    // index 0 is the strict transform of the original fiber.
    let mut fibers = vec![FiberCurve {
        self_int: 0,
        mult: 1,
    }];
    let mut meets: Vec<(Curve, Curve)> = vec![(Curve::C1, Curve::Fiber(0))];
    let mult_of = |c: Curve, f: &[FiberCurve]| match c {
        Curve::C1 => 0,
        Curve::Fiber(i) => f[i].mult,
    };

    let (mut a, mut b) = (2i64, m);
    let (mut cx, mut cy) = (Curve::C1, Curve::Fiber(0));
    let mut last_new: Option<usize> = None;
    loop {
        // The original fiber is not part of the divisor: a smooth branch
        // transverse to {x=0} needs no further blow-up.
        if cy == Curve::Fiber(0) && b == 1 {
            break;
        }
        let new = fibers.len();
        fibers.push(FiberCurve {
            self_int: -1,
            mult: mult_of(cx, &fibers) + mult_of(cy, &fibers),
        });
        for c in [cx, cy] {
            if let Curve::Fiber(i) = c {
                fibers[i].self_int -= 1;
            }
        }
        meets.retain(|&(p, q)| !((p == cx && q == cy) || (p == cy && q == cx)));
        meets.push((cx, Curve::Fiber(new)));
        meets.push((cy, Curve::Fiber(new)));
        last_new = Some(new);
        if a == b {
            break;
        }
        if a < b {
            b -= a;
            cy = Curve::Fiber(new);
        } else {
            a -= b;
            cx = Curve::Fiber(new);
        }
    }

    // Walk the fiber chain from the original fiber to the curve meeting C1.
    let fiber_nbrs = |i: usize| -> Vec<usize> {
        meets
            .iter()
            .filter_map(|&(p, q)| match (p, q) {
                (Curve::Fiber(x), Curve::Fiber(y)) if x == i => Some(y),
                (Curve::Fiber(x), Curve::Fiber(y)) if y == i => Some(x),
                _ => None,
            })
            .collect()
    };
    let mut path = vec![0usize];
    let mut prev: Option<usize> = None;
    loop {
        let cur = *path.last().unwrap();
        let next: Vec<usize> = fiber_nbrs(cur)
            .into_iter()
            .filter(|&n| Some(n) != prev)
            .collect();
        match next.as_slice() {
            [] => break,
            [n] => {
                prev = Some(cur);
                path.push(*n);
            }
            _ => {
                return Err(Error::Consistency(format!(
                    "fiber over weight {m} is not a chain"
                )))
            }
        }
    }
    if path.len() != fibers.len() {
        return Err(Error::Consistency(format!(
            "fiber over weight {m} is disconnected"
        )));
    }
    let components = path
        .iter()
        .map(|&i| ChainComponent {
            self_int: fibers[i].self_int,
            fiber_mult: fibers[i].mult,
        })
        .collect::<Vec<_>>();
    let s_meets = match last_new {
        None => StrictMeet::C1,
        Some(i) => StrictMeet::Component(path.iter().position(|&p| p == i).unwrap()),
    };
    Ok(ChainDescriptor {
        blow_ups: fibers.len() - 1,
        components,
        s_meets,
    })
}

/// Self-intersection of `C_1^m` after modifying `X_e` over points of the given weights.
pub fn c1m_self_int(e: i64, weights: &[i64]) -> Result<i64> {
    for &m in weights {
        check_weight(m)?;
    }
    let total: i64 = weights.iter().sum();
    if 2 * e != total {
        return Err(Error::Precondition(format!(
            "weights sum to {total}, expected 2e = {}",
            2 * e
        )));
    }
    let drop: i64 = weights
        .iter()
        .map(|&m| match m {
            1 => 0,
            m if m % 2 == 0 => m / 2,
            m => (m + 1) / 2,
        })
        .sum();
    Ok(e - drop)
}

pub fn picard_rank(weights: &[i64]) -> Result<usize> {
    let mut r = 2;
    for &m in weights {
        r += blow_up_count(m)?;
    }
    Ok(r)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModifiedPoint {
    pub label: String,
    pub weight: i64,
    pub chain: ChainDescriptor,
}

/// `X_e` blown up over the modified points; marked points only label fibers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModifiedRuledSurface {
    pub e: i64,
    pub marked_points: Vec<String>,
    pub modified_points: Vec<ModifiedPoint>,
    pub c0m_self_int: i64,
    pub c1m_self_int: i64,
    pub picard_rank: usize,
}

impl ModifiedRuledSurface {
    pub fn new(e: i64, marked: Vec<String>, modified: Vec<(String, i64)>) -> Result<Self> {
        let weights: Vec<i64> = modified.iter().map(|(_, m)| *m).collect();
        let c1m = c1m_self_int(e, &weights)?;
        let rank = picard_rank(&weights)?;
        let modified_points = modified
            .into_iter()
            .map(|(label, weight)| {
                Ok(ModifiedPoint {
                    label,
                    weight,
                    chain: fiber_chain(weight)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ModifiedRuledSurface {
            e,
            marked_points: marked,
            modified_points,
            c0m_self_int: -e,
            c1m_self_int: c1m,
            picard_rank: rank,
        })
    }

    pub fn weights(&self) -> Vec<i64> {
        self.modified_points.iter().map(|p| p.weight).collect()
    }

    pub fn odd_weight_count(&self) -> usize {
        self.modified_points
            .iter()
            .filter(|p| p.weight % 2 != 0)
            .count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscModification {
    pub label: String,
    pub count: usize,
    /// Compact curves, from the one next to the non-compact fiber to the one
    /// meeting the zero section.
    pub chain: Vec<i64>,
}

/// Non-compact modified disc bundle over one exceptional curve.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscBundleModel {
    pub zero_section_self_int: i64,
    pub modifications: Vec<DiscModification>,
}

impl DiscBundleModel {
    /// `counts` pairs an older neighbor label with the number of blow-ups at it.
    pub fn new(zero_section_self_int: i64, counts: Vec<(String, usize)>) -> Self {
        let modifications = counts
            .into_iter()
            .map(|(label, count)| {
                let mut chain = vec![-2; count.saturating_sub(1)];
                if count > 0 {
                    chain.push(-1);
                }
                DiscModification {
                    label,
                    count,
                    chain,
                }
            })
            .collect();
        DiscBundleModel {
            zero_section_self_int,
            modifications,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blow_up_counts() {
        assert_eq!(blow_up_count(1).unwrap(), 0);
        assert_eq!(blow_up_count(6).unwrap(), 3);
        assert_eq!(blow_up_count(3).unwrap(), 3);
        assert!(blow_up_count(0).is_err());
    }

    #[test]
    fn chain_tables() {
        assert_eq!(fiber_chain(2).unwrap().pairs(), vec![(-1, 1), (-1, 1)]);
        assert_eq!(
            fiber_chain(3).unwrap().pairs(),
            vec![(-1, 1), (-3, 1), (-1, 2), (-2, 1)]
        );
        assert_eq!(fiber_chain(1).unwrap().pairs(), vec![(0, 1)]);
        assert_eq!(fiber_chain(1).unwrap().s_meets, StrictMeet::C1);
        assert_eq!(fiber_chain(3).unwrap().s_meets, StrictMeet::Component(2));
        assert_eq!(fiber_chain(4).unwrap().s_meets, StrictMeet::Component(2));
    }

    #[test]
    fn oracle_hand_cases() {
        assert_eq!(local_blowup_oracle(1).unwrap().pairs(), vec![(0, 1)]);
        assert_eq!(
            local_blowup_oracle(4).unwrap().pairs(),
            vec![(-1, 1), (-2, 1), (-1, 1)]
        );
        assert_eq!(
            local_blowup_oracle(5).unwrap().pairs(),
            vec![(-1, 1), (-2, 1), (-3, 1), (-1, 2), (-2, 1)]
        );
    }

    #[test]
    fn oracle_matches_tables() {
        for m in 1..=50 {
            assert_eq!(
                local_blowup_oracle(m).unwrap(),
                fiber_chain(m).unwrap(),
                "m' = {m}"
            );
        }
    }

    #[test]
    fn chains_are_balanced() {
        for m in 1..=50 {
            let c = fiber_chain(m).unwrap();
            assert!(c.is_balanced(), "m' = {m}");
            assert_eq!(c.blow_ups, blow_up_count(m).unwrap());
            assert_eq!(c.components.len(), c.blow_ups + 1);
        }
        let bad = ChainDescriptor::from_pairs(&[(-2, 1), (-1, 1)], StrictMeet::None);
        assert!(!bad.is_balanced());
    }

    #[test]
    fn formula_values() {
        assert_eq!(c1m_self_int(2, &[3, 1]).unwrap(), 0);
        assert_eq!(c1m_self_int(0, &[]).unwrap(), 0);
        assert_eq!(c1m_self_int(3, &[6]).unwrap(), 0);
        assert!(c1m_self_int(2, &[3]).is_err());
        assert_eq!(picard_rank(&[3, 1]).unwrap(), 5);
        assert_eq!(picard_rank(&[]).unwrap(), 2);
        assert_eq!(picard_rank(&[6]).unwrap(), 5);
    }

    #[test]
    fn rank_and_c1_drop_differ_by_odd_points() {
        let ws = [3, 5, 2, 1, 1];
        let e = ws.iter().sum::<i64>() / 2;
        let rank = picard_rank(&ws).unwrap() as i64;
        let drop = e - c1m_self_int(e, &ws).unwrap();
        assert_eq!(rank - 2 - drop, 2);
    }

    #[test]
    fn disc_bundle_chains() {
        let d = DiscBundleModel::new(-4, vec![("A".into(), 3), ("B".into(), 1)]);
        assert_eq!(d.modifications[0].chain, vec![-2, -2, -1]);
        assert_eq!(d.modifications[1].chain, vec![-1]);
    }
}
