//! Contribution tables for reduced dihedral squares and cubes of sphere
//! bouquets `S^m v k_{m-1} S^{m-1} v ... v k_1 S^1`.

use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};

use crate::chain::BettiVector;
use crate::error::{Error, Result};

/// Sphere multiplicities `k[p - 1] = k_p` for `p = 1..=m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BouquetSpec {
    pub m: usize,
    pub k: Vec<u64>,
    /// Require `k_m = 1` and `k_p = k_{m-p}`: the bouquet then has the Betti
    /// numbers of a closed manifold (with `k_0 = 1` implied).
    pub duality: bool,
}

impl BouquetSpec {
    pub fn new(m: usize, k: Vec<u64>, duality: bool) -> Result<Self> {
        let spec = Self { m, k, duality };
        spec.validate()?;
        Ok(spec)
    }

    pub fn sphere(m: usize) -> Self {
        let mut k = vec![0; m];
        k[m - 1] = 1;
        Self {
            m,
            k,
            duality: true,
        }
    }

    /// Reads the spec off a manifold-mode Betti vector `(1, k_1, ..., k_m)`.
    pub fn from_betti(b: &BettiVector) -> Result<Self> {
        b.validate_manifold()?;
        let m = b.top_degree();
        Self::new(m, b.values[1..].iter().map(|&v| v as u64).collect(), true)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::InvalidArgument(
                "top dimension must be at least 1".into(),
            ));
        }
        if self.k.len() != self.m {
            return Err(Error::InvalidArgument(format!(
                "expected {} multiplicities, got {}",
                self.m,
                self.k.len()
            )));
        }
        if self.k[self.m - 1] == 0 {
            return Err(Error::InvalidArgument("k_m must be at least 1".into()));
        }
        if self.duality {
            if self.k[self.m - 1] != 1 {
                return Err(Error::Duality(format!(
                    "k_{} = {} but a closed manifold has k_m = k_0 = 1",
                    self.m,
                    self.k[self.m - 1]
                )));
            }
            for p in 1..self.m {
                if self.kp(p) != self.kp(self.m - p) {
                    return Err(Error::Duality(format!(
                        "k_{p} = {} but k_{} = {}",
                        self.kp(p),
                        self.m - p,
                        self.kp(self.m - p)
                    )));
                }
            }
        }
        Ok(())
    }

    /// `k_p` for `1 <= p <= m`.
    pub fn kp(&self, p: usize) -> u64 {
        self.k[p - 1]
    }

    /// Sum of Betti numbers, counting the 0-dimensional class.
    pub fn betti_sum(&self) -> u64 {
        1 + self.k.iter().sum::<u64>()
    }

    pub fn betti(&self) -> BettiVector {
        let mut v = vec![1usize];
        v.extend(self.k.iter().map(|&x| x as usize));
        BettiVector::new(v)
    }

    fn ks(&self) -> impl Iterator<Item = (i128, i128)> + '_ {
        (1..=self.m).map(|p| (p as i128, self.kp(p) as i128))
    }
}

/// Named rows in insertion order; serializes as a JSON object.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Contributions(pub Vec<(String, i128)>);

impl Contributions {
    fn push(&mut self, name: &str, value: i128) {
        self.0.push((name.to_string(), value));
    }

    pub fn total(&self) -> i128 {
        self.0.iter().map(|(_, v)| v).sum()
    }

    pub fn get(&self, name: &str) -> Option<i128> {
        self.0.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }
}

impl Serialize for Contributions {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, &(*v as i64))?;
        }
        map.end()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Assembly {
    pub m: usize,
    pub spec: BouquetSpec,
    pub contributions: Contributions,
    pub total: i64,
    /// Closed-form value; `None` when it is not an integer, which can only
    /// happen outside duality mode.
    pub formula: Option<i64>,
    #[serde(rename = "match")]
    pub matches: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expansion: Option<ExpansionCheck>,
}

fn exact_div(num: i128, den: i128, what: &str) -> Result<i128> {
    if num % den != 0 {
        return Err(Error::NonIntegral(format!(
            "{what}: {num} is not divisible by {den}"
        )));
    }
    Ok(num / den)
}

fn pairs_sum(spec: &BouquetSpec, f: impl Fn(i128, i128, i128, i128) -> i128) -> i128 {
    let ks: Vec<(i128, i128)> = spec.ks().collect();
    let mut s = 0;
    for &(p, kp) in &ks {
        for &(q, kq) in &ks {
            if p != q {
                s += f(p, kp, q, kq);
            }
        }
    }
    s
}

/// Homology count of the reduced symmetric square, piece by piece.
///
/// * `A`: mixed cells `S^p x S^p` of each sphere, `(p + 1)` classes each.
/// * `B`: unordered pairs of distinct spheres of equal dimension.
/// * `C`: unordered pairs of spheres of different dimensions.
pub fn rd2_bouquet_assembly(spec: &BouquetSpec) -> Result<Assembly> {
    spec.validate()?;
    let mut c = Contributions::default();
    c.push("A", spec.ks().map(|(p, k)| (p + 1) * k).sum());
    c.push(
        "B",
        exact_div(spec.ks().map(|(_, k)| k * (k - 1)).sum(), 2, "B rows")?,
    );
    c.push(
        "C",
        exact_div(pairs_sum(spec, |_, kp, _, kq| kp * kq), 2, "C rows")?,
    );
    let b = spec.betti_sum() as i128;
    let m = spec.m as i128;
    let formula = exact_div(b * b + (m - 1) * b, 2, "square bound").ok();
    let total = c.total();
    Ok(Assembly {
        m: spec.m,
        spec: spec.clone(),
        contributions: c,
        total: total as i64,
        formula: formula.map(|f| f as i64),
        matches: formula == Some(total),
        expansion: None,
    })
}

/// The closing computation for the cube, carried out in integers scaled by 6.
///
/// Each group of the assembled rows is compared with the closed expression it
/// simplifies to; the sum of those expressions is compared with the expanded
/// polynomial, which in turn is compared with both the `+2B` and `-2B`
/// numerators.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpansionCheck {
    pub groups: Vec<ExpansionGroup>,
    /// `B^3 - 3B^2 + 3B - 1 + 3mB^2 - B + 1`.
    pub expanded: i64,
    /// `B^3 + 3(m - 1)B^2 + 2B`.
    pub plus_2b: i64,
    /// `B^3 + 3(m - 1)B^2 - 2B`.
    pub minus_2b: i64,
    pub groups_match: bool,
    pub expanded_matches_plus: bool,
    pub expanded_matches_minus: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpansionGroup {
    pub rows: Vec<String>,
    pub expression: String,
    pub assembled_x6: i64,
    pub closed_x6: i64,
}

fn expansion_check(spec: &BouquetSpec, c: &Contributions) -> ExpansionCheck {
    let b = spec.betti_sum() as i128;
    let m = spec.m as i128;
    let row = |n: &str| c.get(n).expect("row present");
    let group = |rows: &[&str], expression: &str, closed_x6: i128| {
        let assembled: i128 = rows.iter().map(|r| row(r)).sum();
        ExpansionGroup {
            rows: rows.iter().map(|s| s.to_string()).collect(),
            expression: expression.to_string(),
            assembled_x6: (6 * assembled) as i64,
            closed_x6: closed_x6 as i64,
        }
    };
    let bm1 = b - 1;
    let groups = vec![
        group(&["u+v"], "mB", 6 * m * b),
        group(
            &["w(B)", "w(D)"],
            "mB^2/2 - mB/2 - mB/2",
            3 * m * b * b - 3 * m * b - 3 * m * b,
        ),
        group(
            &["w~(B)", "w~(D)"],
            "(B-1)^2/2 - (B-1)/2",
            3 * bm1 * bm1 - 3 * bm1,
        ),
        group(
            &["s(C)", "s(E)", "s(F)"],
            "(B-1)^3/6 - (B-1)^2/2 + (B-1)/3",
            bm1 * bm1 * bm1 - 3 * bm1 * bm1 + 2 * bm1,
        ),
    ];
    let groups_match = groups.iter().all(|g| g.assembled_x6 == g.closed_x6);
    let closed_sum: i128 = groups.iter().map(|g| g.closed_x6 as i128).sum();
    let expanded = b * b * b - 3 * b * b + 3 * b - 1 + 3 * m * b * b - b + 1;
    let plus = b * b * b + 3 * (m - 1) * b * b + 2 * b;
    let minus = b * b * b + 3 * (m - 1) * b * b - 2 * b;
    ExpansionCheck {
        groups,
        expanded: expanded as i64,
        plus_2b: plus as i64,
        minus_2b: minus as i64,
        groups_match: groups_match && closed_sum == expanded,
        expanded_matches_plus: expanded == plus,
        expanded_matches_minus: expanded == minus,
    }
}

/// Homology count of the reduced dihedral cube, piece by piece.
///
/// `u+v` collects cells of a single sphere, `w` and `w~` the cells over two
/// spheres, and `s` the products of three distinct spheres.
pub fn rd3_bouquet_assembly(spec: &BouquetSpec) -> Result<Assembly> {
    spec.validate()?;
    let mut c = Contributions::default();
    c.push("u+v", 2 * spec.ks().map(|(p, k)| p * k).sum::<i128>());
    c.push("w(B)", spec.ks().map(|(p, k)| p * k * (k - 1)).sum());
    c.push(
        "w~(B)",
        exact_div(spec.ks().map(|(_, k)| k * (k - 1)).sum(), 2, "w~(B)")?,
    );
    c.push("w(D)", pairs_sum(spec, |p, kp, _, kq| p * kp * kq));
    c.push(
        "w~(D)",
        exact_div(pairs_sum(spec, |_, kp, _, kq| kp * kq), 2, "w~(D)")?,
    );
    c.push(
        "s(C)",
        exact_div(
            spec.ks().map(|(_, k)| k * (k - 1) * (k - 2)).sum(),
            6,
            "s(C)",
        )?,
    );
    c.push(
        "s(E)",
        exact_div(
            pairs_sum(spec, |_, kp, _, kq| kp * (kp - 1) * kq),
            2,
            "s(E)",
        )?,
    );
    let ks: Vec<i128> = spec.ks().map(|(_, k)| k).collect();
    let mut triple = 0;
    for a in 0..ks.len() {
        for b in a + 1..ks.len() {
            for d in b + 1..ks.len() {
                triple += ks[a] * ks[b] * ks[d];
            }
        }
    }
    c.push("s(F)", triple);
    let b = spec.betti_sum() as i128;
    let m = spec.m as i128;
    let formula = exact_div(b * b * b + 3 * (m - 1) * b * b + 2 * b, 6, "cube bound").ok();
    let total = c.total();
    let expansion = expansion_check(spec, &c);
    Ok(Assembly {
        m: spec.m,
        spec: spec.clone(),
        contributions: c,
        total: total as i64,
        formula: formula.map(|f| f as i64),
        matches: formula == Some(total),
        expansion: Some(expansion),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Duality-mode spec from a free choice of the lower half.
    pub(crate) fn arb_spec() -> impl Strategy<Value = BouquetSpec> {
        (1usize..=6)
            .prop_flat_map(|m| (Just(m), proptest::collection::vec(0u64..8, m / 2)))
            .prop_map(|(m, half)| {
                let mut k = vec![0; m];
                k[m - 1] = 1;
                for (i, &v) in half.iter().enumerate() {
                    let p = i + 1;
                    if p < m {
                        k[p - 1] = v;
                        k[m - p - 1] = v;
                    }
                }
                BouquetSpec::new(m, k, true).unwrap()
            })
    }

    #[test]
    fn sphere_rows() {
        for m in 1..=6 {
            let s = BouquetSpec::sphere(m);
            assert_eq!(rd2_bouquet_assembly(&s).unwrap().total, m as i64 + 1);
            assert_eq!(rd3_bouquet_assembly(&s).unwrap().total, 2 * m as i64);
        }
    }

    #[test]
    fn torus_numbers() {
        let t = BouquetSpec::new(2, vec![2, 1], true).unwrap();
        assert_eq!(t.betti_sum(), 4);
        let a2 = rd2_bouquet_assembly(&t).unwrap();
        assert_eq!((a2.total, a2.formula), (10, Some(10)));
        let a3 = rd3_bouquet_assembly(&t).unwrap();
        assert_eq!((a3.total, a3.formula), (20, Some(20)));
        assert_eq!(a3.contributions.get("u+v"), Some(8));
        assert_eq!(a3.contributions.get("w(D)"), Some(6));
        assert_eq!(a3.contributions.get("s(E)"), Some(1));
    }

    #[test]
    fn circle_cube() {
        let s = BouquetSpec::new(1, vec![1], true).unwrap();
        assert_eq!(rd3_bouquet_assembly(&s).unwrap().total, 2);
    }

    #[test]
    fn three_circles_break_duality() {
        assert!(matches!(
            BouquetSpec::new(1, vec![3], true),
            Err(Error::Duality(_))
        ));
        let s = BouquetSpec::new(1, vec![3], false).unwrap();
        let a = rd2_bouquet_assembly(&s).unwrap();
        assert_eq!(a.formula, Some(8));
        assert_eq!(a.total, 9);
        assert!(!a.matches);
    }

    #[test]
    fn two_circle_wedge() {
        let s = BouquetSpec::new(1, vec![2], false).unwrap();
        let a = rd3_bouquet_assembly(&s).unwrap();
        assert_eq!(a.total, 7);
        assert_eq!(a.formula, None);
        assert!(!a.matches);
    }

    #[test]
    fn asymmetric_spec_rejected() {
        assert!(BouquetSpec::new(3, vec![1, 0, 1], true).is_err());
        assert!(BouquetSpec::new(2, vec![1], true).is_err());
        assert!(BouquetSpec::new(2, vec![1, 0], false).is_err());
    }

    #[test]
    fn json_shape() {
        let a = rd2_bouquet_assembly(&BouquetSpec::sphere(2)).unwrap();
        let v = serde_json::to_value(&a).unwrap();
        for key in ["m", "spec", "contributions", "total", "formula", "match"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["contributions"]["A"], 3);
    }

    proptest! {
        #[test]
        fn assemblies_hit_closed_forms(spec in arb_spec()) {
            let b = spec.betti_sum() as i128;
            let m = spec.m as i128;
            let a2 = rd2_bouquet_assembly(&spec).unwrap();
            prop_assert!(a2.matches);
            prop_assert_eq!(2 * a2.total as i128, b * b + (m - 1) * b);
            let a3 = rd3_bouquet_assembly(&spec).unwrap();
            prop_assert!(a3.matches);
            prop_assert_eq!(6 * a3.total as i128, b * b * b + 3 * (m - 1) * b * b + 2 * b);
            let e = a3.expansion.unwrap();
            prop_assert!(e.groups_match);
            prop_assert!(e.expanded_matches_plus);
            prop_assert!(!e.expanded_matches_minus);
            prop_assert!(a2.total >= 0 && a3.total >= 0);
        }

        #[test]
        fn a_row_is_half_weighted(spec in arb_spec()) {
            let b = spec.betti_sum() as i128;
            let a = rd2_bouquet_assembly(&spec).unwrap();
            let m = spec.m as i128;
            prop_assert_eq!(2 * a.contributions.get("A").unwrap(), 2 * (b - 1) + m * b);
        }
    }
}
