//! Seeded synthetic instances, bound grids and the catalog of small
//! hand-built instances.
//!
//! Randomness comes from ChaCha8 seeded with `seed_from_u64`. For a given
//! seed the generator first draws the `n` revenues, then the expertise
//! matrix in row-major order, so an instance is reproducible from
//! `(m, n, seed, ranges)` alone.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::instance::{check_feasibility, CardinalityBounds, Instance};
use crate::{Error, Result};

/// Name of the pseudo-random generator, recorded alongside generated data.
pub const RNG_ALGORITHM: &str = "ChaCha8 (rand_chacha 0.3, seed_from_u64)";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub m: usize,
    pub n: usize,
    pub seed: u64,
    /// Inclusive range of the integer product revenues.
    pub revenue_range: (u32, u32),
    /// Inclusive range of the expertise values; must lie inside `[0, 1]`.
    pub expertise_range: (f64, f64),
}

impl GenSpec {
    pub fn new(m: usize, n: usize, seed: u64) -> Self {
        GenSpec { m, n, seed, revenue_range: (1, 1000), expertise_range: (0.0, 1.0) }
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 || self.n == 0 {
            return Err(Error::InvalidParameter(format!("instance size {}x{} must be positive", self.m, self.n)));
        }
        let (rl, rh) = self.revenue_range;
        if rl == 0 || rl > rh {
            return Err(Error::InvalidParameter(format!("revenue range [{rl}, {rh}] must be non-empty and positive")));
        }
        let (el, eh) = self.expertise_range;
        if !(0.0..=1.0).contains(&el) || !(0.0..=1.0).contains(&eh) || el > eh {
            return Err(Error::InvalidParameter(format!(
                "expertise range [{el}, {eh}] must be a sub-interval of [0, 1]"
            )));
        }
        Ok(())
    }
}

/// Draws `rev` and `E` and returns the instance `W = E * rev` with the
/// decomposition attached.
pub fn generate_synthetic(spec: &GenSpec) -> Result<Instance> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (rl, rh) = spec.revenue_range;
    let revenue: Vec<f64> = (0..spec.n).map(|_| f64::from(rng.gen_range(rl..=rh))).collect();
    let (el, eh) = spec.expertise_range;
    let expertise: Vec<f64> = (0..spec.m * spec.n).map(|_| rng.gen_range(el..=eh)).collect();
    Instance::from_expertise(spec.m, spec.n, expertise, revenue)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridProfile {
    Synthetic,
    Real,
}

impl std::str::FromStr for GridProfile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "synthetic" => Ok(GridProfile::Synthetic),
            "real" => Ok(GridProfile::Real),
            _ => Err(Error::InvalidParameter(format!("unknown grid profile `{s}` (expected synthetic or real)"))),
        }
    }
}

/// How the product-side upper bound is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UpperCopies {
    /// `r2 = m`: no effective cap.
    AllResellers,
    /// `r2 = 2 r1`.
    TwiceLower,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridEntry {
    pub l: usize,
    pub epsilon: usize,
    /// Fraction of the average bundle load used for `r1`.
    pub copy_fraction: f64,
    pub upper_copies: UpperCopies,
    pub bounds: CardinalityBounds,
    /// Why the entry cannot be used, if it cannot.
    pub skip: Option<String>,
}

impl GridEntry {
    pub fn is_usable(&self) -> bool {
        self.skip.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamGrid {
    pub m: usize,
    pub n: usize,
    pub profile: GridProfile,
    pub entries: Vec<GridEntry>,
}

pub const SYNTHETIC_L: [usize; 5] = [5, 10, 15, 20, 25];
pub const SYNTHETIC_EPSILON: usize = 3;
pub const SYNTHETIC_COPY_FRACTIONS: [f64; 3] = [0.5, 0.75, 1.0];
pub const REAL_L: usize = 15;

/// Bounds `l1 = l - epsilon`, `l2 = l + epsilon`,
/// `r1 = floor(copy_fraction * l1 * m / n)` and `r2` per `upper_copies`.
/// Entries with `l1 < 1` or without any feasible allocation carry a skip
/// reason.
pub fn grid_entry(
    m: usize,
    n: usize,
    l: usize,
    epsilon: usize,
    copy_fraction: f64,
    upper_copies: UpperCopies,
) -> GridEntry {
    let l1 = l.saturating_sub(epsilon);
    let r1 = (copy_fraction * l1 as f64 * m as f64 / n as f64).floor() as usize;
    bounded_entry(m, n, l, epsilon, copy_fraction, upper_copies, l1, r1)
}

#[allow(clippy::too_many_arguments)]
fn bounded_entry(
    m: usize,
    n: usize,
    l: usize,
    epsilon: usize,
    copy_fraction: f64,
    upper_copies: UpperCopies,
    l1: usize,
    r1: usize,
) -> GridEntry {
    let r2 = match upper_copies {
        UpperCopies::AllResellers => m,
        UpperCopies::TwiceLower => 2 * r1,
    };
    let bounds = CardinalityBounds { l1, l2: l + epsilon, r1, r2 };
    let skip = if l < epsilon + 1 {
        Some(format!("l1 = {l} - {epsilon} is below 1"))
    } else {
        let report = check_feasibility(m, n, &bounds);
        report.reason.map(|r| format!("bounds {bounds} are infeasible for {m}x{n}: {}", r.as_str()))
    };
    GridEntry { l, epsilon, copy_fraction, upper_copies, bounds, skip }
}

pub fn build_param_grid(m: usize, n: usize, profile: GridProfile) -> Result<ParamGrid> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidParameter(format!("instance size {m}x{n} must be positive")));
    }
    let entries = match profile {
        GridProfile::Synthetic => {
            let mut entries = Vec::new();
            for l in SYNTHETIC_L {
                for fraction in SYNTHETIC_COPY_FRACTIONS {
                    for upper in [UpperCopies::AllResellers, UpperCopies::TwiceLower] {
                        entries.push(grid_entry(m, n, l, SYNTHETIC_EPSILON, fraction, upper));
                    }
                }
            }
            entries
        }
        GridProfile::Real => {
            // average bundle size times m / n, with l1 = l2 = 15
            let r1 = REAL_L * m / n;
            vec![bounded_entry(m, n, REAL_L, 0, 1.0, UpperCopies::AllResellers, REAL_L, r1)]
        }
    };
    Ok(ParamGrid { m, n, profile, entries })
}

/// Hand-built instances, addressed as `table-a:<alpha>`, `table-b`,
/// `table-c`, `table-d` or `theorem-3:<epsilon>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum CatalogInstance {
    /// Four re-sellers valuing `[a/4, a/4, a/4, a/4, 10 - a]`, one valuing
    /// everything at 2; all bounds 3. No EQ1 allocation exists when
    /// `4 > 3a/4`.
    TableA { alpha: f64 },
    /// Four identical re-sellers and one with reversed tastes; all bounds 3.
    /// Round robin is EF1 and feasible only if the odd one picks first.
    TableB,
    /// 3x3, bounds 2; GreedyNash beats SeAl here.
    TableC,
    /// 3x3, bounds 2; SeAl beats GreedyNash here.
    TableD,
    /// 2x4 with bounds `l = r = (2, 2, 1, 1)`; the Nash optimum is not EF1
    /// for small `epsilon`.
    Theorem3 { epsilon: f64 },
}

impl CatalogInstance {
    pub const NAMES: [&'static str; 5] = ["table-a", "table-b", "table-c", "table-d", "theorem-3"];

    pub fn build(&self) -> Result<(Instance, CardinalityBounds)> {
        match *self {
            CatalogInstance::TableA { alpha } => {
                if !(alpha > 0.0 && alpha < 10.0) {
                    return Err(Error::InvalidParameter(format!("table-a needs 0 < alpha < 10, got {alpha}")));
                }
                let q = alpha / 4.0;
                let mut rows = vec![vec![q, q, q, q, 10.0 - alpha]; 4];
                rows.push(vec![2.0; 5]);
                Ok((Instance::from_rows(&rows)?, CardinalityBounds::uniform(3)))
            }
            CatalogInstance::TableB => {
                let mut rows = vec![vec![3.0, 3.0, 2.0, 1.0, 1.0]; 4];
                rows.push(vec![1.0, 1.0, 2.0, 3.0, 3.0]);
                Ok((Instance::from_rows(&rows)?, CardinalityBounds::uniform(3)))
            }
            CatalogInstance::TableC => Ok((
                Instance::from_rows(&[vec![7.0, 1.0, 2.0], vec![5.5, 2.0, 2.5], vec![5.0, 4.0, 1.0]])?,
                CardinalityBounds::uniform(2),
            )),
            CatalogInstance::TableD => Ok((
                Instance::from_rows(&[vec![7.0, 1.0, 2.0], vec![6.0, 1.5, 2.5], vec![5.0, 4.0, 1.0]])?,
                CardinalityBounds::uniform(2),
            )),
            CatalogInstance::Theorem3 { epsilon } => {
                if !(epsilon > 0.0 && epsilon.is_finite()) {
                    return Err(Error::InvalidParameter(format!("theorem-3 needs epsilon > 0, got {epsilon}")));
                }
                let rows = [vec![1.0, 1.0, 2.2, 2.2], vec![epsilon, epsilon, 3.0, 3.0]];
                Ok((Instance::from_rows(&rows)?, CardinalityBounds { l1: 2, l2: 2, r1: 1, r2: 1 }))
            }
        }
    }
}

impl std::str::FromStr for CatalogInstance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, param) = match s.split_once(':') {
            Some((name, p)) => (name, Some(p)),
            None => (s, None),
        };
        let number = |default: Option<f64>| -> Result<f64> {
            match param {
                Some(p) => p.parse().map_err(|_| Error::InvalidParameter(format!("`{p}` is not a number in `{s}`"))),
                None => default
                    .ok_or_else(|| Error::InvalidParameter(format!("`{name}` needs a parameter, e.g. `{name}:4`"))),
            }
        };
        let no_param = |inst: CatalogInstance| match param {
            Some(_) => Err(Error::InvalidParameter(format!("`{name}` takes no parameter"))),
            None => Ok(inst),
        };
        match name.to_ascii_lowercase().as_str() {
            "table-a" => Ok(CatalogInstance::TableA { alpha: number(None)? }),
            "table-b" => no_param(CatalogInstance::TableB),
            "table-c" => no_param(CatalogInstance::TableC),
            "table-d" => no_param(CatalogInstance::TableD),
            "theorem-3" => Ok(CatalogInstance::Theorem3 { epsilon: number(Some(0.2))? }),
            _ => Err(Error::UnknownInstance(s.to_string())),
        }
    }
}

/// Looks up a catalog instance by its `name[:parameter]` form.
pub fn paper_instance(name: &str) -> Result<(Instance, CardinalityBounds)> {
    name.parse::<CatalogInstance>()?.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_seeded() {
        let a = generate_synthetic(&GenSpec::new(4, 6, 7)).unwrap();
        let b = generate_synthetic(&GenSpec::new(4, 6, 7)).unwrap();
        let c = generate_synthetic(&GenSpec::new(4, 6, 8)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.weights(), c.weights());
    }

    #[test]
    fn default_spec_stays_in_range() {
        let inst = generate_synthetic(&GenSpec::new(100, 100, 1)).unwrap();
        assert_eq!((inst.resellers(), inst.products()), (100, 100));
        assert!(inst.weights().iter().all(|w| (0.0..=1000.0).contains(w)));
        let rev = inst.revenue().unwrap();
        assert!(rev.iter().all(|r| r.fract() == 0.0 && (1.0..=1000.0).contains(r)));
    }

    #[test]
    fn degenerate_expertise_copies_revenue() {
        let spec = GenSpec { expertise_range: (1.0, 1.0), ..GenSpec::new(3, 5, 11) };
        let inst = generate_synthetic(&spec).unwrap();
        let rev = inst.revenue().unwrap().to_vec();
        for i in 0..3 {
            assert_eq!(inst.row(i), rev.as_slice());
        }
    }

    #[test]
    fn bad_specs_are_rejected() {
        assert!(generate_synthetic(&GenSpec::new(0, 3, 1)).is_err());
        assert!(generate_synthetic(&GenSpec { revenue_range: (5, 4), ..GenSpec::new(2, 2, 1) }).is_err());
        assert!(generate_synthetic(&GenSpec { expertise_range: (0.5, 1.5), ..GenSpec::new(2, 2, 1) }).is_err());
    }

    #[test]
    fn real_profile() {
        let g = build_param_grid(100, 50, GridProfile::Real).unwrap();
        assert_eq!(g.entries.len(), 1);
        assert_eq!(g.entries[0].bounds, CardinalityBounds { l1: 15, l2: 15, r1: 30, r2: 100 });
        assert!(g.entries[0].is_usable());
    }

    #[test]
    fn synthetic_profile() {
        let g = build_param_grid(100, 100, GridProfile::Synthetic).unwrap();
        assert_eq!(g.entries.len(), 30);
        let first: Vec<_> = g.entries.iter().filter(|e| e.l == 5 && e.copy_fraction == 1.0).collect();
        assert_eq!(first[0].bounds, CardinalityBounds { l1: 2, l2: 8, r1: 2, r2: 100 });
        assert_eq!(first[1].bounds, CardinalityBounds { l1: 2, l2: 8, r1: 2, r2: 4 });
        let last = g.entries.iter().find(|e| e.l == 25).unwrap();
        assert_eq!((last.bounds.l1, last.bounds.l2), (22, 28));
    }

    #[test]
    fn infeasible_entries_are_flagged() {
        // 2 x 100: every product would need copies from a re-seller pool too small
        let g = build_param_grid(2, 100, GridProfile::Synthetic).unwrap();
        let skipped: Vec<_> = g.entries.iter().filter(|e| !e.is_usable()).collect();
        assert!(!skipped.is_empty());
        assert!(skipped.iter().all(|e| !check_feasibility(2, 100, &e.bounds).feasible));
        let low = grid_entry(10, 10, 2, 3, 1.0, UpperCopies::AllResellers);
        assert!(low.skip.unwrap().contains("below 1"));
    }

    #[test]
    fn catalog() {
        let (c, b) = paper_instance("table-c").unwrap();
        assert_eq!(c.row(1), &[5.5, 2.0, 2.5]);
        assert_eq!(b, CardinalityBounds::uniform(2));
        let (d, _) = paper_instance("table-d").unwrap();
        assert_eq!(d.row(1), &[6.0, 1.5, 2.5]);
        let (bb, b) = paper_instance("table-b").unwrap();
        assert_eq!(bb.row(4), &[1.0, 1.0, 2.0, 3.0, 3.0]);
        assert_eq!(b, CardinalityBounds::uniform(3));
        let (a, _) = paper_instance("table-a:4").unwrap();
        assert_eq!(a.row(0), &[1.0, 1.0, 1.0, 1.0, 6.0]);
        assert_eq!(a.row(4), &[2.0; 5]);
        let (t, b) = paper_instance("theorem-3:0.2").unwrap();
        assert_eq!(t.row(1), &[0.2, 0.2, 3.0, 3.0]);
        assert_eq!(b, CardinalityBounds { l1: 2, l2: 2, r1: 1, r2: 1 });
        assert_eq!(paper_instance("theorem-3").unwrap().0, t);
    }

    #[test]
    fn catalog_errors() {
        assert!(matches!(paper_instance("table-z"), Err(Error::UnknownInstance(_))));
        assert!(paper_instance("table-a").is_err());
        assert!(paper_instance("table-a:10").is_err());
        assert!(paper_instance("table-a:0").is_err());
        assert!(paper_instance("table-c:1").is_err());
    }
}
