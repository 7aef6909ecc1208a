//! Set-function models: explicit oracles F(S) together with closed-form
//! multilinear extensions and their partial derivatives.
//!
//! Sets over the ground set [n] are passed around as bitmasks (bit i set means
//! element i is in S), which keeps the exhaustive n <= 20 enumerations cheap.

use crate::error::{Error, Result};
use crate::linalg::Mat;
use serde::{Deserialize, Serialize};

/// A set-function model over ground set {0, .., n-1}.
///
/// Serializes as `{"family": ..., "n": ..., "params": {...}}`.
#[derive(Debug, Clone)]
pub enum SetFunctionModel {
    /// Explicit table of all 2^n values, indexed by bitmask.
    Table { n: usize, values: Vec<f64> },
    /// Graph cut. `weights` is the weighted adjacency (zero diagonal).
    /// Undirected cuts expect a symmetric matrix.
    Cut { weights: Mat, directed: bool },
    /// Ising negative energy with non-positive pairwise couplings.
    /// `coupling` is symmetric; each unordered pair contributes once.
    Ising { field: Vec<f64>, coupling: Mat },
    /// FLID diversity model: F(S) = sum_{i in S} u'_i + sum_d max_{i in S} W_{i,d}.
    Flid { weights: Mat, utility: Vec<f64> },
    /// Weighted set cover over n items: concept credits plus the items
    /// covering each concept.
    SetCover {
        n: usize,
        credits: Vec<f64>,
        covers: Vec<Vec<usize>>,
    },
    /// Modular: F(S) = sum_{i in S} theta_i.
    Modular { theta: Vec<f64> },
}

impl SetFunctionModel {
    pub fn ground_set_size(&self) -> usize {
        match self {
            Self::Table { n, .. } => *n,
            Self::Cut { weights, .. } => weights.nrows(),
            Self::Ising { field, .. } => field.len(),
            Self::Flid { weights, .. } => weights.nrows(),
            Self::SetCover { n, .. } => *n,
            Self::Modular { theta } => theta.len(),
        }
    }

    /// Validates structural requirements of each family.
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Table { n, values } => {
                if *n < 1 {
                    return Err(Error::StructuralViolation(
                        "table model needs n >= 1".into(),
                    ));
                }
                if values.len() != 1usize << n {
                    return Err(Error::StructuralViolation(format!(
                        "table needs exactly 2^{n} = {} values, got {}",
                        1usize << n,
                        values.len()
                    )));
                }
            }
            Self::Cut { weights, directed } => {
                if weights.nrows() != weights.ncols() {
                    return Err(Error::DimensionMismatch {
                        expected: weights.nrows(),
                        got: weights.ncols(),
                    });
                }
                for i in 0..weights.nrows() {
                    if weights.get(i, i) != 0.0 {
                        return Err(Error::StructuralViolation(
                            "cut weights must have a zero diagonal".into(),
                        ));
                    }
                    for j in 0..weights.ncols() {
                        if weights.get(i, j) < 0.0 {
                            return Err(Error::NegativeWeight);
                        }
                    }
                }
                if !*directed && !weights.is_symmetric(0.0) {
                    return Err(Error::StructuralViolation(
                        "undirected cut weights must be symmetric".into(),
                    ));
                }
            }
            Self::Ising { field, coupling } => {
                let n = field.len();
                if coupling.nrows() != n || coupling.ncols() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        got: coupling.nrows(),
                    });
                }
                if !coupling.is_symmetric(0.0) {
                    return Err(Error::StructuralViolation(
                        "ising coupling must be symmetric".into(),
                    ));
                }
                for i in 0..n {
                    for j in (i + 1)..n {
                        if coupling.get(i, j) > 0.0 {
                            return Err(Error::StructuralViolation(
                                "ising couplings must be non-positive".into(),
                            ));
                        }
                    }
                }
            }
            Self::Flid { weights, utility } => {
                if utility.len() != weights.nrows() {
                    return Err(Error::DimensionMismatch {
                        expected: weights.nrows(),
                        got: utility.len(),
                    });
                }
                if weights.row_iter_any_negative() {
                    return Err(Error::StructuralViolation(
                        "flid latent weights must be non-negative".into(),
                    ));
                }
            }
            Self::SetCover { n, credits, covers } => {
                if credits.len() != covers.len() {
                    return Err(Error::DimensionMismatch {
                        expected: covers.len(),
                        got: credits.len(),
                    });
                }
                if credits.iter().any(|&m| m < 0.0) {
                    return Err(Error::StructuralViolation(
                        "set-cover credits must be non-negative".into(),
                    ));
                }
                if covers.iter().flatten().any(|&i| i >= *n) {
                    return Err(Error::StructuralViolation(
                        "set-cover item index outside the ground set".into(),
                    ));
                }
            }
            Self::Modular { .. } => {}
        }
        Ok(())
    }

    /// F(S) for the subset encoded by `mask`.
    pub fn value(&self, mask: u64) -> f64 {
        match self {
            Self::Table { values, .. } => values[mask as usize],
            Self::Cut { weights, directed } => {
                let n = weights.nrows();
                let mut total = 0.0;
                for i in 0..n {
                    let vi = mask >> i & 1;
                    for j in 0..n {
                        if i == j {
                            continue;
                        }
                        let vj = mask >> j & 1;
                        if *directed {
                            if vi == 1 && vj == 0 {
                                total += weights.get(i, j);
                            }
                        } else if vi != vj {
                            total += 0.5 * weights.get(i, j);
                        }
                    }
                }
                total
            }
            Self::Ising { field, coupling } => {
                let n = field.len();
                let mut total = 0.0;
                for s in 0..n {
                    if mask >> s & 1 == 1 {
                        total += field[s];
                        for t in (s + 1)..n {
                            if mask >> t & 1 == 1 {
                                total += coupling.get(s, t);
                            }
                        }
                    }
                }
                total
            }
            Self::Flid { weights, utility } => {
                let mut total = 0.0;
                for i in 0..utility.len() {
                    if mask >> i & 1 == 1 {
                        total += utility[i];
                    }
                }
                for d in 0..weights.ncols() {
                    let mut best = 0.0f64;
                    for i in 0..weights.nrows() {
                        if mask >> i & 1 == 1 {
                            best = best.max(weights.get(i, d));
                        }
                    }
                    total += best;
                }
                total
            }
            Self::SetCover {
                credits, covers, ..
            } => credits
                .iter()
                .zip(covers)
                .filter(|(_, items)| items.iter().any(|&i| mask >> i & 1 == 1))
                .map(|(m, _)| m)
                .sum(),
            Self::Modular { theta } => theta
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, t)| t)
                .sum(),
        }
    }

    /// Closed-form multilinear extension at x in \[0,1\]^n. Table models fall
    /// back to the exhaustive 2^n sum.
    pub fn multilinear(&self, x: &[f64]) -> f64 {
        match self {
            Self::Table { n, .. } => {
                let mut total = 0.0;
                for mask in 0u64..(1u64 << n) {
                    let mut p = 1.0;
                    for i in 0..*n {
                        p *= if mask >> i & 1 == 1 { x[i] } else { 1.0 - x[i] };
                    }
                    total += self.value(mask) * p;
                }
                total
            }
            Self::Cut { weights, directed } => {
                let n = weights.nrows();
                let mut total = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        if i == j {
                            continue;
                        }
                        let w = weights.get(i, j);
                        if *directed {
                            total += w * x[i] * (1.0 - x[j]);
                        } else {
                            total += 0.5 * w * (x[i] + x[j] - 2.0 * x[i] * x[j]);
                        }
                    }
                }
                total
            }
            Self::Ising { field, coupling } => {
                let n = field.len();
                let mut total = 0.0;
                for s in 0..n {
                    total += field[s] * x[s];
                    for t in (s + 1)..n {
                        total += coupling.get(s, t) * x[s] * x[t];
                    }
                }
                total
            }
            Self::Flid { weights, utility } => {
                let n = utility.len();
                let mut total: f64 = utility.iter().zip(x).map(|(u, xi)| u * xi).sum();
                for d in 0..weights.ncols() {
                    total += flid_axis_sum(weights, d, x, n);
                }
                total
            }
            Self::SetCover {
                credits, covers, ..
            } => credits
                .iter()
                .zip(covers)
                .map(|(m, items)| {
                    let miss: f64 = items.iter().map(|&i| 1.0 - x[i]).product();
                    m * (1.0 - miss)
                })
                .sum(),
            Self::Modular { theta } => theta.iter().zip(x).map(|(t, xi)| t * xi).sum(),
        }
    }

    /// Partial derivative of the multilinear extension:
    /// f(x with coordinate i set to 1) - f(x with coordinate i set to 0).
    pub fn multilinear_partial(&self, x: &[f64], i: usize) -> f64 {
        match self {
            Self::Table { .. } | Self::Flid { .. } => {
                let mut hi = x.to_vec();
                hi[i] = 1.0;
                let mut lo = x.to_vec();
                lo[i] = 0.0;
                self.multilinear(&hi) - self.multilinear(&lo)
            }
            Self::Cut { weights, directed } => {
                let n = weights.nrows();
                let mut g = 0.0;
                for j in 0..n {
                    if j == i {
                        continue;
                    }
                    if *directed {
                        g += weights.get(i, j) * (1.0 - x[j]) - weights.get(j, i) * x[j];
                    } else {
                        g += weights.get(i, j) * (1.0 - 2.0 * x[j]);
                    }
                }
                g
            }
            Self::Ising { field, coupling } => {
                let mut g = field[i];
                for t in 0..field.len() {
                    if t != i {
                        g += coupling.get(i.min(t), i.max(t)) * x[t];
                    }
                }
                g
            }
            Self::SetCover {
                credits, covers, ..
            } => credits
                .iter()
                .zip(covers)
                .filter(|(_, items)| items.contains(&i))
                .map(|(m, items)| {
                    let miss: f64 = items
                        .iter()
                        .filter(|&&j| j != i)
                        .map(|&j| 1.0 - x[j])
                        .product();
                    m * miss
                })
                .sum(),
            Self::Modular { theta } => theta[i],
        }
    }

    /// max_S |F(S)| by enumeration (n <= 20), used by the sampling bound.
    pub fn max_abs_value(&self) -> Result<f64> {
        let n = self.ground_set_size();
        if n > 20 {
            return Err(Error::TooLarge { n, limit: 20 });
        }
        let mut best = 0.0f64;
        for mask in 0u64..(1u64 << n) {
            best = best.max(self.value(mask).abs());
        }
        Ok(best)
    }
}

// FLID axis term of Eq-style sorted form: items sorted ascending by weight,
// sum_l W[i(l)] x_{i(l)} prod_{m>l} (1 - x_{i(m)}).
fn flid_axis_sum(weights: &Mat, d: usize, x: &[f64], n: usize) -> f64 {
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| weights.get(a, d).partial_cmp(&weights.get(b, d)).unwrap());
    // suffix[l] = prod over positions m > l of (1 - x_{i(m)})
    let mut suffix = 1.0;
    let mut total = 0.0;
    let mut terms = vec![0.0; n];
    for (pos, &item) in order.iter().enumerate().rev() {
        terms[pos] = weights.get(item, d) * x[item] * suffix;
        suffix *= 1.0 - x[item];
    }
    for t in terms {
        total += t;
    }
    total
}

impl Mat {
    fn row_iter_any_negative(&self) -> bool {
        (0..self.nrows()).any(|i| self.row(i).iter().any(|&w| w < 0.0))
    }
}

/// Marginal gain F(S ∪ {i}) − F(S); errors if i ∈ S.
pub fn marginal_gain(model: &SetFunctionModel, i: usize, mask: u64) -> Result<f64> {
    let n = model.ground_set_size();
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, n });
    }
    if mask >> i & 1 == 1 {
        return Err(Error::ElementInSet(i));
    }
    Ok(model.value(mask | 1 << i) - model.value(mask))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cut_pair() -> SetFunctionModel {
        SetFunctionModel::Cut {
            weights: Mat::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap(),
            directed: false,
        }
    }

    #[test]
    fn undirected_cut_set_values() {
        let m = cut_pair();
        assert_eq!(m.value(0b00), 0.0);
        assert_eq!(m.value(0b01), 1.0);
        assert_eq!(m.value(0b10), 1.0);
        assert_eq!(m.value(0b11), 0.0);
    }

    #[test]
    fn cut_multilinear_at_half() {
        let m = cut_pair();
        assert!((m.multilinear(&[0.5, 0.5]) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn flid_example_values() {
        let m = SetFunctionModel::Flid {
            weights: Mat::from_rows(&[vec![1.0], vec![2.0]]).unwrap(),
            utility: vec![0.0, 0.0],
        };
        assert_eq!(m.value(0b01), 1.0);
        assert_eq!(m.value(0b10), 2.0);
        assert_eq!(m.value(0b11), 2.0);
        assert!((m.multilinear(&[0.5, 0.5]) - 1.25).abs() < 1e-15);
    }

    #[test]
    fn setcover_example() {
        let m = SetFunctionModel::SetCover {
            n: 2,
            credits: vec![1.0],
            covers: vec![vec![0, 1]],
        };
        assert!((m.multilinear(&[0.5, 0.5]) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn ising_partial_matches_example() {
        let m = SetFunctionModel::Ising {
            field: vec![1.0, 1.0],
            coupling: Mat::from_rows(&[vec![0.0, -2.0], vec![-2.0, 0.0]]).unwrap(),
        };
        assert_eq!(m.multilinear_partial(&[0.0, 0.0], 0), 1.0);
        assert_eq!(m.multilinear_partial(&[0.0, 1.0], 0), -1.0);
    }

    #[test]
    fn marginal_gains_on_cut() {
        let m = cut_pair();
        assert_eq!(marginal_gain(&m, 0, 0b00).unwrap(), 1.0);
        assert_eq!(marginal_gain(&m, 0, 0b10).unwrap(), -1.0);
        assert!(matches!(
            marginal_gain(&m, 0, 0b01),
            Err(Error::ElementInSet(0))
        ));
    }

    #[test]
    fn model_file_format_matches_interface() {
        let m = SetFunctionModel::Modular {
            theta: vec![1.0, -0.5],
        };
        let s = serde_json::to_string(&m).unwrap();
        assert!(s.contains("\"family\":\"modular\""), "{s}");
        assert!(s.contains("\"n\":2"), "{s}");
        assert!(s.contains("\"params\""), "{s}");
        let back: SetFunctionModel = serde_json::from_str(&s).unwrap();
        assert_eq!(back.value(0b01), 1.0);

        let bad = "{\"family\":\"modular\",\"n\":3,\"params\":{\"theta\":[1.0]}}";
        assert!(serde_json::from_str::<SetFunctionModel>(bad).is_err());

        let cover = SetFunctionModel::SetCover {
            n: 3,
            credits: vec![1.0],
            covers: vec![vec![0, 2]],
        };
        let s = serde_json::to_string(&cover).unwrap();
        assert!(s.contains("\"family\":\"setcover\""), "{s}");
        let back: SetFunctionModel = serde_json::from_str(&s).unwrap();
        assert_eq!(back.ground_set_size(), 3);
    }

    #[test]
    fn table_needs_full_length() {
        let bad = SetFunctionModel::Table {
            n: 2,
            values: vec![0.0; 3],
        };
        assert!(bad.validate().is_err());
    }
}

// ---- file representation: {"family": ..., "n": ..., "params": {...}} ------

#[derive(Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "snake_case")]
enum ModelParams {
    Table {
        values: Vec<f64>,
    },
    Cut {
        weights: Mat,
        directed: bool,
    },
    Ising {
        field: Vec<f64>,
        coupling: Mat,
    },
    Flid {
        weights: Mat,
        utility: Vec<f64>,
    },
    Setcover {
        credits: Vec<f64>,
        covers: Vec<Vec<usize>>,
    },
    Modular {
        theta: Vec<f64>,
    },
}

#[derive(Serialize, Deserialize)]
struct ModelRepr {
    #[serde(flatten)]
    params: ModelParams,
    n: usize,
}

impl Serialize for SetFunctionModel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let n = self.ground_set_size();
        let params = match self.clone() {
            SetFunctionModel::Table { values, .. } => ModelParams::Table { values },
            SetFunctionModel::Cut { weights, directed } => ModelParams::Cut { weights, directed },
            SetFunctionModel::Ising { field, coupling } => ModelParams::Ising { field, coupling },
            SetFunctionModel::Flid { weights, utility } => ModelParams::Flid { weights, utility },
            SetFunctionModel::SetCover {
                credits, covers, ..
            } => ModelParams::Setcover { credits, covers },
            SetFunctionModel::Modular { theta } => ModelParams::Modular { theta },
        };
        ModelRepr { params, n }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SetFunctionModel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as DeError;
        let repr = ModelRepr::deserialize(d)?;
        let model = match repr.params {
            ModelParams::Table { values } => SetFunctionModel::Table { n: repr.n, values },
            ModelParams::Cut { weights, directed } => SetFunctionModel::Cut { weights, directed },
            ModelParams::Ising { field, coupling } => SetFunctionModel::Ising { field, coupling },
            ModelParams::Flid { weights, utility } => SetFunctionModel::Flid { weights, utility },
            ModelParams::Setcover { credits, covers } => SetFunctionModel::SetCover {
                n: repr.n,
                credits,
                covers,
            },
            ModelParams::Modular { theta } => SetFunctionModel::Modular { theta },
        };
        if model.ground_set_size() != repr.n {
            return Err(D::Error::custom(format!(
                "declared n = {} does not match the parameters (n = {})",
                repr.n,
                model.ground_set_size()
            )));
        }
        model.validate().map_err(D::Error::custom)?;
        Ok(model)
    }
}
