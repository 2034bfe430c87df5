use std::collections::HashMap;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LpError {
    #[error("non-finite coefficient {value} in {place}")]
    NonFinite { place: String, value: f64 },
    #[error("variable index {0} out of range")]
    BadVarIndex(usize),
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("empty bound range on `{name}`: lower {lower} > upper {upper}")]
    EmptyBounds { name: String, lower: f64, upper: f64 },
    #[error("iteration limit {limit} reached after {iterations} iterations (phase {phase})")]
    IterationLimit {
        limit: usize,
        iterations: usize,
        phase: u8,
    },
    #[error("singular basis during refactorization (pivot {pivot:.3e} at step {step})")]
    SingularBasis { step: usize, pivot: f64 },
    #[error("mps parse error at line {line}: {msg}")]
    MpsParse { line: usize, msg: String },
    #[error("mps export error: {0}")]
    MpsExport(String),
    #[error("solution import error at line {line}: {msg}")]
    SolutionImport { line: usize, msg: String },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Handle to a column of a [`StandardFormLp`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VarId(pub(crate) usize);

impl VarId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Row {
    pub name: String,
    pub coeffs: Vec<(usize, f64)>,
    pub rhs: f64,
}

/// `min cᵀx  s.t.  A_eq x = b_eq,  A_ub x ≤ b_ub,  l ≤ x ≤ u`.
///
/// Rows and columns are named; names must be unique within their kind.
/// Coefficients are stored as sparse triplets in insertion order, which the
/// solver and the MPS writer both preserve, so identical build sequences
/// yield identical files and identical pivot paths.
#[derive(Debug, Clone, Default)]
pub struct StandardFormLp {
    pub(crate) costs: Vec<f64>,
    pub(crate) lower: Vec<f64>,
    pub(crate) upper: Vec<f64>,
    pub(crate) col_names: Vec<String>,
    pub(crate) eq_rows: Vec<Row>,
    pub(crate) ub_rows: Vec<Row>,
    pub(crate) name: String,
    col_index: HashMap<String, usize>,
}

impl StandardFormLp {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            ..Self::default()
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn num_vars(&self) -> usize {
        self.costs.len()
    }

    pub fn num_eq_rows(&self) -> usize {
        self.eq_rows.len()
    }

    pub fn num_ub_rows(&self) -> usize {
        self.ub_rows.len()
    }

    pub fn num_nonzeros(&self) -> usize {
        self.eq_rows
            .iter()
            .chain(self.ub_rows.iter())
            .map(|r| r.coeffs.len())
            .sum()
    }

    pub fn col_name(&self, v: VarId) -> &str {
        &self.col_names[v.0]
    }

    pub fn var_by_name(&self, name: &str) -> Option<VarId> {
        self.col_index.get(name).copied().map(VarId)
    }

    pub fn cost(&self, v: VarId) -> f64 {
        self.costs[v.0]
    }

    pub fn bounds(&self, v: VarId) -> (f64, f64) {
        (self.lower[v.0], self.upper[v.0])
    }

    pub fn add_var(
        &mut self,
        name: impl Into<String>,
        cost: f64,
        lower: f64,
        upper: f64,
    ) -> Result<VarId, LpError> {
        let name = name.into();
        if !cost.is_finite() {
            return Err(LpError::NonFinite {
                place: format!("cost of `{name}`"),
                value: cost,
            });
        }
        if lower.is_nan() || upper.is_nan() {
            return Err(LpError::NonFinite {
                place: format!("bounds of `{name}`"),
                value: f64::NAN,
            });
        }
        if lower > upper {
            return Err(LpError::EmptyBounds { name, lower, upper });
        }
        if self.col_index.contains_key(&name) {
            return Err(LpError::DuplicateName(name));
        }
        let id = self.costs.len();
        self.col_index.insert(name.clone(), id);
        self.col_names.push(name);
        self.costs.push(cost);
        self.lower.push(lower);
        self.upper.push(upper);
        Ok(VarId(id))
    }

    /// Adds `Σ coeffs·x = rhs`.
    pub fn add_eq(
        &mut self,
        name: impl Into<String>,
        coeffs: &[(VarId, f64)],
        rhs: f64,
    ) -> Result<(), LpError> {
        let row = self.build_row(name.into(), coeffs, rhs)?;
        self.eq_rows.push(row);
        Ok(())
    }

    /// Adds `Σ coeffs·x ≤ rhs`.
    pub fn add_ub(
        &mut self,
        name: impl Into<String>,
        coeffs: &[(VarId, f64)],
        rhs: f64,
    ) -> Result<(), LpError> {
        let row = self.build_row(name.into(), coeffs, rhs)?;
        self.ub_rows.push(row);
        Ok(())
    }

    fn build_row(
        &self,
        name: String,
        coeffs: &[(VarId, f64)],
        rhs: f64,
    ) -> Result<Row, LpError> {
        if !rhs.is_finite() {
            return Err(LpError::NonFinite {
                place: format!("rhs of row `{name}`"),
                value: rhs,
            });
        }
        let mut out = Vec::with_capacity(coeffs.len());
        for &(v, c) in coeffs {
            if v.0 >= self.costs.len() {
                return Err(LpError::BadVarIndex(v.0));
            }
            if !c.is_finite() {
                return Err(LpError::NonFinite {
                    place: format!("coefficient of `{}` in row `{name}`", self.col_names[v.0]),
                    value: c,
                });
            }
            if c != 0.0 {
                out.push((v.0, c));
            }
        }
        Ok(Row {
            name,
            coeffs: out,
            rhs,
        })
    }

    pub(crate) fn eq_row_names(&self) -> impl Iterator<Item = &str> {
        self.eq_rows.iter().map(|r| r.name.as_str())
    }

    pub(crate) fn ub_row_names(&self) -> impl Iterator<Item = &str> {
        self.ub_rows.iter().map(|r| r.name.as_str())
    }

    /// Objective value of a given point (no feasibility check).
    pub fn objective_at(&self, x: &[f64]) -> f64 {
        self.costs.iter().zip(x).map(|(c, v)| c * v).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Optimal point of a solved LP.
///
/// `duals_eq[i]` / `duals_ub[i]` are the simplex multipliers of the i-th
/// equality / inequality row (for a minimization, inequality duals are ≤ 0
/// at optimality). `reduced_costs[j] = c_j − yᵀA_j`. On `Infeasible` or
/// `Unbounded` all vectors are empty and `objective` is NaN.
#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: SolveStatus,
    pub objective: f64,
    pub x: Vec<f64>,
    pub duals_eq: Vec<f64>,
    pub duals_ub: Vec<f64>,
    pub reduced_costs: Vec<f64>,
    pub iterations: usize,
}

impl LpSolution {
    pub(crate) fn non_optimal(status: SolveStatus, iterations: usize) -> Self {
        Self {
            status,
            objective: f64::NAN,
            x: Vec::new(),
            duals_eq: Vec::new(),
            duals_ub: Vec::new(),
            reduced_costs: Vec::new(),
            iterations,
        }
    }
}
