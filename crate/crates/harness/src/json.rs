//! JSON encodings of matrices, algebras, subspaces, points, certificates and
//! chain reports. Field elements travel as decimal strings.

use grassmann_core::{Algebra, ChainTrace, GoodnessCertificate, IncidencePoint, Matrix, PrimeField, Side, Subspace};
use serde::{Deserialize, Serialize};

use crate::error::{config_err, HarnessError, Result};

fn encode_row(row: &[u64]) -> Vec<String> {
    row.iter().map(u64::to_string).collect()
}

fn parse_entry(field: PrimeField, s: &str) -> Result<u64> {
    let v: u64 = s.trim().parse().map_err(|_| config_err(format!("not a decimal field element: {s:?}")))?;
    if v >= field.modulus() {
        return Err(config_err(format!("entry {v} is not reduced modulo {}", field.modulus())));
    }
    Ok(v)
}

fn parse_row(field: PrimeField, row: &[String]) -> Result<Vec<u64>> {
    row.iter().map(|s| parse_entry(field, s)).collect()
}

/// Builds the field for `p`, enforcing the verification minimum unless `toy`.
pub fn field_for(p: u64, toy: bool) -> Result<PrimeField> {
    let field = if toy { PrimeField::new(p) } else { PrimeField::for_verification(p) };
    field.map_err(|e| match e {
        grassmann_core::Error::PrimeTooSmall { .. } => config_err(e.to_string()),
        e => HarnessError::Input(e),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<String>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &Matrix) -> Self {
        MatrixJson { rows: m.rows(), cols: m.cols(), entries: m.row_iter().map(encode_row).collect() }
    }

    pub fn to_matrix(&self, field: PrimeField) -> Result<Matrix> {
        if self.entries.len() != self.rows || self.entries.iter().any(|r| r.len() != self.cols) {
            return Err(config_err("matrix entries do not match rows x cols"));
        }
        let mut data = Vec::with_capacity(self.rows * self.cols);
        for row in &self.entries {
            data.extend(parse_row(field, row)?);
        }
        Ok(Matrix::from_vec(field, self.rows, self.cols, data))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum AlgebraSpec {
    /// `F_p[t]/(t^n + c_{n-1} t^{n-1} + … + c_0)`.
    Monogenic {
        prime: String,
        poly: Vec<String>,
    },
    Table {
        prime: String,
        unit: Vec<String>,
        structure: Vec<Vec<Vec<String>>>,
    },
}

impl AlgebraSpec {
    pub fn monogenic(field: PrimeField, poly: &[u64]) -> Self {
        AlgebraSpec::Monogenic { prime: field.modulus().to_string(), poly: encode_row(poly) }
    }

    pub fn from_algebra(alg: &Algebra) -> Self {
        let prime = alg.field().modulus().to_string();
        match alg.monogenic() {
            Some(m) => AlgebraSpec::Monogenic { prime, poly: encode_row(m.poly()) },
            None => AlgebraSpec::Table {
                prime,
                unit: encode_row(alg.unit().coords()),
                structure: alg
                    .structure_constants()
                    .iter()
                    .map(|plane| plane.iter().map(|row| encode_row(row)).collect())
                    .collect(),
            },
        }
    }

    pub fn prime(&self) -> Result<u64> {
        let p = match self {
            AlgebraSpec::Monogenic { prime, .. } | AlgebraSpec::Table { prime, .. } => prime,
        };
        p.trim().parse().map_err(|_| config_err(format!("prime is not a decimal integer: {p:?}")))
    }

    pub fn build(&self, toy: bool) -> Result<Algebra> {
        let field = field_for(self.prime()?, toy)?;
        let alg = match self {
            AlgebraSpec::Monogenic { poly, .. } => Algebra::etale_from_poly(field, &parse_row(field, poly)?),
            AlgebraSpec::Table { unit, structure, .. } => {
                let planes = structure
                    .iter()
                    .map(|plane| plane.iter().map(|row| parse_row(field, row)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                Algebra::from_structure_constants(field, &planes, &parse_row(field, unit)?)
            }
        };
        alg.map_err(HarnessError::Input)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceJson {
    pub side: String,
    pub ambient: usize,
    pub basis: Vec<Vec<String>>,
}

impl SubspaceJson {
    pub fn from_subspace(s: &Subspace) -> Self {
        SubspaceJson {
            side: s.side().as_str().to_string(),
            ambient: s.ambient(),
            basis: s.basis().row_iter().map(encode_row).collect(),
        }
    }

    /// Parses and canonicalizes; any spanning set is accepted.
    pub fn to_subspace(&self, field: PrimeField) -> Result<Subspace> {
        let side = match self.side.as_str() {
            "primal" => Side::Primal,
            "dual" => Side::Dual,
            other => return Err(config_err(format!("side must be \"primal\" or \"dual\", got {other:?}"))),
        };
        if self.basis.iter().any(|r| r.len() != self.ambient) {
            return Err(config_err("subspace basis rows must have length `ambient`"));
        }
        let rows = self.basis.iter().map(|r| parse_row(field, r)).collect::<Result<Vec<_>>>()?;
        Ok(Subspace::from_rows(field, side, self.ambient, &rows))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointJson {
    #[serde(rename = "X")]
    pub x: SubspaceJson,
    #[serde(rename = "Y")]
    pub y: SubspaceJson,
    #[serde(rename = "U")]
    pub u: SubspaceJson,
}

impl PointJson {
    pub fn from_point(pt: &IncidencePoint) -> Self {
        PointJson {
            x: SubspaceJson::from_subspace(pt.x()),
            y: SubspaceJson::from_subspace(pt.y()),
            u: SubspaceJson::from_subspace(pt.u()),
        }
    }

    pub fn to_point(&self, alg: &Algebra) -> Result<IncidencePoint> {
        let f = alg.field();
        let (x, y, u) = (self.x.to_subspace(f)?, self.y.to_subspace(f)?, self.u.to_subspace(f)?);
        if x.side() != Side::Dual || y.side() != Side::Primal || u.side() != Side::Primal {
            return Err(config_err("a point needs X dual, Y primal and U primal"));
        }
        IncidencePoint::new(alg, x, y, u).map_err(HarnessError::Input)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub r: usize,
    pub s: usize,
    pub u: usize,
    pub ux_dim: usize,
    pub yu_dim: usize,
    /// RNG stream the certifying point was drawn from.
    pub stream: u64,
    pub point: PointJson,
}

impl CertificateJson {
    pub fn new(cert: &GoodnessCertificate, stream: u64) -> Self {
        CertificateJson {
            r: cert.r,
            s: cert.s,
            u: cert.point.u_dim(),
            ux_dim: cert.ux_dim(),
            yu_dim: cert.yu_dim(),
            stream,
            point: PointJson::from_point(&cert.point),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepJson {
    pub case: String,
    /// `[dim X, dim Y, dim U]` before and after the step.
    pub dims: Vec<usize>,
    pub fiber_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainReport {
    pub n: usize,
    pub r: usize,
    pub gcd: usize,
    pub remainders: Vec<usize>,
    pub quotients: Vec<usize>,
    pub flag_dims: Vec<usize>,
    pub steps: Vec<StepJson>,
    pub total_fiber_dim: usize,
    pub dualized: bool,
    pub input: SubspaceJson,
    pub output: SubspaceJson,
}

impl ChainReport {
    pub fn new(flag: &grassmann_core::GoodFlag, input: &Subspace, output: &Subspace, trace: &ChainTrace) -> Self {
        let chain = flag.chain();
        ChainReport {
            n: chain.n(),
            r: chain.r(),
            gcd: chain.gcd(),
            remainders: chain.remainders().to_vec(),
            quotients: chain.quotients().to_vec(),
            flag_dims: chain.flag_dims(),
            steps: trace
                .steps
                .iter()
                .map(|st| StepJson {
                    case: st.case.as_str().to_string(),
                    dims: vec![
                        st.input.r(),
                        st.input.s(),
                        st.input.u_dim(),
                        st.output.r(),
                        st.output.s(),
                        st.output.u_dim(),
                    ],
                    fiber_dim: st.fiber_dim,
                })
                .collect(),
            total_fiber_dim: trace.total_fiber_dim(),
            dualized: trace.dualized.is_some(),
            input: SubspaceJson::from_subspace(input),
            output: SubspaceJson::from_subspace(output),
        }
    }
}

/// The flag's subspaces, for failure witnesses and CLI output.
pub fn flag_json(flag: &grassmann_core::GoodFlag) -> serde_json::Value {
    serde_json::json!({
        "subspaces": flag.subspaces().iter().map(SubspaceJson::from_subspace).collect::<Vec<_>>(),
        "dual": flag.dual().map(|(u, _)| SubspaceJson::from_subspace(u)),
    })
}
