use serde::{Deserialize, Serialize};

use super::pmf::{conditional_mutual_information, Pmf, ZERO_MASS};
use super::InfoError;

/// Per-(x, x3) normalization tolerance applied when loading channels.
pub const CHANNEL_TOL: f64 = 1e-9;

// Axis positions inside the (X, X3, Y1, Y2, Y3) joint.
pub const VAR_X: usize = 0;
pub const VAR_X3: usize = 1;
pub const VAR_Y1: usize = 2;
pub const VAR_Y2: usize = 3;
pub const VAR_Y3: usize = 4;

/// Alphabet sizes of the five channel variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alphabets {
    pub x: usize,
    pub x3: usize,
    pub y1: usize,
    pub y2: usize,
    pub y3: usize,
}

impl Alphabets {
    pub fn binary() -> Self {
        Self {
            x: 2,
            x3: 2,
            y1: 2,
            y2: 2,
            y3: 2,
        }
    }

    pub fn outputs(&self) -> usize {
        self.y1 * self.y2 * self.y3
    }

    pub fn inputs(&self) -> usize {
        self.x * self.x3
    }

    /// Size of the receiver `k` output alphabet (1, 2 or 3).
    pub fn output(&self, k: Output) -> usize {
        match k {
            Output::Y1 => self.y1,
            Output::Y2 => self.y2,
            Output::Y3 => self.y3,
        }
    }
}

/// Selects one channel output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Output {
    Y1,
    Y2,
    Y3,
}

/// A row-stochastic matrix p(col | row).
#[derive(Debug, Clone, PartialEq)]
pub struct CondPmf {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl CondPmf {
    pub fn new(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self, InfoError> {
        if rows * cols != values.len() || rows == 0 || cols == 0 {
            return Err(InfoError::ShapeMismatch {
                expected: rows * cols,
                got: values.len(),
            });
        }
        for (row, slice) in values.chunks(cols).enumerate() {
            if let Some(offset) = slice.iter().position(|&v| v.is_nan() || v < -ZERO_MASS) {
                return Err(InfoError::NegativeMass {
                    index: row * cols + offset,
                    value: slice[offset],
                });
            }
            let sum: f64 = slice.iter().sum();
            if (sum - 1.0).abs() > CHANNEL_TOL {
                return Err(InfoError::NotNormalized { sum });
            }
        }
        Ok(Self { rows, cols, values })
    }

    /// Every row equal to `row`.
    pub fn constant_rows(rows: usize, row: &[f64]) -> Result<Self, InfoError> {
        Self::new(rows, row.len(), row.repeat(rows))
    }

    /// Row `r` is the point mass on `map(r)`.
    pub fn deterministic(rows: usize, cols: usize, map: impl Fn(usize) -> usize) -> Self {
        let mut values = vec![0.0; rows * cols];
        for r in 0..rows {
            values[r * cols + map(r)] = 1.0;
        }
        Self { rows, cols, values }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.values[r * self.cols..(r + 1) * self.cols]
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.values[r * self.cols + c]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// JSON shape of a channel file; `pmf` is row-major over (x, x3, y1, y2, y3).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChannelFile {
    pub x: usize,
    pub x3: usize,
    pub y1: usize,
    pub y2: usize,
    pub y3: usize,
    pub pmf: Vec<f64>,
}

/// A discrete memoryless relay broadcast channel p(y1, y2, y3 | x, x3).
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteChannel {
    sizes: Alphabets,
    transition: Vec<f64>,
}

impl DiscreteChannel {
    pub fn new(sizes: Alphabets, transition: Vec<f64>) -> Result<Self, InfoError> {
        let outputs = sizes.outputs();
        let expected = sizes.inputs() * outputs;
        if expected != transition.len() || expected == 0 {
            return Err(InfoError::ShapeMismatch {
                expected,
                got: transition.len(),
            });
        }
        CondPmf::new(sizes.inputs(), outputs, transition.clone())?;
        Ok(Self { sizes, transition })
    }

    /// Builds the channel from a closure p(y1, y2, y3 | x, x3).
    pub fn from_fn(
        sizes: Alphabets,
        law: impl Fn(usize, usize, usize, usize, usize) -> f64,
    ) -> Result<Self, InfoError> {
        let mut transition = Vec::with_capacity(sizes.inputs() * sizes.outputs());
        for x in 0..sizes.x {
            for x3 in 0..sizes.x3 {
                for y1 in 0..sizes.y1 {
                    for y2 in 0..sizes.y2 {
                        for y3 in 0..sizes.y3 {
                            transition.push(law(x, x3, y1, y2, y3));
                        }
                    }
                }
            }
        }
        Self::new(sizes, transition)
    }

    pub fn from_json(text: &str) -> Result<Self, InfoError> {
        let file: ChannelFile =
            serde_json::from_str(text).map_err(|e| InfoError::Parse(e.to_string()))?;
        file.try_into()
    }

    pub fn to_file(&self) -> ChannelFile {
        ChannelFile {
            x: self.sizes.x,
            x3: self.sizes.x3,
            y1: self.sizes.y1,
            y2: self.sizes.y2,
            y3: self.sizes.y3,
            pmf: self.transition.clone(),
        }
    }

    pub fn sizes(&self) -> Alphabets {
        self.sizes
    }

    pub fn prob(&self, x: usize, x3: usize, y1: usize, y2: usize, y3: usize) -> f64 {
        let s = self.sizes;
        let input = x * s.x3 + x3;
        self.transition[((input * s.y1 + y1) * s.y2 + y2) * s.y3 + y3]
    }

    /// The output law p(y1, y2, y3 | x, x3) as a flat slice.
    pub fn slice(&self, x: usize, x3: usize) -> &[f64] {
        let outputs = self.sizes.outputs();
        let input = x * self.sizes.x3 + x3;
        &self.transition[input * outputs..(input + 1) * outputs]
    }

    /// p(y_k | x, x3) laid out as rows indexed by x·|X3| + x3.
    pub fn output_marginal(&self, k: Output) -> CondPmf {
        let s = self.sizes;
        let cols = s.output(k);
        let mut values = vec![0.0; s.inputs() * cols];
        for x in 0..s.x {
            for x3 in 0..s.x3 {
                let row = x * s.x3 + x3;
                for y1 in 0..s.y1 {
                    for y2 in 0..s.y2 {
                        for y3 in 0..s.y3 {
                            let y = match k {
                                Output::Y1 => y1,
                                Output::Y2 => y2,
                                Output::Y3 => y3,
                            };
                            values[row * cols + y] += self.prob(x, x3, y1, y2, y3);
                        }
                    }
                }
            }
        }
        CondPmf {
            rows: s.inputs(),
            cols,
            values,
        }
    }

    /// The channel with the relay input pinned to `x3`, as p(y1,y2,y3|x).
    pub fn relay_slice(&self, x3: usize) -> Result<CondPmf, InfoError> {
        if x3 >= self.sizes.x3 {
            return Err(InfoError::BadSymbol {
                symbol: x3,
                alphabet: self.sizes.x3,
            });
        }
        let values = (0..self.sizes.x)
            .flat_map(|x| self.slice(x, x3).iter().copied())
            .collect();
        Ok(CondPmf {
            rows: self.sizes.x,
            cols: self.sizes.outputs(),
            values,
        })
    }

    /// Joint p(x, x3) · p(y1, y2, y3 | x, x3) over (X, X3, Y1, Y2, Y3).
    pub fn joint_with_input(&self, input: &Pmf) -> Result<Pmf, InfoError> {
        let s = self.sizes;
        if input.shape() != [s.x, s.x3] {
            return Err(InfoError::DimensionMismatch(format!(
                "input pmf shape {:?}, channel inputs [{}, {}]",
                input.shape(),
                s.x,
                s.x3
            )));
        }
        let outputs = s.outputs();
        let mut values = Vec::with_capacity(s.inputs() * outputs);
        for (row, &p) in input.values().iter().enumerate() {
            values.extend(
                self.transition[row * outputs..(row + 1) * outputs]
                    .iter()
                    .map(|&w| p * w),
            );
        }
        Ok(Pmf::from_parts_unchecked(
            values,
            vec![s.x, s.x3, s.y1, s.y2, s.y3],
        ))
    }
}

impl TryFrom<ChannelFile> for DiscreteChannel {
    type Error = InfoError;

    fn try_from(file: ChannelFile) -> Result<Self, Self::Error> {
        let sizes = Alphabets {
            x: file.x,
            x3: file.x3,
            y1: file.y1,
            y2: file.y2,
            y3: file.y3,
        };
        Self::new(sizes, file.pmf)
    }
}

/// Which degradation order a channel satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DegradationType {
    TypeI,
    TypeII,
    TypeIII,
    None,
}

impl std::fmt::Display for DegradationType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Self::TypeI => "TypeI",
            Self::TypeII => "TypeII",
            Self::TypeIII => "TypeIII",
            Self::None => "None",
        };
        f.write_str(name)
    }
}

/// Result of [`classify_dm_degradation`]: the tag plus, for each type, the
/// two conditional-mutual-information deviations of its Markov chain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Classification {
    pub tag: DegradationType,
    pub deviations: [[f64; 2]; 3],
    pub tol: f64,
}

/// Deviation pairs for the three chain orders, all conditioned on X3:
///
/// - Type I   X − (X3,Y3) − Y1 − Y2
/// - Type II  X − (X3,Y1) − Y3 − Y2
/// - Type III X − (X3,Y1) − Y2 − Y3
pub fn chain_deviations(
    channel: &DiscreteChannel,
    input: &Pmf,
) -> Result<[[f64; 2]; 3], InfoError> {
    let s = channel.sizes();
    if input.shape() != [s.x, s.x3] {
        return Err(InfoError::DimensionMismatch(format!(
            "input pmf shape {:?}, channel inputs [{}, {}]",
            input.shape(),
            s.x,
            s.x3
        )));
    }
    if let Some(row) = input.values().iter().position(|&p| p <= ZERO_MASS) {
        return Err(InfoError::ZeroSupport {
            x: row / s.x3,
            x3: row % s.x3,
        });
    }
    let joint = channel.joint_with_input(input)?;
    let cmi = |a: &[usize], b: &[usize], c: &[usize]| conditional_mutual_information(&joint, a, b, c);
    // (first, second) link of the chain; e.g. Type I: Y1 ⟂ X | X3,Y3 then Y2 ⟂ X,Y3 | X3,Y1.
    let chain = |mid: usize, next: usize, last: usize| -> Result<[f64; 2], InfoError> {
        Ok([
            cmi(&[next], &[VAR_X], &[VAR_X3, mid])?,
            cmi(&[last], &[VAR_X, mid], &[VAR_X3, next])?,
        ])
    };
    Ok([
        chain(VAR_Y3, VAR_Y1, VAR_Y2)?,
        chain(VAR_Y1, VAR_Y3, VAR_Y2)?,
        chain(VAR_Y1, VAR_Y2, VAR_Y3)?,
    ])
}

/// Classifies a channel by testing each chain under a full-support input.
/// Ties resolve in the order I, II, III.
pub fn classify_dm_degradation(
    channel: &DiscreteChannel,
    input: &Pmf,
    tol: f64,
) -> Result<Classification, InfoError> {
    let deviations = chain_deviations(channel, input)?;
    let tags = [
        DegradationType::TypeI,
        DegradationType::TypeII,
        DegradationType::TypeIII,
    ];
    let tag = tags
        .iter()
        .zip(&deviations)
        .find(|(_, d)| d[0] <= tol && d[1] <= tol)
        .map(|(t, _)| *t)
        .unwrap_or(DegradationType::None);
    Ok(Classification {
        tag,
        deviations,
        tol,
    })
}
