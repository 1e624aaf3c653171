//! Tree sources shared by every subcommand.

use std::fs;
use std::path::PathBuf;

use clap::Args;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qdist::tree::MAX_ENUMERATION_ORDER;
use qdist::{enumerate_trees, WeightedTree};

/// Default cap for `--exhaustive`; `--allow-large` lifts it to
/// [`MAX_ENUMERATION_ORDER`].
pub const DEFAULT_EXHAUSTIVE_CAP: usize = 7;

#[derive(Debug, Args)]
#[group(id = "source", required = true, multiple = false)]
pub struct SourceArgs {
    /// Tree file, text or JSON form.
    #[arg(long, value_name = "FILE")]
    pub tree: Option<PathBuf>,
    /// Prüfer sequence, space separated; n is its length plus two.
    #[arg(long, value_name = "SEQ", allow_hyphen_values = true)]
    pub prufer: Option<String>,
    /// Random tree on N vertices.
    #[arg(long, value_name = "N")]
    pub random: Option<usize>,
    /// Path v1 - v2 - ... - vN.
    #[arg(long, value_name = "N")]
    pub path: Option<usize>,
    /// Star centered at vN.
    #[arg(long, value_name = "N")]
    pub star: Option<usize>,
    /// Every labeled tree on N vertices.
    #[arg(long, value_name = "N")]
    pub exhaustive: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ShapeArgs {
    /// Edge weights, space separated. Defaults to all ones; a single value
    /// is applied to every edge.
    #[arg(long, value_name = "W...", allow_hyphen_values = true)]
    pub weights: Option<String>,
    /// Largest weight drawn by `--random`.
    #[arg(long, value_name = "W", default_value_t = 4)]
    pub max_weight: u64,
    #[arg(long, value_name = "S", default_value_t = 0)]
    pub seed: u64,
    /// Permit `--exhaustive` up to n = 8.
    #[arg(long)]
    pub allow_large: bool,
}

#[derive(Debug)]
pub enum SourceError {
    Usage(String),
    Input(String),
}

impl std::fmt::Display for SourceError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SourceError::Usage(m) | SourceError::Input(m) => f.write_str(m),
        }
    }
}

fn input<E: std::fmt::Display>(e: E) -> SourceError {
    SourceError::Input(e.to_string())
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>, SourceError>
where
    T::Err: std::fmt::Display,
{
    text.split_whitespace()
        .map(|s| {
            s.parse::<T>()
                .map_err(|e| SourceError::Input(format!("{what} {s:?}: {e}")))
        })
        .collect()
}

impl ShapeArgs {
    /// Weights for a tree with `edges` edges.
    pub fn weights_for(&self, edges: usize) -> Result<Vec<u64>, SourceError> {
        let given: Vec<i64> = match &self.weights {
            None => return Ok(vec![1; edges]),
            Some(text) => parse_list(text, "weight")?,
        };
        if let Some(w) = given.iter().find(|&&w| w < 1) {
            return Err(SourceError::Input(format!(
                "weights must be positive, got {w}"
            )));
        }
        let given: Vec<u64> = given.into_iter().map(|w| w as u64).collect();
        match given.len() {
            1 => Ok(vec![given[0]; edges]),
            len if len == edges => Ok(given),
            len => Err(SourceError::Input(format!(
                "expected {edges} weights, got {len}"
            ))),
        }
    }

    fn uniform_weight(&self) -> Result<u64, SourceError> {
        let w = self.weights_for(1)?;
        Ok(w[0])
    }

    fn exhaustive_cap(&self) -> usize {
        if self.allow_large {
            MAX_ENUMERATION_ORDER
        } else {
            DEFAULT_EXHAUSTIVE_CAP
        }
    }
}

/// How randomized sweeps draw trees.
#[derive(Debug, Clone, Copy)]
pub struct Sampling {
    pub trials: Option<usize>,
    pub n_max: Option<usize>,
}

impl SourceArgs {
    pub fn is_exhaustive(&self) -> bool {
        self.exhaustive.is_some()
    }

    /// The single tree named by the source. Exhaustive sources are rejected.
    pub fn single(&self, shape: &ShapeArgs) -> Result<WeightedTree, SourceError> {
        if let Some(file) = &self.tree {
            let text = fs::read_to_string(file)
                .map_err(|e| SourceError::Input(format!("{}: {e}", file.display())))?;
            return text.parse().map_err(input);
        }
        if let Some(seq) = &self.prufer {
            let seq: Vec<usize> = parse_list(seq, "Prüfer entry")?;
            let n = seq.len() + 2;
            return WeightedTree::from_prufer(&seq, n, &shape.weights_for(n - 1)?).map_err(input);
        }
        if let Some(n) = self.random {
            return WeightedTree::random(n, shape.max_weight, shape.seed).map_err(input);
        }
        if let Some(n) = self.path {
            return WeightedTree::path(n, &shape.weights_for(n.saturating_sub(1))?).map_err(input);
        }
        if let Some(n) = self.star {
            return WeightedTree::star(n, &shape.weights_for(n.saturating_sub(1))?).map_err(input);
        }
        Err(SourceError::Usage(
            "--exhaustive is only accepted by verify and enumerate".into(),
        ))
    }

    /// Every tree named by the source, in a reproducible order.
    ///
    /// With `--random`, `n_max` switches the value of `--random` from a
    /// vertex count to a tree count, each order drawn from `2..=n_max`;
    /// otherwise `trials` trees on `--random` vertices are drawn.
    pub fn many(
        &self,
        shape: &ShapeArgs,
        sampling: Sampling,
    ) -> Result<Vec<WeightedTree>, SourceError> {
        if let Some(n) = self.exhaustive {
            let cap = shape.exhaustive_cap();
            if n > cap {
                let hint = if cap < MAX_ENUMERATION_ORDER {
                    " (see --allow-large)"
                } else {
                    ""
                };
                return Err(SourceError::Usage(format!(
                    "--exhaustive is limited to n <= {cap}{hint}"
                )));
            }
            if n > DEFAULT_EXHAUSTIVE_CAP {
                eprintln!(
                    "warning: enumerating {} trees on {n} vertices",
                    n.pow(n as u32 - 2)
                );
            }
            return Ok(enumerate_trees(n, shape.uniform_weight()?)
                .map_err(input)?
                .collect());
        }
        if let Some(value) = self.random {
            if sampling.trials == Some(0) {
                return Err(SourceError::Usage("--trials must be at least 1".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(shape.seed);
            let draw = |n: usize, rng: &mut ChaCha8Rng| {
                WeightedTree::random_with(n, shape.max_weight, rng).map_err(input)
            };
            return match sampling.n_max {
                Some(n_max) => {
                    if n_max < 2 {
                        return Err(SourceError::Usage("--n-max must be at least 2".into()));
                    }
                    if sampling.trials.is_some() {
                        return Err(SourceError::Usage(
                            "with --n-max, --random gives the tree count; drop --trials".into(),
                        ));
                    }
                    if value == 0 {
                        return Err(SourceError::Usage("tree count must be at least 1".into()));
                    }
                    (0..value)
                        .map(|_| {
                            let n = rng.gen_range(2..=n_max);
                            draw(n, &mut rng)
                        })
                        .collect()
                }
                None => (0..sampling.trials.unwrap_or(1))
                    .map(|_| draw(value, &mut rng))
                    .collect(),
            };
        }
        if sampling.n_max.is_some() {
            return Err(SourceError::Usage("--n-max requires --random".into()));
        }
        Ok(vec![self.single(shape)?])
    }
}
