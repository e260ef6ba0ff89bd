use std::fmt::Write as _;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetConfig {
    pub seed: u64,
    pub n_train: usize,
    pub n_test: usize,
    pub input_dim: usize,
    pub classes: usize,
}

impl Default for DatasetConfig {
    fn default() -> Self {
        Self { seed: 0, n_train: 600, n_test: 200, input_dim: 16, classes: 3 }
    }
}

/// Row-major samples with integer labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Split {
    pub features: Vec<f64>,
    pub labels: Vec<usize>,
}

impl Split {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn sample(&self, i: usize) -> &[f64] {
        let dim = self.features.len() / self.labels.len();
        &self.features[i * dim..(i + 1) * dim]
    }
}

/// Gaussian-blob classification data.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub config: DatasetConfig,
    pub train: Split,
    pub test: Split,
}

impl Dataset {
    pub fn input_dim(&self) -> usize {
        self.config.input_dim
    }

    pub fn classes(&self) -> usize {
        self.config.classes
    }

    /// CSV `split,label,x0,...`; regenerable from the seed, kept for inspection.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("split,label");
        for j in 0..self.input_dim() {
            let _ = write!(out, ",x{j}");
        }
        out.push('\n');
        for (name, split) in [("train", &self.train), ("test", &self.test)] {
            for i in 0..split.len() {
                let _ = write!(out, "{name},{}", split.labels[i]);
                for v in split.sample(i) {
                    let _ = write!(out, ",{v}");
                }
                out.push('\n');
            }
        }
        out
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }
}

fn draw_split(
    rng: &mut ChaCha8Rng,
    centers: &[Vec<f64>],
    n: usize,
) -> Split {
    let dim = centers[0].len();
    let mut order: Vec<usize> = (0..n).map(|i| i % centers.len()).collect();
    order.shuffle(rng);
    let mut features = Vec::with_capacity(n * dim);
    for &label in &order {
        for c in &centers[label] {
            let noise: f64 = StandardNormal.sample(rng);
            features.push(c + noise);
        }
    }
    Split { features, labels: order }
}

/// Class `c` is centred at a seeded random unit direction scaled by 3, with
/// isotropic unit-variance noise. Labels are balanced to within one sample.
pub fn make_dataset(cfg: &DatasetConfig) -> Result<Dataset> {
    if cfg.classes < 2 || cfg.input_dim == 0 || cfg.n_train < cfg.classes || cfg.n_test < cfg.classes {
        return Err(Error::Param(format!("dataset sizes must cover every class: {cfg:?}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let centers: Vec<Vec<f64>> = (0..cfg.classes)
        .map(|_| {
            let v: Vec<f64> = (0..cfg.input_dim).map(|_| StandardNormal.sample(&mut rng)).collect();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.into_iter().map(|x| 3.0 * x / norm).collect()
        })
        .collect();
    let train = draw_split(&mut rng, &centers, cfg.n_train);
    let test = draw_split(&mut rng, &centers, cfg.n_test);
    Ok(Dataset { config: *cfg, train, test })
}
