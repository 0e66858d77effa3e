//! Pipeline configuration: defaults, the flat `key = value` config
//! file, and flag overrides. Precedence is flag > file > default.

use std::path::Path;

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub eps: f64,
    pub min_samples: usize,
    pub edge_threshold: usize,
    pub jaccard_threshold: f64,
    pub soundex_threshold: f64,
    pub k: usize,
    pub use_meaning: bool,
    pub test_fraction: f64,
    pub seed: u64,
    pub max_iters: usize,
    pub tol: f64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            eps: 0.0375,
            min_samples: 10,
            edge_threshold: 2,
            jaccard_threshold: 0.4,
            soundex_threshold: 0.8,
            k: 5,
            use_meaning: true,
            test_fraction: 0.2,
            seed: 42,
            max_iters: 10,
            tol: 1e-4,
        }
    }
}

impl PipelineConfig {
    /// Apply `key = value` lines; `#` starts a comment. Unknown keys
    /// are rejected.
    pub fn apply_file(&mut self, text: &str) -> Result<(), String> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected key = value", lineno + 1))?;
            let key = key.trim();
            let value = value.trim();
            let bad = |e: &dyn std::fmt::Display| format!("line {}: {key}: {e}", lineno + 1);
            match key {
                "eps" => self.eps = value.parse().map_err(|e| bad(&e))?,
                "min_samples" => self.min_samples = value.parse().map_err(|e| bad(&e))?,
                "edge_threshold" => self.edge_threshold = value.parse().map_err(|e| bad(&e))?,
                "jaccard_threshold" => {
                    self.jaccard_threshold = value.parse().map_err(|e| bad(&e))?
                }
                "soundex_threshold" => {
                    self.soundex_threshold = value.parse().map_err(|e| bad(&e))?
                }
                "k" => self.k = value.parse().map_err(|e| bad(&e))?,
                "use_meaning" => self.use_meaning = value.parse().map_err(|e| bad(&e))?,
                "test_fraction" => self.test_fraction = value.parse().map_err(|e| bad(&e))?,
                "seed" => self.seed = value.parse().map_err(|e| bad(&e))?,
                "max_iters" => self.max_iters = value.parse().map_err(|e| bad(&e))?,
                "tol" => self.tol = value.parse().map_err(|e| bad(&e))?,
                _ => return Err(format!("line {}: unknown key {key:?}", lineno + 1)),
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.eps.is_nan() || self.eps <= 0.0 {
            return Err(format!("eps must be > 0, got {}", self.eps));
        }
        if self.min_samples < 1 {
            return Err("min_samples must be >= 1".to_string());
        }
        if self.k < 1 {
            return Err("k must be >= 1".to_string());
        }
        if self.max_iters < 1 {
            return Err("max_iters must be >= 1".to_string());
        }
        for (name, v) in [
            ("jaccard_threshold", self.jaccard_threshold),
            ("soundex_threshold", self.soundex_threshold),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(format!("{name} must be in [0, 1], got {v}"));
            }
        }
        if !(self.test_fraction > 0.0 && self.test_fraction < 1.0) {
            return Err(format!(
                "test_fraction must be in (0, 1), got {}",
                self.test_fraction
            ));
        }
        Ok(())
    }

    /// Sidecar serialization for trained models.
    pub fn to_flat(&self) -> String {
        format!(
            "eps = {}\nmin_samples = {}\nedge_threshold = {}\njaccard_threshold = {}\n\
             soundex_threshold = {}\nk = {}\nuse_meaning = {}\ntest_fraction = {}\n\
             seed = {}\nmax_iters = {}\ntol = {}\n",
            self.eps,
            self.min_samples,
            self.edge_threshold,
            self.jaccard_threshold,
            self.soundex_threshold,
            self.k,
            self.use_meaning,
            self.test_fraction,
            self.seed,
            self.max_iters,
            self.tol
        )
    }

    pub fn from_file(path: &Path) -> Result<PipelineConfig, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        let mut cfg = PipelineConfig::default();
        cfg.apply_file(&text)?;
        Ok(cfg)
    }
}
