use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use super::error::PerfFileError;

/// Running mean and variance of a duration series (Welford).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RunningStats {
    pub count: u64,
    /// Mean in nanoseconds.
    pub mean: f64,
    /// Sum of squared deviations from the mean, in ns².
    pub m2: f64,
}

impl RunningStats {
    pub fn push(&mut self, sample_ns: f64) {
        self.count += 1;
        let delta = sample_ns - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (sample_ns - self.mean);
    }

    /// Combines two partial summaries (Chan et al. parallel update).
    pub fn merge(&self, other: &RunningStats) -> RunningStats {
        if other.count == 0 {
            return *self;
        }
        if self.count == 0 {
            return *other;
        }
        let n = (self.count + other.count) as f64;
        let (na, nb) = (self.count as f64, other.count as f64);
        let delta = other.mean - self.mean;
        RunningStats {
            count: self.count + other.count,
            mean: self.mean + delta * nb / n,
            m2: self.m2 + other.m2 + delta * delta * na * nb / n,
        }
    }

    pub fn variance(&self) -> Option<f64> {
        (self.count >= 2).then(|| self.m2 / (self.count - 1) as f64)
    }
}

/// Footprint bucket: `floor(log2(max(bytes, 1)))`.
pub fn footprint_bucket(bytes: usize) -> u32 {
    bytes.max(1).ilog2()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PerfKey {
    pub interface: String,
    pub function_name: String,
    pub bucket: u32,
}

impl PerfKey {
    pub fn new(interface: &str, function_name: &str, bucket: u32) -> Self {
        PerfKey {
            interface: interface.to_string(),
            function_name: function_name.to_string(),
            bucket,
        }
    }
}

/// Execution-time history per (interface, variant, footprint bucket).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PerfModel {
    entries: BTreeMap<PerfKey, RunningStats>,
}

impl PerfModel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, key: PerfKey, sample_ns: f64) {
        self.entries.entry(key).or_default().push(sample_ns);
    }

    pub fn get(&self, key: &PerfKey) -> Option<&RunningStats> {
        self.entries.get(key)
    }

    pub fn count(&self, key: &PerfKey) -> u64 {
        self.entries.get(key).map_or(0, |s| s.count)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PerfKey, &RunningStats)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn merge_entry(&mut self, key: PerfKey, stats: RunningStats) {
        let slot = self.entries.entry(key).or_default();
        *slot = slot.merge(&stats);
    }

    pub fn merge(&mut self, other: &PerfModel) {
        for (k, s) in &other.entries {
            self.merge_entry(k.clone(), *s);
        }
    }

    /// One line per entry: `<interface> <function> <bucket> <count> <mean_ns> <m2>`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, s) in &self.entries {
            writeln!(
                out,
                "{} {} {} {} {:?} {:?}",
                k.interface, k.function_name, k.bucket, s.count, s.mean, s.m2
            )
            .unwrap();
        }
        out
    }

    pub fn from_text(text: &str) -> Result<PerfModel, PerfFileError> {
        let mut model = PerfModel::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let err = |message: String| PerfFileError::Format {
                line: line_no,
                message,
            };
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 6 {
                return Err(err(format!("expected 6 fields, found {}", fields.len())));
            }
            let bucket: u32 = fields[2]
                .parse()
                .map_err(|_| err(format!("bad bucket '{}'", fields[2])))?;
            let count: u64 = fields[3]
                .parse()
                .map_err(|_| err(format!("bad count '{}'", fields[3])))?;
            let mean: f64 = fields[4]
                .parse()
                .map_err(|_| err(format!("bad mean '{}'", fields[4])))?;
            let m2: f64 = fields[5]
                .parse()
                .map_err(|_| err(format!("bad m2 '{}'", fields[5])))?;
            if !mean.is_finite() || mean < 0.0 || !m2.is_finite() || m2 < 0.0 {
                return Err(err("mean and m2 must be finite and non-negative".into()));
            }
            model.merge_entry(
                PerfKey::new(fields[0], fields[1], bucket),
                RunningStats { count, mean, m2 },
            );
        }
        Ok(model)
    }

    pub fn save(&self, path: &Path) -> Result<(), PerfFileError> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<PerfModel, PerfFileError> {
        let text = std::fs::read_to_string(path)?;
        PerfModel::from_text(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_samples() {
        let mut s = RunningStats::default();
        s.push(10e6);
        s.push(20e6);
        assert_eq!(s.count, 2);
        assert!((s.mean - 15e6).abs() < 1e-6);
        // 50 ms² expressed in ns²
        assert!((s.m2 - 50e12).abs() < 1.0);
    }

    #[test]
    fn merge_matches_sequential() {
        let xs = [3.0, 9.0, 1.5, 7.25, 100.0, 0.5];
        let mut all = RunningStats::default();
        xs.iter().for_each(|&x| all.push(x));
        let (mut a, mut b) = (RunningStats::default(), RunningStats::default());
        xs[..2].iter().for_each(|&x| a.push(x));
        xs[2..].iter().for_each(|&x| b.push(x));
        let m = a.merge(&b);
        assert_eq!(m.count, all.count);
        assert!((m.mean - all.mean).abs() < 1e-9);
        assert!((m.m2 - all.m2).abs() < 1e-9);
    }

    #[test]
    fn buckets() {
        assert_eq!(footprint_bucket(0), 0);
        assert_eq!(footprint_bucket(1), 0);
        assert_eq!(footprint_bucket(1023), 9);
        assert_eq!(footprint_bucket(1024), 10);
    }

    #[test]
    fn text_round_trip() {
        let mut m = PerfModel::new();
        m.record(PerfKey::new("sort", "sort_omp", 12), 1234.5);
        m.record(PerfKey::new("sort", "sort_omp", 12), 99.0);
        m.record(PerfKey::new("mmul", "mmul_cuda", 20), 7.0);
        assert_eq!(PerfModel::from_text(&m.to_text()).unwrap(), m);
    }

    #[test]
    fn malformed_line_reports_number() {
        let err = PerfModel::from_text("a b 1 1 1.0 0.0\na b c\n").unwrap_err();
        assert!(matches!(err, PerfFileError::Format { line: 2, .. }));
    }
}
