use std::fmt::Write as _;

/// Pearson r, Spearman ρ, MSE.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelatednessScores {
    pub pearson_r: f64,
    pub spearman_rho: f64,
    pub mse: f64,
}

/// BLEU-1..4, ROUGE-L, CIDEr.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryScores {
    pub bleu: [f64; 4],
    pub rouge_l: f64,
    pub cider: f64,
}

/// Either or both metric tracks, printable as `key=value` lines or as one
/// tab-separated row per track.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MetricReport {
    pub relatedness: Option<RelatednessScores>,
    /// Distance-based ρ, reported beside the regressor track.
    pub distance_rho: Option<f64>,
    pub summary: Option<SummaryScores>,
}

impl MetricReport {
    pub fn key_values(&self) -> String {
        let mut s = String::new();
        if let Some(r) = &self.relatedness {
            let _ = writeln!(s, "pearson_r={:.4}", r.pearson_r);
            let _ = writeln!(s, "spearman_rho={:.4}", r.spearman_rho);
            let _ = writeln!(s, "mse={:.4}", r.mse);
        }
        if let Some(d) = self.distance_rho {
            let _ = writeln!(s, "distance_spearman_rho={d:.4}");
        }
        if let Some(m) = &self.summary {
            for (i, b) in m.bleu.iter().enumerate() {
                let _ = writeln!(s, "bleu_{}={b:.4}", i + 1);
            }
            let _ = writeln!(s, "rouge_l={:.4}", m.rouge_l);
            let _ = writeln!(s, "cider={:.4}", m.cider);
        }
        s
    }

    /// Header and row per present track; relatedness columns are r, ρ, MSE,
    /// summarization columns BLEU-1..4, ROUGE-L, CIDEr.
    pub fn tsv(&self) -> String {
        let mut s = String::new();
        if let Some(r) = &self.relatedness {
            let _ = writeln!(s, "r\trho\tMSE\n{:.4}\t{:.4}\t{:.4}", r.pearson_r, r.spearman_rho, r.mse);
        }
        if let Some(m) = &self.summary {
            let _ = writeln!(
                s,
                "BLEU-1\tBLEU-2\tBLEU-3\tBLEU-4\tROUGE-L\tCIDEr\n{:.4}\t{:.4}\t{:.4}\t{:.4}\t{:.4}\t{:.4}",
                m.bleu[0], m.bleu[1], m.bleu[2], m.bleu[3], m.rouge_l, m.cider
            );
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats() {
        let r = MetricReport {
            relatedness: Some(RelatednessScores { pearson_r: 0.5, spearman_rho: 0.25, mse: 1.0 }),
            distance_rho: None,
            summary: Some(SummaryScores { bleu: [1.0, 0.5, 0.25, 0.125], rouge_l: 0.7, cider: 1.2 }),
        };
        let kv = r.key_values();
        assert!(kv.starts_with("pearson_r=0.5000\nspearman_rho=0.2500\nmse=1.0000\n"));
        assert!(kv.contains("bleu_4=0.1250\nrouge_l=0.7000\ncider=1.2000\n"));
        let tsv = r.tsv();
        assert!(tsv.contains("r\trho\tMSE\n0.5000\t0.2500\t1.0000\n"));
        assert!(tsv.contains("BLEU-1\tBLEU-2\tBLEU-3\tBLEU-4\tROUGE-L\tCIDEr\n"));
    }
}
