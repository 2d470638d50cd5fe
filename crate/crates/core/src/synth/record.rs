use num_complex::Complex64;

use crate::geom::Pose;

/// Per-receiver sample series of one transmit event.
#[derive(Debug, Clone, PartialEq)]
pub enum Series {
    /// Raw passband pressure, Pa.
    Real(Vec<Vec<f64>>),
    /// Pulse-compressed analytic signal.
    Analytic(Vec<Vec<Complex64>>),
}

impl Series {
    pub fn receiver_count(&self) -> usize {
        match self {
            Series::Real(v) => v.len(),
            Series::Analytic(v) => v.len(),
        }
    }

    pub fn is_analytic(&self) -> bool {
        matches!(self, Series::Analytic(_))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PingRecord {
    /// Sequential transmit-event index along the survey.
    pub ping_index: usize,
    pub location_index: usize,
    pub tx_id: usize,
    pub pose: Pose,
    pub sample_rate: f64,
    /// Time of the first sample after transmission, s.
    pub start_time: f64,
    pub sample_count: usize,
    /// Seed of this event's noise draws.
    pub seed: u64,
    pub series: Series,
}

impl PingRecord {
    pub fn time_of(&self, sample: usize) -> f64 {
        self.start_time + sample as f64 / self.sample_rate
    }

    pub fn real(&self) -> Option<&[Vec<f64>]> {
        match &self.series {
            Series::Real(v) => Some(v),
            Series::Analytic(_) => None,
        }
    }

    pub fn analytic(&self) -> Option<&[Vec<Complex64>]> {
        match &self.series {
            Series::Analytic(v) => Some(v),
            Series::Real(_) => None,
        }
    }

    /// Sample-wise sum of two records of the same event and layout.
    pub fn add(&self, other: &PingRecord) -> Option<PingRecord> {
        if self.sample_count != other.sample_count || self.start_time != other.start_time {
            return None;
        }
        let series = match (&self.series, &other.series) {
            (Series::Real(a), Series::Real(b)) if a.len() == b.len() => Series::Real(
                a.iter()
                    .zip(b)
                    .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p + q).collect())
                    .collect(),
            ),
            (Series::Analytic(a), Series::Analytic(b)) if a.len() == b.len() => Series::Analytic(
                a.iter()
                    .zip(b)
                    .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p + q).collect())
                    .collect(),
            ),
            _ => return None,
        };
        Some(PingRecord {
            series,
            ..self.clone()
        })
    }
}
