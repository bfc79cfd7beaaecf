use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::frame::Rect;

use super::grid::ChangedArea;
use super::{ReferenceFrame, TrackerConfig};

/// Per-area figures as reported, with the box in full-frame coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AreaReport {
    pub bbox: Rect,
    pub a_c: usize,
    /// 100 * a_c / a_r
    pub a_changed: f64,
    pub d_changed: f64,
    pub delta_mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MotionReport {
    pub frame_index: usize,
    pub areas: Vec<AreaReport>,
    /// 100 * sum(a_c) / a_r
    pub a_changed_total: f64,
    /// Pixel-weighted mean of the areas' `d_changed`; 0 without areas.
    pub d_changed_mean: f64,
    /// Pixel-weighted mean signed depth change; 0 without areas.
    pub delta_mean: f64,
    pub alert: bool,
}

/// Relative changed size in percent.
pub fn a_changed(a_c: usize, a_r: usize) -> f64 {
    100.0 * a_c as f64 / a_r as f64
}

/// Aggregates component measurements into a report. `alert` is left false;
/// the distraction evaluator sets it.
pub fn changed_metrics(frame_index: usize, areas: &[ChangedArea], reference: &ReferenceFrame) -> MotionReport {
    let a_r = reference.a_r;
    let (ox, oy) = (reference.window.x, reference.window.y);
    let total_c: usize = areas.iter().map(|a| a.a_c).sum();
    let weighted = |f: fn(&ChangedArea) -> f64| {
        if total_c == 0 {
            0.0
        } else {
            areas.iter().map(|a| f(a) * a.a_c as f64).sum::<f64>() / total_c as f64
        }
    };
    MotionReport {
        frame_index,
        areas: areas
            .iter()
            .map(|a| AreaReport {
                bbox: Rect::new(a.bbox.x + ox, a.bbox.y + oy, a.bbox.w, a.bbox.h),
                a_c: a.a_c,
                a_changed: a_changed(a.a_c, a_r),
                d_changed: a.d_changed,
                delta_mean: a.delta_mean,
            })
            .collect(),
        a_changed_total: a_changed(total_c, a_r),
        d_changed_mean: weighted(|a| a.d_changed),
        delta_mean: weighted(|a| a.delta_mean),
        alert: false,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlertArea {
    pub bbox: Rect,
    pub a_changed: f64,
    pub d_changed: f64,
}

/// Emitted once when a run of over-threshold frames reaches the required
/// length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlertEvent {
    /// Frame on which the alert fired.
    pub frame_index: usize,
    /// First frame of the over-threshold run.
    pub onset_frame: usize,
    pub a_changed_total: f64,
    pub areas: Vec<AlertArea>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct AlertDecision {
    pub alert: bool,
    pub onset_frame: Option<usize>,
    pub areas: Vec<AlertArea>,
}

/// Alert when each of the last `persistence` reports exceeds the area
/// threshold. `history` is in frame order, newest last.
pub fn evaluate_distraction<'a, I>(history: I, cfg: &TrackerConfig) -> AlertDecision
where
    I: IntoIterator<Item = &'a MotionReport>,
    I::IntoIter: DoubleEndedIterator,
{
    let mut iter = history.into_iter().rev();
    let Some(latest) = iter.next() else {
        return AlertDecision::default();
    };
    let over = |r: &MotionReport| r.a_changed_total > cfg.area_alert_pct;
    if !over(latest) {
        return AlertDecision::default();
    }
    let mut run = 1;
    let mut onset = latest.frame_index;
    for r in iter {
        if !over(r) {
            break;
        }
        run += 1;
        onset = r.frame_index;
    }
    if run < cfg.persistence {
        return AlertDecision::default();
    }
    AlertDecision {
        alert: true,
        onset_frame: Some(onset),
        areas: latest
            .areas
            .iter()
            .map(|a| AlertArea {
                bbox: a.bbox,
                a_changed: a.a_changed,
                d_changed: a.d_changed,
            })
            .collect(),
    }
}

/// Rolling alert state for one monitoring session.
#[derive(Debug, Clone)]
pub struct DistractionMonitor {
    cfg: TrackerConfig,
    history: VecDeque<MotionReport>,
    active: bool,
    run_onset: Option<usize>,
}

impl DistractionMonitor {
    pub fn new(cfg: TrackerConfig) -> Self {
        DistractionMonitor {
            cfg,
            history: VecDeque::with_capacity(cfg.persistence),
            active: false,
            run_onset: None,
        }
    }

    /// Sets `report.alert` and returns an event on the frame an alert
    /// starts. A sustained alert does not repeat.
    pub fn push(&mut self, report: &mut MotionReport) -> Option<AlertEvent> {
        if report.a_changed_total > self.cfg.area_alert_pct {
            self.run_onset.get_or_insert(report.frame_index);
        } else {
            self.run_onset = None;
        }
        if self.history.len() == self.cfg.persistence {
            self.history.pop_front();
        }
        self.history.push_back(report.clone());
        let decision = evaluate_distraction(&self.history, &self.cfg);
        report.alert = decision.alert;
        if let Some(last) = self.history.back_mut() {
            last.alert = decision.alert;
        }
        let event = (decision.alert && !self.active).then(|| AlertEvent {
            frame_index: report.frame_index,
            // the bounded history may not reach back to the start of the run
            onset_frame: self.run_onset.or(decision.onset_frame).unwrap_or(report.frame_index),
            a_changed_total: report.a_changed_total,
            areas: decision.areas,
        });
        self.active = decision.alert;
        event
    }
}
