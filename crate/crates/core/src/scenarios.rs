//! Preset computations: double slit, Hong-Ou-Mandel dip, three particles in a
//! nine-mode Fourier multiport, and the single-photon projection example.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::{event_probability, EventSpec};
use crate::linalg::{beamsplitter, fourier_unitary};
use crate::model::{
    enumerate_occupations, gram_from_positions, AssignmentList, OccupationVector, SourceConfig,
    Statistics,
};
use crate::{Error, Result};

/// Modes of the Fourier multiport scenario.
pub const FOURIER_MODES: usize = 9;
/// Occupied input modes (0-based) of the Fourier multiport scenario: the
/// third, sixth and ninth port.
pub const FOURIER_INPUTS: [usize; 3] = [2, 5, 8];
/// Displacement, in coherence lengths, treated as fully distinguishable.
pub const DISTINGUISHABLE_DISPLACEMENT: f64 = 20.0;
/// First differences smaller than this are ignored by extremum detection.
pub const EXTREMUM_FLOOR: f64 = 1e-10;

/// `count` evenly spaced values from `start` to `stop` inclusive.
pub fn linspace(start: f64, stop: f64, count: usize) -> Result<Vec<f64>> {
    if count < 2 || !(start < stop) {
        return Err(Error::Domain(format!(
            "grid needs count ≥ 2 and start < stop (got {start}:{stop}:{count})"
        )));
    }
    let step = (stop - start) / (count - 1) as f64;
    Ok((0..count)
        .map(|i| if i + 1 == count { stop } else { start + step * i as f64 })
        .collect())
}

/// Default displacement grid: 201 points over `[0, 5]`.
pub fn default_grid() -> Vec<f64> {
    linspace(0.0, 5.0, 201).expect("static grid")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    pub parameter: f64,
    pub event: String,
    pub probability: f64,
}

/// Probability-versus-parameter series for one or more events, ordered by
/// parameter value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionCurve {
    pub parameter: String,
    pub samples: Vec<CurveSample>,
}

impl TransitionCurve {
    pub fn new(parameter: impl Into<String>) -> Self {
        Self {
            parameter: parameter.into(),
            samples: Vec::new(),
        }
    }

    /// Appends a block of samples sharing one parameter value. Values must
    /// strictly increase from block to block.
    pub fn push_point(&mut self, parameter: f64, values: Vec<(String, f64)>) -> Result<()> {
        if let Some(last) = self.samples.last() {
            if !(parameter > last.parameter) {
                return Err(Error::Domain(format!(
                    "parameter {parameter} does not increase past {}",
                    last.parameter
                )));
            }
        }
        for (event, probability) in values {
            self.samples.push(CurveSample {
                parameter,
                event,
                probability,
            });
        }
        Ok(())
    }

    /// Event labels in order of first appearance.
    pub fn events(&self) -> Vec<&str> {
        let mut seen: Vec<&str> = Vec::new();
        for s in &self.samples {
            if !seen.contains(&s.event.as_str()) {
                seen.push(&s.event);
            }
        }
        seen
    }

    pub fn series(&self, event: &str) -> Vec<(f64, f64)> {
        self.samples
            .iter()
            .filter(|s| s.event == event)
            .map(|s| (s.parameter, s.probability))
            .collect()
    }

    pub fn parameters(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self.samples.iter().map(|s| s.parameter).collect();
        out.dedup();
        out
    }

    /// Events whose series has an interior local extremum.
    pub fn nonmonotonic_events(&self) -> Vec<String> {
        self.events()
            .into_iter()
            .filter(|e| {
                let values: Vec<f64> = self.series(e).into_iter().map(|(_, p)| p).collect();
                has_interior_extremum(&values, EXTREMUM_FLOOR)
            })
            .map(str::to_owned)
            .collect()
    }
}

/// True when consecutive first differences above `floor` change sign.
pub fn has_interior_extremum(values: &[f64], floor: f64) -> bool {
    let mut last = 0.0;
    for w in values.windows(2) {
        let diff = w[1] - w[0];
        if diff.abs() <= floor {
            continue;
        }
        let sign = diff.signum();
        if last != 0.0 && sign != last {
            return true;
        }
        last = sign;
    }
    false
}

/// Single particle behind two slits with equal path probabilities 1/4 and
/// relative phase `phase`; `coherence` weights the cross term.
pub fn double_slit(phase: f64, coherence: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&coherence) {
        return Err(Error::Domain(format!("coherence {coherence} outside [0, 1]")));
    }
    let a1 = Complex64::new(0.5, 0.0);
    let a2 = Complex64::from_polar(0.5, phase);
    let cross = 2.0 * (a1.conj() * a2).re;
    Ok(a1.norm_sqr() + a2.norm_sqr() + coherence * cross)
}

pub fn double_slit_scan(coherence: f64, phases: &[f64]) -> Result<TransitionCurve> {
    let mut curve = TransitionCurve::new("phase");
    for &phi in phases {
        curve.push_point(phi, vec![("screen".into(), double_slit(phi, coherence)?)])?;
    }
    Ok(curve)
}

/// Coincidence probability behind a 50:50 beamsplitter for two particles
/// displaced by `x`.
pub fn hom_coincidence(coherence_length: f64, x: f64, statistics: Statistics) -> Result<f64> {
    let gram = gram_from_positions(&SourceConfig::new(vec![0.0, x], coherence_length)?)?;
    let spec = EventSpec::new(
        beamsplitter(0.5)?,
        AssignmentList::new(vec![0, 1])?,
        OccupationVector::new(vec![1, 1]),
        gram,
        statistics,
    )?;
    event_probability(&spec)
}

/// Bosonic Hong-Ou-Mandel dip sampled at displacements `xs`.
pub fn hom_scan(coherence_length: f64, xs: &[f64]) -> Result<TransitionCurve> {
    hom_scan_with(coherence_length, xs, Statistics::Boson)
}

pub fn hom_scan_with(
    coherence_length: f64,
    xs: &[f64],
    statistics: Statistics,
) -> Result<TransitionCurve> {
    if !(coherence_length > 0.0) {
        return Err(Error::Domain(format!(
            "coherence length must be positive, got {coherence_length}"
        )));
    }
    let values: Vec<f64> = xs
        .par_iter()
        .map(|&x| hom_coincidence(coherence_length, x, statistics))
        .collect::<Result<_>>()?;
    let mut curve = TransitionCurve::new("x");
    for (&x, p) in xs.iter().zip(values) {
        curve.push_point(x, vec![("1.1".into(), p)])?;
    }
    Ok(curve)
}

/// All 84 events with at most one particle per mode.
pub fn single_occupancy_events() -> Vec<OccupationVector> {
    enumerate_occupations(FOURIER_MODES, FOURIER_INPUTS.len())
        .into_iter()
        .filter(OccupationVector::is_single_occupancy)
        .collect()
}

/// All 165 output events of the Fourier scenario.
pub fn all_fourier_events() -> Vec<OccupationVector> {
    enumerate_occupations(FOURIER_MODES, FOURIER_INPUTS.len())
}

/// Probabilities of `events` for the three-particle Fourier scenario with
/// particles at `0, x, 2x`.
pub fn fourier_event_probabilities(
    statistics: Statistics,
    coherence_length: f64,
    x: f64,
    events: &[OccupationVector],
) -> Result<Vec<f64>> {
    let unitary = fourier_unitary(FOURIER_MODES)?;
    let input = AssignmentList::new(FOURIER_INPUTS.to_vec())?;
    let gram = gram_from_positions(&SourceConfig::evenly_delayed(
        FOURIER_INPUTS.len(),
        x,
        coherence_length,
    )?)?;
    events
        .iter()
        .map(|event| {
            let spec = EventSpec::new(
                unitary.clone(),
                input.clone(),
                event.clone(),
                gram.clone(),
                statistics,
            )?;
            event_probability(&spec)
        })
        .collect()
}

fn fourier_scan(
    statistics: Statistics,
    coherence_length: f64,
    xs: &[f64],
    events: &[OccupationVector],
) -> Result<TransitionCurve> {
    for e in events {
        if e.modes() != FOURIER_MODES || e.total() != FOURIER_INPUTS.len() {
            return Err(Error::Spec(format!(
                "event {e} is not a 3-particle, 9-mode occupation"
            )));
        }
    }
    let rows: Vec<Vec<f64>> = xs
        .par_iter()
        .map(|&x| fourier_event_probabilities(statistics, coherence_length, x, events))
        .collect::<Result<_>>()?;
    let mut curve = TransitionCurve::new("x");
    for (&x, row) in xs.iter().zip(rows) {
        curve.push_point(
            x,
            events.iter().map(OccupationVector::label).zip(row).collect(),
        )?;
    }
    Ok(curve)
}

/// Three fermions in the nine-mode Fourier multiport. An empty `events`
/// list selects every single-occupancy event.
pub fn fermion_fourier_scan(
    coherence_length: f64,
    xs: &[f64],
    events: &[OccupationVector],
) -> Result<TransitionCurve> {
    let defaults;
    let events = if events.is_empty() {
        defaults = single_occupancy_events();
        &defaults
    } else {
        events
    };
    fourier_scan(Statistics::Fermion, coherence_length, xs, events)
}

/// Bosonic counterpart of [`fermion_fourier_scan`]; an empty `events` list
/// selects all 165 output events.
pub fn boson_fourier_scan(
    coherence_length: f64,
    xs: &[f64],
    events: &[OccupationVector],
) -> Result<TransitionCurve> {
    let defaults;
    let events = if events.is_empty() {
        defaults = all_fourier_events();
        &defaults
    } else {
        events
    };
    fourier_scan(Statistics::Boson, coherence_length, xs, events)
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(0.0..=FRAC_PI_2).contains(&gamma) {
        return Err(Error::Domain(format!("γ = {gamma} outside [0, π/2]")));
    }
    Ok(())
}

/// Polarization amplitudes `(H, V)` of the rotated single-photon state.
pub fn rotated_photon(gamma: f64) -> [Complex64; 2] {
    let theta = FRAC_PI_4 + gamma / 2.0;
    [
        Complex64::new(theta.cos(), 0.0),
        Complex64::new(theta.sin(), 0.0),
    ]
}

/// The fixed projector `cos(π/8)|H⟩ − sin(π/8)|V⟩`.
pub fn projector() -> [Complex64; 2] {
    [
        Complex64::new(FRAC_PI_8.cos(), 0.0),
        Complex64::new(-FRAC_PI_8.sin(), 0.0),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projection {
    pub probability: f64,
    /// `Tr ρ²` of the projected state; 1 for a pure state.
    pub purity: f64,
}

/// Projection probability of the rotated single photon onto the fixed
/// projector, and the purity of the state being projected.
pub fn bjork_projection(gamma: f64) -> Result<Projection> {
    check_gamma(gamma)?;
    let psi = rotated_photon(gamma);
    let xi = projector();
    let overlap: Complex64 = xi.iter().zip(&psi).map(|(a, b)| a.conj() * b).sum();

    // ρ = |ψ⟩⟨ψ|
    let rho = [
        [psi[0] * psi[0].conj(), psi[0] * psi[1].conj()],
        [psi[1] * psi[0].conj(), psi[1] * psi[1].conj()],
    ];
    let mut purity = Complex64::new(0.0, 0.0);
    for i in 0..2 {
        for j in 0..2 {
            purity += rho[i][j] * rho[j][i];
        }
    }
    Ok(Projection {
        probability: overlap.norm_sqr(),
        purity: purity.re,
    })
}

/// Population bias `|p_H − p_V|` of the rotated photon.
pub fn bjork_predictability(gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    let psi = rotated_photon(gamma);
    Ok((psi[0].norm_sqr() - psi[1].norm_sqr()).abs())
}

/// Projection probability, predictability and purity over `gammas`.
pub fn bjork_scan(gammas: &[f64]) -> Result<TransitionCurve> {
    let mut curve = TransitionCurve::new("gamma");
    for &g in gammas {
        let proj = bjork_projection(g)?;
        curve.push_point(
            g,
            vec![
                ("projection".into(), proj.probability),
                ("predictability".into(), bjork_predictability(g)?),
                ("purity".into(), proj.purity),
            ],
        )?;
    }
    Ok(curve)
}
