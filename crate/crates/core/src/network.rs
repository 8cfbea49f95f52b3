//! Autoassociator memory.
//!
//! Six input/output units (one per body part) are joined by a trainable 6x6
//! weight matrix. Five concept units (arms, legs, left, right, movement) are
//! wired to the body-part units with fixed +/-1 weights. The sixth concept,
//! symmetry, has no published wiring; its activation is the analytic
//! anti-symmetry score from [`crate::fitness::symmetry_score`].
//!
//! A training pass clamps the input side of the I/O units to the idea's
//! locus values, derives the concept activations from them, then computes
//! the output side from both through the sigmoid
//! `a = 1 / (1 + exp(-beta * (net + theta)))`. Targets live in unit space,
//! `t = v + 0.5`, and only the trainable matrix is updated.

use rand::Rng;

use crate::fitness;
use crate::idea::{IdeaPattern, LOCI};

pub const BETA: f64 = 0.15;
pub const THETA: f64 = 0.5;
pub const EPOCHS: usize = 50;
/// Smallest learning rate from the calibration grid for which every one of
/// the 729 allele patterns survives a learn/recall round trip.
pub const DEFAULT_ETA: f64 = 10.0;
/// Candidate learning rates, ascending; see the calibration tests.
pub const ETA_GRID: [f64; 10] = [0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0];
/// Initial trainable weights are uniform in `[-INIT_WEIGHT, INIT_WEIGHT]`.
pub const INIT_WEIGHT: f64 = 0.1;

/// Concept units with fixed wiring to the body-part units.
pub const WIRED_CONCEPTS: usize = 5;
const MOVEMENT: usize = 4;

/// Concept-to-body-part weights, rows: arms, legs, left, right, movement.
/// Columns follow locus order (LA, RA, LL, RL, head, tail).
const CONCEPT_WIRING: [[f64; LOCI]; WIRED_CONCEPTS] = [
    [1.0, 1.0, -1.0, -1.0, 0.0, 0.0],
    [-1.0, -1.0, 1.0, 1.0, 0.0, 0.0],
    [1.0, -1.0, 1.0, -1.0, 0.0, 0.0],
    [-1.0, 1.0, -1.0, 1.0, 0.0, 0.0],
    [1.0, 1.0, 1.0, 1.0, 1.0, 1.0],
];

/// Inhibitory links between opposing concepts (arms/legs, left/right).
const CONCEPT_LATERAL: [[f64; WIRED_CONCEPTS]; WIRED_CONCEPTS] = [
    [0.0, -1.0, 0.0, 0.0, 0.0],
    [-1.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, -1.0, 0.0],
    [0.0, 0.0, -1.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0],
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NetworkParams {
    pub beta: f64,
    pub theta: f64,
    pub epochs: usize,
    pub eta: f64,
}

impl Default for NetworkParams {
    fn default() -> Self {
        NetworkParams {
            beta: BETA,
            theta: THETA,
            epochs: EPOCHS,
            eta: DEFAULT_ETA,
        }
    }
}

/// Unit-space image of an idea, each component in [0, 1].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TargetPattern(pub [f64; LOCI]);

impl From<&IdeaPattern> for TargetPattern {
    fn from(idea: &IdeaPattern) -> Self {
        TargetPattern(idea.values().map(|v| v + 0.5))
    }
}

impl TargetPattern {
    /// Inverse of the unit-space map, clamped into idea range.
    pub fn to_idea(&self) -> IdeaPattern {
        IdeaPattern::clamped(self.0.map(|t| t - 0.5))
    }
}

/// The fixed, non-trainable connections.
#[derive(Clone, Debug, PartialEq)]
pub struct FixedWeights {
    pub concept_to_unit: [[f64; LOCI]; WIRED_CONCEPTS],
    pub concept_lateral: [[f64; WIRED_CONCEPTS]; WIRED_CONCEPTS],
}

impl Default for FixedWeights {
    fn default() -> Self {
        FixedWeights {
            concept_to_unit: CONCEPT_WIRING,
            concept_lateral: CONCEPT_LATERAL,
        }
    }
}

/// Activations of the six concept units.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConceptActivations {
    pub arms: f64,
    pub legs: f64,
    pub left: f64,
    pub right: f64,
    pub movement: f64,
    pub symmetry: f64,
}

impl ConceptActivations {
    pub fn as_array(&self) -> [f64; 6] {
        [
            self.arms,
            self.legs,
            self.left,
            self.right,
            self.movement,
            self.symmetry,
        ]
    }
}

/// Per-epoch sum-squared output error, measured on each forward pass, plus
/// the error of the settled network after the last update.
#[derive(Clone, Debug, PartialEq)]
pub struct TrainingTrace {
    pub epoch_errors: Vec<f64>,
    pub final_error: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NetworkState {
    /// `trainable[i][j]` is the weight on the line from I/O unit `i` to I/O unit `j`.
    pub trainable: [[f64; LOCI]; LOCI],
    pub fixed: FixedWeights,
    /// Units 0..6 hold the output side of the I/O units, 6..12 the concepts.
    pub activations: [f64; 2 * LOCI],
    /// Error signals of the wired concept units from the last pass.
    pub concept_deltas: [f64; WIRED_CONCEPTS],
    input: IdeaPattern,
    trained: bool,
}

/// Sigmoid with the default gain and bias.
pub fn unit_activation(net_input: f64) -> f64 {
    activation(net_input, BETA, THETA)
}

pub fn activation(net_input: f64, beta: f64, theta: f64) -> f64 {
    1.0 / (1.0 + (-beta * (net_input + theta)).exp())
}

/// Error signal of an output unit.
pub fn output_delta(target: f64, activation: f64) -> f64 {
    (target - activation) * activation * (1.0 - activation)
}

/// Error signal of a hidden unit from `(delta_j, weight_ij)` pairs of the
/// units it feeds.
pub fn hidden_delta(activation: f64, downstream: &[(f64, f64)]) -> f64 {
    let sum: f64 = downstream.iter().map(|(d, w)| d * w).sum();
    activation * (1.0 - activation) * sum
}

fn wired_concepts(idea: &IdeaPattern, params: &NetworkParams) -> [f64; WIRED_CONCEPTS] {
    let v = idea.values();
    let mut out = [0.0; WIRED_CONCEPTS];
    for (h, row) in CONCEPT_WIRING.iter().enumerate() {
        let net: f64 = row
            .iter()
            .zip(v)
            .map(|(w, x)| if h == MOVEMENT { w * x.abs() } else { w * x })
            .sum();
        out[h] = activation(net, params.beta, params.theta);
    }
    out
}

/// Concept readout for an idea, including lateral inhibition between
/// opposing concepts.
pub fn concept_activations(idea: &IdeaPattern) -> ConceptActivations {
    let params = NetworkParams::default();
    let v = idea.values();
    let feed = wired_concepts(idea, &params);
    let mut settled = [0.0; WIRED_CONCEPTS];
    for h in 0..WIRED_CONCEPTS {
        let mut net: f64 = CONCEPT_WIRING[h]
            .iter()
            .zip(v)
            .map(|(w, x)| if h == MOVEMENT { w * x.abs() } else { w * x })
            .sum();
        net += CONCEPT_LATERAL[h]
            .iter()
            .zip(&feed)
            .map(|(w, a)| w * a)
            .sum::<f64>();
        settled[h] = unit_activation(net);
    }
    ConceptActivations {
        arms: settled[0],
        legs: settled[1],
        left: settled[2],
        right: settled[3],
        movement: settled[4],
        symmetry: fitness::symmetry_score(idea),
    }
}

impl NetworkState {
    /// Fresh network with small random trainable weights; the readout starts
    /// as the response to the immobile idea.
    pub fn new<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut trainable = [[0.0; LOCI]; LOCI];
        for row in trainable.iter_mut() {
            for w in row.iter_mut() {
                *w = rng.gen_range(-INIT_WEIGHT..=INIT_WEIGHT);
            }
        }
        let mut state = NetworkState {
            trainable,
            fixed: FixedWeights::default(),
            activations: [0.0; 2 * LOCI],
            concept_deltas: [0.0; WIRED_CONCEPTS],
            input: IdeaPattern::IMMOBILE,
            trained: false,
        };
        state.forward(&NetworkParams::default());
        state
    }

    pub fn is_trained(&self) -> bool {
        self.trained
    }

    pub fn outputs(&self) -> [f64; LOCI] {
        let mut out = [0.0; LOCI];
        out.copy_from_slice(&self.activations[..LOCI]);
        out
    }

    fn forward(&mut self, params: &NetworkParams) {
        let x = *self.input.values();
        let concepts = wired_concepts(&self.input, params);
        for j in 0..LOCI {
            let mut net = 0.0;
            for (i, xi) in x.iter().enumerate() {
                net += self.trainable[i][j] * xi;
            }
            for (h, a) in concepts.iter().enumerate() {
                net += self.fixed.concept_to_unit[h][j] * a;
            }
            self.activations[j] = activation(net, params.beta, params.theta);
        }
        self.activations[LOCI..LOCI + WIRED_CONCEPTS].copy_from_slice(&concepts);
        self.activations[LOCI + WIRED_CONCEPTS] = fitness::symmetry_score(&self.input);
    }

    fn squared_error(&self, target: &TargetPattern) -> f64 {
        target
            .0
            .iter()
            .zip(&self.activations[..LOCI])
            .map(|(t, a)| (t - a) * (t - a))
            .sum()
    }

    /// Trains on one pattern with the generalized delta rule.
    pub fn learn(&mut self, target: &TargetPattern, params: &NetworkParams) -> TrainingTrace {
        self.input = target.to_idea();
        let x = *self.input.values();
        let mut epoch_errors = Vec::with_capacity(params.epochs);
        for _ in 0..params.epochs {
            self.forward(params);
            epoch_errors.push(self.squared_error(target));

            let mut deltas = [0.0; LOCI];
            for (j, d) in deltas.iter_mut().enumerate() {
                *d = output_delta(target.0[j], self.activations[j]);
            }
            for h in 0..WIRED_CONCEPTS {
                let downstream: Vec<(f64, f64)> = (0..LOCI)
                    .map(|j| (deltas[j], self.fixed.concept_to_unit[h][j]))
                    .collect();
                self.concept_deltas[h] = hidden_delta(self.activations[LOCI + h], &downstream);
            }
            for (i, xi) in x.iter().enumerate() {
                for (j, dj) in deltas.iter().enumerate() {
                    self.trainable[i][j] += params.eta * dj * xi;
                }
            }
        }
        self.forward(params);
        self.trained = true;
        TrainingTrace {
            epoch_errors,
            final_error: self.squared_error(target),
        }
    }

    /// The idea currently held on the output side of the I/O units.
    pub fn recall(&self) -> IdeaPattern {
        IdeaPattern::clamped(self.outputs().map(|a| a - 0.5))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::idea::{enumerate_idea_space, BodyPart};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fresh(seed: u64) -> NetworkState {
        NetworkState::new(&mut ChaCha8Rng::seed_from_u64(seed))
    }

    fn sigmoid(z: f64) -> f64 {
        1.0 / (1.0 + (-z).exp())
    }

    #[test]
    fn activation_examples() {
        assert_eq!(unit_activation(-0.5), 0.5);
        assert_abs_diff_eq!(unit_activation(0.0), 0.518_741_7, epsilon = 1e-6);
        assert_abs_diff_eq!(unit_activation(1e4), 1.0, epsilon = 1e-12);
        assert!(unit_activation(0.3) > unit_activation(0.2));
    }

    #[test]
    fn delta_examples() {
        assert_eq!(output_delta(0.7, 0.7), 0.0);
        assert_eq!(output_delta(1.0, 0.5), 0.125);
        assert_abs_diff_eq!(output_delta(0.0, 1.0 - 1e-12), 0.0, epsilon = 1e-11);
        assert_eq!(hidden_delta(0.3, &[(0.0, 1.0), (0.0, -1.0)]), 0.0);
        assert_abs_diff_eq!(hidden_delta(0.5, &[(0.4, 1.0)]), 0.1, epsilon = 1e-15);
        assert_eq!(hidden_delta(1.0, &[(0.4, 1.0), (0.2, -1.0)]), 0.0);
    }

    // Two-layer toy: hidden pre-activations z_h, a_h = sigmoid(z_h);
    // output z_j = sum_h w_hj a_h + c_j, a_j = sigmoid(z_j);
    // E = 0.5 * sum_j (t_j - a_j)^2. Deltas are -dE/dz.
    fn toy_loss(zh: &[f64; 3], w: &[[f64; 2]; 3], c: &[f64; 2], t: &[f64; 2]) -> f64 {
        let ah: Vec<f64> = zh.iter().map(|&z| sigmoid(z)).collect();
        (0..2)
            .map(|j| {
                let z: f64 = (0..3).map(|h| w[h][j] * ah[h]).sum::<f64>() + c[j];
                let a = sigmoid(z);
                0.5 * (t[j] - a) * (t[j] - a)
            })
            .sum()
    }

    proptest! {
        #[test]
        fn deltas_match_finite_differences(
            zh in prop::array::uniform3(-3.0f64..3.0),
            w in prop::array::uniform3(prop::array::uniform2(-2.0f64..2.0)),
            c in prop::array::uniform2(-2.0f64..2.0),
            t in prop::array::uniform2(0.0f64..1.0),
        ) {
            let h = 1e-5;
            let ah: Vec<f64> = zh.iter().map(|&z| sigmoid(z)).collect();
            let zo: Vec<f64> = (0..2)
                .map(|j| (0..3).map(|k| w[k][j] * ah[k]).sum::<f64>() + c[j])
                .collect();
            let ao: Vec<f64> = zo.iter().map(|&z| sigmoid(z)).collect();
            let d_out: Vec<f64> = (0..2).map(|j| output_delta(t[j], ao[j])).collect();

            for j in 0..2 {
                let mut cp = c;
                cp[j] += h;
                let mut cm = c;
                cm[j] -= h;
                let fd = -(toy_loss(&zh, &w, &cp, &t) - toy_loss(&zh, &w, &cm, &t)) / (2.0 * h);
                prop_assert!((fd - d_out[j]).abs() < 1e-4);
            }
            for k in 0..3 {
                let downstream: Vec<(f64, f64)> = (0..2).map(|j| (d_out[j], w[k][j])).collect();
                let analytic = hidden_delta(ah[k], &downstream);
                let mut zp = zh;
                zp[k] += h;
                let mut zm = zh;
                zm[k] -= h;
                let fd = -(toy_loss(&zp, &w, &c, &t) - toy_loss(&zm, &w, &c, &t)) / (2.0 * h);
                prop_assert!((fd - analytic).abs() < 1e-4);
            }
        }

        #[test]
        fn training_error_does_not_grow(code in 0usize..729, seed in 0u64..1000) {
            let idea = enumerate_idea_space()[code].to_pattern();
            let mut net = fresh(seed);
            let trace = net.learn(&TargetPattern::from(&idea), &NetworkParams::default());
            prop_assert!(trace.final_error <= trace.epoch_errors[0]);
            prop_assert!(trace.epoch_errors.last().unwrap() <= &trace.epoch_errors[0]);
        }
    }

    #[test]
    fn zero_eta_leaves_weights_alone() {
        let mut net = fresh(3);
        let before = net.trainable;
        let params = NetworkParams {
            eta: 0.0,
            ..Default::default()
        };
        let idea: IdeaPattern = "UDUDSU"
            .parse::<crate::idea::AlleleVector>()
            .unwrap()
            .into();
        net.learn(&TargetPattern::from(&idea), &params);
        assert_eq!(net.trainable, before);
    }

    #[test]
    fn fixed_weights_never_change() {
        let mut net = fresh(11);
        let before = net.fixed.clone();
        for v in enumerate_idea_space().iter().step_by(7) {
            net.learn(
                &TargetPattern::from(&v.to_pattern()),
                &NetworkParams::default(),
            );
        }
        assert_eq!(net.fixed, before);
        assert_eq!(net.fixed, FixedWeights::default());
    }

    #[test]
    fn learning_is_deterministic() {
        let idea: IdeaPattern = "DUSUDU"
            .parse::<crate::idea::AlleleVector>()
            .unwrap()
            .into();
        let mut a = fresh(5);
        let mut b = fresh(5);
        a.learn(&TargetPattern::from(&idea), &NetworkParams::default());
        b.learn(&TargetPattern::from(&idea), &NetworkParams::default());
        assert_eq!(a, b);
    }

    fn round_trips_all(eta: f64) -> usize {
        let params = NetworkParams {
            eta,
            ..Default::default()
        };
        enumerate_idea_space()
            .into_iter()
            .enumerate()
            .filter(|(i, v)| {
                let mut net = fresh(*i as u64);
                net.learn(&TargetPattern::from(&v.to_pattern()), &params);
                net.recall().quantized() == *v
            })
            .count()
    }

    #[test]
    fn calibrated_eta_is_smallest_passing_grid_value() {
        let passing = ETA_GRID
            .iter()
            .copied()
            .find(|&eta| round_trips_all(eta) == 729);
        assert_eq!(passing, Some(DEFAULT_ETA));
    }

    #[test]
    fn sequential_learning_keeps_latest_idea() {
        let mut net = fresh(21);
        let params = NetworkParams::default();
        for v in enumerate_idea_space().iter().rev().step_by(5) {
            net.learn(&TargetPattern::from(&v.to_pattern()), &params);
            assert_eq!(net.recall().quantized(), *v);
        }
    }

    #[test]
    fn untrained_readout_is_flagged() {
        let net = fresh(1);
        assert!(!net.is_trained());
        let readout = net.recall();
        assert!(readout.values().iter().all(|v| v.abs() <= 0.5));
    }

    #[test]
    fn recall_clamps_and_inverts_unit_map() {
        let t = TargetPattern([1.0, 0.0, 0.5, 0.75, 0.2, 0.9]);
        let back = TargetPattern::from(&t.to_idea());
        for (a, b) in t.0.iter().zip(back.0) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
        }
        let mut net = fresh(0);
        net.activations[0] = 1.0;
        assert_eq!(net.recall().get(BodyPart::LeftArm), 0.5);
    }

    #[test]
    fn concept_examples() {
        let still = concept_activations(&IdeaPattern::IMMOBILE);
        assert_abs_diff_eq!(still.movement, unit_activation(0.0), epsilon = 1e-15);
        assert_abs_diff_eq!(still.movement, 0.518_74, epsilon = 1e-5);

        let p = IdeaPattern::new([0.5, -0.3, 0.2, 0.0, -0.5, 0.4]).unwrap();
        let flipped = IdeaPattern::new(p.values().map(|v| -v)).unwrap();
        assert_eq!(
            concept_activations(&p).movement,
            concept_activations(&flipped).movement
        );
    }

    proptest! {
        #[test]
        fn movement_concept_is_monotone_in_magnitude(
            base in prop::array::uniform6(-0.5f64..=0.5),
            locus in 0usize..6,
            extra in 0.0f64..0.5,
        ) {
            let p = IdeaPattern::new(base).unwrap();
            let mut bigger = base;
            let grown = (base[locus].abs() + extra).min(0.5);
            bigger[locus] = if base[locus] < 0.0 { -grown } else { grown };
            let q = IdeaPattern::new(bigger).unwrap();
            prop_assert!(concept_activations(&q).movement >= concept_activations(&p).movement);
        }
    }
}
