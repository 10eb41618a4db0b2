use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::evaluator::EvalError;
use crate::kernel::{Color, GameState, PieceKind, Square};
use crate::solver::{ProbeSource, Wdl};
use crate::Scalar;

/// Number of signed material-count features (pawn through queen).
const MATERIAL_FEATURES: usize = 5;

/// Total feature count: material counts plus one weight per piece kind
/// and square.
pub const FEATURE_COUNT: usize = MATERIAL_FEATURES + 6 * 64;

const DEFAULT_MATERIAL: [Scalar; MATERIAL_FEATURES] = [1.0, 3.0, 3.0, 5.0, 9.0];

/// The evaluator families under study.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum EvalFamily {
    /// Weighted signed material counts.
    #[serde(rename = "material")]
    MaterialOnly,
    /// Material counts plus a weight per piece kind and square.
    #[serde(rename = "material-psq")]
    MaterialPlusPieceSquare,
    /// Learned weights over a prefix of the feature list.
    #[serde(rename = "fitted")]
    FittedLinear,
    /// Exact probe of a strategy table, scored +1/0/-1.
    #[serde(rename = "oracle")]
    TablebaseOracle,
}

impl FromStr for EvalFamily {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "material" => Ok(EvalFamily::MaterialOnly),
            "material-psq" => Ok(EvalFamily::MaterialPlusPieceSquare),
            "fitted" => Ok(EvalFamily::FittedLinear),
            "oracle" => Ok(EvalFamily::TablebaseOracle),
            other => Err(format!(
                "unknown evaluator family {other:?} (material, material-psq, fitted, oracle)"
            )),
        }
    }
}

impl fmt::Display for EvalFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EvalFamily::MaterialOnly => "material",
            EvalFamily::MaterialPlusPieceSquare => "material-psq",
            EvalFamily::FittedLinear => "fitted",
            EvalFamily::TablebaseOracle => "oracle",
        })
    }
}

/// A described evaluator: family, weights, and the size class it must
/// stay within.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvaluatorSpec {
    pub family: EvalFamily,
    pub parameters: Vec<Scalar>,
    pub parameter_budget: usize,
}

impl EvaluatorSpec {
    /// Classic material counting: pawn 1, knight 3, bishop 3, rook 5,
    /// queen 9, kings 0.
    pub fn material_only() -> EvaluatorSpec {
        EvaluatorSpec {
            family: EvalFamily::MaterialOnly,
            parameters: DEFAULT_MATERIAL.to_vec(),
            parameter_budget: MATERIAL_FEATURES,
        }
    }

    /// Material defaults plus zeroed piece-square weights, ready for
    /// hand tuning.
    pub fn material_plus_piece_square() -> EvaluatorSpec {
        let mut parameters = vec![0.0; FEATURE_COUNT];
        parameters[..MATERIAL_FEATURES].copy_from_slice(&DEFAULT_MATERIAL);
        EvaluatorSpec {
            family: EvalFamily::MaterialPlusPieceSquare,
            parameters,
            parameter_budget: FEATURE_COUNT,
        }
    }

    /// The exact evaluator; carries no weights at all.
    pub fn tablebase_oracle() -> EvaluatorSpec {
        EvaluatorSpec {
            family: EvalFamily::TablebaseOracle,
            parameters: Vec::new(),
            parameter_budget: 0,
        }
    }

    /// Learned weights over the first `parameters.len()` features.
    pub fn fitted(parameters: Vec<Scalar>) -> EvaluatorSpec {
        let parameter_budget = parameters.len();
        EvaluatorSpec {
            family: EvalFamily::FittedLinear,
            parameters,
            parameter_budget,
        }
    }

    /// Checks the family's parameter-count rules and the budget bound.
    pub fn validate(&self) -> Result<(), EvalError> {
        let got = self.parameters.len();
        if got > self.parameter_budget {
            return Err(EvalError::OverBudget {
                count: got,
                budget: self.parameter_budget,
            });
        }
        let expected: &'static str = match self.family {
            EvalFamily::MaterialOnly if got != MATERIAL_FEATURES => "exactly 5",
            EvalFamily::MaterialPlusPieceSquare if got != FEATURE_COUNT => "exactly 389",
            EvalFamily::FittedLinear if got == 0 || got > FEATURE_COUNT => "between 1 and 389",
            EvalFamily::TablebaseOracle if got != 0 => "exactly 0",
            _ => return Ok(()),
        };
        Err(EvalError::ParameterCount {
            family: self.family,
            expected,
            got,
        })
    }
}

/// A spec bound to whatever it needs to score states.
///
/// Scoring is a pure function of the single input state: linear families
/// read the board, the oracle family probes the attached table.
pub struct StaticEval<'a> {
    spec: &'a EvaluatorSpec,
    source: Option<&'a dyn ProbeSource>,
}

impl<'a> StaticEval<'a> {
    /// Binds a spec; the oracle family requires `source`.
    pub fn new(
        spec: &'a EvaluatorSpec,
        source: Option<&'a dyn ProbeSource>,
    ) -> Result<StaticEval<'a>, EvalError> {
        spec.validate()?;
        if spec.family == EvalFamily::TablebaseOracle && source.is_none() {
            return Err(EvalError::MissingTable);
        }
        Ok(StaticEval { spec, source })
    }

    pub fn spec(&self) -> &EvaluatorSpec {
        self.spec
    }

    /// White-positive score of the state.
    pub fn score(&self, state: &GameState) -> Result<Scalar, EvalError> {
        if self.spec.family == EvalFamily::TablebaseOracle {
            let source = self.source.expect("construction requires a table");
            let score = match source.probe(state)?.wdl {
                Wdl::WhiteWin => 1.0,
                Wdl::Draw => 0.0,
                Wdl::BlackWin => -1.0,
            };
            return Ok(score);
        }
        let weights = &self.spec.parameters;
        let mut score = 0.0;
        for (index, value) in sparse_features(state) {
            if let Some(w) = weights.get(index) {
                score += w * value;
            }
        }
        Ok(score)
    }
}

/// Thresholded WDL class of a White-positive score.
pub fn classify(score: Scalar, threshold: Scalar) -> Wdl {
    if score > threshold {
        Wdl::WhiteWin
    } else if score < -threshold {
        Wdl::BlackWin
    } else {
        Wdl::Draw
    }
}

fn kind_slot(kind: PieceKind) -> usize {
    match kind {
        PieceKind::Pawn | PieceKind::PawnEpCapturable => 0,
        PieceKind::Knight => 1,
        PieceKind::Bishop => 2,
        PieceKind::Rook => 3,
        PieceKind::Queen => 4,
        PieceKind::KingCastle | PieceKind::KingNoCastle => 5,
    }
}

/// Nonzero features of a state: signed material counts first, then
/// per-(kind, square) occupancy with Black mirrored to White's view.
pub(crate) fn sparse_features(state: &GameState) -> Vec<(usize, Scalar)> {
    let mut features: Vec<(usize, Scalar)> = Vec::new();
    let mut bump = |index: usize, value: Scalar| {
        if let Some(slot) = features.iter_mut().find(|(i, _)| *i == index) {
            slot.1 += value;
        } else {
            features.push((index, value));
        }
    };
    for (sq, piece) in state.board().pieces() {
        let sign = Scalar::from(piece.color.sign());
        let slot = kind_slot(piece.kind);
        if slot < MATERIAL_FEATURES {
            bump(slot, sign);
        }
        let viewed = match piece.color {
            Color::White => sq,
            Color::Black => mirror(sq),
        };
        bump(MATERIAL_FEATURES + slot * 64 + viewed.index(), sign);
    }
    features
}

fn mirror(sq: Square) -> Square {
    Square::from_index(sq.index() as u8 ^ 56).expect("mirroring stays on the board")
}

/// Dense feature vector of a state, in fitting order.
pub fn feature_vector(state: &GameState) -> Vec<Scalar> {
    let mut dense = vec![0.0; FEATURE_COUNT];
    for (index, value) in sparse_features(state) {
        dense[index] += value;
    }
    dense
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::parse_fen;

    #[test]
    fn material_scores_follow_the_classic_weights() {
        let spec = EvaluatorSpec::material_only();
        let eval = StaticEval::new(&spec, None).unwrap();
        let queen_up = parse_fen("k7/7Q/1K6/8/8/8/8/8 w - - 0 1").unwrap();
        assert_eq!(eval.score(&queen_up).unwrap(), 9.0);
        let bare = parse_fen("7k/8/8/8/8/8/8/K7 w - - 0 1").unwrap();
        assert_eq!(eval.score(&bare).unwrap(), 0.0);
        let full = parse_fen("rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1").unwrap();
        assert_eq!(eval.score(&full).unwrap(), 0.0);
    }

    #[test]
    fn piece_square_weights_mirror_black_to_whites_view() {
        let mut spec = EvaluatorSpec::material_plus_piece_square();
        let h7 = "h7".parse::<Square>().unwrap();
        spec.parameters[5 + 4 * 64 + h7.index()] = 0.5;
        let eval = StaticEval::new(&spec, None).unwrap();

        let white_queen = parse_fen("k7/7Q/1K6/8/8/8/8/8 w - - 0 1").unwrap();
        assert_eq!(eval.score(&white_queen).unwrap(), 9.5);
        let black_mirrored = parse_fen("8/8/8/8/8/1k6/7q/K7 b - - 0 1").unwrap();
        assert_eq!(eval.score(&black_mirrored).unwrap(), -9.5);
    }

    #[test]
    fn scores_are_antisymmetric_under_color_swap() {
        let spec = EvaluatorSpec::material_only();
        let eval = StaticEval::new(&spec, None).unwrap();
        let white = parse_fen("8/8/3k4/8/8/4K3/2Q5/8 b - - 0 1").unwrap();
        let black = parse_fen("8/2q5/4k3/8/8/3K4/8/8 w - - 0 1").unwrap();
        assert_eq!(
            eval.score(&white).unwrap(),
            -eval.score(&black).unwrap()
        );
    }

    #[test]
    fn family_rules_are_enforced() {
        let mut spec = EvaluatorSpec::material_only();
        spec.parameters.push(1.0);
        assert!(matches!(
            StaticEval::new(&spec, None),
            Err(EvalError::OverBudget { count: 6, budget: 5 })
        ));
        spec.parameter_budget = 10;
        assert!(matches!(
            StaticEval::new(&spec, None),
            Err(EvalError::ParameterCount { got: 6, .. })
        ));

        let oracle = EvaluatorSpec::tablebase_oracle();
        assert!(matches!(
            StaticEval::new(&oracle, None),
            Err(EvalError::MissingTable)
        ));
    }

    #[test]
    fn classification_uses_a_symmetric_band() {
        assert_eq!(classify(0.7, 0.5), Wdl::WhiteWin);
        assert_eq!(classify(-0.7, 0.5), Wdl::BlackWin);
        assert_eq!(classify(0.5, 0.5), Wdl::Draw);
        assert_eq!(classify(-0.3, 0.5), Wdl::Draw);
    }

    #[test]
    fn family_names_round_trip() {
        for family in [
            EvalFamily::MaterialOnly,
            EvalFamily::MaterialPlusPieceSquare,
            EvalFamily::FittedLinear,
            EvalFamily::TablebaseOracle,
        ] {
            assert_eq!(family.to_string().parse::<EvalFamily>(), Ok(family));
        }
        assert_eq!(
            serde_json::to_string(&EvalFamily::MaterialPlusPieceSquare).unwrap(),
            "\"material-psq\""
        );
    }
}
