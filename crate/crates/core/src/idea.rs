//! Idea representation: six body-part loci, each a graded movement in
//! [-0.5, 0.5] that quantizes to one of three alleles.

use std::fmt;
use std::str::FromStr;

use crate::error::{ContractError, MavError};

/// Number of loci in an idea.
pub const LOCI: usize = 6;

/// Largest magnitude a locus may take.
pub const MAX_MOVEMENT: f64 = 0.5;

/// Values strictly beyond this magnitude quantize to a moving allele.
pub const QUANTIZE_THRESHOLD: f64 = 0.25;

/// Size of the allele-level idea space (3^6).
pub const IDEA_SPACE_SIZE: usize = 729;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BodyPart {
    LeftArm,
    RightArm,
    LeftLeg,
    RightLeg,
    Head,
    Tail,
}

impl BodyPart {
    pub const ALL: [BodyPart; LOCI] = [
        BodyPart::LeftArm,
        BodyPart::RightArm,
        BodyPart::LeftLeg,
        BodyPart::RightLeg,
        BodyPart::Head,
        BodyPart::Tail,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Option<BodyPart> {
        Self::ALL.get(index).copied()
    }

    /// The opposite limb of a pair; `None` for head and tail.
    pub fn counterpart(self) -> Option<BodyPart> {
        match self {
            BodyPart::LeftArm => Some(BodyPart::RightArm),
            BodyPart::RightArm => Some(BodyPart::LeftArm),
            BodyPart::LeftLeg => Some(BodyPart::RightLeg),
            BodyPart::RightLeg => Some(BodyPart::LeftLeg),
            BodyPart::Head | BodyPart::Tail => None,
        }
    }

    /// Short column suffix used in CSV headers.
    pub fn short_name(self) -> &'static str {
        match self {
            BodyPart::LeftArm => "la",
            BodyPart::RightArm => "ra",
            BodyPart::LeftLeg => "ll",
            BodyPart::RightLeg => "rl",
            BodyPart::Head => "head",
            BodyPart::Tail => "tail",
        }
    }
}

/// The two limb pairs, arms first.
pub const LIMB_PAIRS: [(BodyPart, BodyPart); 2] = [
    (BodyPart::LeftArm, BodyPart::RightArm),
    (BodyPart::LeftLeg, BodyPart::RightLeg),
];

/// Allele at one locus.
///
/// The derived `Ord` follows enumeration order (Stationary < Up < Down);
/// use [`Allele::movement_rank`] for the movement ordering.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Allele {
    Stationary,
    Up,
    Down,
}

impl Allele {
    pub const ALL: [Allele; 3] = [Allele::Stationary, Allele::Up, Allele::Down];

    pub fn is_moving(self) -> bool {
        self != Allele::Stationary
    }

    /// Down < Stationary < Up.
    pub fn movement_rank(self) -> i8 {
        match self {
            Allele::Down => -1,
            Allele::Stationary => 0,
            Allele::Up => 1,
        }
    }

    pub fn opposite(self) -> Allele {
        match self {
            Allele::Up => Allele::Down,
            Allele::Down => Allele::Up,
            Allele::Stationary => Allele::Stationary,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Allele::Stationary => 'S',
            Allele::Up => 'U',
            Allele::Down => 'D',
        }
    }

    pub fn from_letter(c: char) -> Option<Allele> {
        match c {
            'S' => Some(Allele::Stationary),
            'U' => Some(Allele::Up),
            'D' => Some(Allele::Down),
            _ => None,
        }
    }
}

/// Canonical movement magnitude of an allele.
pub fn allele_value(allele: Allele) -> f64 {
    match allele {
        Allele::Stationary => 0.0,
        Allele::Up => MAX_MOVEMENT,
        Allele::Down => -MAX_MOVEMENT,
    }
}

/// Quantize a graded movement magnitude to its allele.
pub fn quantize(value: f64) -> Result<Allele, ContractError> {
    if !(-MAX_MOVEMENT..=MAX_MOVEMENT).contains(&value) {
        return Err(ContractError::OutOfRange {
            what: "locus value",
            value,
            min: -MAX_MOVEMENT,
            max: MAX_MOVEMENT,
        });
    }
    Ok(quantize_in_range(value))
}

fn quantize_in_range(value: f64) -> Allele {
    if value > QUANTIZE_THRESHOLD {
        Allele::Up
    } else if value < -QUANTIZE_THRESHOLD {
        Allele::Down
    } else {
        Allele::Stationary
    }
}

/// A graded idea: one movement magnitude per body part, in locus order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdeaPattern([f64; LOCI]);

impl IdeaPattern {
    /// The immobile idea every agent starts with.
    pub const IMMOBILE: IdeaPattern = IdeaPattern([0.0; LOCI]);

    pub fn new(values: [f64; LOCI]) -> Result<Self, ContractError> {
        for &value in &values {
            if !(-MAX_MOVEMENT..=MAX_MOVEMENT).contains(&value) {
                return Err(ContractError::OutOfRange {
                    what: "locus value",
                    value,
                    min: -MAX_MOVEMENT,
                    max: MAX_MOVEMENT,
                });
            }
        }
        Ok(IdeaPattern(values))
    }

    /// Builds a pattern, clamping each component into range. NaN maps to rest.
    pub fn clamped(values: [f64; LOCI]) -> Self {
        IdeaPattern(values.map(|v| {
            if v.is_nan() {
                0.0
            } else {
                v.clamp(-MAX_MOVEMENT, MAX_MOVEMENT)
            }
        }))
    }

    pub fn values(&self) -> &[f64; LOCI] {
        &self.0
    }

    pub fn get(&self, part: BodyPart) -> f64 {
        self.0[part.index()]
    }

    pub fn quantized(&self) -> AlleleVector {
        AlleleVector(self.0.map(quantize_in_range))
    }
}

impl From<AlleleVector> for IdeaPattern {
    fn from(alleles: AlleleVector) -> Self {
        IdeaPattern(alleles.0.map(allele_value))
    }
}

/// The allele-level view of an idea.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlleleVector(pub [Allele; LOCI]);

impl AlleleVector {
    pub const STATIONARY: AlleleVector = AlleleVector([Allele::Stationary; LOCI]);

    pub fn get(&self, part: BodyPart) -> Allele {
        self.0[part.index()]
    }

    pub fn set(&mut self, part: BodyPart, allele: Allele) {
        self.0[part.index()] = allele;
    }

    pub fn with(mut self, part: BodyPart, allele: Allele) -> Self {
        self.set(part, allele);
        self
    }

    pub fn is_immobile(&self) -> bool {
        self.0.iter().all(|a| !a.is_moving())
    }

    pub fn to_pattern(self) -> IdeaPattern {
        self.into()
    }

    /// Position of this vector in [`enumerate_idea_space`].
    pub fn rank(&self) -> usize {
        self.0.iter().fold(0, |acc, &a| acc * 3 + a as usize)
    }
}

impl fmt::Display for AlleleVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for allele in self.0 {
            write!(f, "{}", allele.letter())?;
        }
        Ok(())
    }
}

impl FromStr for AlleleVector {
    type Err = MavError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let letters: Vec<char> = s.trim().chars().collect();
        if letters.len() != LOCI {
            return Err(MavError::Parse(format!(
                "allele vector {s:?} must have {LOCI} letters"
            )));
        }
        let mut out = [Allele::Stationary; LOCI];
        for (slot, &c) in out.iter_mut().zip(&letters) {
            *slot = Allele::from_letter(c)
                .ok_or_else(|| MavError::Parse(format!("bad allele letter {c:?} in {s:?}")))?;
        }
        Ok(AlleleVector(out))
    }
}

/// All 3^6 allele vectors in lexicographic order (Stationary < Up < Down
/// per locus, first locus most significant).
pub fn enumerate_idea_space() -> Vec<AlleleVector> {
    (0..IDEA_SPACE_SIZE)
        .map(|mut code| {
            let mut alleles = [Allele::Stationary; LOCI];
            for slot in alleles.iter_mut().rev() {
                *slot = Allele::ALL[code % 3];
                code /= 3;
            }
            AlleleVector(alleles)
        })
        .collect()
}
