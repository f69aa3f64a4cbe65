use crate::point::Point;
use crate::{Error, Result};

/// Tail behaviour of a sequence under a distance oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SequenceClass {
    Cauchy,
    Divergent,
    Undetermined,
}

impl std::fmt::Display for SequenceClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SequenceClass::Cauchy => "cauchy",
            SequenceClass::Divergent => "divergent",
            SequenceClass::Undetermined => "undetermined",
        };
        f.write_str(s)
    }
}

/// Classifies the tail of `sequence`: only the final `window` elements are
/// inspected. All window pairs closer than `tolerance` reads as Cauchy, all
/// pairs at least `tolerance` apart as divergent, anything else as
/// undetermined.
pub fn cauchy_classify(
    sequence: &[Point],
    distance: impl Fn(&Point, &Point) -> f64,
    window: usize,
    tolerance: f64,
) -> Result<SequenceClass> {
    if window == 0 {
        return Err(Error::Parameter("window must be positive".into()));
    }
    if !(tolerance > 0.0) {
        return Err(Error::Parameter("tolerance must be positive".into()));
    }
    if sequence.len() <= 2 * window {
        return Err(Error::Parameter(format!(
            "sequence length {} must exceed twice the window {window}",
            sequence.len()
        )));
    }

    let tail = &sequence[sequence.len() - window..];
    let mut all_close = true;
    let mut all_far = true;
    for i in 0..tail.len() {
        for j in (i + 1)..tail.len() {
            let d = distance(&tail[i], &tail[j]);
            if d >= tolerance {
                all_close = false;
            } else {
                all_far = false;
            }
        }
    }
    Ok(if all_close {
        SequenceClass::Cauchy
    } else if all_far {
        SequenceClass::Divergent
    } else {
        SequenceClass::Undetermined
    })
}
