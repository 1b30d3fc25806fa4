//! Block schedules producing points with oscillating Birkhoff averages.

use crate::gapped::{GappedSubshiftSpec, GAP};
use crate::symbolic::{Symbol, Word};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlockSource {
    /// Repeat `w` (ambient symbols, no zeros) followed by the minimal zero run.
    ZWord(Word),
    Zeros,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Phase {
    pub source: BlockSource,
    pub repetitions: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OscillationSchedule {
    pub phases: Vec<Phase>,
}

impl OscillationSchedule {
    /// Alternates `word` blocks and pure zeros, phase `j` (from 1) covering
    /// about `factor^j` coordinates; odd phases use `word`.
    pub fn geometric(spec: &GappedSubshiftSpec, word: Word, factor: usize, phases: usize) -> Self {
        let block = block(spec, &word).len().max(1);
        let mut out = Vec::with_capacity(phases);
        let mut target = 1usize;
        for j in 1..=phases {
            target = target.saturating_mul(factor);
            let phase = if j % 2 == 1 {
                Phase {
                    source: BlockSource::ZWord(word.clone()),
                    repetitions: target.div_ceil(block),
                }
            } else {
                Phase {
                    source: BlockSource::Zeros,
                    repetitions: target,
                }
            };
            out.push(phase);
        }
        OscillationSchedule { phases: out }
    }

    /// The default four-phase schedule with factor 4 and the single-symbol block `1`.
    pub fn default_for(spec: &GappedSubshiftSpec) -> Self {
        OscillationSchedule::geometric(spec, Word::new(vec![1]), 4, 4)
    }

    pub fn phase_len(&self, spec: &GappedSubshiftSpec, phase: &Phase) -> usize {
        match &phase.source {
            BlockSource::ZWord(w) => block(spec, w).len() * phase.repetitions,
            BlockSource::Zeros => phase.repetitions,
        }
    }

    /// Cumulative lengths `c_j` at the end of each phase.
    pub fn checkpoints(&self, spec: &GappedSubshiftSpec) -> Vec<usize> {
        self.phases
            .iter()
            .scan(0usize, |acc, p| {
                *acc += self.phase_len(spec, p);
                Some(*acc)
            })
            .collect()
    }

    pub fn total_len(&self, spec: &GappedSubshiftSpec) -> usize {
        self.checkpoints(spec).last().copied().unwrap_or(0)
    }
}

fn block(spec: &GappedSubshiftSpec, w: &Word) -> Vec<Symbol> {
    let mut b = w.0.clone();
    b.extend(std::iter::repeat_n(
        GAP,
        spec.required_zero_run(w.len() as u64) as usize,
    ));
    b
}

/// First `n` coordinates of the scheduled point; zeros follow the last phase.
pub fn build_oscillating_point(
    spec: &GappedSubshiftSpec,
    sched: &OscillationSchedule,
    n: usize,
) -> Result<Word> {
    let mut out: Vec<Symbol> = Vec::with_capacity(n);
    for phase in &sched.phases {
        if out.len() >= n {
            break;
        }
        match &phase.source {
            BlockSource::ZWord(w) => {
                if w.is_empty() || w.symbols().contains(&GAP) {
                    return Err(Error::Infeasible(format!(
                        "schedule block {w} must be a non-empty word without zeros"
                    )));
                }
                let b = block(spec, w);
                for _ in 0..phase.repetitions {
                    out.extend_from_slice(&b);
                    if out.len() >= n {
                        break;
                    }
                }
            }
            BlockSource::Zeros => out.extend(std::iter::repeat_n(
                GAP,
                phase.repetitions.min(n - out.len()),
            )),
        }
    }
    out.resize(n, GAP);
    if !spec.contains_word(&out)? {
        return Err(Error::Infeasible("inadmissible schedule".into()));
    }
    Ok(Word::new(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gapped::Tau;

    #[test]
    fn default_schedule_layout() {
        let spec = GappedSubshiftSpec::full(1, Tau::integer(1)).unwrap();
        let sched = OscillationSchedule::default_for(&spec);
        assert_eq!(sched.checkpoints(&spec), vec![4, 20, 84, 340]);
        let x = build_oscillating_point(&spec, &sched, 340).unwrap();
        assert_eq!(&x.symbols()[..6], &[1, 0, 1, 0, 0, 0]);
        assert_eq!(x.symbols()[20..84].iter().filter(|&&s| s == 0).count(), 32);
    }

    #[test]
    fn all_zero_schedule() {
        let spec = GappedSubshiftSpec::full(2, Tau::new(1, 2).unwrap()).unwrap();
        let sched = OscillationSchedule {
            phases: vec![Phase {
                source: BlockSource::Zeros,
                repetitions: 10,
            }],
        };
        assert_eq!(
            build_oscillating_point(&spec, &sched, 25).unwrap(),
            Word::zeros(25)
        );
    }

    #[test]
    fn inadmissible_block_is_rejected() {
        let gm = crate::symbolic::base::Sft::new(
            2,
            vec![Word::compact("11")],
            &crate::Limits::default(),
        )
        .unwrap();
        let spec = GappedSubshiftSpec::new(std::sync::Arc::new(gm), Tau::integer(1)).unwrap();
        let sched = OscillationSchedule {
            phases: vec![Phase {
                source: BlockSource::ZWord(Word::new(vec![2, 2])),
                repetitions: 2,
            }],
        };
        assert!(matches!(
            build_oscillating_point(&spec, &sched, 10),
            Err(Error::Infeasible(_))
        ));
    }
}
