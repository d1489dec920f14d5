use super::{AncillaSpec, ArithError, McxMode};
use crate::circuit::Circuit;

/// Writes a `controls.len()`-controlled NOT as Toffolis using the given
/// ancillas and returns the Toffoli count. Clean ancillas must be `|0⟩` on
/// entry and are returned to `|0⟩`; dirty ones may hold anything and are
/// restored.
///
/// | controls | ancillas          | Toffolis |
/// |----------|-------------------|----------|
/// | 3        | 1 clean           | 3        |
/// | 3        | 1 dirty           | 4        |
/// | 4        | 2 clean           | 5        |
/// | 4        | 1 clean + 1 dirty | 6        |
/// | 4        | 2 dirty           | 8        |
pub fn decompose_mcx(
    c: &mut Circuit,
    controls: &[usize],
    target: usize,
    clean: &[usize],
    dirty: &[usize],
) -> Result<usize, ArithError> {
    let insufficient = || ArithError::InsufficientAncillas {
        controls: controls.len(),
        clean: clean.len(),
        dirty: dirty.len(),
    };
    match *controls {
        [] | [_] => {
            c.mcx(controls, target);
            Ok(0)
        }
        [c0, c1] => {
            c.ccx(c0, c1, target);
            Ok(1)
        }
        [c0, c1, c2] => {
            if let Some(&a) = clean.first() {
                c.ccx(c0, c1, a).ccx(a, c2, target).ccx(c0, c1, a);
                Ok(3)
            } else if let Some(&a) = dirty.first() {
                c.ccx(a, c2, target).ccx(c0, c1, a).ccx(a, c2, target).ccx(c0, c1, a);
                Ok(4)
            } else {
                Err(insufficient())
            }
        }
        [c0, c1, c2, c3] => match (clean, dirty) {
            ([a1, a2, ..], _) => {
                c.ccx(c0, c1, *a1)
                    .ccx(*a1, c2, *a2)
                    .ccx(*a2, c3, target)
                    .ccx(*a1, c2, *a2)
                    .ccx(c0, c1, *a1);
                Ok(5)
            }
            ([a1], [d, ..]) => {
                c.ccx(c0, c1, *a1);
                let inner = decompose_mcx(c, &[*a1, c2, c3], target, &[], &[*d])?;
                c.ccx(c0, c1, *a1);
                Ok(2 + inner)
            }
            ([], [a1, a2, ..]) => {
                let (a1, a2) = (*a1, *a2);
                for _ in 0..2 {
                    c.ccx(c3, a2, target).ccx(c2, a1, a2).ccx(c0, c1, a1).ccx(c2, a1, a2);
                }
                Ok(8)
            }
            _ => Err(insufficient()),
        },
        _ => Err(ArithError::UnsupportedControls(controls.len())),
    }
}

/// Standalone multi-controlled NOT: controls on qubits `0..n`, target on `n`,
/// then the clean ancillas, then the dirty ones.
pub fn build_mcx(n_controls: usize, ancillas: AncillaSpec) -> Result<(Circuit, usize), ArithError> {
    if !(3..=4).contains(&n_controls) {
        return Err(ArithError::UnsupportedControls(n_controls));
    }
    let controls: Vec<usize> = (0..n_controls).collect();
    let target = n_controls;
    let clean: Vec<usize> = (target + 1..target + 1 + ancillas.clean).collect();
    let dirty: Vec<usize> = (clean.last().map_or(target + 1, |&q| q + 1)..)
        .take(ancillas.dirty)
        .collect();
    let mut c = Circuit::new(target + 1 + ancillas.clean + ancillas.dirty, 0);
    let count = decompose_mcx(&mut c, &controls, target, &clean, &dirty)?;
    Ok((c, count))
}

/// Emits X gates with any number of controls, decomposing 3- and 4-control
/// gates when asked. Clean ancillas are taken from `clean` first; dirty ones
/// from `dirty`, then from any other qubit of the circuit.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Emitter<'a> {
    pub mode: McxMode,
    pub clean: &'a [usize],
    pub dirty: &'a [usize],
}

impl<'a> Emitter<'a> {
    pub fn native() -> Self {
        Emitter {
            mode: McxMode::Native,
            clean: &[],
            dirty: &[],
        }
    }

    pub fn x(&self, c: &mut Circuit, controls: &[usize], target: usize) {
        if self.mode == McxMode::Native || controls.len() <= 2 || controls.len() > 4 {
            c.mcx(controls, target);
            return;
        }
        let busy = |q: &usize| *q == target || controls.contains(q);
        let need = controls.len() - 2;
        let clean: Vec<usize> = self.clean.iter().copied().filter(|q| !busy(q)).take(need).collect();
        let dirty: Vec<usize> = self
            .dirty
            .iter()
            .copied()
            .chain(0..c.n_qubits)
            .filter(|q| !busy(q) && !clean.contains(q))
            .take(need - clean.len())
            .collect();
        if decompose_mcx(c, controls, target, &clean, &dirty).is_err() {
            c.mcx(controls, target);
        }
    }
}
