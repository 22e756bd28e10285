use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EditKind {
    Substitute,
    Insert,
    Delete,
}

/// One unit-cost edit. `index` addresses the working string at the moment
/// the op is applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EditOp {
    Substitute { index: usize, ch: char },
    Insert { index: usize, ch: char },
    Delete { index: usize },
}

impl EditOp {
    pub fn kind(&self) -> EditKind {
        match self {
            EditOp::Substitute { .. } => EditKind::Substitute,
            EditOp::Insert { .. } => EditKind::Insert,
            EditOp::Delete { .. } => EditKind::Delete,
        }
    }

    pub fn index(&self) -> usize {
        match *self {
            EditOp::Substitute { index, .. } | EditOp::Insert { index, .. } | EditOp::Delete { index } => index,
        }
    }

    /// The character written by the op; `None` for deletions.
    pub fn ch(&self) -> Option<char> {
        match *self {
            EditOp::Substitute { ch, .. } | EditOp::Insert { ch, .. } => Some(ch),
            EditOp::Delete { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EditScript {
    pub ops: Vec<EditOp>,
}

impl EditScript {
    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScriptError {
    #[error("malformed script: op {op} addresses position {index} in a string of length {len}")]
    OutOfRange { op: usize, index: usize, len: usize },
}

/// An optimal edit script turning `a` into `b`.
///
/// The full matrix is materialized and traced back from the bottom-right
/// corner, preferring match/substitute, then delete, then insert on ties.
/// Ops are emitted in trace order, i.e. right to left, so each op's index
/// refers to an original source position that earlier ops have not shifted.
pub fn edit_script(a: &str, b: &str) -> EditScript {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let (n, m) = (a.len(), b.len());
    let width = m + 1;

    let mut d = vec![0usize; (n + 1) * width];
    for (j, cell) in d[..width].iter_mut().enumerate() {
        *cell = j;
    }
    for i in 1..=n {
        d[i * width] = i;
        for j in 1..=m {
            let substitution = d[(i - 1) * width + j - 1] + usize::from(a[i - 1] != b[j - 1]);
            let deletion = d[(i - 1) * width + j] + 1;
            let insertion = d[i * width + j - 1] + 1;
            d[i * width + j] = substitution.min(deletion).min(insertion);
        }
    }

    let mut ops = Vec::with_capacity(d[n * width + m]);
    let (mut i, mut j) = (n, m);
    while i > 0 || j > 0 {
        let here = d[i * width + j];
        if i > 0 && j > 0 {
            let diag = d[(i - 1) * width + j - 1];
            let same = a[i - 1] == b[j - 1];
            if here == diag + usize::from(!same) {
                if !same {
                    ops.push(EditOp::Substitute { index: i - 1, ch: b[j - 1] });
                }
                i -= 1;
                j -= 1;
                continue;
            }
        }
        if i > 0 && here == d[(i - 1) * width + j] + 1 {
            ops.push(EditOp::Delete { index: i - 1 });
            i -= 1;
        } else {
            ops.push(EditOp::Insert { index: i, ch: b[j - 1] });
            j -= 1;
        }
    }
    EditScript { ops }
}

/// Replays `script` on `a` in order.
pub fn apply_script(a: &str, script: &EditScript) -> Result<String, ScriptError> {
    let mut work: Vec<char> = a.chars().collect();
    for (op_no, op) in script.ops.iter().enumerate() {
        let len = work.len();
        let out_of_range = |index| ScriptError::OutOfRange { op: op_no, index, len };
        match *op {
            EditOp::Substitute { index, ch } => {
                *work.get_mut(index).ok_or_else(|| out_of_range(index))? = ch;
            }
            EditOp::Insert { index, ch } => {
                if index > len {
                    return Err(out_of_range(index));
                }
                work.insert(index, ch);
            }
            EditOp::Delete { index } => {
                if index >= len {
                    return Err(out_of_range(index));
                }
                work.remove(index);
            }
        }
    }
    Ok(work.into_iter().collect())
}
