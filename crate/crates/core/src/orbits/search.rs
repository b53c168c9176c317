//! Depth-first enumeration of primitive cycles as Lyndon words.
//!
//! A cycle over an ordered alphabet is represented by its lexicographically
//! least rotation. Those representatives are exactly the Lyndon words, which
//! the FKM prenecklace recursion visits without duplicates or a final
//! rotation check. Extending a prenecklace `w` of period `p` by `c` requires
//! `c ≥ w[n−p]`; equality keeps the period, larger `c` makes the whole word
//! its own period. A node is a Lyndon word exactly when `p = n`.

use crate::exec::{map_ordered, Execution};
use crate::{Error, Result};

/// Relative slack in length comparisons so that cutoffs placed exactly on an
/// orbit length include it.
pub(crate) const LENGTH_EPS: f64 = 1e-12;

pub(crate) fn within(length: f64, limit: f64) -> bool {
    length <= limit * (1.0 + LENGTH_EPS)
}

/// Symbols with metric lengths and the amplitude of each transition.
#[derive(Debug, Clone)]
pub(crate) struct Alphabet {
    pub lengths: Vec<f64>,
    /// Row-major `step[a·n + b]`: amplitude for moving from `a` to `b`.
    step: Vec<f64>,
}

impl Alphabet {
    pub fn new(lengths: Vec<f64>, step: impl Fn(usize, usize) -> f64) -> Self {
        let n = lengths.len();
        let step = (0..n * n).map(|k| step(k / n, k % n)).collect();
        Alphabet { lengths, step }
    }

    pub fn size(&self) -> usize {
        self.lengths.len()
    }

    #[inline]
    pub fn step(&self, a: usize, b: usize) -> f64 {
        self.step[a * self.size() + b]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Limits {
    pub l_max: f64,
    pub floor: f64,
    pub budget: u64,
}

/// Receives each primitive cycle once, with its closed amplitude.
pub(crate) trait Sink: Send {
    fn visit(&mut self, word: &[u16], length: f64, amplitude: f64);
    /// Appends the results of a later subtree.
    fn absorb(&mut self, later: Self)
    where
        Self: Sized;
}

#[derive(Debug, Clone)]
struct Node {
    word: Vec<u16>,
    period: usize,
    length: f64,
    amplitude: f64,
}

struct Walker<'a, S> {
    alpha: &'a Alphabet,
    limits: Limits,
    sink: S,
    nodes: u64,
    word: Vec<u16>,
    stop_at: usize,
    frontier: Vec<Node>,
    aborted: bool,
}

impl<S: Sink> Walker<'_, S> {
    fn descend(&mut self, period: usize, length: f64, amplitude: f64) {
        let n = self.word.len();
        if n == self.stop_at {
            self.frontier.push(Node {
                word: self.word.clone(),
                period,
                length,
                amplitude,
            });
            return;
        }
        self.nodes += 1;
        if self.nodes > self.limits.budget {
            self.aborted = true;
            return;
        }
        let last = self.word[n - 1] as usize;
        if period == n {
            let closed = amplitude * self.alpha.step(last, self.word[0] as usize);
            if closed.abs() > self.limits.floor {
                self.sink.visit(&self.word, length, closed);
            }
        }
        let min = self.word[n - period] as usize;
        for c in min..self.alpha.size() {
            let next_length = length + self.alpha.lengths[c];
            if !within(next_length, self.limits.l_max) {
                continue;
            }
            let next_amplitude = amplitude * self.alpha.step(last, c);
            if next_amplitude.abs() <= self.limits.floor {
                continue;
            }
            let next_period = if c == min { period } else { n + 1 };
            self.word.push(c as u16);
            self.descend(next_period, next_length, next_amplitude);
            self.word.pop();
            if self.aborted {
                return;
            }
        }
    }

    fn roots(&mut self) {
        for c in 0..self.alpha.size() {
            let length = self.alpha.lengths[c];
            if within(length, self.limits.l_max) {
                self.word.push(c as u16);
                self.descend(1, length, 1.0);
                self.word.pop();
                if self.aborted {
                    return;
                }
            }
        }
    }
}

/// Shallowest depth at which the search tree is split into work items.
/// It depends only on the alphabet so that the partition, and with it the
/// floating-point summation order, is the same for any number of threads.
fn split_depth(symbols: usize) -> usize {
    let mut depth = 1;
    let mut items = symbols.max(2);
    while items < 256 && depth < 6 {
        items *= symbols.max(2);
        depth += 1;
    }
    depth
}

/// Runs the search and merges the per-subtree sinks in a fixed order.
/// Returns the merged sink and the number of nodes visited.
pub(crate) fn search<S, F>(
    alpha: &Alphabet,
    limits: Limits,
    exec: Execution,
    make: F,
) -> Result<(S, u64)>
where
    S: Sink,
    F: Fn() -> S + Sync,
{
    if alpha.size() > u16::MAX as usize {
        return Err(Error::InvalidConfig("alphabet too large".into()));
    }
    let mut head = Walker {
        alpha,
        limits,
        sink: make(),
        nodes: 0,
        word: Vec::new(),
        stop_at: split_depth(alpha.size()),
        frontier: Vec::new(),
        aborted: false,
    };
    head.roots();
    if head.aborted {
        return Err(Error::BudgetExceeded {
            budget: limits.budget,
        });
    }
    let frontier = std::mem::take(&mut head.frontier);
    let parts = map_ordered(exec, &frontier, |node| {
        let mut w = Walker {
            alpha,
            limits,
            sink: make(),
            nodes: 0,
            word: node.word.clone(),
            stop_at: usize::MAX,
            frontier: Vec::new(),
            aborted: false,
        };
        w.descend(node.period, node.length, node.amplitude);
        (w.sink, w.nodes, w.aborted)
    });
    let mut sink = head.sink;
    let mut nodes = head.nodes;
    let mut aborted = false;
    for (part, n, a) in parts {
        sink.absorb(part);
        nodes = nodes.saturating_add(n);
        aborted |= a;
    }
    if aborted || nodes > limits.budget {
        return Err(Error::BudgetExceeded {
            budget: limits.budget,
        });
    }
    Ok((sink, nodes))
}
