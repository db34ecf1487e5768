//! Generic time-ordered labeling pool with bucketed dominance.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};

pub const NO_PARENT: u32 = u32::MAX;

#[derive(Clone, Debug)]
pub struct Entry<L> {
    pub label: L,
    pub parent: u32,
    /// Node appended (first level) or subpath joined (second level).
    pub aux: u32,
    alive: bool,
    popped: bool,
}

#[derive(PartialEq)]
struct HeapKey {
    time: f64,
    seq: u32,
}

impl Eq for HeapKey {}

impl Ord for HeapKey {
    fn cmp(&self, o: &Self) -> Ordering {
        // Min-heap on time, FIFO among ties.
        o.time.total_cmp(&self.time).then(o.seq.cmp(&self.seq))
    }
}

impl PartialOrd for HeapKey {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

pub struct Pool<L> {
    pub entries: Vec<Entry<L>>,
    buckets: HashMap<usize, Vec<u32>>,
    heap: BinaryHeap<HeapKey>,
    pub rejected: usize,
}

impl<L> Pool<L> {
    pub fn new() -> Self {
        Pool {
            entries: Vec::new(),
            buckets: HashMap::new(),
            heap: BinaryHeap::new(),
            rejected: 0,
        }
    }

    /// Inserts unless dominated; drops queued labels the newcomer dominates.
    pub fn push(
        &mut self,
        label: L,
        bucket: usize,
        time: f64,
        parent: u32,
        aux: u32,
        dominates: impl Fn(&L, &L) -> bool,
    ) -> bool {
        let b = self.buckets.entry(bucket).or_default();
        if b.iter()
            .any(|&i| dominates(&self.entries[i as usize].label, &label))
        {
            self.rejected += 1;
            return false;
        }
        let entries = &mut self.entries;
        b.retain(|&i| {
            let e = &mut entries[i as usize];
            if !e.popped && dominates(&label, &e.label) {
                e.alive = false;
                false
            } else {
                true
            }
        });
        let idx = entries.len() as u32;
        entries.push(Entry {
            label,
            parent,
            aux,
            alive: true,
            popped: false,
        });
        b.push(idx);
        self.heap.push(HeapKey { time, seq: idx });
        true
    }

    pub fn pop(&mut self) -> Option<u32> {
        while let Some(k) = self.heap.pop() {
            let e = &mut self.entries[k.seq as usize];
            if e.alive {
                e.popped = true;
                return Some(k.seq);
            }
        }
        None
    }

    pub fn label(&self, i: u32) -> &L {
        &self.entries[i as usize].label
    }

    /// Chain of `aux` values from the root to `i`.
    pub fn trace(&self, mut i: u32) -> Vec<u32> {
        let mut out = Vec::new();
        while i != NO_PARENT {
            let e = &self.entries[i as usize];
            out.push(e.aux);
            i = e.parent;
        }
        out.reverse();
        out
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }
}
