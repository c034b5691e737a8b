use super::{
    check_range, Backend, Counters, OpCounters, ThresholdError, ThresholdSet, UpdateOutcome,
};
use crate::veb::VebTree;

/// Threshold set stored in a van Emde Boas tree over `{0, .., capacity}`.
///
/// `update` costs one successor query plus at most one delete and one insert.
#[derive(Debug)]
pub struct VebBackend {
    tree: VebTree,
    capacity: u32,
    counters: Counters,
    literal_max_guard: bool,
}

impl VebBackend {
    pub fn new(capacity: u32) -> Self {
        let tree =
            VebTree::new(u64::from(capacity) + 1).expect("u32 capacity fits the vEB universe");
        VebBackend {
            tree,
            capacity,
            counters: Counters::default(),
            literal_max_guard: false,
        }
    }

    /// A deliberately faulty variant that only deletes the successor when it
    /// is strictly below the current maximum. When the successor *is* the
    /// maximum, the set grows instead of replacing it, overcounting the LCS.
    /// Exists so verification tooling can be shown to catch the fault.
    #[doc(hidden)]
    pub fn with_literal_max_guard(capacity: u32) -> Self {
        VebBackend {
            literal_max_guard: true,
            ..Self::new(capacity)
        }
    }

    pub fn tree(&self) -> &VebTree {
        &self.tree
    }
}

impl ThresholdSet for VebBackend {
    fn backend(&self) -> Backend {
        Backend::Veb
    }

    fn capacity(&self) -> u32 {
        self.capacity
    }

    fn size(&self) -> usize {
        self.counters.size();
        self.tree.len() as usize
    }

    fn succ(&self, x: u32) -> Result<u32, ThresholdError> {
        check_range(x, 0, self.capacity)?;
        self.counters.succ();
        Ok(self
            .tree
            .successor(u64::from(x))
            .expect("in universe")
            .map_or(0, |k| k as u32))
    }

    fn pred(&self, x: u32) -> Result<u32, ThresholdError> {
        check_range(x, 1, self.capacity)?;
        self.counters.pred();
        Ok(self
            .tree
            .predecessor(u64::from(x))
            .expect("in universe")
            .map_or(0, |k| k as u32))
    }

    fn max(&self) -> u32 {
        self.tree.max().map_or(0, |k| k as u32)
    }

    fn update(&mut self, x: u32) -> Result<UpdateOutcome, ThresholdError> {
        check_range(x, 1, self.capacity)?;
        self.counters.update();
        let k = self.succ(x - 1)?;
        if k == x {
            return Ok(UpdateOutcome::Replaced(k));
        }
        let remove = if self.literal_max_guard {
            k > 0 && k < self.max()
        } else {
            k > 0
        };
        if remove {
            self.counters.delete();
            self.tree.delete(u64::from(k)).expect("in universe");
        }
        self.counters.insert();
        self.tree.insert(u64::from(x)).expect("in universe");
        Ok(if k > 0 {
            UpdateOutcome::Replaced(k)
        } else {
            UpdateOutcome::Appended
        })
    }

    fn contents(&self) -> Vec<u32> {
        self.tree.iter().map(|k| k as u32).collect()
    }

    fn counters(&self) -> OpCounters {
        self.counters.snapshot()
    }
}
