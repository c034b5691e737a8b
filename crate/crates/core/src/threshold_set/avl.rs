use super::{
    check_range, Backend, Counters, OpCounters, ThresholdError, ThresholdSet, UpdateOutcome,
};

const NIL: u32 = u32::MAX;

#[derive(Debug, Clone)]
struct Node {
    key: u32,
    left: u32,
    right: u32,
    height: u8,
}

/// Threshold set stored in an AVL tree, so every dictionary operation
/// follows a root path of length `O(log |S|)`.
///
/// Nodes live in an arena addressed by `u32` indices; freed slots are reused.
#[derive(Debug)]
pub struct TreeBackend {
    nodes: Vec<Node>,
    free: Vec<u32>,
    root: u32,
    len: usize,
    capacity: u32,
    counters: Counters,
}

impl TreeBackend {
    pub fn new(capacity: u32) -> Self {
        TreeBackend {
            nodes: Vec::new(),
            free: Vec::new(),
            root: NIL,
            len: 0,
            capacity,
            counters: Counters::default(),
        }
    }

    /// Height of the tree; an empty tree has height 0.
    pub fn height(&self) -> u32 {
        u32::from(self.height_of(self.root))
    }

    fn height_of(&self, n: u32) -> u8 {
        if n == NIL {
            0
        } else {
            self.nodes[n as usize].height
        }
    }

    fn fix_height(&mut self, n: u32) {
        let node = &self.nodes[n as usize];
        let h = self.height_of(node.left).max(self.height_of(node.right)) + 1;
        self.nodes[n as usize].height = h;
    }

    fn balance_factor(&self, n: u32) -> i16 {
        let node = &self.nodes[n as usize];
        i16::from(self.height_of(node.left)) - i16::from(self.height_of(node.right))
    }

    fn rotate_right(&mut self, n: u32) -> u32 {
        let l = self.nodes[n as usize].left;
        self.nodes[n as usize].left = self.nodes[l as usize].right;
        self.nodes[l as usize].right = n;
        self.fix_height(n);
        self.fix_height(l);
        l
    }

    fn rotate_left(&mut self, n: u32) -> u32 {
        let r = self.nodes[n as usize].right;
        self.nodes[n as usize].right = self.nodes[r as usize].left;
        self.nodes[r as usize].left = n;
        self.fix_height(n);
        self.fix_height(r);
        r
    }

    fn rebalance(&mut self, n: u32) -> u32 {
        self.fix_height(n);
        let bf = self.balance_factor(n);
        if bf > 1 {
            let l = self.nodes[n as usize].left;
            if self.balance_factor(l) < 0 {
                let nl = self.rotate_left(l);
                self.nodes[n as usize].left = nl;
            }
            self.rotate_right(n)
        } else if bf < -1 {
            let r = self.nodes[n as usize].right;
            if self.balance_factor(r) > 0 {
                let nr = self.rotate_right(r);
                self.nodes[n as usize].right = nr;
            }
            self.rotate_left(n)
        } else {
            n
        }
    }

    fn alloc(&mut self, key: u32) -> u32 {
        let node = Node {
            key,
            left: NIL,
            right: NIL,
            height: 1,
        };
        match self.free.pop() {
            Some(i) => {
                self.nodes[i as usize] = node;
                i
            }
            None => {
                self.nodes.push(node);
                (self.nodes.len() - 1) as u32
            }
        }
    }

    fn insert_at(&mut self, n: u32, key: u32, depth: u64) -> u32 {
        if n == NIL {
            self.counters.depth(depth);
            self.len += 1;
            return self.alloc(key);
        }
        let node_key = self.nodes[n as usize].key;
        if key < node_key {
            let l = self.insert_at(self.nodes[n as usize].left, key, depth + 1);
            self.nodes[n as usize].left = l;
        } else if key > node_key {
            let r = self.insert_at(self.nodes[n as usize].right, key, depth + 1);
            self.nodes[n as usize].right = r;
        } else {
            self.counters.depth(depth);
            return n;
        }
        self.rebalance(n)
    }

    /// Detaches the minimum of the subtree at `n`; returns (new subtree, min node).
    fn take_min(&mut self, n: u32) -> (u32, u32) {
        let l = self.nodes[n as usize].left;
        if l == NIL {
            return (self.nodes[n as usize].right, n);
        }
        let (nl, min) = self.take_min(l);
        self.nodes[n as usize].left = nl;
        (self.rebalance(n), min)
    }

    fn delete_at(&mut self, n: u32, key: u32, depth: u64) -> u32 {
        if n == NIL {
            self.counters.depth(depth);
            return NIL;
        }
        let node_key = self.nodes[n as usize].key;
        if key < node_key {
            let l = self.delete_at(self.nodes[n as usize].left, key, depth + 1);
            self.nodes[n as usize].left = l;
        } else if key > node_key {
            let r = self.delete_at(self.nodes[n as usize].right, key, depth + 1);
            self.nodes[n as usize].right = r;
        } else {
            self.counters.depth(depth);
            self.len -= 1;
            self.free.push(n);
            let Node { left, right, .. } = self.nodes[n as usize];
            if left == NIL {
                return right;
            }
            if right == NIL {
                return left;
            }
            let (nr, min) = self.take_min(right);
            self.nodes[min as usize].left = left;
            self.nodes[min as usize].right = nr;
            return self.rebalance(min);
        }
        self.rebalance(n)
    }

    fn successor_key(&self, x: u32) -> Option<u32> {
        let (mut n, mut best, mut depth) = (self.root, None, 0);
        while n != NIL {
            depth += 1;
            let node = &self.nodes[n as usize];
            if node.key > x {
                best = Some(node.key);
                n = node.left;
            } else {
                n = node.right;
            }
        }
        self.counters.depth(depth);
        best
    }

    fn predecessor_key(&self, x: u32) -> Option<u32> {
        let (mut n, mut best, mut depth) = (self.root, None, 0);
        while n != NIL {
            depth += 1;
            let node = &self.nodes[n as usize];
            if node.key < x {
                best = Some(node.key);
                n = node.right;
            } else {
                n = node.left;
            }
        }
        self.counters.depth(depth);
        best
    }

    fn insert_key(&mut self, key: u32) {
        self.counters.insert();
        self.root = self.insert_at(self.root, key, 1);
    }

    fn delete_key(&mut self, key: u32) {
        self.counters.delete();
        self.root = self.delete_at(self.root, key, 1);
    }

    /// Checks ordering, stored heights and the AVL balance condition.
    pub fn validate(&self) -> Result<(), String> {
        fn walk(
            t: &TreeBackend,
            n: u32,
            lo: Option<u32>,
            hi: Option<u32>,
        ) -> Result<(u8, usize), String> {
            if n == NIL {
                return Ok((0, 0));
            }
            let node = &t.nodes[n as usize];
            if lo.is_some_and(|lo| node.key <= lo) || hi.is_some_and(|hi| node.key >= hi) {
                return Err(format!("key {} out of order", node.key));
            }
            let (hl, cl) = walk(t, node.left, lo, Some(node.key))?;
            let (hr, cr) = walk(t, node.right, Some(node.key), hi)?;
            if hl.abs_diff(hr) > 1 {
                return Err(format!("node {} unbalanced ({hl} vs {hr})", node.key));
            }
            let h = hl.max(hr) + 1;
            if h != node.height {
                return Err(format!(
                    "node {} stores height {} but has {h}",
                    node.key, node.height
                ));
            }
            Ok((h, cl + cr + 1))
        }
        let (_, count) = walk(self, self.root, None, None)?;
        if count != self.len {
            return Err(format!("len {} but {count} reachable nodes", self.len));
        }
        Ok(())
    }
}

impl ThresholdSet for TreeBackend {
    fn backend(&self) -> Backend {
        Backend::Tree
    }

    fn capacity(&self) -> u32 {
        self.capacity
    }

    fn size(&self) -> usize {
        self.counters.size();
        self.len
    }

    fn succ(&self, x: u32) -> Result<u32, ThresholdError> {
        check_range(x, 0, self.capacity)?;
        self.counters.succ();
        Ok(self.successor_key(x).unwrap_or(0))
    }

    fn pred(&self, x: u32) -> Result<u32, ThresholdError> {
        check_range(x, 1, self.capacity)?;
        self.counters.pred();
        Ok(self.predecessor_key(x).unwrap_or(0))
    }

    fn max(&self) -> u32 {
        let mut n = self.root;
        let mut max = 0;
        while n != NIL {
            max = self.nodes[n as usize].key;
            n = self.nodes[n as usize].right;
        }
        max
    }

    fn update(&mut self, x: u32) -> Result<UpdateOutcome, ThresholdError> {
        check_range(x, 1, self.capacity)?;
        self.counters.update();
        let k = self.succ(x - 1)?;
        if k == x {
            return Ok(UpdateOutcome::Replaced(k));
        }
        if k > 0 {
            self.delete_key(k);
        }
        self.insert_key(x);
        Ok(if k > 0 {
            UpdateOutcome::Replaced(k)
        } else {
            UpdateOutcome::Appended
        })
    }

    fn contents(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.len);
        let mut stack = Vec::new();
        let mut n = self.root;
        while n != NIL || !stack.is_empty() {
            while n != NIL {
                stack.push(n);
                n = self.nodes[n as usize].left;
            }
            let top = stack.pop().expect("non-empty stack");
            out.push(self.nodes[top as usize].key);
            n = self.nodes[top as usize].right;
        }
        out
    }

    fn counters(&self) -> OpCounters {
        self.counters.snapshot()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stays_balanced_under_sequential_appends() {
        let mut t = TreeBackend::new(5000);
        for x in 1..=4095 {
            t.update(x).unwrap();
        }
        t.validate().unwrap();
        assert_eq!(t.contents().len(), 4095);
        // A perfectly balanced tree of 4095 keys has height 12; AVL allows ~1.44x.
        assert!(t.height() <= 18, "height {}", t.height());
    }

    #[test]
    fn delete_rebalances() {
        let mut t = TreeBackend::new(1000);
        for x in (1..=999).step_by(2) {
            t.insert_key(x);
        }
        for x in (1..=999).step_by(4) {
            t.delete_key(x);
            t.validate().unwrap();
        }
        assert_eq!(t.contents(), (3..=999).step_by(4).collect::<Vec<_>>());
    }

    #[test]
    fn depth_counter_tracks_search_paths() {
        let mut t = TreeBackend::new(100);
        for x in [10, 20, 30, 40, 50, 60, 70] {
            t.update(x).unwrap();
        }
        assert_eq!(t.height(), 3);
        assert!(t.counters().max_depth <= 4);
    }
}
