//! Addressable binary max-heap keyed by node id.
//!
//! Positions are tracked per id so keys can be changed or entries removed in
//! O(log n). Wrap keys in [`std::cmp::Reverse`] for min-heap behavior.

use crate::graph::NodeId;

const ABSENT: usize = usize::MAX;

#[derive(Debug, Clone)]
pub struct IndexedHeap<K> {
    heap: Vec<NodeId>,
    pos: Vec<usize>,
    keys: Vec<Option<K>>,
}

impl<K: Ord + Copy> IndexedHeap<K> {
    /// Empty heap that accepts ids in `[0, capacity)`.
    pub fn with_capacity(capacity: usize) -> Self {
        Self {
            heap: Vec::new(),
            pos: vec![ABSENT; capacity],
            keys: vec![None; capacity],
        }
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.pos.get(id).is_some_and(|&p| p != ABSENT)
    }

    pub fn key(&self, id: NodeId) -> Option<K> {
        self.keys.get(id).copied().flatten()
    }

    /// The id with the largest key.
    pub fn peek(&self) -> Option<(NodeId, K)> {
        self.heap.first().map(|&id| (id, self.keys[id].unwrap()))
    }

    /// Inserts `id`, or updates its key if already present.
    pub fn push(&mut self, id: NodeId, key: K) {
        if self.contains(id) {
            self.update(id, key);
            return;
        }
        self.keys[id] = Some(key);
        self.pos[id] = self.heap.len();
        self.heap.push(id);
        self.sift_up(self.heap.len() - 1);
    }

    /// Changes the key of a present `id`. Returns `false` if absent.
    pub fn update(&mut self, id: NodeId, key: K) -> bool {
        let Some(old) = self.key(id) else {
            return false;
        };
        self.keys[id] = Some(key);
        let p = self.pos[id];
        if key > old {
            self.sift_up(p);
        } else if key < old {
            self.sift_down(p);
        }
        true
    }

    /// Changes the keys of many present ids at once. When the batch is a
    /// large share of the heap it is cheaper to rebuild than to sift each
    /// entry, so the heap is re-heapified in O(n). Absent ids are ignored.
    pub fn update_many(&mut self, updates: &[(NodeId, K)]) {
        let n = self.heap.len();
        let sift_cost = updates.len() * (usize::BITS - n.leading_zeros()) as usize;
        if sift_cost <= 2 * n {
            for &(id, key) in updates {
                self.update(id, key);
            }
            return;
        }
        for &(id, key) in updates {
            if self.contains(id) {
                self.keys[id] = Some(key);
            }
        }
        for i in (0..n / 2).rev() {
            self.sift_down(i);
        }
    }

    pub fn pop(&mut self) -> Option<(NodeId, K)> {
        let (id, _) = self.peek()?;
        self.remove(id)
    }

    pub fn remove(&mut self, id: NodeId) -> Option<(NodeId, K)> {
        let key = self.key(id)?;
        let p = self.pos[id];
        let last = self.heap.len() - 1;
        self.swap(p, last);
        self.heap.pop();
        self.pos[id] = ABSENT;
        self.keys[id] = None;
        if p < self.heap.len() {
            self.sift_down(p);
            self.sift_up(p);
        }
        Some((id, key))
    }

    /// The best entry whose id is not rejected by `skip`. Walks the heap
    /// best-first, so the cost is proportional to the number of skipped
    /// entries that outrank the answer.
    pub fn peek_excluding(&self, skip: impl Fn(NodeId) -> bool) -> Option<(NodeId, K)> {
        let mut frontier = std::collections::BinaryHeap::new();
        if let Some(&id) = self.heap.first() {
            frontier.push((self.keys[id].unwrap(), 0usize));
        }
        while let Some((key, i)) = frontier.pop() {
            let id = self.heap[i];
            if !skip(id) {
                return Some((id, key));
            }
            for child in [2 * i + 1, 2 * i + 2] {
                if let Some(&c) = self.heap.get(child) {
                    frontier.push((self.keys[c].unwrap(), child));
                }
            }
        }
        None
    }

    /// Ids currently in the heap, in heap-array order.
    pub fn ids(&self) -> &[NodeId] {
        &self.heap
    }

    fn less(&self, a: usize, b: usize) -> bool {
        self.keys[self.heap[a]] < self.keys[self.heap[b]]
    }

    fn swap(&mut self, a: usize, b: usize) {
        self.heap.swap(a, b);
        self.pos[self.heap[a]] = a;
        self.pos[self.heap[b]] = b;
    }

    fn sift_up(&mut self, mut i: usize) {
        while i > 0 {
            let parent = (i - 1) / 2;
            if !self.less(parent, i) {
                break;
            }
            self.swap(parent, i);
            i = parent;
        }
    }

    fn sift_down(&mut self, mut i: usize) {
        let n = self.heap.len();
        loop {
            let l = 2 * i + 1;
            if l >= n {
                break;
            }
            let r = l + 1;
            let child = if r < n && self.less(l, r) { r } else { l };
            if !self.less(i, child) {
                break;
            }
            self.swap(i, child);
            i = child;
        }
    }

    #[cfg(test)]
    fn check(&self) {
        for i in 1..self.heap.len() {
            assert!(!self.less((i - 1) / 2, i));
        }
        for (i, &id) in self.heap.iter().enumerate() {
            assert_eq!(self.pos[id], i);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::cmp::Reverse;
    use std::collections::BTreeMap;

    #[test]
    fn max_order_and_update() {
        let mut h = IndexedHeap::with_capacity(5);
        for (id, k) in [(0, 3), (1, 7), (2, 5), (3, 1)] {
            h.push(id, k);
        }
        assert_eq!(h.peek(), Some((1, 7)));
        h.update(3, 9);
        assert_eq!(h.peek(), Some((3, 9)));
        h.update(3, 0);
        assert_eq!(h.pop(), Some((1, 7)));
        assert_eq!(h.pop(), Some((2, 5)));
        assert_eq!(h.remove(3), Some((3, 0)));
        assert_eq!(h.len(), 1);
        assert!(!h.update(4, 1));
    }

    #[test]
    fn bulk_update_rebuilds() {
        let mut h = IndexedHeap::with_capacity(64);
        for id in 0..64 {
            h.push(id, id as i64);
        }
        let updates: Vec<_> = (0..64).map(|id| (id, -(id as i64))).collect();
        h.update_many(&updates);
        h.check();
        assert_eq!(h.peek(), Some((0, 0)));
        h.update_many(&[(5, 100)]);
        assert_eq!(h.peek(), Some((5, 100)));
        h.check();
    }

    #[test]
    fn reverse_gives_min_heap() {
        let mut h = IndexedHeap::with_capacity(3);
        h.push(0, Reverse(4));
        h.push(1, Reverse(2));
        h.push(2, Reverse(8));
        assert_eq!(h.peek(), Some((1, Reverse(2))));
    }

    #[derive(Debug, Clone)]
    enum Op {
        Push(usize, i32),
        Update(usize, i32),
        Remove(usize),
        Bulk(Vec<(usize, i32)>),
        PeekSkip(usize),
        Pop,
    }

    fn op() -> impl Strategy<Value = Op> {
        prop_oneof![
            (0..20usize, -50..50i32).prop_map(|(i, k)| Op::Push(i, k)),
            (0..20usize, -50..50i32).prop_map(|(i, k)| Op::Update(i, k)),
            (0..20usize).prop_map(Op::Remove),
            prop::collection::vec((0..20usize, -50..50i32), 0..30).prop_map(Op::Bulk),
            (2..5usize).prop_map(Op::PeekSkip),
            Just(Op::Pop),
        ]
    }

    proptest! {
        #[test]
        fn agrees_with_ordered_map(ops in prop::collection::vec(op(), 0..200)) {
            let mut heap = IndexedHeap::with_capacity(20);
            let mut model: BTreeMap<usize, i32> = BTreeMap::new();
            for op in ops {
                match op {
                    Op::Push(i, k) => { heap.push(i, (k, Reverse(i))); model.insert(i, k); }
                    Op::Update(i, k) => {
                        let present = heap.update(i, (k, Reverse(i)));
                        prop_assert_eq!(present, model.contains_key(&i));
                        if present { model.insert(i, k); }
                    }
                    Op::Remove(i) => {
                        prop_assert_eq!(heap.remove(i).map(|(id, _)| id), model.remove(&i).map(|_| i));
                    }
                    Op::Bulk(items) => {
                        let items: Vec<_> = items.into_iter().map(|(i, k)| (i, (k, Reverse(i)))).collect();
                        heap.update_many(&items);
                        for (i, (k, _)) in items {
                            if let Some(slot) = model.get_mut(&i) { *slot = k; }
                        }
                    }
                    Op::PeekSkip(m) => {
                        let expected = model.iter().filter(|&(&i, _)| i % m != 0).max_by_key(|&(&i, &k)| (k, Reverse(i))).map(|(&i, _)| i);
                        prop_assert_eq!(heap.peek_excluding(|i| i % m == 0).map(|(id, _)| id), expected);
                    }
                    Op::Pop => {
                        let expected = model.iter().max_by_key(|&(&i, &k)| (k, Reverse(i))).map(|(&i, _)| i);
                        prop_assert_eq!(heap.pop().map(|(id, _)| id), expected);
                        if let Some(i) = expected { model.remove(&i); }
                    }
                }
                heap.check();
                prop_assert_eq!(heap.len(), model.len());
            }
        }
    }
}
