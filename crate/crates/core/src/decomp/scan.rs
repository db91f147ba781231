use crate::store::NodeId;

/// The id window scanned by a pass, plus the window collected for the next
/// pass.
///
/// Nodes are visited in ascending id order. A node `u` triggered while
/// processing `v` is reachable in the current pass when `u > v` (the window
/// grows to cover it); when `u < v` it has already been passed, so it is
/// deferred to the next window and another pass is requested.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanRange {
    /// First id of the current window.
    pub lo: usize,
    /// One past the last id of the current window.
    pub hi: usize,
    next_lo: usize,
    next_hi: usize,
    /// Whether another pass is required.
    pub update: bool,
}

impl ScanRange {
    /// All of `0..n`, with a pass pending.
    pub fn full(n: usize) -> Self {
        Self::window(0, n)
    }

    /// `lo..=hi`, with a pass pending.
    pub fn between(lo: NodeId, hi: NodeId) -> Self {
        Self::window(lo as usize, hi as usize + 1)
    }

    fn window(lo: usize, hi: usize) -> Self {
        ScanRange {
            lo,
            hi,
            next_lo: usize::MAX,
            next_hi: 0,
            update: true,
        }
    }

    /// Reset the next-pass window and the update flag.
    pub fn begin_pass(&mut self) {
        self.update = false;
        self.next_lo = usize::MAX;
        self.next_hi = 0;
    }

    /// Register that `u` must be (re)examined because of a change at `v`.
    pub fn update_range(&mut self, u: NodeId, v: NodeId) {
        let u = u as usize;
        self.hi = self.hi.max(u + 1);
        if u < v as usize {
            self.update = true;
            self.next_lo = self.next_lo.min(u);
            self.next_hi = self.next_hi.max(u + 1);
        }
    }

    /// Window of the next pass, if any node was deferred to it.
    pub fn next_window(&self) -> Option<(usize, usize)> {
        (self.next_lo < self.next_hi).then_some((self.next_lo, self.next_hi))
    }

    /// Move to the next pass's window.
    pub fn end_pass(&mut self) {
        match self.next_window() {
            Some((lo, hi)) => {
                self.lo = lo;
                self.hi = hi;
            }
            None => {
                self.lo = 0;
                self.hi = 0;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn larger_neighbor_extends_current_window() {
        let mut r = ScanRange::between(5, 5);
        r.begin_pass();
        r.update_range(8, 5);
        assert_eq!(r.hi, 9);
        assert!(!r.update);
        assert_eq!(r.next_window(), None);
    }

    #[test]
    fn smaller_neighbor_is_deferred() {
        let mut r = ScanRange::full(9);
        r.begin_pass();
        r.update_range(3, 5);
        assert!(r.update);
        assert_eq!(r.next_window(), Some((3, 4)));
        r.update_range(4, 5);
        assert_eq!(r.next_window(), Some((3, 5)));
        r.end_pass();
        assert_eq!((r.lo, r.hi), (3, 5));
    }

    #[test]
    fn covered_neighbor_changes_nothing() {
        let mut r = ScanRange::full(9);
        r.begin_pass();
        let before = r;
        r.update_range(7, 2);
        assert_eq!(r, before);
    }
}
