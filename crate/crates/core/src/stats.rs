/// Counters collected by the branching solvers.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes_expanded: u64,
    pub leaves_ie: u64,
    pub leaves_rejected: u64,
    pub max_depth: u32,
    /// Subset terms evaluated across all inclusion-exclusion calls.
    pub ie_subsets: u64,
    /// Budget partitions tried at the top level.
    pub partitions_tried: u64,
    /// Nodes where a planted cover let the pending-line leftovers be counted.
    pub ghost_checks: u64,
    /// Of those, nodes with more leftovers than pending lines times the
    /// depth's upper richness threshold.
    pub ghost_bound_exceeded: u64,
}

impl SearchStats {
    pub fn merge(&mut self, other: &SearchStats) {
        self.nodes_expanded += other.nodes_expanded;
        self.leaves_ie += other.leaves_ie;
        self.leaves_rejected += other.leaves_rejected;
        self.max_depth = self.max_depth.max(other.max_depth);
        self.ie_subsets += other.ie_subsets;
        self.partitions_tried += other.partitions_tried;
        self.ghost_checks += other.ghost_checks;
        self.ghost_bound_exceeded += other.ghost_bound_exceeded;
    }
}
