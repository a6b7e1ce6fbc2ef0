//! Result consumers.

use std::ops::ControlFlow;

/// Receives maximal bicliques as dense vertex indices. The slices are not
/// sorted. Returning `Break` asks the enumerator to stop.
pub trait BicliqueSink {
    fn accept(&mut self, left: &[u32], right: &[u32]) -> ControlFlow<()>;
}

impl<F> BicliqueSink for F
where
    F: FnMut(&[u32], &[u32]) -> ControlFlow<()>,
{
    fn accept(&mut self, left: &[u32], right: &[u32]) -> ControlFlow<()> {
        self(left, right)
    }
}

#[derive(Debug, Default, Clone, Copy)]
pub struct CountSink {
    pub count: u64,
}

impl BicliqueSink for CountSink {
    fn accept(&mut self, _left: &[u32], _right: &[u32]) -> ControlFlow<()> {
        self.count += 1;
        ControlFlow::Continue(())
    }
}

/// Collects every result with both sides sorted ascending.
#[derive(Debug, Default, Clone)]
pub struct CollectSink {
    pub results: Vec<(Vec<u32>, Vec<u32>)>,
}

impl BicliqueSink for CollectSink {
    fn accept(&mut self, left: &[u32], right: &[u32]) -> ControlFlow<()> {
        let mut l = left.to_vec();
        let mut r = right.to_vec();
        l.sort_unstable();
        r.sort_unstable();
        self.results.push((l, r));
        ControlFlow::Continue(())
    }
}
