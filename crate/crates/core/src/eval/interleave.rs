/// A contiguous run of one source inside an interleaved sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    /// 0 for the first source, 1 for the second.
    pub source: usize,
    /// Segment number within its source.
    pub segment: usize,
    pub start: usize,
    pub len: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Interleaved<T> {
    pub items: Vec<T>,
    pub spans: Vec<Span>,
}

impl<T> Interleaved<T> {
    /// Start positions of every span after the first.
    pub fn joints(&self) -> Vec<usize> {
        self.spans.iter().skip(1).map(|s| s.start).collect()
    }
}

/// Splits `len` items into `parts` contiguous sizes differing by at most
/// one, larger parts first.
fn partition(len: usize, parts: usize) -> Vec<usize> {
    (0..parts).map(|i| len / parts + usize::from(i < len % parts)).collect()
}

/// Cuts each source into `segments` parts and alternates them,
/// `a1 b1 a2 b2 ...`. Empty parts produce no span.
pub fn interleave<T: Clone>(a: &[T], b: &[T], segments: usize) -> Interleaved<T> {
    let segments = segments.max(1);
    let (pa, pb) = (partition(a.len(), segments), partition(b.len(), segments));
    let mut items = Vec::with_capacity(a.len() + b.len());
    let mut spans = Vec::new();
    let (mut at_a, mut at_b) = (0, 0);
    for i in 0..segments {
        for (source, src, at, len) in [(0, a, &mut at_a, pa[i]), (1, b, &mut at_b, pb[i])] {
            if len > 0 {
                spans.push(Span {
                    source,
                    segment: i,
                    start: items.len(),
                    len,
                });
                items.extend_from_slice(&src[*at..*at + len]);
                *at += len;
            }
        }
    }
    Interleaved { items, spans }
}
