/// `Σ_{i=1..k} 2^-(i-1) · [P_i is a prefix of C] · |P_i| / |C|` over the
/// first `k` candidates, lengths in characters. Missing candidates add 0, and
/// the sum can exceed 1 when several candidates are prefixes of `truth`.
pub fn topk_score<S: AsRef<str>>(candidates: &[S], truth: &str, k: usize) -> f64 {
    let total = truth.chars().count();
    if total == 0 {
        return 0.0;
    }
    let mut score = 0.0;
    let mut weight = 1.0;
    for p in candidates.iter().take(k) {
        let p = p.as_ref();
        if !p.is_empty() && truth.starts_with(p) {
            score += weight * p.chars().count() as f64 / total as f64;
        }
        weight /= 2.0;
    }
    score
}
