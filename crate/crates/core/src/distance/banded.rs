/// Distance between `a` and `b` if it is at most `k`, otherwise `None`.
///
/// Only the diagonal band `|i - j| <= k` is evaluated. Cells outside the
/// band are known to exceed `k`, so they are clamped to `k + 1`, and the
/// scan stops as soon as an entire band row is above `k`.
pub fn levenshtein_bounded(a: &str, b: &str, k: usize) -> Option<usize> {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    levenshtein_bounded_chars(&a, &b, k)
}

pub fn levenshtein_bounded_chars(a: &[char], b: &[char], k: usize) -> Option<usize> {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let (n, m) = (long.len(), short.len());
    if n - m > k {
        return None;
    }
    if k == 0 {
        return (long == short).then_some(0);
    }
    if m == 0 {
        return Some(n);
    }

    let cap = k + 1;
    let mut prev = vec![cap; m + 1];
    let mut curr = vec![cap; m + 1];
    for (j, cell) in prev.iter_mut().enumerate().take(k.min(m) + 1) {
        *cell = j;
    }

    for i in 1..=n {
        let lo = i.saturating_sub(k).max(1);
        let hi = (i + k).min(m);
        // Column 0 is in band while i <= k; the cell left of the band is out.
        curr[lo - 1] = if lo == 1 && i <= k { i } else { cap };
        let lc = long[i - 1];
        let mut row_min = curr[lo - 1];
        for j in lo..=hi {
            let substitution = prev[j - 1] + usize::from(lc != short[j - 1]);
            let deletion = prev[j] + 1;
            let insertion = curr[j - 1] + 1;
            let v = substitution.min(deletion).min(insertion).min(cap);
            curr[j] = v;
            row_min = row_min.min(v);
        }
        if hi < m {
            curr[hi + 1] = cap;
        }
        if row_min > k {
            return None;
        }
        std::mem::swap(&mut prev, &mut curr);
    }

    let d = prev[m];
    (d <= k).then_some(d)
}
