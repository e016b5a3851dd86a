//! Small exact counting helpers shared by the closed-form degree formulas.

/// `C(n, k)` in `u128`; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

pub fn factorial(n: u64) -> u128 {
    (1..=n as u128).product()
}

pub fn ceil_div(a: u64, b: u64) -> u64 {
    a.div_ceil(b)
}

/// Advances `indices` (a strictly increasing k-subset of `0..n`) to the next
/// subset in lexicographic order. Returns false after the last subset.
pub fn next_combination(indices: &mut [usize], n: usize) -> bool {
    let k = indices.len();
    if k == 0 {
        return false;
    }
    let mut i = k;
    while i > 0 {
        i -= 1;
        if indices[i] < n - k + i {
            indices[i] += 1;
            for j in i + 1..k {
                indices[j] = indices[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// All set partitions of `0..m` as restricted growth strings, in
/// lexicographic order. `blocks[i]` is the block index of element `i`.
pub fn set_partitions(m: usize) -> Vec<Vec<usize>> {
    fn rec(pos: usize, m: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if pos == m {
            out.push(cur.clone());
            return;
        }
        let limit = if pos == 0 { 0 } else { max + 1 };
        for b in 0..=limit {
            cur.push(b);
            rec(pos + 1, m, max.max(b), cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if m == 0 {
        out.push(Vec::new());
        return out;
    }
    rec(0, m, 0, &mut Vec::with_capacity(m), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 3), 20);
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(0, 0), 1);
        assert_eq!(factorial(4), 24);
    }

    #[test]
    fn combinations_are_lexicographic() {
        let mut idx = vec![0, 1];
        let mut seen = vec![idx.clone()];
        while next_combination(&mut idx, 4) {
            seen.push(idx.clone());
        }
        assert_eq!(seen.len(), 6);
        assert_eq!(seen[1], vec![0, 2]);
        assert_eq!(seen[5], vec![2, 3]);
    }

    #[test]
    fn bell_numbers() {
        let bell: Vec<usize> = (0..7).map(|m| set_partitions(m).len()).collect();
        assert_eq!(bell, vec![1, 1, 2, 5, 15, 52, 203]);
    }
}
