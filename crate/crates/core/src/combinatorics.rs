//! Increasing index tuples, binomials and lex ranking.

/// Binomial coefficient; 0 when `k > n`.
pub fn binomial(n: usize, k: usize) -> u128 {
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

/// All strictly increasing `r`-tuples from `0..d`, in lex order.
pub fn increasing_tuples(d: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if r > d {
        return out;
    }
    let mut cur: Vec<usize> = (0..r).collect();
    loop {
        out.push(cur.clone());
        // rightmost position that can still move
        let mut i = r;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < d - r + i {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..r {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Lex rank of an increasing tuple among all increasing `t.len()`-tuples from `0..d`.
pub fn tuple_rank(d: usize, t: &[usize]) -> usize {
    let r = t.len();
    let mut rank = 0u128;
    let mut prev = 0usize;
    for (pos, &x) in t.iter().enumerate() {
        for y in prev..x {
            rank += binomial(d - y - 1, r - pos - 1);
        }
        prev = x + 1;
    }
    rank as usize
}

/// Sorts a tuple, returning the sign of the sorting permutation, or `None` on a repeated index.
pub fn sort_with_sign(t: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut v = t.to_vec();
    let mut negative = false;
    // insertion sort counting transpositions
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            negative = !negative;
            j -= 1;
        }
        if j > 0 && v[j - 1] == v[j] {
            return None;
        }
    }
    Some((v, negative))
}

/// Calls `f` on every element of `0..base` ^ `len`, odometer order with the last slot fastest.
pub fn for_each_word(base: usize, len: usize, mut f: impl FnMut(&[usize])) {
    if base == 0 && len > 0 {
        return;
    }
    let mut w = vec![0usize; len];
    loop {
        f(&w);
        let mut i = len;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            w[i] += 1;
            if w[i] < base {
                break;
            }
            w[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(4, 0), 1);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(64, 32), 1832624140942590534);
    }

    #[test]
    fn tuples_in_lex_order_with_ranks() {
        let ts = increasing_tuples(5, 3);
        assert_eq!(ts.len(), 10);
        assert_eq!(ts[0], vec![0, 1, 2]);
        assert_eq!(ts[9], vec![2, 3, 4]);
        for (i, t) in ts.iter().enumerate() {
            assert_eq!(tuple_rank(5, t), i);
        }
        assert_eq!(increasing_tuples(3, 0), vec![Vec::<usize>::new()]);
        assert!(increasing_tuples(2, 3).is_empty());
    }

    #[test]
    fn sorting_sign() {
        assert_eq!(sort_with_sign(&[2, 0, 1]), Some((vec![0, 1, 2], false)));
        assert_eq!(sort_with_sign(&[1, 0]), Some((vec![0, 1], true)));
        assert_eq!(sort_with_sign(&[1, 2, 1]), None);
    }

    #[test]
    fn words() {
        let mut n = 0;
        let mut last = vec![];
        for_each_word(3, 2, |w| {
            n += 1;
            last = w.to_vec();
        });
        assert_eq!(n, 9);
        assert_eq!(last, vec![2, 2]);
        let mut n = 0;
        for_each_word(4, 0, |_| n += 1);
        assert_eq!(n, 1);
    }
}
