//! Sparse vectors as sorted `(index, value)` lists with no stored zeros.

use num_traits::Zero;

use super::field::{Elem, Field};

pub type SVec = Vec<(usize, Elem)>;

pub fn unit(i: usize) -> SVec {
    vec![(i, Elem::from_integer(1.into()))]
}

pub fn from_dense(v: &[Elem]) -> SVec {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

pub fn to_dense(v: &SVec, dim: usize) -> Vec<Elem> {
    let mut out = vec![Elem::zero(); dim];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

/// `a + c * b`.
pub fn axpy(f: &Field, a: &SVec, c: &Elem, b: &SVec) -> SVec {
    if c.is_zero() || b.is_empty() {
        return a.clone();
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, f.mul(c, &b[j].1)));
            j += 1;
        } else {
            let v = f.add(&a[i].1, &f.mul(c, &b[j].1));
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn add(f: &Field, a: &SVec, b: &SVec) -> SVec {
    axpy(f, a, &f.one(), b)
}

pub fn sub(f: &Field, a: &SVec, b: &SVec) -> SVec {
    axpy(f, a, &f.from_i64(-1), b)
}

pub fn scale(f: &Field, c: &Elem, a: &SVec) -> SVec {
    if c.is_zero() {
        return Vec::new();
    }
    a.iter().map(|(i, x)| (*i, f.mul(c, x))).collect()
}

pub fn dot(f: &Field, a: &SVec, b: &SVec) -> Elem {
    let (mut i, mut j) = (0, 0);
    let mut acc = Elem::zero();
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                acc = f.add(&acc, &f.mul(&a[i].1, &b[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    acc
}

pub fn get(a: &SVec, i: usize) -> Elem {
    match a.binary_search_by_key(&i, |(k, _)| *k) {
        Ok(p) => a[p].1.clone(),
        Err(_) => Elem::zero(),
    }
}

/// Collects unsorted `(index, value)` contributions into a canonical sparse vector.
pub fn collect(f: &Field, mut items: Vec<(usize, Elem)>) -> SVec {
    items.sort_by_key(|(i, _)| *i);
    let mut out: SVec = Vec::with_capacity(items.len());
    for (i, x) in items {
        match out.last_mut() {
            Some((j, y)) if *j == i => *y = f.add(y, &x),
            _ => out.push((i, x)),
        }
    }
    out.retain(|(_, x)| !x.is_zero());
    out
}

/// Shifts all indices by `offset`.
pub fn offset(a: &SVec, offset: usize) -> SVec {
    a.iter().map(|(i, x)| (i + offset, x.clone())).collect()
}

/// Restricts to indices in `[start, start + len)` and re-bases them at 0.
pub fn slice(a: &SVec, start: usize, len: usize) -> SVec {
    a.iter()
        .filter(|(i, _)| *i >= start && *i < start + len)
        .map(|(i, x)| (i - start, x.clone()))
        .collect()
}

/// Kronecker product of vectors: index of `(i, j)` is `i * dim_b + j`.
pub fn kron(f: &Field, a: &SVec, b: &SVec, dim_b: usize) -> SVec {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for (i, x) in a {
        for (j, y) in b {
            out.push((i * dim_b + j, f.mul(x, y)));
        }
    }
    out
}
