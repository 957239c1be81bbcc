use std::collections::HashSet;

use rand::Rng;

use super::{shape_err, AlgebraError, GroupElement, GroupExpr};

/// Largest window [`enumerate_truncated`] will materialize.
pub const ENUMERATION_LIMIT: u128 = 4_000_000;

pub fn identity(expr: &GroupExpr) -> GroupElement {
    match expr {
        GroupExpr::Trivial => GroupElement::Unit,
        GroupExpr::Cyclic(_) => GroupElement::Residue(0),
        GroupExpr::FreeAbelian(r) => GroupElement::Vector(vec![0; *r]),
        GroupExpr::ScaledZ(_) => GroupElement::Int(0),
        GroupExpr::Atom { .. } => GroupElement::Atom(0),
        GroupExpr::Product(fs) => GroupElement::Tuple(fs.iter().map(identity).collect()),
        GroupExpr::WrZ { base, n } | GroupExpr::WrCyc { base, n } => GroupElement::Wreath {
            base: vec![identity(base); *n],
            outer: vec![0],
        },
        GroupExpr::WrZ2 { base, n, m } | GroupExpr::WrCycPair { base, n, m } => GroupElement::Wreath {
            base: vec![identity(base); n * m],
            outer: vec![0, 0],
        },
        GroupExpr::CentralQuotient { base, .. } => identity(base),
    }
}

pub fn check_shape(expr: &GroupExpr, x: &GroupElement) -> Result<(), AlgebraError> {
    let ok = match (expr, x) {
        (GroupExpr::Trivial, GroupElement::Unit) => true,
        (GroupExpr::Cyclic(n), GroupElement::Residue(r)) => r < n,
        (GroupExpr::FreeAbelian(r), GroupElement::Vector(v)) => v.len() == *r,
        (GroupExpr::ScaledZ(m), GroupElement::Int(v)) => v.rem_euclid(*m as i64) == 0,
        (GroupExpr::Atom { assignment, .. }, GroupElement::Atom(id)) => {
            (*id as usize) < assignment.as_ref().map_or(2, |g| g.order())
        }
        (GroupExpr::Product(fs), GroupElement::Tuple(xs)) if fs.len() == xs.len() => {
            for (f, x) in fs.iter().zip(xs) {
                check_shape(f, x)?;
            }
            true
        }
        (GroupExpr::WrZ { base, n }, GroupElement::Wreath { base: g, outer }) => {
            check_all(base, g, *n)? && outer.len() == 1
        }
        (GroupExpr::WrCyc { base, n }, GroupElement::Wreath { base: g, outer }) => {
            check_all(base, g, *n)? && outer.len() == 1 && (0..*n as i64).contains(&outer[0])
        }
        (GroupExpr::WrZ2 { base, n, m }, GroupElement::Wreath { base: g, outer }) => {
            check_all(base, g, n * m)? && outer.len() == 2
        }
        (GroupExpr::WrCycPair { base, n, m }, GroupElement::Wreath { base: g, outer }) => {
            check_all(base, g, n * m)?
                && outer.len() == 2
                && (0..*n as i64).contains(&outer[0])
                && (0..*m as i64).contains(&outer[1])
        }
        (GroupExpr::CentralQuotient { base, .. }, x) => {
            check_shape(base, x)?;
            canonicalize(expr, x)? == *x
        }
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(shape_err(expr, x))
    }
}

fn check_all(base: &GroupExpr, xs: &[GroupElement], len: usize) -> Result<bool, AlgebraError> {
    if xs.len() != len {
        return Ok(false);
    }
    for x in xs {
        check_shape(base, x)?;
    }
    Ok(true)
}

/// `alpha(g, a)_i = g_{i+a}` (indices mod `n`).
fn shift1(g: &[GroupElement], a: i64) -> Vec<GroupElement> {
    let n = g.len() as i64;
    (0..n).map(|i| g[(i + a).rem_euclid(n) as usize].clone()).collect()
}

/// `gamma(g, (a, b))_{ij} = g_{i+a, j+b}` (indices mod `n`, `m`), stored row-major.
fn shift2(g: &[GroupElement], n: usize, m: usize, a: i64, b: i64) -> Vec<GroupElement> {
    let (ni, mi) = (n as i64, m as i64);
    let mut out = Vec::with_capacity(n * m);
    for i in 0..ni {
        for j in 0..mi {
            let src = (i + a).rem_euclid(ni) * mi + (j + b).rem_euclid(mi);
            out.push(g[src as usize].clone());
        }
    }
    out
}

fn mul_coords(base: &GroupExpr, xs: &[GroupElement], ys: &[GroupElement]) -> Result<Vec<GroupElement>, AlgebraError> {
    xs.iter().zip(ys).map(|(x, y)| multiply(base, x, y)).collect()
}

fn checked(v: Option<i64>) -> Result<i64, AlgebraError> {
    v.ok_or_else(|| AlgebraError::Overflow("integer coordinate".into()))
}

/// Group product `a * b`.
///
/// For the wreath products `(g, a) * (g', a') = (shift(g, a') g', a + a')`:
/// the right factor's outer part shifts the left factor's coordinates.
pub fn multiply(expr: &GroupExpr, a: &GroupElement, b: &GroupElement) -> Result<GroupElement, AlgebraError> {
    let mismatch = || shape_err(expr, if matches!(a, GroupElement::Unit) { b } else { a });
    Ok(match (expr, a, b) {
        (GroupExpr::Trivial, GroupElement::Unit, GroupElement::Unit) => GroupElement::Unit,
        (GroupExpr::Cyclic(n), GroupElement::Residue(x), GroupElement::Residue(y)) => {
            GroupElement::Residue((x + y) % n)
        }
        (GroupExpr::FreeAbelian(r), GroupElement::Vector(x), GroupElement::Vector(y))
            if x.len() == *r && y.len() == *r =>
        {
            GroupElement::Vector(
                x.iter()
                    .zip(y)
                    .map(|(p, q)| checked(p.checked_add(*q)))
                    .collect::<Result<_, _>>()?,
            )
        }
        (GroupExpr::ScaledZ(_), GroupElement::Int(x), GroupElement::Int(y)) => {
            GroupElement::Int(checked(x.checked_add(*y))?)
        }
        (GroupExpr::Atom { label, assignment, .. }, GroupElement::Atom(x), GroupElement::Atom(y)) => match assignment {
            Some(g) => GroupElement::Atom(g.mul(*x, *y)),
            None if *x == 0 => GroupElement::Atom(*y),
            None if *y == 0 => GroupElement::Atom(*x),
            None => return Err(AlgebraError::UnassignedAtom(label.clone())),
        },
        (GroupExpr::Product(fs), GroupElement::Tuple(xs), GroupElement::Tuple(ys))
            if xs.len() == fs.len() && ys.len() == fs.len() =>
        {
            GroupElement::Tuple(
                fs.iter()
                    .zip(xs.iter().zip(ys))
                    .map(|(f, (x, y))| multiply(f, x, y))
                    .collect::<Result<_, _>>()?,
            )
        }
        (
            GroupExpr::WrZ { base, n } | GroupExpr::WrCyc { base, n },
            GroupElement::Wreath { base: g, outer: a1 },
            GroupElement::Wreath { base: h, outer: a2 },
        ) if g.len() == *n && h.len() == *n && a1.len() == 1 && a2.len() == 1 => {
            let coords = mul_coords(base, &shift1(g, a2[0]), h)?;
            let mut outer = checked(a1[0].checked_add(a2[0]))?;
            if matches!(expr, GroupExpr::WrCyc { .. }) {
                outer = outer.rem_euclid(*n as i64);
            }
            GroupElement::Wreath {
                base: coords,
                outer: vec![outer],
            }
        }
        (
            GroupExpr::WrZ2 { base, n, m } | GroupExpr::WrCycPair { base, n, m },
            GroupElement::Wreath { base: g, outer: a1 },
            GroupElement::Wreath { base: h, outer: a2 },
        ) if g.len() == n * m && h.len() == n * m && a1.len() == 2 && a2.len() == 2 => {
            let coords = mul_coords(base, &shift2(g, *n, *m, a2[0], a2[1]), h)?;
            let mut outer = vec![checked(a1[0].checked_add(a2[0]))?, checked(a1[1].checked_add(a2[1]))?];
            if matches!(expr, GroupExpr::WrCycPair { .. }) {
                outer[0] = outer[0].rem_euclid(*n as i64);
                outer[1] = outer[1].rem_euclid(*m as i64);
            }
            GroupElement::Wreath { base: coords, outer }
        }
        (GroupExpr::CentralQuotient { base, .. }, _, _) => {
            let rep = multiply(base, a, b)?;
            return canonicalize(expr, &rep);
        }
        _ => return Err(mismatch()),
    })
}

pub fn invert(expr: &GroupExpr, a: &GroupElement) -> Result<GroupElement, AlgebraError> {
    Ok(match (expr, a) {
        (GroupExpr::Trivial, GroupElement::Unit) => GroupElement::Unit,
        (GroupExpr::Cyclic(n), GroupElement::Residue(x)) => GroupElement::Residue((n - x % n) % n),
        (GroupExpr::FreeAbelian(r), GroupElement::Vector(x)) if x.len() == *r => {
            GroupElement::Vector(x.iter().map(|v| checked(v.checked_neg())).collect::<Result<_, _>>()?)
        }
        (GroupExpr::ScaledZ(_), GroupElement::Int(x)) => GroupElement::Int(checked(x.checked_neg())?),
        (GroupExpr::Atom { label, assignment, .. }, GroupElement::Atom(x)) => match assignment {
            Some(g) => GroupElement::Atom(g.inv(*x)),
            None if *x == 0 => GroupElement::Atom(0),
            None => return Err(AlgebraError::UnassignedAtom(label.clone())),
        },
        (GroupExpr::Product(fs), GroupElement::Tuple(xs)) if xs.len() == fs.len() => {
            GroupElement::Tuple(fs.iter().zip(xs).map(|(f, x)| invert(f, x)).collect::<Result<_, _>>()?)
        }
        // (g, a)^-1 = (shift(g^-1, -a), -a)
        (GroupExpr::WrZ { base, n } | GroupExpr::WrCyc { base, n }, GroupElement::Wreath { base: g, outer })
            if g.len() == *n && outer.len() == 1 =>
        {
            let inv: Vec<GroupElement> = g.iter().map(|x| invert(base, x)).collect::<Result<_, _>>()?;
            let neg = checked(outer[0].checked_neg())?;
            let out = if matches!(expr, GroupExpr::WrCyc { .. }) {
                neg.rem_euclid(*n as i64)
            } else {
                neg
            };
            GroupElement::Wreath {
                base: shift1(&inv, neg),
                outer: vec![out],
            }
        }
        (
            GroupExpr::WrZ2 { base, n, m } | GroupExpr::WrCycPair { base, n, m },
            GroupElement::Wreath { base: g, outer },
        ) if g.len() == n * m && outer.len() == 2 => {
            let inv: Vec<GroupElement> = g.iter().map(|x| invert(base, x)).collect::<Result<_, _>>()?;
            let (na, nb) = (checked(outer[0].checked_neg())?, checked(outer[1].checked_neg())?);
            let out = if matches!(expr, GroupExpr::WrCycPair { .. }) {
                vec![na.rem_euclid(*n as i64), nb.rem_euclid(*m as i64)]
            } else {
                vec![na, nb]
            };
            GroupElement::Wreath {
                base: shift2(&inv, *n, *m, na, nb),
                outer: out,
            }
        }
        (GroupExpr::CentralQuotient { base, .. }, _) => {
            let rep = invert(base, a)?;
            return canonicalize(expr, &rep);
        }
        _ => return Err(shape_err(expr, a)),
    })
}

/// `a^k` for any integer `k`.
pub fn pow(expr: &GroupExpr, a: &GroupElement, k: i64) -> Result<GroupElement, AlgebraError> {
    let mut base = if k < 0 { invert(expr, a)? } else { a.clone() };
    let mut e = k.unsigned_abs();
    let mut acc = identity(expr);
    while e > 0 {
        if e & 1 == 1 {
            acc = multiply(expr, &acc, &base)?;
        }
        e >>= 1;
        if e > 0 {
            base = multiply(expr, &base, &base)?;
        }
    }
    Ok(acc)
}

/// Integer coordinates of `x` in a fixed flattening order: free abelian
/// entries, `mZ` values and the outer parts of `wrZ`/`wrZ2`.
fn int_coords(expr: &GroupExpr, x: &GroupElement, out: &mut Vec<i64>) -> Result<(), AlgebraError> {
    match (expr, x) {
        (GroupExpr::FreeAbelian(_), GroupElement::Vector(v)) => out.extend(v),
        (GroupExpr::ScaledZ(_), GroupElement::Int(v)) => out.push(*v),
        (GroupExpr::Product(fs), GroupElement::Tuple(xs)) if fs.len() == xs.len() => {
            for (f, x) in fs.iter().zip(xs) {
                int_coords(f, x, out)?;
            }
        }
        (
            GroupExpr::WrZ { base, .. }
            | GroupExpr::WrCyc { base, .. }
            | GroupExpr::WrZ2 { base, .. }
            | GroupExpr::WrCycPair { base, .. },
            GroupElement::Wreath { base: g, outer },
        ) => {
            for y in g {
                int_coords(base, y, out)?;
            }
            if matches!(expr, GroupExpr::WrZ { .. } | GroupExpr::WrZ2 { .. }) {
                out.extend(outer);
            }
        }
        (GroupExpr::CentralQuotient { base, .. }, _) => int_coords(base, x, out)?,
        (GroupExpr::Trivial | GroupExpr::Cyclic(_) | GroupExpr::Atom { .. }, _) => {}
        _ => return Err(shape_err(expr, x)),
    }
    Ok(())
}

fn coords_of(expr: &GroupExpr, x: &GroupElement) -> Result<Vec<i64>, AlgebraError> {
    let mut out = Vec::new();
    int_coords(expr, x, &mut out)?;
    Ok(out)
}

/// Canonical representative of the coset of `x` in a central quotient:
/// `x * z^k` with the first integer coordinate where the generator `z` is
/// nonzero brought into `[0, |step|)`. Other expressions return `x` unchanged.
pub fn canonicalize(expr: &GroupExpr, x: &GroupElement) -> Result<GroupElement, AlgebraError> {
    let GroupExpr::CentralQuotient { base, generator } = expr else {
        return Ok(x.clone());
    };
    let zc = coords_of(base, generator)?;
    let c = zc.iter().position(|&v| v != 0).ok_or_else(|| {
        AlgebraError::InvalidExpr(format!("quotient generator {generator} has no integer coordinate"))
    })?;
    let xc = coords_of(base, x)?;
    let shifted = multiply(base, x, generator)?;
    let step = coords_of(base, &shifted)?[c] - xc[c];
    if step == 0 {
        return Err(AlgebraError::InvalidExpr(format!(
            "quotient generator {generator} does not move coordinate {c}"
        )));
    }
    let r = xc[c].rem_euclid(step.abs());
    let k = (r - xc[c]) / step;
    let rep = multiply(base, x, &pow(base, generator, k)?)?;
    if coords_of(base, &rep)?[c] != r {
        return Err(AlgebraError::InvalidExpr(format!(
            "quotient generator {generator} does not translate coordinate {c} uniformly"
        )));
    }
    Ok(rep)
}

fn embed_factor(fs: &[GroupExpr], i: usize, g: GroupElement) -> GroupElement {
    GroupElement::Tuple(
        fs.iter()
            .enumerate()
            .map(|(j, f)| if j == i { g.clone() } else { identity(f) })
            .collect(),
    )
}

/// A generating set: base generators placed in every coordinate, plus the
/// unit outer shifts. Symbolic atoms contribute one abstract generator (id 1).
pub fn generators(expr: &GroupExpr) -> Result<Vec<GroupElement>, AlgebraError> {
    Ok(match expr {
        GroupExpr::Trivial => vec![],
        GroupExpr::Cyclic(n) => {
            if *n > 1 {
                vec![GroupElement::Residue(1)]
            } else {
                vec![]
            }
        }
        GroupExpr::FreeAbelian(r) => (0..*r)
            .map(|i| {
                let mut v = vec![0; *r];
                v[i] = 1;
                GroupElement::Vector(v)
            })
            .collect(),
        GroupExpr::ScaledZ(m) => vec![GroupElement::Int(*m as i64)],
        GroupExpr::Atom { assignment, .. } => match assignment {
            Some(g) => g.generators().iter().map(|&id| GroupElement::Atom(id)).collect(),
            None => vec![GroupElement::Atom(1)],
        },
        GroupExpr::Product(fs) => {
            let mut out = Vec::new();
            for (i, f) in fs.iter().enumerate() {
                for g in generators(f)? {
                    out.push(embed_factor(fs, i, g));
                }
            }
            out
        }
        GroupExpr::WrZ { base, n } | GroupExpr::WrCyc { base, n } => {
            let mut out = wreath_base_generators(base, *n, 1)?;
            if !matches!(expr, GroupExpr::WrCyc { .. }) || *n > 1 {
                out.push(GroupElement::Wreath {
                    base: vec![identity(base); *n],
                    outer: vec![1],
                });
            }
            out
        }
        GroupExpr::WrZ2 { base, n, m } | GroupExpr::WrCycPair { base, n, m } => {
            let cyc = matches!(expr, GroupExpr::WrCycPair { .. });
            let mut out = wreath_base_generators(base, n * m, 2)?;
            for (i, modulus) in [*n, *m].into_iter().enumerate() {
                if !cyc || modulus > 1 {
                    let mut outer = vec![0, 0];
                    outer[i] = 1;
                    out.push(GroupElement::Wreath {
                        base: vec![identity(base); n * m],
                        outer,
                    });
                }
            }
            out
        }
        GroupExpr::CentralQuotient { base, .. } => generators(base)?
            .iter()
            .map(|g| canonicalize(expr, g))
            .collect::<Result<_, _>>()?,
    })
}

fn wreath_base_generators(
    base: &GroupExpr,
    copies: usize,
    outer_len: usize,
) -> Result<Vec<GroupElement>, AlgebraError> {
    let mut out = Vec::new();
    for g in generators(base)? {
        for i in 0..copies {
            let mut coords = vec![identity(base); copies];
            coords[i] = g.clone();
            out.push(GroupElement::Wreath {
                base: coords,
                outer: vec![0; outer_len],
            });
        }
    }
    Ok(out)
}

/// True iff `a` commutes with every generator of `expr`.
pub fn is_central(expr: &GroupExpr, a: &GroupElement) -> Result<bool, AlgebraError> {
    check_shape(expr, a)?;
    for g in generators(expr)? {
        if multiply(expr, a, &g)? != multiply(expr, &g, a)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Number of elements [`enumerate_truncated`] visits (before quotient
/// deduplication), saturating at `u128::MAX`.
pub fn window_size(expr: &GroupExpr, trunc: u32) -> Result<u128, AlgebraError> {
    let w = 2 * u128::from(trunc) + 1;
    let p = |a: u128, b: u128| a.saturating_mul(b);
    let powu = |a: u128, k: usize| (0..k).fold(1u128, |acc, _| p(acc, a));
    Ok(match expr {
        GroupExpr::Trivial => 1,
        GroupExpr::Cyclic(n) => u128::from(*n),
        GroupExpr::FreeAbelian(r) => powu(w, *r),
        GroupExpr::ScaledZ(_) => w,
        GroupExpr::Atom { label, assignment, .. } => assignment
            .as_ref()
            .map(|g| g.order() as u128)
            .ok_or_else(|| AlgebraError::UnassignedAtom(label.clone()))?,
        GroupExpr::Product(fs) => {
            let mut acc = 1u128;
            for f in fs {
                acc = p(acc, window_size(f, trunc)?);
            }
            acc
        }
        GroupExpr::WrZ { base, n } => p(powu(window_size(base, trunc)?, *n), w),
        GroupExpr::WrCyc { base, n } => p(powu(window_size(base, trunc)?, *n), *n as u128),
        GroupExpr::WrZ2 { base, n, m } => p(powu(window_size(base, trunc)?, n * m), w * w),
        GroupExpr::WrCycPair { base, n, m } => p(powu(window_size(base, trunc)?, n * m), (n * m) as u128),
        GroupExpr::CentralQuotient { base, .. } => window_size(base, trunc)?,
    })
}

fn cartesian(parts: &[Vec<GroupElement>]) -> Vec<Vec<GroupElement>> {
    let mut acc: Vec<Vec<GroupElement>> = vec![Vec::new()];
    for part in parts {
        let mut next = Vec::with_capacity(acc.len() * part.len());
        for prefix in &acc {
            for x in part {
                let mut v = prefix.clone();
                v.push(x.clone());
                next.push(v);
            }
        }
        acc = next;
    }
    acc
}

fn outer_values(modulus: Option<usize>, trunc: i64) -> Vec<i64> {
    match modulus {
        Some(n) => (0..n as i64).collect(),
        None => (-trunc..=trunc).collect(),
    }
}

/// All elements whose integer coordinates lie in `[-trunc, trunc]` (for
/// `mZ`, multiples `k*m` with `|k| <= trunc`). Quotient elements are the
/// distinct canonical representatives of the base window.
pub fn enumerate_truncated(expr: &GroupExpr, trunc: u32) -> Result<Vec<GroupElement>, AlgebraError> {
    let size = window_size(expr, trunc)?;
    if size > ENUMERATION_LIMIT {
        return Err(AlgebraError::EnumerationTooLarge {
            expr: expr.to_string(),
            size,
        });
    }
    enumerate_inner(expr, i64::from(trunc))
}

fn enumerate_inner(expr: &GroupExpr, t: i64) -> Result<Vec<GroupElement>, AlgebraError> {
    Ok(match expr {
        GroupExpr::Trivial => vec![GroupElement::Unit],
        GroupExpr::Cyclic(n) => (0..*n).map(GroupElement::Residue).collect(),
        GroupExpr::FreeAbelian(r) => {
            let axis: Vec<GroupElement> = (-t..=t).map(GroupElement::Int).collect();
            cartesian(&vec![axis; *r])
                .into_iter()
                .map(|v| {
                    GroupElement::Vector(
                        v.into_iter()
                            .map(|x| match x {
                                GroupElement::Int(i) => i,
                                _ => unreachable!(),
                            })
                            .collect(),
                    )
                })
                .collect()
        }
        GroupExpr::ScaledZ(m) => (-t..=t).map(|k| GroupElement::Int(k * *m as i64)).collect(),
        GroupExpr::Atom { label, assignment, .. } => {
            let g = assignment
                .as_ref()
                .ok_or_else(|| AlgebraError::UnassignedAtom(label.clone()))?;
            (0..g.order() as u32).map(GroupElement::Atom).collect()
        }
        GroupExpr::Product(fs) => {
            let parts = fs
                .iter()
                .map(|f| enumerate_inner(f, t))
                .collect::<Result<Vec<_>, _>>()?;
            cartesian(&parts).into_iter().map(GroupElement::Tuple).collect()
        }
        GroupExpr::WrZ { base, n } | GroupExpr::WrCyc { base, n } => {
            let b = enumerate_inner(base, t)?;
            let modulus = matches!(expr, GroupExpr::WrCyc { .. }).then_some(*n);
            let outs = outer_values(modulus, t);
            let mut out = Vec::new();
            for coords in cartesian(&vec![b; *n]) {
                for &a in &outs {
                    out.push(GroupElement::Wreath {
                        base: coords.clone(),
                        outer: vec![a],
                    });
                }
            }
            out
        }
        GroupExpr::WrZ2 { base, n, m } | GroupExpr::WrCycPair { base, n, m } => {
            let b = enumerate_inner(base, t)?;
            let cyc = matches!(expr, GroupExpr::WrCycPair { .. });
            let outs_a = outer_values(cyc.then_some(*n), t);
            let outs_b = outer_values(cyc.then_some(*m), t);
            let mut out = Vec::new();
            for coords in cartesian(&vec![b; n * m]) {
                for &a in &outs_a {
                    for &c in &outs_b {
                        out.push(GroupElement::Wreath {
                            base: coords.clone(),
                            outer: vec![a, c],
                        });
                    }
                }
            }
            out
        }
        GroupExpr::CentralQuotient { base, .. } => {
            let mut seen = HashSet::new();
            let mut out = Vec::new();
            for x in enumerate_inner(base, t)? {
                let c = canonicalize(expr, &x)?;
                if seen.insert(c.clone()) {
                    out.push(c);
                }
            }
            out
        }
    })
}

/// Uniformly random element of the `[-trunc, trunc]` window.
pub fn random_element<R: Rng + ?Sized>(
    expr: &GroupExpr,
    rng: &mut R,
    trunc: u32,
) -> Result<GroupElement, AlgebraError> {
    let t = i64::from(trunc);
    Ok(match expr {
        GroupExpr::Trivial => GroupElement::Unit,
        GroupExpr::Cyclic(n) => GroupElement::Residue(rng.random_range(0..*n)),
        GroupExpr::FreeAbelian(r) => GroupElement::Vector((0..*r).map(|_| rng.random_range(-t..=t)).collect()),
        GroupExpr::ScaledZ(m) => GroupElement::Int(rng.random_range(-t..=t) * *m as i64),
        GroupExpr::Atom { label, assignment, .. } => {
            let g = assignment
                .as_ref()
                .ok_or_else(|| AlgebraError::UnassignedAtom(label.clone()))?;
            GroupElement::Atom(rng.random_range(0..g.order() as u32))
        }
        GroupExpr::Product(fs) => GroupElement::Tuple(
            fs.iter()
                .map(|f| random_element(f, rng, trunc))
                .collect::<Result<_, _>>()?,
        ),
        GroupExpr::WrZ { base, n } | GroupExpr::WrCyc { base, n } => {
            let coords = (0..*n)
                .map(|_| random_element(base, rng, trunc))
                .collect::<Result<_, _>>()?;
            let a = if matches!(expr, GroupExpr::WrCyc { .. }) {
                rng.random_range(0..*n as i64)
            } else {
                rng.random_range(-t..=t)
            };
            GroupElement::Wreath {
                base: coords,
                outer: vec![a],
            }
        }
        GroupExpr::WrZ2 { base, n, m } | GroupExpr::WrCycPair { base, n, m } => {
            let coords = (0..n * m)
                .map(|_| random_element(base, rng, trunc))
                .collect::<Result<_, _>>()?;
            let outer = if matches!(expr, GroupExpr::WrCycPair { .. }) {
                vec![rng.random_range(0..*n as i64), rng.random_range(0..*m as i64)]
            } else {
                vec![rng.random_range(-t..=t), rng.random_range(-t..=t)]
            };
            GroupElement::Wreath { base: coords, outer }
        }
        GroupExpr::CentralQuotient { base, .. } => canonicalize(expr, &random_element(base, rng, trunc)?)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FiniteGroup;
    use std::sync::Arc;

    fn el(expr: &GroupExpr, s: &str) -> GroupElement {
        GroupElement::parse(expr, s).unwrap()
    }

    #[test]
    fn wreath_product_example() {
        let e = GroupExpr::wr_cyc(GroupExpr::Cyclic(2), 2);
        let p = multiply(&e, &el(&e, "((1,0),1)"), &el(&e, "((0,1),1)")).unwrap();
        assert_eq!(p.to_string(), "((0,0),0)");
        assert_eq!(invert(&e, &el(&e, "((1,0),1)")).unwrap().to_string(), "((0,1),1)");
    }

    #[test]
    fn identities() {
        assert_eq!(
            identity(&GroupExpr::wr_cyc(GroupExpr::Cyclic(2), 3)).to_string(),
            "((0,0,0),0)"
        );
        let p = GroupExpr::product(vec![GroupExpr::Trivial, GroupExpr::FreeAbelian(2)]);
        assert_eq!(identity(&p).to_string(), "((),(0,0))");
        let q = GroupExpr::parse("quot(Z^2;gen=(1,1))").unwrap();
        assert_eq!(identity(&q).to_string(), "(0,0)");
    }

    #[test]
    fn free_abelian_inverse() {
        let e = GroupExpr::FreeAbelian(2);
        assert_eq!(invert(&e, &el(&e, "(3,-1)")).unwrap().to_string(), "(-3,1)");
    }

    #[test]
    fn two_dimensional_shift_moves_first_index() {
        let e = GroupExpr::wr_z2(GroupExpr::Cyclic(3), 2, 1);
        let shift = el(&e, "((0,0),(1,0))");
        let x = el(&e, "((1,2),(0,0))");
        assert_eq!(multiply(&e, &x, &shift).unwrap().to_string(), "((2,1),(1,0))");
    }

    #[test]
    fn centrality_examples() {
        let e = GroupExpr::wr_z(GroupExpr::Cyclic(2), 2);
        assert!(is_central(&e, &el(&e, "((0,0),2)")).unwrap());
        assert!(!is_central(&e, &el(&e, "((0,0),1)")).unwrap());
        let c = GroupExpr::wr_cyc(GroupExpr::Cyclic(2), 2);
        assert!(!is_central(&c, &el(&c, "((1,0),0)")).unwrap());
        assert!(is_central(&c, &el(&c, "((1,1),0)")).unwrap());
        assert!(is_central(&c, &identity(&c)).unwrap());
    }

    #[test]
    fn symbolic_atoms_support_identity_arithmetic() {
        let e = GroupExpr::wr_cyc_pair(GroupExpr::atom("D1", crate::algebra::Flavor::S), 1, 2);
        let id = identity(&e);
        let shift = el(&e, "((0,0),(0,1))");
        assert_eq!(multiply(&e, &id, &shift).unwrap(), shift);
        let moved = el(&e, "((1,0),(0,0))");
        assert!(matches!(
            multiply(&e, &moved, &moved),
            Err(AlgebraError::UnassignedAtom(_))
        ));
        assert!(matches!(
            enumerate_truncated(&e, 1),
            Err(AlgebraError::UnassignedAtom(_))
        ));
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(
            enumerate_truncated(&GroupExpr::wr_cyc(GroupExpr::Cyclic(2), 3), 4)
                .unwrap()
                .len(),
            24
        );
        assert_eq!(enumerate_truncated(&GroupExpr::Trivial, 4).unwrap().len(), 1);
        assert_eq!(
            enumerate_truncated(&GroupExpr::wr_cyc_pair(GroupExpr::Cyclic(2), 2, 1), 4)
                .unwrap()
                .len(),
            8
        );
        assert_eq!(enumerate_truncated(&GroupExpr::FreeAbelian(2), 2).unwrap().len(), 25);
        let big = GroupExpr::wr_z2(GroupExpr::Cyclic(5), 4, 4);
        assert!(matches!(
            enumerate_truncated(&big, 4),
            Err(AlgebraError::EnumerationTooLarge { .. })
        ));
    }

    #[test]
    fn quotient_canonical_forms() {
        let q = GroupExpr::parse("quot(Z^2;gen=(1,1))").unwrap();
        let x = el(&q, "(5,2)");
        assert_eq!(x.to_string(), "(0,-3)");
        let els = enumerate_truncated(&q, 1).unwrap();
        // (a,b) ~ (0, b-a): b-a ranges over -2..=2
        assert_eq!(els.len(), 5);
        let s = GroupExpr::parse("quot(2Z*Z;gen=(-2,3))").unwrap();
        assert_eq!(el(&s, "(4,0)").to_string(), "(0,6)");
        assert_eq!(
            multiply(&s, &el(&s, "(2,0)"), &el(&s, "(2,1)")).unwrap().to_string(),
            "(0,7)"
        );
    }

    #[test]
    fn finite_atoms_multiply_by_table() {
        let g = Arc::new(FiniteGroup::cyclic(4));
        let e = GroupExpr::wr_cyc(GroupExpr::assigned_atom("D1", crate::algebra::Flavor::S, g), 2);
        let x = el(&e, "((3,1),1)");
        let inv = invert(&e, &x).unwrap();
        assert_eq!(multiply(&e, &x, &inv).unwrap(), identity(&e));
        assert_eq!(pow(&e, &x, 2).unwrap().to_string(), "((0,0),0)");
        assert_eq!(pow(&e, &x, -1).unwrap(), inv);
    }
}
