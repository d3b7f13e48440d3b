//! Generators for the finite groupoids used in tests and the property suite:
//! pair groupoids, cyclic groups, their products, disjoint unions, and
//! transformation groupoids of subgroups of S₃.

use crate::groupoid::FiniteGroupoid;

/// Pair groupoid on `k` points crossed with ℤ/`j`.
///
/// Morphism `(i, l, a)` goes from point `l` to point `i` and composes as
/// `(i, l, a)(l, n, b) = (i, n, a + b)`. Names: `u1`, `g12`, … when `j = 1`;
/// `e`, `t`, `t2`, … when `k = 1`; otherwise the two joined, e.g. `g12t2`.
pub fn block(k: usize, j: usize) -> FiniteGroupoid {
    assert!(k >= 1 && j >= 1, "block needs at least one point and one group element");
    let mut names = Vec::new();
    let mut src = Vec::new();
    let mut dst = Vec::new();
    let mut triples = Vec::new();
    for i in 0..k {
        for l in 0..k {
            for a in 0..j {
                names.push(block_name(k, i, l, a));
                src.push(l);
                dst.push(i);
                triples.push((i, l, a));
            }
        }
    }
    let index = |i: usize, l: usize, a: usize| (i * k + l) * j + a;
    let identities = (0..k).map(|i| index(i, i, 0)).collect();
    FiniteGroupoid::from_category(
        names,
        src,
        dst,
        identities,
        |g| {
            let (i, l, a) = triples[g];
            index(l, i, (j - a) % j)
        },
        |x, y| {
            let (i, _, a) = triples[x];
            let (_, n, b) = triples[y];
            index(i, n, (a + b) % j)
        },
    )
}

fn block_name(k: usize, i: usize, l: usize, a: usize) -> String {
    let base = match (k, i == l) {
        (1, _) => String::new(),
        (_, true) => format!("u{}", i + 1),
        (_, false) => format!("g{}{}", i + 1, l + 1),
    };
    let power = match a {
        0 => String::new(),
        1 => "t".to_string(),
        _ => format!("t{a}"),
    };
    match (base.is_empty(), power.is_empty()) {
        (true, true) => "e".to_string(),
        _ => base + &power,
    }
}

pub fn pair_groupoid(k: usize) -> FiniteGroupoid {
    block(k, 1)
}

/// ℤ/`j` as a one-unit groupoid with elements `e, t, t2, …`.
pub fn cyclic_group(j: usize) -> FiniteGroupoid {
    block(1, j)
}

/// Disjoint union; with more than one part, names get a `c<i>.` prefix.
pub fn disjoint_union(parts: &[FiniteGroupoid]) -> FiniteGroupoid {
    if parts.len() == 1 {
        return parts[0].clone();
    }
    let mut names = Vec::new();
    let mut offsets = Vec::new();
    for (i, p) in parts.iter().enumerate() {
        offsets.push(names.len());
        names.extend(p.names().iter().map(|n| format!("c{i}.{n}")));
    }
    let part_of = |g: usize| offsets.iter().rposition(|&o| o <= g).expect("offset 0 exists");
    let mut units = Vec::new();
    let mut source = Vec::new();
    let mut range = Vec::new();
    let mut inverse = Vec::new();
    let mut compositions = Vec::new();
    for (p, &off) in parts.iter().zip(&offsets) {
        units.extend(p.units().iter().map(|u| u + off));
        for g in 0..p.len() {
            source.push(p.source(g) + off);
            range.push(p.range(g) + off);
            inverse.push(p.inverse(g) + off);
        }
        compositions.extend(p.products().iter().map(|&(a, b, c)| (a + off, b + off, c + off)));
    }
    debug_assert!(compositions.iter().all(|&(a, b, _)| part_of(a) == part_of(b)));
    FiniteGroupoid::from_tables(names, units, source, range, inverse, compositions)
        .expect("disjoint union of well-formed tables is well-formed")
}

/// A permutation of `{0, 1, 2}` as its image list.
pub type Perm = [usize; 3];

const IDENTITY: Perm = [0, 1, 2];

fn compose_perm(a: &Perm, b: &Perm) -> Perm {
    [a[b[0]], a[b[1]], a[b[2]]]
}

fn invert_perm(a: &Perm) -> Perm {
    let mut inv = [0; 3];
    for (x, &y) in a.iter().enumerate() {
        inv[y] = x;
    }
    inv
}

/// Cycle notation, e.g. `(01)`, `(012)`; the identity is `e`.
pub fn perm_name(p: &Perm) -> String {
    let mut seen = [false; 3];
    let mut out = String::new();
    for start in 0..3 {
        if seen[start] || p[start] == start {
            continue;
        }
        out.push('(');
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            out.push_str(&x.to_string());
            x = p[x];
        }
        out.push(')');
    }
    if out.is_empty() {
        "e".to_string()
    } else {
        out
    }
}

/// Closure of `generators` under composition, sorted.
pub fn generated_subgroup(generators: &[Perm]) -> Vec<Perm> {
    let mut group = vec![IDENTITY];
    let mut frontier = vec![IDENTITY];
    while let Some(p) = frontier.pop() {
        for g in generators {
            let q = compose_perm(g, &p);
            if !group.contains(&q) {
                group.push(q);
                frontier.push(q);
            }
        }
    }
    group.sort();
    group
}

/// The six subgroups of S₃, labelled.
pub fn s3_subgroups() -> Vec<(&'static str, Vec<Perm>)> {
    vec![
        ("trivial", generated_subgroup(&[])),
        ("<(01)>", generated_subgroup(&[[1, 0, 2]])),
        ("<(02)>", generated_subgroup(&[[2, 1, 0]])),
        ("<(12)>", generated_subgroup(&[[0, 2, 1]])),
        ("A3", generated_subgroup(&[[1, 2, 0]])),
        ("S3", generated_subgroup(&[[1, 0, 2], [1, 2, 0]])),
    ]
}

/// Transformation groupoid `H ⋉ X` for `H ≤ S₃` acting on `npoints` points.
///
/// With `npoints ≥ 3`, `H` permutes `{0, 1, 2}` and fixes the rest; with
/// fewer points the action is trivial. Morphism `(γ, x)` goes from `x` to
/// `γ(x)` and is named `γ@x`, or just `γ` when there is a single point.
pub fn transformation_groupoid(group: &[Perm], npoints: usize) -> FiniteGroupoid {
    assert!(npoints >= 1);
    assert!(group.contains(&IDENTITY), "group must contain the identity");
    let act = |p: &Perm, x: usize| if npoints >= 3 && x < 3 { p[x] } else { x };
    let pos = |p: &Perm| group.iter().position(|q| q == p).expect("group is closed");
    let index = |p: &Perm, x: usize| pos(p) * npoints + x;
    let mut names = Vec::new();
    let mut src = Vec::new();
    let mut dst = Vec::new();
    let mut pairs = Vec::new();
    for p in group {
        for x in 0..npoints {
            names.push(if npoints == 1 { perm_name(p) } else { format!("{}@{x}", perm_name(p)) });
            src.push(x);
            dst.push(act(p, x));
            pairs.push((*p, x));
        }
    }
    let identities = (0..npoints).map(|x| index(&IDENTITY, x)).collect();
    FiniteGroupoid::from_category(
        names,
        src,
        dst,
        identities,
        |g| {
            let (p, x) = pairs[g];
            index(&invert_perm(&p), act(&p, x))
        },
        |a, b| {
            let (p, _) = pairs[a];
            let (q, x) = pairs[b];
            index(&compose_perm(&p, &q), x)
        },
    )
}

/// S₃ as a one-unit groupoid.
pub fn symmetric_group() -> FiniteGroupoid {
    transformation_groupoid(&generated_subgroup(&[[1, 0, 2], [1, 2, 0]]), 1)
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    pub groupoid: FiniteGroupoid,
}

/// The groupoid family used by the property suite:
///
/// * every disjoint union of blocks `pair(k) × ℤ/j` (`1 ≤ j ≤ 4`) with at
///   most 4 points in total, which covers pair groupoids on ≤ 4 points and
///   the cyclic bundles ℤ/k for k ≤ 4;
/// * transformation groupoids of each subgroup of S₃ on 1, 3 and 4 points.
pub fn theorem_family() -> Vec<Instance> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    block_unions(4, (1, 1), &mut current, &mut out);
    for (label, group) in s3_subgroups() {
        for n in [1, 3, 4] {
            out.push(Instance {
                name: format!("{label} on {n} points"),
                groupoid: transformation_groupoid(&group, n),
            });
        }
    }
    out
}

/// Multisets of blocks, listed with non-decreasing `(k, j)` to avoid repeats.
fn block_unions(budget: usize, min: (usize, usize), current: &mut Vec<(usize, usize)>, out: &mut Vec<Instance>) {
    if !current.is_empty() {
        let name = current.iter().map(|(k, j)| format!("P{k}xZ{j}")).collect::<Vec<_>>().join(" + ");
        let parts: Vec<FiniteGroupoid> = current.iter().map(|&(k, j)| block(k, j)).collect();
        out.push(Instance { name, groupoid: disjoint_union(&parts) });
    }
    for k in 1..=budget {
        for j in 1..=4 {
            if (k, j) < min {
                continue;
            }
            current.push((k, j));
            block_unions(budget - k, (k, j), current, out);
            current.pop();
        }
    }
}
