//! Named groups used throughout the examples.

use crate::budget::Budget;
use crate::error::Result;
use crate::group::{build_group, AutomorphismTable, Group, Recipe};
use crate::structure::{generate_subgroup, quotient};

fn cyclic(n: u32, budget: &Budget) -> Result<Group> {
    build_group(Recipe::Cyclic(n), budget)
}

fn product(factors: Vec<Group>, budget: &Budget) -> Result<Group> {
    build_group(Recipe::DirectProduct(factors), budget)
}

fn klein(budget: &Budget) -> Result<Group> {
    product(vec![cyclic(2, budget)?, cyclic(2, budget)?], budget)
}

/// `R = Heis(3) ⋊ (C2 × C2)`, order 108: the first `C2` inverts `x1` and
/// fixes `x2`, the second fixes `x1` and inverts `x2`.
///
/// `R` lies in `var(Heis(3))var(C2)` but violates `[[x1,x2],[x3,x4],x5] ≡ 1`,
/// which holds in `Heis(3) Wr C2`.
pub fn critical_r() -> Result<Group> {
    critical_r_in(&Budget::default())
}

pub fn critical_r_in(budget: &Budget) -> Result<Group> {
    let heis = build_group(Recipe::Heisenberg(3), budget)?;
    let nu1 = AutomorphismTable::new(vec![heis.element(&[2, 0, 0])?, heis.element(&[0, 1, 0])?]);
    let nu2 = AutomorphismTable::new(vec![heis.element(&[1, 0, 0])?, heis.element(&[0, 2, 0])?]);
    let action = vec![nu1, nu2];
    let top = klein(budget)?;
    Ok(build_group(
        Recipe::Semidirect {
            base: heis,
            top,
            action,
        },
        budget,
    )?
    .labeled("R"))
}

/// `A Wr B` where `A = Heis(3)` and `B = C2`, order `27² · 2 = 1458`.
pub fn heis3_wr_c2() -> Result<Group> {
    heis3_wr_c2_in(&Budget::default())
}

pub fn heis3_wr_c2_in(budget: &Budget) -> Result<Group> {
    build_group(
        Recipe::Wreath(build_group(Recipe::Heisenberg(3), budget)?, cyclic(2, budget)?),
        budget,
    )
}

/// `Heis(3) Wr (C2 × C2)`, order `27⁴ · 4 = 2125764`.
pub fn heis3_wr_klein() -> Result<Group> {
    heis3_wr_klein_in(&Budget::default())
}

pub fn heis3_wr_klein_in(budget: &Budget) -> Result<Group> {
    build_group(
        Recipe::Wreath(build_group(Recipe::Heisenberg(3), budget)?, klein(budget)?),
        budget,
    )
}

/// `C_n ⋊ C_m` with the generator of `C_m` acting as multiplication by `r`.
pub fn metacyclic(n: u32, m: u32, r: u32, budget: &Budget) -> Result<Group> {
    let a = cyclic(n, budget)?;
    let image = a.element(&[r % n])?;
    let action = vec![AutomorphismTable::new(vec![image])];
    let g = build_group(
        Recipe::Semidirect {
            base: a,
            top: cyclic(m, budget)?,
            action,
        },
        budget,
    )?;
    Ok(g.labeled(format!("C{n}:C{m}[{r}]")))
}

/// Dihedral group of order `2n`.
pub fn dihedral(n: u32, budget: &Budget) -> Result<Group> {
    Ok(metacyclic(n, 2, n - 1, budget)?.labeled(format!("D{}", 2 * n)))
}

/// `S4 = (C2 × C2) ⋊ S3`.
pub fn s4(budget: &Budget) -> Result<Group> {
    let v = klein(budget)?;
    let e = |p: &[u32]| v.element(p);
    // S3 generators: rotation of order 3, then the reflection.
    let rot = AutomorphismTable::new(vec![e(&[0, 1])?, e(&[1, 1])?]);
    let refl = AutomorphismTable::new(vec![e(&[0, 1])?, e(&[1, 0])?]);
    let top = dihedral(3, budget)?;
    Ok(build_group(
        Recipe::Semidirect {
            base: v,
            top,
            action: vec![rot, refl],
        },
        budget,
    )?
    .labeled("S4"))
}

/// `Q8` as `(C4 ⋊ C4) / ⟨a²b²⟩` where `b` inverts `a`.
pub fn quaternion(budget: &Budget) -> Result<Group> {
    let g = metacyclic(4, 4, 3, budget)?;
    let z = g.element(&[2, 2])?;
    let n = generate_subgroup(&g, &[z], true)?;
    Ok(quotient(&g, &n)?.0.labeled("Q8"))
}

/// `SL(2,3) = Q8 ⋊ C3` with `i → j → k`.
pub fn sl23(budget: &Budget) -> Result<Group> {
    let q = quaternion(budget)?;
    let gens = q.generators();
    let (i, j) = (gens[0].clone(), gens[1].clone());
    let k = i.compose(&j)?;
    let action = vec![AutomorphismTable::new(vec![j, k])];
    let top = cyclic(3, budget)?;
    Ok(build_group(Recipe::Semidirect { base: q, top, action }, budget)?.labeled("SL(2,3)"))
}

/// A spread of constructible groups of order at most 64: abelian, nilpotent
/// of several classes, metacyclic, non-metabelian, and one (SL(2,3)) whose
/// second derived subgroup is a nontrivial central subgroup.
pub fn small_groups(budget: &Budget) -> Result<Vec<Group>> {
    let b = budget;
    let c = |n| cyclic(n, b);
    let wr = |x: &Group, y: &Group| build_group(Recipe::Wreath(x.clone(), y.clone()), b);
    let (c2, c3, c4) = (c(2)?, c(3)?, c(4)?);
    let v4 = klein(b)?;
    let heis = build_group(Recipe::Heisenberg(3), b)?;
    let nu1 = AutomorphismTable::new(vec![heis.element(&[2, 0, 0])?, heis.element(&[0, 1, 0])?]);
    let heis_c2 = build_group(
        Recipe::Semidirect {
            base: heis.clone(),
            top: c2.clone(),
            action: vec![nu1],
        },
        b,
    )?;
    let c2wrc2 = wr(&c2, &c2)?;
    let mut out = vec![
        c(1)?,
        c2.clone(),
        c(6)?,
        c(12)?,
        c(64)?,
        v4.clone(),
        product(vec![c2.clone(), c2.clone(), c2.clone()], b)?,
        product(vec![c4.clone(), c4.clone()], b)?,
        product(vec![c2.clone(), c(8)?, c3.clone()], b)?,
        build_group(Recipe::Power(c2.clone(), 6), b)?,
        heis.clone(),
        product(vec![heis.clone(), c2.clone()], b)?,
        heis_c2.labeled("Heis3:C2"),
        c2wrc2.clone(),
        wr(&c3, &c2)?,
        wr(&c2, &c3)?,
        wr(&c4, &c2)?,
        wr(&c2, &c4)?,
        wr(&c2, &v4)?,
        product(vec![c2wrc2.clone(), c2.clone()], b)?,
        product(vec![c2wrc2.clone(), c2wrc2], b)?,
        metacyclic(7, 3, 2, b)?,
        metacyclic(5, 4, 2, b)?,
        metacyclic(9, 6, 2, b)?,
        metacyclic(8, 2, 3, b)?,
        metacyclic(8, 2, 5, b)?,
        metacyclic(16, 2, 7, b)?,
        metacyclic(4, 4, 3, b)?,
        quaternion(b)?,
        product(vec![quaternion(b)?, c2.clone()], b)?,
        s4(b)?,
        product(vec![s4(b)?, c2.clone()], b)?,
        sl23(b)?,
        product(vec![sl23(b)?, c2.clone()], b)?,
        product(vec![dihedral(3, b)?, dihedral(3, b)?], b)?,
    ];
    for n in [3, 4, 5, 6, 8, 10, 16, 32] {
        out.push(dihedral(n, b)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        assert_eq!(critical_r().unwrap().order_u64(), Some(108));
        assert_eq!(heis3_wr_c2().unwrap().order_u64(), Some(1458));
        assert_eq!(heis3_wr_klein().unwrap().order_u64(), Some(2_125_764));
        let b = Budget::default();
        assert_eq!(s4(&b).unwrap().order_u64(), Some(24));
        assert_eq!(quaternion(&b).unwrap().order_u64(), Some(8));
        assert_eq!(sl23(&b).unwrap().order_u64(), Some(24));
        assert_eq!(dihedral(5, &b).unwrap().order_u64(), Some(10));
    }

    #[test]
    fn small_groups_stay_small() {
        let gs = small_groups(&Budget::new(64)).unwrap();
        assert!(gs.len() >= 40);
        assert!(gs.iter().all(|g| g.order_u64().unwrap() <= 64));
    }
}
