#![allow(dead_code)]

use wreathvar::catalog;
use wreathvar::{Budget, Group};

pub fn cyclic(n: u32) -> Group {
    Group::cyclic(n).unwrap()
}

pub fn product(factors: &[Group]) -> Group {
    Group::direct_product(factors.to_vec()).unwrap()
}

pub fn wreath(a: &Group, b: &Group) -> Group {
    Group::wreath(a, b).unwrap()
}

pub fn metacyclic(n: u32, m: u32, r: u32) -> Group {
    catalog::metacyclic(n, m, r, &Budget::default()).unwrap()
}

pub fn dihedral(n: u32) -> Group {
    catalog::dihedral(n, &Budget::default()).unwrap()
}

pub fn s4() -> Group {
    catalog::s4(&Budget::default()).unwrap()
}

pub fn q8() -> Group {
    catalog::quaternion(&Budget::default()).unwrap()
}

pub fn sl23() -> Group {
    catalog::sl23(&Budget::default()).unwrap()
}

pub fn small_groups() -> Vec<Group> {
    catalog::small_groups(&Budget::default()).unwrap()
}
