//! Reference values for the reduced quantum plane at q³ = 1: the braiding
//! on generators and three commutators. Coefficients are integer vectors on
//! `1, q, q²`; monomials use the display names of the extended plane basis
//! (`x`, `dx`, `x dx`, `1`, …).

/// `χ(left ⊗ right) = Σ coeff · a ⊗ b`.
#[derive(Debug, Clone, Copy)]
pub struct ChiFixture {
    pub left: &'static str,
    pub right: &'static str,
    pub terms: &'static [(&'static [i64], &'static str, &'static str)],
}

/// `[left, right]_χ = Σ coeff · monomial`.
#[derive(Debug, Clone, Copy)]
pub struct CommutatorFixture {
    pub left: &'static str,
    pub right: &'static str,
    pub terms: &'static [(&'static [i64], &'static str)],
}

const Q: &[i64] = &[0, 1];
const Q2: &[i64] = &[0, 0, 1];

/// Braiding of the coordinates among themselves.
pub const COORDINATE_CHI: [ChiFixture; 4] = [
    ChiFixture {
        left: "x",
        right: "x",
        terms: &[(Q2, "x", "x")],
    },
    ChiFixture {
        left: "y",
        right: "x",
        terms: &[(Q, "x", "y")],
    },
    ChiFixture {
        left: "x",
        right: "y",
        terms: &[(Q, "y", "x"), (&[-1, 0, 1], "x", "y")],
    },
    ChiFixture {
        left: "y",
        right: "y",
        terms: &[(Q2, "y", "y")],
    },
];

/// Braiding involving at least one derivative.
pub const DERIVATIVE_CHI: [ChiFixture; 12] = [
    ChiFixture {
        left: "dx",
        right: "x",
        terms: &[(Q, "x", "dx")],
    },
    ChiFixture {
        left: "dy",
        right: "x",
        terms: &[(Q2, "x", "dy")],
    },
    ChiFixture {
        left: "dx",
        right: "y",
        terms: &[(Q2, "y", "dx")],
    },
    ChiFixture {
        left: "dy",
        right: "y",
        terms: &[(&[-1, 1], "x", "dx"), (Q, "y", "dy")],
    },
    ChiFixture {
        left: "x",
        right: "dx",
        terms: &[(Q, "dx", "x"), (&[0, -1, 1], "dy", "y")],
    },
    ChiFixture {
        left: "y",
        right: "dx",
        terms: &[(Q2, "dx", "y")],
    },
    ChiFixture {
        left: "dx",
        right: "dx",
        terms: &[(Q2, "dx", "dx")],
    },
    ChiFixture {
        left: "dy",
        right: "dx",
        terms: &[(&[-1, 0, 1], "dy", "dx"), (Q, "dx", "dy")],
    },
    ChiFixture {
        left: "x",
        right: "dy",
        terms: &[(Q2, "dy", "x")],
    },
    ChiFixture {
        left: "y",
        right: "dy",
        terms: &[(Q, "dy", "y")],
    },
    ChiFixture {
        left: "dx",
        right: "dy",
        terms: &[(Q, "dy", "dx")],
    },
    ChiFixture {
        left: "dy",
        right: "dy",
        terms: &[(Q2, "dy", "dy")],
    },
];

pub const COMMUTATORS: [CommutatorFixture; 3] = [
    CommutatorFixture {
        left: "x",
        right: "x",
        terms: &[(&[1, 0, -1], "x^2")],
    },
    CommutatorFixture {
        left: "dx",
        right: "x",
        terms: &[(&[1], "1"), (&[0, -1, 1], "x dx"), (&[-1, 0, 1], "y dy")],
    },
    CommutatorFixture {
        left: "x",
        right: "dx",
        terms: &[(&[0, 0, -1], "1")],
    },
];

/// All sixteen braiding entries.
pub fn all_chi() -> impl Iterator<Item = &'static ChiFixture> {
    COORDINATE_CHI.iter().chain(DERIVATIVE_CHI.iter())
}
