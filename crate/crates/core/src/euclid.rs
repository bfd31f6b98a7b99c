//! Euclidean reduction of a class with coprime `(ch₀, f·ch₁)` to rank one.
//!
//! `Υ_k = ⊗𝒪(−kΘ)` reduces the fiber degree modulo the rank, `Ψ_m`
//! reduces the rank modulo the fiber degree, and once the fiber degree is
//! one a last `Φ[1]` followed by the derived dual lands in rank one.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{require, Error, Result};
use crate::lattice::{
    c1_of, delta_e, dual_d, phi, psi_m, psi_m_diagram, shift1, tensor, upsilon, ChernTable, Divisor, PsiDiagram,
    SurfaceGeometry,
};
use crate::rational::{fmt_q, half, qstr, qz, zint, Q, Z};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum MoveKind {
    Upsilon {
        #[serde(with = "zint")]
        k: Z,
    },
    Psi {
        #[serde(with = "zint")]
        m: Z,
    },
    /// `Υ_k`, then `Φ[1]`, then `(_)^D`.
    FinalPhiDualStep {
        #[serde(with = "zint")]
        k: Z,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EuclidMove {
    #[serde(rename = "move")]
    pub kind: MoveKind,
    pub before: ChernTable,
    pub after: ChernTable,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagram: Option<PsiDiagram>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EuclidTrace {
    pub input: ChernTable,
    pub e: i64,
    pub moves: Vec<EuclidMove>,
    #[serde(rename = "final")]
    pub final_table: ChernTable,
    #[serde(rename = "Lambda")]
    pub lambda: Divisor,
    #[serde(rename = "K", with = "zint")]
    pub k: Z,
    #[serde(with = "qstr")]
    pub delta_e: Q,
    /// The table dynamics hold for every `e`; the geometric reading needs a K3.
    pub numerics_only: bool,
}

/// Applies a move through the lattice primitives (tensor, `Φ`, shift, dual).
pub fn apply_move(kind: &MoveKind, v: &ChernTable, g: SurfaceGeometry) -> Result<ChernTable> {
    let minus_k_theta = |k: &Z| Divisor::new(-qz(k), Q::zero());
    match kind {
        MoveKind::Upsilon { k } => tensor(v, &minus_k_theta(k), g),
        MoveKind::Psi { m } => {
            let m = u64::try_from(m).map_err(|_| Error::Precondition(format!("Ψ_m needs m ≥ 1, got {m}")))?;
            Ok(psi_m_diagram(v, m, g)?.output)
        }
        MoveKind::FinalPhiDualStep { k } => {
            let twisted = tensor(v, &minus_k_theta(k), g)?;
            Ok(dual_d(&shift1(&phi(&twisted, g)?)))
        }
    }
}

/// `Λ = c₁(final)` and `K = Λ²/2 − ch₂(final)`, so that
/// `final ⊗ 𝒪(−Λ) = (1, 0, 0, −K)`.
pub fn final_normalize(final_table: &ChernTable, g: SurfaceGeometry) -> Result<(Divisor, Z)> {
    require(final_table.n.is_one(), || format!("need rank one, got {final_table}"))?;
    let lambda = c1_of(final_table, g);
    let k = lambda.square(g) * half() - &final_table.s;
    require(k.is_integer(), || format!("Λ²/2 − ch₂ = {} is not an integer for {final_table}", fmt_q(&k)))?;
    let k = k.to_integer();
    let normalized = tensor(final_table, &-&lambda, g)?;
    let expected = ChernTable { n: Z::one(), d: Z::zero(), c: Z::zero(), s: -qz(&k) };
    if normalized != expected {
        return Err(Error::Internal(format!("{final_table} ⊗ 𝒪(−Λ) = {normalized}, expected {expected}")));
    }
    Ok((lambda, k))
}

fn check_preconditions(v: &ChernTable, g: SurfaceGeometry) -> Result<()> {
    require(v.n.is_positive(), || format!("need ch₀ > 0, got {}", v.n))?;
    if !v.n.is_one() {
        require(v.d.is_positive(), || format!("need f·ch₁ > 0, got {}", v.d))?;
        require(v.n.gcd(&v.d).is_one(), || {
            format!("need gcd(ch₀, f·ch₁) = 1, got gcd({}, {}) = {}", v.n, v.d, v.n.gcd(&v.d))
        })?;
        require(v.n != v.d, || format!("need ch₀ ≠ f·ch₁, got {v}"))?;
    }
    let de = delta_e(v, g);
    require(!de.is_negative(), || format!("need Δ_e ≥ 0, got {}", fmt_q(&de)))?;
    require(v.is_geometric_integral(g), || format!("need ch₂ − c₁²/2 ∈ ℤ so that K is an integer, got {v}"))
}

pub fn euclid_reduce(v: &ChernTable, g: SurfaceGeometry) -> Result<EuclidTrace> {
    check_preconditions(v, g)?;
    let de = delta_e(v, g);
    let guard = 4 * (v.n.bits().max(v.d.magnitude().bits()) as usize) + 4;
    let mut moves = Vec::new();
    let mut cur = v.clone();
    while !cur.n.is_one() {
        if moves.len() >= guard {
            return Err(Error::Internal(format!("reduction of {v} did not terminate within {guard} moves")));
        }
        let (kind, next, diagram) = if cur.n < cur.d {
            let k = &cur.d / &cur.n;
            let next = upsilon(&cur, &k, g);
            (MoveKind::Upsilon { k }, next, None)
        } else if cur.d.is_one() {
            let kind = MoveKind::FinalPhiDualStep { k: Z::zero() };
            let next = apply_move(&kind, &cur, g)?;
            (kind, next, None)
        } else {
            let m = &cur.n / &cur.d;
            let mu = u64::try_from(&m).map_err(|_| Error::Internal(format!("Ψ quotient {m} exceeds u64")))?;
            let next = psi_m(&cur, mu, g)?;
            let diagram = psi_m_diagram(&cur, mu, g)?;
            (MoveKind::Psi { m }, next, Some(diagram))
        };
        if delta_e(&next, g) != de {
            return Err(Error::Internal(format!("Δ_e changed from {} across {cur} → {next}", fmt_q(&de))));
        }
        if !next.n.gcd(&next.d).is_one() || !next.n.is_positive() {
            return Err(Error::Internal(format!("primitivity lost across {cur} → {next}")));
        }
        moves.push(EuclidMove { kind, before: cur, after: next.clone(), diagram });
        cur = next;
    }
    let (lambda, k) = final_normalize(&cur, g)?;
    if crate::lattice::delta(&cur, g) != qz(&(Z::from(2) * &k)) {
        return Err(Error::Internal("Δ(final) ≠ 2K".into()));
    }
    Ok(EuclidTrace {
        input: v.clone(),
        e: g.e,
        moves,
        final_table: cur,
        lambda,
        k,
        delta_e: de,
        numerics_only: !g.is_k3(),
    })
}

/// Re-derives every move from the lattice primitives and checks the chain.
pub fn replay(trace: &EuclidTrace, g: SurfaceGeometry) -> Result<bool> {
    let mut cur = trace.input.clone();
    for mv in &trace.moves {
        if mv.before != cur {
            return Ok(false);
        }
        cur = apply_move(&mv.kind, &cur, g)?;
        if cur != mv.after {
            return Ok(false);
        }
    }
    Ok(cur == trace.final_table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::delta;
    use crate::rational::q;

    fn k3() -> SurfaceGeometry {
        SurfaceGeometry::k3()
    }

    #[test]
    fn worked_example() {
        let t = euclid_reduce(&ChernTable::ints(2, 5, 0, 3), k3()).unwrap();
        assert_eq!(t.moves.len(), 2);
        assert_eq!(t.moves[0].kind, MoveKind::Upsilon { k: Z::from(2) });
        assert_eq!(t.moves[0].after, ChernTable::ints(2, 1, 8, -5));
        assert_eq!(t.moves[1].kind, MoveKind::FinalPhiDualStep { k: Z::zero() });
        assert_eq!(t.final_table, ChernTable::ints(1, 2, 2, -8));
        assert_eq!(t.lambda, Divisor::ints(2, 6));
        assert_eq!(t.k, Z::from(16));
        assert_eq!(t.delta_e, q(30));
        assert!(replay(&t, k3()).unwrap());
        assert!(!t.numerics_only);
    }

    #[test]
    fn rank_one_input() {
        let t = euclid_reduce(&ChernTable::ints(1, 3, -1, -4), k3()).unwrap();
        assert!(t.moves.is_empty());
        // Λ = 3Θ + 5f, Λ² = −18 + 30 = 12
        assert_eq!(t.k, Z::from(10));
    }

    #[test]
    fn psi_branch_first() {
        let t = euclid_reduce(&ChernTable::ints(3, 2, 5, 0), k3()).unwrap();
        assert_eq!(t.moves[0].kind, MoveKind::Psi { m: Z::from(1) });
        assert!(t.moves[0].diagram.is_some());
        assert!(replay(&t, k3()).unwrap());
        assert_eq!(delta(&t.final_table, k3()), qz(&(Z::from(2) * &t.k)));
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(final_normalize(&ChernTable::ints(1, 2, 2, -8), k3()).unwrap(), (Divisor::ints(2, 6), Z::from(16)));
        assert_eq!(final_normalize(&ChernTable::ints(1, 0, 0, 0), k3()).unwrap(), (Divisor::zero(), Z::zero()));
        assert!(final_normalize(&ChernTable::ints(2, 1, 0, 0), k3()).is_err());
    }

    #[test]
    fn preconditions() {
        assert!(euclid_reduce(&ChernTable::ints(2, 4, 0, 0), k3()).is_err());
        assert!(euclid_reduce(&ChernTable::ints(0, 1, 0, 0), k3()).is_err());
        assert!(euclid_reduce(&ChernTable::ints(2, 0, 0, 0), k3()).is_err());
        // Δ_e = 2·5·0 + 2·25 − 2·2·20 − 8 < 0
        assert!(euclid_reduce(&ChernTable::ints(2, 5, 0, 20), k3()).is_err());
    }

    #[test]
    fn non_k3_is_flagged() {
        let g = SurfaceGeometry::new(1).unwrap();
        let t = euclid_reduce(&ChernTable::new(Z::from(3), Z::from(5), Z::from(1), q(1) / q(2)).unwrap(), g);
        let t = t.unwrap_or_else(|e| panic!("{e}"));
        assert!(t.numerics_only);
        assert!(replay(&t, g).unwrap());
    }
}
