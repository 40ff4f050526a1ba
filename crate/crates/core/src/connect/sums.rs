use num_traits::Zero;

use super::linked::LinkedForm;
use crate::error::{Error, Result};
use crate::exactlin::{RationalMatrix, RationalVector};
use crate::polytope::StdPolyhedron;

/// `[A | a] (+)_2 [b ; B] = [[A, a b], [0, B]]`.
pub fn two_sum(m: &RationalMatrix, n: &RationalMatrix) -> Result<RationalMatrix> {
    if m.cols() == 0 || n.rows() == 0 {
        return Err(Error::Dimension(
            "2-sum needs a link column and a link row".into(),
        ));
    }
    let (rm, cm) = (m.rows(), m.cols() - 1);
    let (rn, cn) = (n.rows() - 1, n.cols());
    let mut out = RationalMatrix::zeros(rm + rn, cm + cn);
    out.set_block(0, 0, &m.submatrix(0..rm, 0..cm));
    for i in 0..rm {
        let a = &m[(i, cm)];
        if a.is_zero() {
            continue;
        }
        for j in 0..cn {
            out[(i, cm + j)] = a * &n[(0, j)];
        }
    }
    out.set_block(rm, cm, &n.submatrix(1..n.rows(), 0..cn));
    Ok(out)
}

/// The 2-sum of two linked forms on their unit columns, which is the
/// parallel-connection matrix.
pub fn linked_two_sum(abar: &LinkedForm, bbar: &LinkedForm) -> Result<RationalMatrix> {
    two_sum(abar.matrix(), bbar.matrix())
}

/// Block-diagonal join: the Cartesian product of the two polyhedra.
pub fn one_sum(p: &StdPolyhedron, r: &StdPolyhedron) -> Result<StdPolyhedron> {
    let a = p.a().block_diag(r.a());
    let b: RationalVector = p.b().iter().chain(r.b().iter()).cloned().collect();
    StdPolyhedron::new(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::LinkPosition;

    #[test]
    fn outer_product_block() {
        let m = RationalMatrix::from_i64(&[&[1, 1], &[0, 2]]);
        let n = RationalMatrix::from_i64(&[&[3, 0], &[1, 1]]);
        assert_eq!(
            two_sum(&m, &n).unwrap(),
            RationalMatrix::from_i64(&[&[1, 3, 0], &[0, 6, 0], &[0, 1, 1]])
        );
    }

    #[test]
    fn zero_link_is_block_diagonal() {
        let m = RationalMatrix::from_i64(&[&[1, 0], &[2, 0]]);
        let n = RationalMatrix::from_i64(&[&[5, 7], &[1, 1]]);
        let a = RationalMatrix::from_i64(&[&[1], &[2]]);
        let b = RationalMatrix::from_i64(&[&[1, 1]]);
        assert_eq!(two_sum(&m, &n).unwrap(), a.block_diag(&b));
    }

    #[test]
    fn fixture_two_sum_is_parallel_matrix() {
        let abar = LinkedForm::from_i64(&[&[1, 1, 0], &[1, 2, 1]], LinkPosition::Last).unwrap();
        let bbar = LinkedForm::from_i64(&[&[1, 1, 0], &[0, 1, 1]], LinkPosition::First).unwrap();
        let want =
            RationalMatrix::from_i64(&[&[1, 1, 0, 0, 0], &[1, 2, 1, 1, 0], &[0, 0, 0, 1, 1]]);
        assert_eq!(linked_two_sum(&abar, &bbar).unwrap(), want);
    }
}
