use crate::error::Result;
use crate::exact::{MatK, RatK, Solution};

use super::field::VertexField;
use super::poly::DiffMono;

/// Solves for `x` with `sum_i x_i images[i][c] = targets[c]` for every
/// condition `c`, comparing fields monomial by monomial.
pub fn fit(images: &[Vec<VertexField>], targets: &[VertexField]) -> Result<Solution> {
    let conds = targets.len();
    let mut rows: Vec<(usize, DiffMono)> = Vec::new();
    for c in 0..conds {
        let mut monos: Vec<DiffMono> = targets[c].poly().iter().map(|(m, _)| m.clone()).collect();
        for im in images {
            monos.extend(im[c].poly().iter().map(|(m, _)| m.clone()));
        }
        monos.sort();
        monos.dedup();
        rows.extend(monos.into_iter().map(|m| (c, m)));
    }
    let mut a = MatK::zeros(rows.len(), images.len());
    let mut b = vec![RatK::zero(); rows.len()];
    for (r, (c, m)) in rows.iter().enumerate() {
        for (i, im) in images.iter().enumerate() {
            a[(r, i)] = im[*c].poly().coeff(m);
        }
        b[r] = targets[*c].poly().coeff(m);
    }
    Ok(a.solve(&b)?)
}

/// Expresses `target` as a combination of `basis`.
pub fn express(target: &VertexField, basis: &[VertexField]) -> Result<Solution> {
    let images: Vec<Vec<VertexField>> = basis.iter().map(|b| vec![b.clone()]).collect();
    fit(&images, std::slice::from_ref(target))
}

/// Kernel of the linear map `x -> (sum_i x_i images[i][c])_c`.
pub fn kernel(images: &[Vec<VertexField>], conds: usize) -> Result<Vec<Vec<RatK>>> {
    let zeros = vec![VertexField::zero(); conds];
    Ok(match fit(images, &zeros)? {
        Solution::Unique(_) => Vec::new(),
        Solution::Underdetermined { kernel, .. } => kernel,
        Solution::NoSolution => unreachable!("homogeneous system"),
    })
}

pub fn combine(coeffs: &[RatK], basis: &[VertexField]) -> VertexField {
    let mut out = VertexField::zero();
    for (c, b) in coeffs.iter().zip(basis) {
        if !c.is_zero() {
            out = &out + &b.scale(c);
        }
    }
    out
}
