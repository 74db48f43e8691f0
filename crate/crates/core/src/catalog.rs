//! Built-in `.lsf` catalogs.

use crate::fieldlang::{parse_lsf, LsfFile, ParseError};
use crate::liealg::{span_coordinates, structure_constants, LieAlgebraPresentation, LieError, Q};

pub const BASIS: &str = include_str!("../resources/basis.lsf");
pub const BASIS_PRINTED: &str = include_str!("../resources/basis_printed.lsf");
pub const OPTIMAL_SYSTEM: &str = include_str!("../resources/optimal_system.lsf");
pub const TABLE3: &str = include_str!("../resources/table3.lsf");

#[derive(Debug, thiserror::Error)]
pub enum CatalogError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error("catalog has no fields")]
    Empty,
    #[error("representative `{0}` is not in the span of the basis")]
    OutsideSpan(String),
}

/// Presentation of every field in an `.lsf` file, in file order.
pub fn presentation_of(file: &LsfFile) -> Result<LieAlgebraPresentation, CatalogError> {
    if file.fields.is_empty() {
        return Err(CatalogError::Empty);
    }
    let (names, fields) = file.fields.iter().cloned().unzip();
    Ok(structure_constants(names, fields)?)
}

pub fn basis_presentation(printed_y5: bool) -> Result<LieAlgebraPresentation, CatalogError> {
    let file = parse_lsf(if printed_y5 { BASIS_PRINTED } else { BASIS })?;
    presentation_of(&file)
}

/// Coefficient vectors of every `R<n>` field of a representatives file,
/// against the given basis.
pub fn representatives(
    file: &LsfFile,
    basis: &LieAlgebraPresentation,
) -> Result<Vec<(String, Vec<Q>)>, CatalogError> {
    file.fields
        .iter()
        .filter(|(n, _)| n.starts_with('R'))
        .map(|(n, v)| {
            span_coordinates(&basis.basis, v)
                .map(|c| (n.clone(), c))
                .ok_or_else(|| CatalogError::OutsideSpan(n.clone()))
        })
        .collect()
}

pub fn optimal_system_catalog() -> Result<Vec<(String, Vec<Q>)>, CatalogError> {
    let file = parse_lsf(OPTIMAL_SYSTEM)?;
    representatives(&file, &basis_presentation(false)?)
}

/// List representatives as fields of the chosen basis.
pub fn optimal_system_fields(printed_y5: bool) -> Result<Vec<(String, crate::VectorField)>, CatalogError> {
    let basis = basis_presentation(printed_y5)?;
    Ok(optimal_system_catalog()?
        .into_iter()
        .map(|(n, v)| (n, basis.combine(&v)))
        .collect())
}

pub fn table3_rows() -> Result<Vec<crate::invclass::Table3Row>, CatalogError> {
    Ok(crate::invclass::load_table3(&parse_lsf(TABLE3)?))
}
