use super::{reduce, AdjointGroup, CoeffVector};

/// Normal form of `a` under scaling and the adjoint flows (and the
/// reflections, if enabled): two vectors are equivalent exactly when
/// their normal forms agree.
///
/// Without reflections this is the endpoint of the reduction, which is
/// already pinned down by the orbit invariants. With reflections, the
/// least normal form over the reflection subgroup is taken.
pub fn canonical_form(g: &AdjointGroup, a: &CoeffVector, reflections: bool) -> CoeffVector {
    let base = |v: &CoeffVector| reduce(g, &[], v, false).output;
    if !reflections {
        return base(a);
    }
    g.reflection_words()
        .iter()
        .map(|w| base(&g.apply_word(w, a)))
        .min()
        .expect("identity word")
}
