pub mod coeffs;
pub mod error;
pub mod exponents;
pub mod series;
pub mod polynomial;
pub mod weierstrass;
pub mod solver;
pub mod tropical;
pub mod syntax;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/exponents.md")]
    mod exponents {}
    #[doc = include_str!("../../../book/src/series.md")]
    mod series {}
    #[doc = include_str!("../../../book/src/newton-polygons.md")]
    mod newton_polygons {}
    #[doc = include_str!("../../../book/src/initial-forms.md")]
    mod initial_forms {}
    #[doc = include_str!("../../../book/src/preparation.md")]
    mod preparation {}
    #[doc = include_str!("../../../book/src/solving.md")]
    mod solving {}
    #[doc = include_str!("../../../book/src/tropical.md")]
    mod tropical {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
