//! Exact domino-tiling counts of quartered Aztec rectangles, the
//! antisymmetric monotone triangles (AMTs) that index them, and the maps
//! between the two.
//!
//! ```
//! use qar::region::build_re;
//! use qar::tiling::count_tilings;
//! use qar::formulas::{eval_e, ArgVector};
//!
//! let region = build_re(2, 4, &[1, 3], false).unwrap();
//! let e = eval_e(&ArgVector::new(vec![1, 3]).unwrap());
//! assert_eq!(count_tilings(&region), e);
//! ```

pub mod amt;
pub mod bijection;
pub mod count;
pub mod formulas;
pub mod region;
pub mod render;
pub mod tiling;

pub use amt::{enumerate_amts, q_enumeration, two_enumeration, Amt, AmtError};
pub use bijection::{fiber, map_tiling, phi, psi, verify_bijection, BijectionError, Mode};
pub use count::BigCount;
pub use formulas::{eval_e, eval_o, verify_corollary, ArgVector};
pub use region::{build, peel_forced, CellRef, Color, Family, RegionError, Row, RowRegion};
pub use tiling::{count_tilings, enumerate_tilings, Domino, Tiling, TilingError};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/regions.md")]
    mod regions {}
    #[doc = include_str!("../../../book/src/tilings.md")]
    mod tilings {}
    #[doc = include_str!("../../../book/src/triangles.md")]
    mod triangles {}
    #[doc = include_str!("../../../book/src/formulas.md")]
    mod formulas {}
    #[doc = include_str!("../../../book/src/correspondence.md")]
    mod correspondence {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
