//! Exact counting, asymptotic checks and uniform sampling of galled
//! tree-child phylogenetic networks.

pub mod analysis;
pub mod combin;
pub mod engine;
pub mod logspace;
pub mod modp;
pub mod network;
pub mod onecomp;
pub mod oracle;
pub mod sampler;
pub mod series;
pub mod verify;

/// The guide in `book/src`; its code blocks run as doctests.
#[cfg(doctest)]
pub mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/networks.md")]
    pub mod networks {}
    #[doc = include_str!("../../../book/src/counting.md")]
    pub mod counting {}
    #[doc = include_str!("../../../book/src/one-component.md")]
    pub mod one_component {}
    #[doc = include_str!("../../../book/src/asymptotics.md")]
    pub mod asymptotics {}
    #[doc = include_str!("../../../book/src/sampling.md")]
    pub mod sampling {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
    #[doc = include_str!("../../../book/src/verification.md")]
    pub mod verification {}
}
