//! Contrastive ABox explanations for EL⊥ knowledge bases.

pub mod kb;
pub mod reasoner;
pub mod justify;
pub mod ce;
pub mod gen;
pub mod oracle;
pub mod bench;
