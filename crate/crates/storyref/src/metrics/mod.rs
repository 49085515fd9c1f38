//! Story-level metric families: sentence-pair continuity, multimodal
//! character continuity, and referring expression change.

pub mod multimodal;
pub mod rec;
pub mod text;
