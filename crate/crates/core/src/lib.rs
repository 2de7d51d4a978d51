pub mod chambers;
pub mod cli;
pub mod combination;
pub mod echelon;
pub mod expr;
pub mod hkn;
pub mod labels;
pub mod lengths;
pub mod moduli;
pub mod nice_ring;
pub mod partition;
pub mod perfect_ring;
pub mod random;
pub mod verify;
