//! Packing generators: Apollonian gaskets, random greedy disk packings,
//! and square tilings (the finite-perimeter control family).

mod gasket;
mod greedy;
mod tiling;

pub use gasket::{
    descartes_center, descartes_centers, descartes_next, generate_gasket, GasketConfig, Sign,
};
pub use greedy::{generate_greedy, GreedyConfig};
pub use tiling::{generate_square_tiling, TilingConfig};
