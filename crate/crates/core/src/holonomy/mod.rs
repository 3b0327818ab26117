//! PSL(2,ℝ) transports, graph connections and their holonomies.

mod connection;
mod matrix;

pub use connection::{
    boundary_circuit, build_connection, build_connection_unchecked, corner_u, diagonal_walks,
    complete_face, edge_walks, extend_to_diagonal, hexagon_walk, looks_irreducible, pi1_representation,
    DiagonalExtension, GraphConnection, GraphVertex, Pi1Representation, Step, Walk,
};
pub use matrix::{
    bruhat_cell, is_parabolic, long_transport, parabolic_fixed_point, same_parabolic_subgroup,
    share_fixed_point, short_transport, BorelElement, BruhatCell, ProjectiveMatrix,
    ProjectivePoint,
};
