//! Steppers for symmetric TSP: Ant System (ACO) and Intelligent Water Drops.

mod aco;
mod iwd;
mod tour;

pub use aco::{
    aco_construct_tour, aco_pheromone_update, aco_transition_probs, AntColony, PheromoneMatrix, ZERO_DISTANCE_FLOOR,
};
pub use iwd::{
    iwd_edge_probs, iwd_global_update, iwd_local_soil, iwd_move, iwd_soil_delta, iwd_travel_time, iwd_velocity_gain,
    IwdColony, SoilMatrix, WaterDrop,
};
pub use tour::{tour_length, ConstructedTours};
