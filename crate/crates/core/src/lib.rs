//! Fermat-point geocast forwarding for static wireless sensor and ad hoc
//! networks.
//!
//! A packet bound for several geocast regions is routed from its source to
//! the node nearest the Fermat point of the source and region centers, then
//! unicast from that relay to each region. The crate provides the Fermat
//! locators ([`geometry`]), seeded unit-disk deployments ([`topology`]),
//! flat greedy and I-Min forwarding ([`forwarding`]), first-order radio
//! energy accounting ([`energy`]) and a seeded comparison harness
//! ([`experiment`]).

pub mod energy;
pub mod exec;
pub mod experiment;
pub mod forwarding;
pub mod geometry;
pub mod topology;

pub use exec::Execution;
