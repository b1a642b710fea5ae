//! Exact zero-error capacity and remote state estimation toolkit.
//!
//! Channels, codes and plants are represented with exact rationals. The crate
//! classifies channels by their zero pattern, bounds zero-error capacity via
//! confusability graphs, numbers codes by naturals, runs small programs over
//! exact rationals, decides whether a plant's state can be tracked with
//! bounded error over a channel, and simulates the estimation loop.

pub mod capacity;
pub mod channel;
pub mod code;
pub mod decide;
pub mod graph;
pub mod bss;
pub mod poly;
pub mod rational;
pub mod search;
pub mod sim;
