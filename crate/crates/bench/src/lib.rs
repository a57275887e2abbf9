//! Empty library; this crate exists for its `benches/` target, which tracks
//! the cost of the matrix builds, the exact determinants and the numeric
//! signature evaluation on fixed corpus diagrams.
