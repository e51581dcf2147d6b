//! Host process for the game: file-backed player state, the top list,
//! chat rooms, the HTTP/JSON API and the command line.

pub mod api;
pub mod chat;
pub mod cli;
pub mod error;
pub mod leaderboard;
pub mod persist;
pub mod store;

pub use api::{app_state, router, AppState};
pub use error::StoreError;
pub use store::{PlayerRecord, Store};

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/platform.md")]
pub struct PlatformGuide;
