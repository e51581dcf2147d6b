use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("storage failure: {0}")]
    Storage(String),
    #[error("unknown player {0}")]
    UnknownPlayer(String),
    #[error("only successful simulations can be ranked")]
    NotSuccessful,
    #[error("message body is empty")]
    EmptyBody,
    #[error("message body has {0} characters, the limit is 1000")]
    BodyTooLong(usize),
    #[error("invalid room name {0:?}")]
    InvalidRoom(String),
    #[error("display name must be 1 to 64 characters")]
    InvalidDisplayName,
}

impl PartialEq for StoreError {
    fn eq(&self, other: &Self) -> bool {
        self.to_string() == other.to_string()
    }
}

impl From<io::Error> for StoreError {
    fn from(e: io::Error) -> Self {
        StoreError::Storage(e.to_string())
    }
}

impl From<serde_json::Error> for StoreError {
    fn from(e: serde_json::Error) -> Self {
        StoreError::Storage(e.to_string())
    }
}
