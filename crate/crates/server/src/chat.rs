//! Chat rooms: append-only message logs with a per-room sequence.

use serde::{Deserialize, Serialize};

use crate::error::StoreError;

pub const MAX_BODY_CHARS: usize = 1_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChatMessage {
    pub room: String,
    pub sender: String,
    pub body: String,
    pub sequence: u64,
    pub sent_at: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChatRoom {
    pub name: String,
    pub messages: Vec<ChatMessage>,
}

/// Room names double as file names, so they are kept to a safe alphabet.
pub fn check_room_name(room: &str) -> Result<(), StoreError> {
    let ok = !room.is_empty()
        && room.len() <= 64
        && room
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_');
    if ok {
        Ok(())
    } else {
        Err(StoreError::InvalidRoom(room.to_owned()))
    }
}

pub fn check_body(body: &str) -> Result<(), StoreError> {
    if body.trim().is_empty() {
        return Err(StoreError::EmptyBody);
    }
    let chars = body.chars().count();
    if chars > MAX_BODY_CHARS {
        return Err(StoreError::BodyTooLong(chars));
    }
    Ok(())
}

impl ChatRoom {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            messages: Vec::new(),
        }
    }

    pub fn last_sequence(&self) -> u64 {
        self.messages.last().map_or(0, |m| m.sequence)
    }

    /// The message that posting `body` would append. Does not modify the room.
    pub fn next_message(&self, sender: &str, body: &str, sent_at: u64) -> Result<ChatMessage, StoreError> {
        check_body(body)?;
        Ok(ChatMessage {
            room: self.name.clone(),
            sender: sender.to_owned(),
            body: body.to_owned(),
            sequence: self.last_sequence() + 1,
            sent_at,
        })
    }

    pub fn since(&self, since_sequence: u64) -> Vec<ChatMessage> {
        let start = self.messages.partition_point(|m| m.sequence <= since_sequence);
        self.messages[start..].to_vec()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn post(room: &mut ChatRoom, body: &str) -> ChatMessage {
        let m = room.next_message("ana", body, 0).unwrap();
        room.messages.push(m.clone());
        m
    }

    #[test]
    fn sequences_start_at_one() {
        let mut room = ChatRoom::new("lobby");
        assert_eq!(post(&mut room, "hi").sequence, 1);
        assert_eq!(post(&mut room, "again").sequence, 2);
    }

    #[test]
    fn body_limits() {
        let room = ChatRoom::new("lobby");
        assert_eq!(room.next_message("a", "  \n", 0), Err(StoreError::EmptyBody));
        let long = "x".repeat(1_001);
        assert_eq!(room.next_message("a", &long, 0), Err(StoreError::BodyTooLong(1_001)));
        assert!(room.next_message("a", &"é".repeat(1_000), 0).is_ok());
    }

    #[test]
    fn since_filters() {
        let mut room = ChatRoom::new("lobby");
        assert!(room.since(0).is_empty());
        for b in ["a", "b", "c"] {
            post(&mut room, b);
        }
        assert_eq!(room.since(0).len(), 3);
        let tail = room.since(2);
        assert_eq!(tail.len(), 1);
        assert_eq!(tail[0].body, "c");
        assert!(room.since(3).is_empty());
    }

    #[test]
    fn room_names() {
        assert!(check_room_name("lobby").is_ok());
        assert!(check_room_name("team-4_b").is_ok());
        assert!(check_room_name("../etc").is_err());
        assert!(check_room_name("").is_err());
    }
}
