//! Game engine for Entrexplorer: content packs, level progression, practice
//! exercises, the business plan and the virtual market simulation.
//!
//! Nothing here touches the network or the filesystem. Randomness is always
//! seeded by the caller.
//!
//! ```
//! use entrexplorer_core::content_pack::default_pack;
//! use entrexplorer_core::progression::PlayerProgress;
//!
//! let pack = default_pack();
//! let progress = PlayerProgress::new("ana");
//! assert!(progress.is_level_unlocked(1));
//! assert!(!progress.is_level_unlocked(2));
//! assert_eq!(pack.levels.len(), 8);
//! ```

pub mod business_plan;
pub mod content_pack;
pub mod market_sim;
pub mod minigames;
pub mod progression;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/content-pack.md")]
    pub struct ContentPack;
    #[doc = include_str!("../../../book/src/progression.md")]
    pub struct Progression;
    #[doc = include_str!("../../../book/src/minigames.md")]
    pub struct Minigames;
    #[doc = include_str!("../../../book/src/business-plan.md")]
    pub struct BusinessPlan;
    #[doc = include_str!("../../../book/src/market.md")]
    pub struct Market;
}
