pub mod estimate;
pub mod figure3;
pub mod ip;
pub mod verify;
