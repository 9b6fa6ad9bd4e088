pub mod commands;
pub mod corpus;
pub mod twoform;
