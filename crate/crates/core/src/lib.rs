pub mod cli;
pub mod compose;
pub mod context;
pub mod goal;
pub mod id;
pub mod kb;
pub mod literal;
pub mod schema;
pub mod sim;
pub mod text;
