pub mod ball;
pub mod depth;
pub mod endo;
pub mod error;
pub mod exec;
pub mod hnn;
pub mod homotopy;
pub mod oracle;
pub mod regions;
pub mod stallings;
pub mod word;
