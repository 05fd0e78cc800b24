pub mod draws;
pub mod fixture;
pub mod kabsch;
pub mod linkage;
