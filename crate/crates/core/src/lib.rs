pub mod fgroup;
pub mod lattice;
pub mod criteria;
pub mod families;
pub mod model;
pub mod oracle;
pub mod verdict;
