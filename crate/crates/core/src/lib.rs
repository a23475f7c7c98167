pub mod bench;
pub mod expr;
pub mod fj;
pub mod io;
pub mod linalg;
pub mod params;
pub mod theorem;
