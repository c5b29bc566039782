pub mod exactalg;
pub mod injcat;
pub mod tamemod;
pub mod pmod;
pub mod homalg;
pub mod specseq;

mod error;
pub use error::Error;
