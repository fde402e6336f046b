pub mod error;
pub mod exec;
pub mod ffield;
pub mod rat;
pub mod fp64;
pub mod geomver;
pub mod algebra;
pub mod charsum;
pub mod ecount;
pub mod hyperg;
pub mod cmdata;
pub mod k3count;
pub mod nslat;
pub mod report;
