pub mod collapse;
pub mod grade;
pub mod io;
pub mod graph;
pub mod neighborhood;
pub mod parallel;
pub mod approx;
pub mod cli;
pub mod oracle;
pub mod sample;
pub mod zigzag;
