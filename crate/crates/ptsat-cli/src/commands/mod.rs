pub mod audit;
pub mod bench_cmd;
pub mod energy;
pub mod generate;
pub mod solve;
pub mod trace_stats;
pub mod tune;
