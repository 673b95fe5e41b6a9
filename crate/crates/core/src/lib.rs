pub mod certify;
pub mod cli;
pub mod error;
pub mod exchange;
pub mod ppt_sdp;
pub mod sampling;
pub mod schmidt;
pub mod spectral_analytic;
pub mod states;
pub mod tensor_core;
