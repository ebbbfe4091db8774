pub mod braids;
pub mod cli;
pub mod estimator;
pub mod flows;
pub mod numerics;
pub mod quasimorphisms;
pub mod sphere;
