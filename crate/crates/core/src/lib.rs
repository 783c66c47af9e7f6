pub mod chevalley;
pub mod exactlin;
pub mod parabolic;
pub mod bundles;
pub mod suites;
