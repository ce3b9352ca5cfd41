#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod glcoords;
pub mod hecke;
pub mod parabolic;
pub mod roots;
pub mod specfun;
pub mod symalg;
pub mod template;
pub mod verify;
pub mod whittaker;
