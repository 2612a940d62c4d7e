pub mod algebra;
pub mod autgrp;
pub mod catalog;
pub mod cli;
pub mod families;
pub mod relation;
pub mod symx;
