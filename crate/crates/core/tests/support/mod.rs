//! Reference implementations, random generators and property bodies shared
//! by the integration suites and the acceptance harness.

#![allow(dead_code)]

pub mod gen;
pub mod oracle;
pub mod props;
