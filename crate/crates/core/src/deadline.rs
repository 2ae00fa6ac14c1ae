//! Cooperative cancellation.
//!
//! Long running solvers poll a [`Deadline`] at loop boundaries and return
//! [`Error::DeadlineExceeded`](crate::Error::DeadlineExceeded) once it fires.

use crate::error::{Error, Result};

pub trait Deadline {
    fn expired(&self) -> bool;

    fn check(&self) -> Result<()> {
        if self.expired() {
            Err(Error::DeadlineExceeded)
        } else {
            Ok(())
        }
    }
}

/// Never expires.
#[derive(Debug, Clone, Copy, Default)]
pub struct Unlimited;

impl Deadline for Unlimited {
    fn expired(&self) -> bool {
        false
    }
}

impl<D: Deadline + ?Sized> Deadline for &D {
    fn expired(&self) -> bool {
        (**self).expired()
    }
}
