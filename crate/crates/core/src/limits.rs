//! Process-wide size guards.
//!
//! `level_cap` bounds any level table (`d^n` points); `group_level_cap`
//! bounds levels at which stabilizer chains are built by the verify module.

use std::sync::atomic::{AtomicUsize, Ordering};

use crate::{Error, Result};

pub const DEFAULT_LEVEL_CAP: usize = 8;
pub const DEFAULT_GROUP_LEVEL_CAP: usize = 4;
pub const LEVEL_CAP_ENV: &str = "TREEMONO_LEVEL_CAP";

static LEVEL_CAP: AtomicUsize = AtomicUsize::new(DEFAULT_LEVEL_CAP);
static GROUP_LEVEL_CAP: AtomicUsize = AtomicUsize::new(DEFAULT_GROUP_LEVEL_CAP);

pub fn level_cap() -> usize {
    LEVEL_CAP.load(Ordering::Relaxed)
}

pub fn set_level_cap(cap: usize) {
    LEVEL_CAP.store(cap.max(1), Ordering::Relaxed);
}

pub fn group_level_cap() -> usize {
    GROUP_LEVEL_CAP.load(Ordering::Relaxed)
}

pub fn set_group_level_cap(cap: usize) {
    GROUP_LEVEL_CAP.store(cap.max(1), Ordering::Relaxed);
}

pub(crate) fn check_level(level: usize, what: &'static str) -> Result<()> {
    let cap = level_cap();
    if level > cap {
        return Err(Error::Resource { what, level, cap });
    }
    Ok(())
}

pub(crate) fn check_group_level(level: usize, what: &'static str) -> Result<()> {
    let cap = group_level_cap();
    if level > cap {
        return Err(Error::Resource { what, level, cap });
    }
    Ok(())
}
