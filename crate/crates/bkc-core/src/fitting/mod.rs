//! Staged calibration pipeline. (under construction)
