//! Signal/idler input-output theory. (under construction)
