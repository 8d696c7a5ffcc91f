//! Book doctests (placeholder).
