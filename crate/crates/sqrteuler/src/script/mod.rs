//! Script language (placeholder).
