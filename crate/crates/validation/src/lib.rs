//! Acceptance checks live in `tests/acceptance.rs`. This package exists so
//! that they run after every other test target in the workspace.
